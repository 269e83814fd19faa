"""Numerical tolerances shared by the analysis pipeline."""

from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class Tolerances:
    """Default thresholds. Every value can be overridden per analysis.

    Attributes
    ----------
    peripheral : float
        |lambda| >= 1 - peripheral marks an eigenvalue as peripheral.
    near_peripheral : float
        Eigenvalues with 1 - near_peripheral < |lambda| < 1 - peripheral trigger a warning.
    hypothesis : float
        Slack on the contraction check ||T_phi|| <= 1 + hypothesis.
    faithful : float
        rho is faithful iff lambda_min > faithful * lambda_max in every block.
    rank : float
        Relative eigenvalue cutoff for the support projection of a density matrix.
    root_match : float
        Distance to an h-th root of unity accepted by order detection.
    zero_spectrum : float
        Eigenvalues below this modulus count as exactly zero for the stable radius.
    cluster : float
        Peripheral eigenvalues closer than this are one eigenvalue.
    symmetrize : float
        Maximal phi-asymmetry of the spectral projection before it is rejected.
    """

    peripheral: float = 1e-8
    near_peripheral: float = 1e-6
    hypothesis: float = 1e-9
    faithful: float = 1e-10
    rank: float = 1e-12
    root_match: float = 1e-8
    zero_spectrum: float = 1e-10
    cluster: float = 1e-6
    symmetrize: float = 1e-6
    max_order: int = 64

    def with_overrides(self, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)

    def as_dict(self):
        return asdict(self)


DEFAULT = Tolerances()
