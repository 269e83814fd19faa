"""Exception hierarchy."""


class JdlgError(Exception):
    """Base class for all errors raised by jdlgkit."""


class StructuralError(JdlgError, ValueError):
    """Shapes or block structures do not match."""


class ValidationError(JdlgError, ValueError):
    """An input violates a defining property (e.g. a density matrix is not positive)."""


class NotFaithfulError(JdlgError):
    """A faithful state was required. Compress with ``gns.support_projection`` first."""


class UnsupportedRepresentationError(JdlgError):
    """The requested representation does not exist for this algebra."""


class HypothesisError(JdlgError):
    """The contraction hypothesis ``phi((Tx)*(Tx)) <= phi(x*x)`` fails."""

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic


class InternalInconsistencyError(JdlgError):
    """A consequence of a verified hypothesis failed numerically."""


class SchwarzViolationError(JdlgError):
    """The map does not satisfy the Schwarz inequality T(x)*T(x) <= T(x*x)."""


class CommutationError(JdlgError):
    """Generators of a semigroup do not commute."""

    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class PreconditionError(JdlgError):
    """A W*-dynamical-system axiom fails; ``axiom`` names it."""

    def __init__(self, axiom, message, value=None):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.value = value


class NoInvariantStateError(JdlgError):
    """The preadjoint has no fixed density matrix within tolerance."""
