"""Command-line front end: ``jdlg analyze | generate | verify``.

Exit codes: 0 success, 2 contraction hypothesis fails (or no faithful
state), 3 schema or input error, 4 unknown preset, 5 verification mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import jsonschema
import numpy as np

from . import __version__
from ._linalg import canonical_order, detect_order, match_multisets
from .algebra import BlockAlgebra, NormalState
from .asymptotics import convergence_report, periodic_part, periodicity_residual
from .channel import ChannelMap, find_invariant_state, from_choi, from_kraus, is_completely_positive
from .config import DEFAULT
from .corpus import PRESETS, preset, reported_order
from .errors import JdlgError, NoInvariantStateError, NotFaithfulError, PreconditionError, StructuralError, ValidationError
from .gns import verify_hypothesis
from .jdlg import jdlg_split, oracle_projection
from .structure import _fixed_dim, multiplicative_domain, perron_frobenius_report

EXIT_OK, EXIT_HYPOTHESIS, EXIT_SCHEMA, EXIT_PRESET, EXIT_MISMATCH = 0, 2, 3, 4, 5
SCHEMA_VERSION = 1

_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_matrix = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _complex}}
_cvec = {"type": "array", "items": _complex}

CHANNEL_SPEC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["algebra", "map"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "algebra": {
            "type": "object",
            "required": ["block_dims"],
            "properties": {"block_dims": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}}},
        },
        "map": {
            "type": "object",
            "properties": {
                "kraus": {"type": "array", "minItems": 1, "items": _matrix},
                "choi": _matrix,
                "superoperator": _matrix,
            },
            "oneOf": [{"required": ["kraus"]}, {"required": ["choi"]}, {"required": ["superoperator"]}],
            "additionalProperties": False,
        },
        "states": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "object", "required": ["blocks"],
                      "properties": {"blocks": {"type": "array", "items": _matrix}}},
        },
        "tolerances": {
            "type": "object",
            "properties": {k: {"type": "number", "exclusiveMinimum": 0} for k in ("peripheral", "hypothesis", "faithful")},
            "additionalProperties": False,
        },
        "expected": {
            "type": "object",
            "properties": {
                "peripheral": _cvec,
                "h": {"type": ["integer", "null"]},
                "dim_r": {"type": "integer", "minimum": 0},
                "ergodic": {"type": "boolean"},
                "stable_radius": {"type": "number", "minimum": 0},
            },
        },
        "provenance": {"type": "string"},
        "seed": {"type": ["integer", "null"]},
        "params": {"type": "object"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "tool", "version", "input_sha256", "tolerances", "hypothesis", "status"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "tool": {"const": "jdlgkit"},
        "version": {"type": "string"},
        "input_sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "status": {"enum": ["ok", "hypothesis_failed", "not_faithful"]},
        "hypothesis": {"type": "object", "required": ["passed", "norms", "tol"]},
        "spectrum": {"type": "object", "properties": {"eigenvalues": _cvec}},
        "peripheral": {"type": "object", "properties": {"multiset": _cvec, "values": _cvec}},
        "h": {"type": ["integer", "null"]},
        "dim_r": {"type": "integer"},
        "dim_s": {"type": "integer"},
        "basis_r": {"type": "array", "items": _cvec},
        "basis_s": {"type": "array", "items": _cvec},
    },
}


class SpecError(Exception):
    """Input that is unreadable, schema-invalid or shape-inconsistent."""


# ---------------------------------------------------------------- encoding

def _num(x: float, exact: bool = False):
    x = float(x)
    if not math.isfinite(x):
        return None
    if not exact:
        x = float(f"{x:.12g}")
    return 0.0 if x == 0 else x


def _c(z, exact: bool = False) -> list:
    z = complex(z)
    return [_num(z.real, exact), _num(z.imag, exact)]


def _cv(v) -> list:
    return [_c(z) for z in np.ravel(v)]


def _cm(M, exact: bool = False) -> list:
    # inputs (maps, states) are written exactly so a spec reloads bit for bit
    return [[_c(z, exact) for z in row] for row in np.atleast_2d(M)]


def _decode_matrix(rows, what: str) -> np.ndarray:
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise SpecError(f"{what} is not a rectangular matrix")
    M = np.array([[complex(re, im) for re, im in row] for row in rows])
    if not np.all(np.isfinite(M)):
        raise SpecError(f"{what} has non-finite entries")
    return M


def _phase_fix(v: np.ndarray) -> np.ndarray:
    """Rotate so the first entry of largest modulus is real positive."""
    k = int(np.argmax(np.round(np.abs(v), 10)))
    return v * (abs(v[k]) / v[k]) if abs(v[k]) > 0 else v


def _jsonable(obj, exact: bool = False):
    """Recursive conversion of report pieces to JSON values with fixed rounding."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, exact) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, exact) for v in obj]
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _c(obj, exact)
    if isinstance(obj, (float, np.floating)):
        return _num(obj, exact)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist(), exact)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(doc, exact: bool = False) -> str:
    return json.dumps(_jsonable(doc, exact), indent=2) + "\n"


# ---------------------------------------------------------------- spec files

def load_spec(raw: bytes) -> dict:
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SpecError(f"malformed JSON: {exc}") from None
    try:
        jsonschema.validate(doc, CHANNEL_SPEC_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SpecError(f"schema violation at {where}: {exc.message}") from None
    return doc


def build_channel(doc: dict) -> ChannelMap:
    alg = BlockAlgebra(doc["algebra"]["block_dims"])
    m = doc["map"]
    name = doc.get("name", "")
    try:
        if "kraus" in m:
            T = from_kraus([_decode_matrix(k, "kraus operator") for k in m["kraus"]], alg, name=name)
        elif "choi" in m:
            if len(alg.block_dims) != 1:
                raise SpecError("map.choi is only accepted for a single-block algebra")
            T = from_choi(_decode_matrix(m["choi"], "choi"), name=name)
            if T.algebra.block_dims != alg.block_dims:
                raise SpecError(f"choi size does not match block_dims {alg.block_dims}")
        else:
            S = _decode_matrix(m["superoperator"], "superoperator")
            if S.shape != (alg.dim, alg.dim):
                raise SpecError(f"superoperator shape {S.shape} does not match algebra dimension {alg.dim}")
            T = ChannelMap(alg, S, name=name, provenance="superoperator")
    except (StructuralError, ValidationError, JdlgError) as exc:
        raise SpecError(str(exc)) from None
    return T


def build_states(doc: dict, alg: BlockAlgebra) -> list | None:
    if "states" not in doc:
        return None
    out = []
    for k, st in enumerate(doc["states"]):
        blocks = [_decode_matrix(b, f"state {k} block") for b in st["blocks"]]
        try:
            out.append(NormalState(alg, blocks))
        except (ValidationError, StructuralError, ValueError) as exc:
            raise SpecError(f"state {k}: {exc}") from None
    return out


def entry_to_spec(entry) -> dict:
    """Channel-spec document for a corpus entry, with its ground truth embedded."""
    T = entry.channel
    if T.kraus is not None:
        m = {"kraus": [_cm(K, exact=True) for K in T.kraus]}
    else:
        m = {"superoperator": _cm(T.superoperator, exact=True)}
    exp = dict(entry.expected)
    order = canonical_order(np.asarray(exp["peripheral"], dtype=complex))
    exp["peripheral"] = _cv(np.asarray(exp["peripheral"], dtype=complex)[order])
    return {
        "schema": SCHEMA_VERSION,
        "name": entry.name,
        "algebra": {"block_dims": list(T.algebra.block_dims)},
        "map": m,
        "states": [{"blocks": [_cm(b, exact=True) for b in entry.state.blocks]}],
        "expected": exp,
        "provenance": entry.provenance,
        "seed": entry.seed,
        "params": entry.params,
    }


# ---------------------------------------------------------------- analysis

def _distinct(values, tol=1e-6):
    out = []
    for v in values:
        if all(abs(v - d) > tol for d in out):
            out.append(complex(v))
    return out


def _basis_doc(B, split) -> list:
    return [_cv(_phase_fix(c)) for c in B.T]


def analyze(raw: bytes, *, tol_peripheral=None, nmax=256, oracle_iters=10000, probes=8, seed=0):
    """Run the pipeline on a spec document; returns (exit code, report dict, analysis or None)."""
    doc = load_spec(raw)
    T = build_channel(doc)
    tol_over = dict(doc.get("tolerances", {}))
    if tol_peripheral is not None:
        tol_over["peripheral"] = tol_peripheral
    tol = DEFAULT.with_overrides(**tol_over)
    report = {
        "schema": SCHEMA_VERSION,
        "tool": "jdlgkit",
        "version": __version__,
        "input_sha256": hashlib.sha256(raw).hexdigest(),
        "name": doc.get("name", ""),
        "flags": {"tol_peripheral": tol_peripheral, "nmax": nmax, "oracle_iters": oracle_iters,
                  "probes": probes, "seed": seed},
        "tolerances": tol.as_dict(),
        "status": "ok",
    }
    states = build_states(doc, T.algebra)
    notes = []
    if states is None:
        try:
            inv = find_invariant_state(T, tol.hypothesis)
            states = [inv.state]
            report["invariant_state"] = {"source": "computed", "fixed_dim": inv.fixed_dim,
                                         "faithful": inv.faithful, "residual": inv.residual,
                                         "blocks": [_cm(b) for b in inv.state.blocks]}
        except NoInvariantStateError as exc:
            states = [NormalState.maximally_mixed(T.algebra)]
            notes.append(f"no invariant state ({exc}); hypothesis checked against the maximally mixed state")
            report["invariant_state"] = {"source": "maximally_mixed_fallback", "error": str(exc)}
    else:
        report["invariant_state"] = {"source": "input", "count": len(states)}

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        hyp = verify_hypothesis(T, states, tol.hypothesis)
    report["hypothesis"] = {"passed": hyp.passed, "norms": hyp.norms, "tol": hyp.tol, "messages": hyp.messages}
    if not hyp.passed:
        report["status"] = "hypothesis_failed"
        report["notes"] = notes
        return EXIT_HYPOTHESIS, report, None

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            split = jdlg_split(T, states, tol)
    except NotFaithfulError as exc:
        report["status"] = "not_faithful"
        notes.append(str(exc))
        report["notes"] = notes
        return EXIT_HYPOTHESIS, report, None

    spec = split.spectral
    order = canonical_order(spec.eigenvalues)
    fixed = _fixed_dim(T)
    ergodic = fixed == 1
    per_sorted = np.asarray(split.eigenvalues_r)[canonical_order(split.eigenvalues_r)]
    distinct = _distinct(per_sorted)
    h = reported_order(distinct, ergodic)
    report.update({
        "spectrum": {"eigenvalues": _cv(spec.eigenvalues[order]), "stable_radius": split.stable_radius,
                     "near_peripheral": _cv(spec.near_peripheral)},
        "peripheral": {"multiset": _cv(per_sorted), "values": _cv(spec.peripheral_values),
                       "multiplicities": list(spec.multiplicities),
                       "geometric_multiplicities": list(spec.geometric_multiplicities)},
        "h": h,
        "ergodic": ergodic,
        "fixed_dim": fixed,
        "dim_r": split.dim_r,
        "dim_s": split.dim_s,
        "basis_r": _basis_doc(split.basis_r, split),
        "basis_s": _basis_doc(split.basis_s, split),
        "projection": {
            "idempotence": split.phi_norm(split.P @ split.P - split.P),
            "commutator": split.phi_norm(split.P @ T.superoperator - T.superoperator @ split.P),
            "symmetrization_shift": split.symmetrization_shift,
            "diagnostics": split.diagnostics,
        },
    })
    P_avg = oracle_projection(T, [z / abs(z) for z in distinct], oracle_iters)
    report["oracle"] = {"iterations": oracle_iters, "gap": split.phi_norm(P_avg - split.P)}

    # structure (needs a CP unital map with a faithful invariant state)
    phi = split.state
    try:
        rep = perron_frobenius_report(T, phi, split=split, tol=tol, samples=64, seed=seed)
        report["structure"] = {
            "ergodic": rep.ergodic,
            "group": {"values": _cv(rep.group.eigenvalues), "h": rep.group.h,
                      "closure_residual": rep.group.closure_residual, "matches_gamma": rep.group.matches_gamma},
            "simple": rep.simple,
            "rotation_residuals": [[_c(a), d] for a, d in rep.rotation_residuals.items()],
            "subalgebra": rep.subalgebra,
            "subalgebra_residual": rep.subalgebra_residual,
            "choi_effros": vars(rep.choi_effros),
            "conditional_expectation": vars(rep.conditional_expectation),
            "trace": None if rep.trace is None else vars(rep.trace),
            "automorphism": vars(rep.automorphism),
            "unitary_eigenvectors": [
                {"eigenvalue": _c(u.eigenvalue), "element": _cv(u.element.vector),
                 "unitarity_residual": u.unitarity_residual, "eigen_residual": u.eigen_residual}
                for u in rep.unitary_eigenvectors
            ],
            "eigen_relation_residual": rep.eigen_relation_residual,
            "partial": rep.partial,
            "notes": rep.notes,
        }
        md = multiplicative_domain(T, phi, seed=seed)
        report["structure"]["multiplicative_domain"] = {
            "dim": md.dim, "principal_gap": md.principal_gap,
            "member_defect": md.member_defect, "nonmember_defect": md.nonmember_defect,
        }
    except (PreconditionError, JdlgError) as exc:
        report["structure"] = {"skipped": str(exc)}

    S = periodic_part(T, split)
    conv = convergence_report(split, S, n_max=nmax, probes=probes, seed=seed)
    report["convergence"] = {
        "n_max": nmax,
        "distances": conv.distances,
        "stable_radius": conv.stable_radius,
        "r_fit": conv.r_fit,
        "constant": conv.constant,
        "transient": conv.transient,
        "periodicity_residual": None if split.h is None else periodicity_residual(S, split, split.h),
        "probes": [{"kind": p.kind, "slope": p.slope, "final_average": p.averages[-1]} for p in conv.probes],
    }
    report["completely_positive"] = is_completely_positive(T).completely_positive
    report["notes"] = notes
    return EXIT_OK, report, split


def compare_expected(report: dict, expected: dict, tol: float = 1e-6) -> list:
    """Human-readable mismatches between a report and an ``expected`` block."""
    bad = []
    if report.get("status") != "ok":
        return [f"analysis status {report.get('status')}"]
    if "peripheral" in expected:
        got = np.array([complex(*z) for z in report["peripheral"]["multiset"]])
        want = np.array([complex(*z) for z in expected["peripheral"]])
        _, d = match_multisets(got, want)
        if not d <= tol:
            bad.append(f"peripheral multiset differs (matching distance {d:.3e}, sizes {got.size} vs {want.size})")
    if "h" in expected and expected["h"] != report["h"]:
        bad.append(f"h: expected {expected['h']}, got {report['h']}")
    if "dim_r" in expected and expected["dim_r"] != report["dim_r"]:
        bad.append(f"dim_r: expected {expected['dim_r']}, got {report['dim_r']}")
    if "ergodic" in expected and expected["ergodic"] != report["ergodic"]:
        bad.append(f"ergodic: expected {expected['ergodic']}, got {report['ergodic']}")
    if "stable_radius" in expected:
        r, e = report["spectrum"]["stable_radius"], expected["stable_radius"]
        if abs(r - e) > tol * max(1.0, e):
            bad.append(f"stable_radius: expected {e}, got {r}")
    return bad


# ---------------------------------------------------------------- commands

def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _text_report(rep: dict) -> str:
    lines = [f"jdlgkit {rep['version']}  {rep.get('name', '')}  status={rep['status']}"]
    h = rep["hypothesis"]
    lines.append(f"hypothesis: {'PASS' if h['passed'] else 'FAIL'}  max ||T_phi|| = {max(n or float('inf') for n in h['norms']):.12g}")
    if rep["status"] == "ok":
        fmt = lambda z: f"{z[0]:+.6f}{z[1]:+.6f}i"
        lines.append("peripheral: " + ", ".join(fmt(z) for z in rep["peripheral"]["multiset"]))
        lines.append(f"h = {rep['h']}  ergodic = {rep['ergodic']}  dim A_r = {rep['dim_r']}  dim A_s = {rep['dim_s']}")
        lines.append(f"stable radius = {rep['spectrum']['stable_radius']:.6g}  r_fit = {rep['convergence']['r_fit']:.6g}")
        lines.append(f"oracle gap ({rep['oracle']['iterations']} iterations) = {rep['oracle']['gap']:.3e}")
        st = rep.get("structure", {})
        if "skipped" in st:
            lines.append(f"structure: skipped ({st['skipped']})")
        else:
            lines.append(f"structure: subalgebra={st['subalgebra']} simple={st['simple']} partial={st['partial']}")
    for n in rep.get("notes", []):
        lines.append(f"note: {n}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    try:
        raw = _read(args.input)
        code, rep, _ = analyze(raw, tol_peripheral=args.tol_peripheral, nmax=args.nmax,
                               oracle_iters=args.oracle_iters, probes=args.probes, seed=args.seed)
    except (OSError, SpecError) as exc:
        print(f"jdlg: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ValueError as exc:
        print(f"jdlg: invalid option: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    _emit(dumps(rep) if args.format == "json" else _text_report(rep), args.out)
    if code == EXIT_HYPOTHESIS:
        msg = "; ".join(rep["hypothesis"]["messages"] + rep.get("notes", [])) or rep["status"]
        print(f"jdlg: {rep['status']}: {msg}", file=sys.stderr)
    return code


def _preset_params(args) -> dict:
    name = args.preset
    table = {
        "classical_cycle": {"h": args.h if args.h is not None else 3,
                            "mixing_block_sizes": tuple(args.mixing or ()), "seed": args.seed},
        "identity": {"n": args.n if args.n is not None else 2},
        "dephasing": {"p": args.p if args.p is not None else 0.75},
        "depolarize_to_mixed": {},
        "flip_pinch": {},
        "unitary_conj": {"theta": args.theta if args.theta is not None else 1.0},
        "clock_shift_mixture": {"n": args.n if args.n is not None else 3},
        "random_unital": {"n": args.n if args.n is not None else 2,
                          "seed": args.seed if args.seed is not None else 0, "terms": args.terms},
    }
    return table[name]


def cmd_generate(args) -> int:
    if args.preset not in PRESETS:
        print(f"jdlg: unknown preset {args.preset!r}; choose from {', '.join(PRESETS)}", file=sys.stderr)
        return EXIT_PRESET
    try:
        entry = preset(args.preset, **_preset_params(args))
    except (ValueError, JdlgError) as exc:
        print(f"jdlg: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    _emit(dumps(entry_to_spec(entry), exact=True), args.out)
    return EXIT_OK


def verify_file(path: str) -> tuple:
    """(exit code, messages) for one spec file."""
    try:
        raw = _read(path)
        doc = load_spec(raw)
        if "expected" not in doc:
            return EXIT_SCHEMA, [f"{path}: no 'expected' block"]
        code, rep, _ = analyze(raw)
    except (OSError, SpecError, ValueError, JdlgError) as exc:
        return EXIT_SCHEMA, [f"{path}: {exc}"]
    if code != EXIT_OK:
        return EXIT_MISMATCH, [f"{path}: analysis status {rep['status']}"]
    bad = compare_expected(rep, doc["expected"])
    return (EXIT_MISMATCH if bad else EXIT_OK), [f"{path}: {b}" for b in bad]


def cmd_verify(args) -> int:
    if os.path.isdir(args.input):
        paths = sorted(os.path.join(args.input, f) for f in os.listdir(args.input) if f.endswith(".json"))
        if not paths:
            print(f"jdlg: no .json specs in {args.input}", file=sys.stderr)
            return EXIT_SCHEMA
    else:
        paths = [args.input]
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(verify_file, paths))
    else:
        results = [verify_file(p) for p in paths]
    for p, (code, msgs) in zip(paths, results):
        for m in msgs:
            print(m, file=sys.stderr)
        if len(paths) > 1:
            print(f"{p}: {'ok' if code == EXIT_OK else 'FAIL'}")
    codes = {c for c, _ in results}
    if EXIT_SCHEMA in codes:
        return EXIT_SCHEMA
    return EXIT_MISMATCH if EXIT_MISMATCH in codes else EXIT_OK


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _sizes(s):
    try:
        return [_positive_int(t) for t in s.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated positive integers") from None


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 3: code 2 is reserved for a failed hypothesis."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="jdlg", description="JDLG decomposition of completely positive dynamics")
    ap.add_argument("--version", action="version", version=f"jdlgkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="decompose a channel spec and print a report")
    a.add_argument("input", help="channel spec JSON (- for stdin)")
    a.add_argument("--tol-peripheral", type=float, default=None)
    a.add_argument("--nmax", type=_positive_int, default=256, help="power iterations (default 256)")
    a.add_argument("--oracle-iters", type=_positive_int, default=10000)
    a.add_argument("--probes", type=_positive_int, default=8)
    a.add_argument("--format", choices=("json", "text"), default="json")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out", default=None)
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("generate", help="write a corpus channel spec with ground truth")
    g.add_argument("preset")
    g.add_argument("--h", type=_positive_int, default=None)
    g.add_argument("--p", type=float, default=None)
    g.add_argument("--n", type=_positive_int, default=None)
    g.add_argument("--theta", type=float, default=None)
    g.add_argument("--mixing", type=_sizes, default=None, help="mixing block sizes, e.g. 3,2")
    g.add_argument("--terms", type=_positive_int, default=3)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a spec (or a directory of specs) against its expected block")
    v.add_argument("input")
    v.add_argument("--jobs", type=_positive_int, default=1)
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
