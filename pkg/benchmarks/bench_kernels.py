"""Compiled vs numpy kernels on superoperators of a few sizes.

    python benchmarks/bench_kernels.py [--repeat 5] [--steps 2000]

Prints one row per (kernel, N) with the best wall time of each backend and
the speedup. The two outputs are also compared, so a row doubles as a check.
"""

import argparse
import timeit

import numpy as np

from jdlgkit import _fallback
from jdlgkit.kernels import compiled_impl


def _operands(N, steps, rng):
    T = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    T /= np.abs(np.linalg.eigvals(T)).max()  # keep powers bounded
    X0 = rng.standard_normal((N, 2)) + 0j
    k = np.arange(steps)
    W = np.exp(2j * np.pi * np.outer([0, 1, 2], k) / 3) / steps
    return T, X0, W


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--sizes", default="4,16,64,256")
    args = ap.parse_args(argv)
    if compiled_impl is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation` first")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'N':>5}{'numpy [ms]':>13}{'cython [ms]':>13}{'speedup':>9}{'max diff':>11}")
    for N in (int(s) for s in args.sizes.split(",")):
        T, X0, W = _operands(N, args.steps, rng)
        cases = {
            "power_orbit": lambda m: m.power_orbit(T, X0, args.steps),
            "weighted_power_sum": lambda m: m.weighted_power_sum(T, X0, W),
        }
        for name, call in cases.items():
            t_py = min(timeit.repeat(lambda: call(_fallback), number=1, repeat=args.repeat))
            t_c = min(timeit.repeat(lambda: call(compiled_impl), number=1, repeat=args.repeat))
            diff = np.abs(call(_fallback) - call(compiled_impl)).max()
            print(f"{name:<20}{N:>5}{1e3 * t_py:>13.2f}{1e3 * t_c:>13.2f}{t_py / t_c:>8.1f}x{diff:>11.1e}")


if __name__ == "__main__":
    main()
