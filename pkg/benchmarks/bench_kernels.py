"""Compare the compiled and pure-Python elliptic kernels.

Times the kernels that dominate the f_sigma scans and the continuation
Jacobians, checks that both backends return the same numbers, and prints
the speed-up. Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""
import argparse
import timeit

import numpy as np

from nlstar import _kernels_py as py

try:
    from nlstar import _kernels as cy
except ImportError:  # pragma: no cover
    cy = None


def workloads(mod, rng_seed=0, n=2000):
    rng = np.random.default_rng(rng_seed)
    m = rng.uniform(0.0, 1.0, n)
    mc = 1.0 - m
    u = rng.uniform(-20.0, 20.0, n)
    y = rng.uniform(0.0, 20.0, n)
    xs = rng.uniform(0.0, 2.0, (n, 3))

    def rf():
        return [mod.carlson_rf(a, b, c) for a, b, c in xs]

    def rd():
        return [mod.carlson_rd(a, b, c + 0.1) for a, b, c in xs]

    def sncndn():
        return [mod.sncndn(uu, mm, cc) for uu, mm, cc in zip(u, m, mc)]

    def sncndn_array():
        return mod.sncndn_array(u, 0.7, 0.3)

    def sn2():
        return [mod.sn2_integral(yy, mm, cc) for yy, mm, cc in zip(y, m, mc) if mm < 1.0]

    def sd2():
        return [mod.sd2_integral(yy, 0.5 * mm, 1.0 - 0.5 * mm) for yy, mm in zip(y, m)]

    return {"carlson_rf": rf, "carlson_rd": rd, "sncndn": sncndn,
            "sncndn_array": sncndn_array, "sn2_integral": sn2, "sd2_integral": sd2}


def max_rel_diff(a, b):
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=2000)
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled kernels not built; only the Python backend is available")
        return 1
    wpy = workloads(py, n=args.n)
    wcy = workloads(cy, n=args.n)
    print(f"{'kernel':<14} {'python [ms]':>12} {'cython [ms]':>12} {'speed-up':>9} {'max rel diff':>13}")
    for name in wpy:
        diff = max_rel_diff(wcy[name](), wpy[name]())
        tp = min(timeit.repeat(wpy[name], number=1, repeat=args.repeat)) * 1e3
        tc = min(timeit.repeat(wcy[name], number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<14} {tp:12.3f} {tc:12.3f} {tp / tc:9.1f} {diff:13.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
