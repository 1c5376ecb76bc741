"""Timing comparison of the jet backends on the catalogue evaluators.

Run as ``python -m dualrank.benchmark [--repeats K] [--points M]``.  Each
chart evaluator is driven through full second-order jets with the compiled
backend (when importable) and with the pure-Python fallback, on the same
sample points, and both results are checked for agreement.
"""

import argparse
import time

import numpy as np

from . import _jet_py
from .charts import CATALOGUE_SPECS, resolve
from .jets import eval_jet


def _load_cython():
    try:
        from . import _jet_cy
        return _jet_cy
    except ImportError:
        return None


def _time_backend(chart, points, backend, repeats):
    best = np.inf
    jets = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        jets = [eval_jet(chart._eval, u, jet_backend=backend)
                for u in points]
        best = min(best, time.perf_counter() - t0)
    return best, jets


def run(repeats=3, points_per_chart=20, seed=0):
    cython = _load_cython()
    rng = np.random.default_rng(seed)
    rows = []
    for spec in CATALOGUE_SPECS:
        chart = resolve(spec)
        lo, hi = chart.sample_domain()
        points = [rng.uniform(lo, hi) for _ in range(points_per_chart)]
        t_py, jets_py = _time_backend(chart, points, _jet_py, repeats)
        row = {"spec": spec, "d": chart.d, "N": chart.N, "python_s": t_py}
        if cython is not None:
            t_cy, jets_cy = _time_backend(chart, points, cython, repeats)
            err = max(
                max(np.max(np.abs(a.value - b.value)),
                    np.max(np.abs(a.jacobian - b.jacobian)),
                    np.max(np.abs(a.hessians - b.hessians)))
                for a, b in zip(jets_py, jets_cy)
            )
            row.update(cython_s=t_cy, speedup=t_py / t_cy, max_abs_diff=err)
        rows.append(row)
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--points", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    rows = run(args.repeats, args.points, args.seed)
    have_cy = "cython_s" in rows[0]
    header = f"{'chart':36s} {'d':>2s} {'N':>2s} {'python':>10s}"
    if have_cy:
        header += f" {'cython':>10s} {'speedup':>8s} {'max diff':>10s}"
    print(header)
    for row in rows:
        line = (f"{row['spec']:36s} {row['d']:2d} {row['N']:2d} "
                f"{row['python_s'] * 1e3:8.2f}ms")
        if have_cy:
            line += (f" {row['cython_s'] * 1e3:8.2f}ms {row['speedup']:7.2f}x"
                     f" {row['max_abs_diff']:10.2e}")
        print(line)
    if not have_cy:
        print("compiled backend unavailable; timed pure-Python only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
