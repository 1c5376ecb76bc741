"""Command-line front end: analyze a variety, reproduce the dimension table,
and locate foci along leaf lines.

Exit codes: 0 ok, 2 unresolvable or malformed spec, 3 ambiguous rank
decisions after retries, 4 theorem inconsistency or table mismatch.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .charts import TABLE_ROWS, ChartError, RuledChart, resolve
from .duality import refined_dual_defect
from .gauss import (
    LeafLine,
    NonGenericPointError,
    analyze,
    focus_polynomial,
    leaf_operators,
    scan_foci,
)
from .numerics import DEFAULT_RANK_TOL, DegenerateLeafError, InputError, real_roots

EXIT_OK = 0
EXIT_BAD_SPEC = 2
EXIT_AMBIGUOUS = 3
EXIT_INCONSISTENT = 4


@dataclass(frozen=True)
class RunConfig:
    variety_spec: str
    seed: int
    rank_tol: float = DEFAULT_RANK_TOL
    gh_mode: str = "auto"
    samples: int = 5
    output: str = "json"

    def __post_init__(self):
        if not (0.0 < self.rank_tol < 1e-2):
            raise InputError(f"rank tolerance {self.rank_tol} outside (0, 1e-2)")
        if self.samples < 1:
            raise InputError("samples must be >= 1")
        if self.gh_mode not in ("auto", "probabilistic", "interpolated"):
            raise InputError(f"unknown gh mode {self.gh_mode!r}")


def _default_seed(args):
    env = os.environ.get("DUALRANK_SEED")
    if args.seed is not None:
        return args.seed
    if env is not None:
        return int(env)
    return 42


def _report_dict(config):
    chart = resolve(config.variety_spec)
    rng = np.random.default_rng(config.seed)
    report = refined_dual_defect(
        chart, rng=rng, tol=config.rank_tol,
        gh_mode=config.gh_mode, samples=config.samples)
    doc = report.to_dict(seed=config.seed,
                         tolerances={"rank_tol": config.rank_tol})
    doc["spec"] = config.variety_spec
    return report, doc


def _print_analyze_text(doc, out):
    gh = doc["gh"]
    cons = doc["consistency"]
    out.write(f"variety   {doc['spec']}  (P^{doc['N']})\n")
    out.write(f"primal    n={doc['n']}  r={doc['r']}  l={doc['l']}\n")
    out.write(f"dual      n*={doc['n_star']}  l*={doc['l_star']}  r*={doc['r_star']}"
              f"  expected n*={doc['expected_n_star']}  delta*={doc['delta_star']}\n")
    out.write(f"pencils   mode={gh['mode']}  verdict={gh['verdict']}"
              f"  max|det|={gh['max_abs_det']:.3e}\n")
    out.write(f"checks    rank/defect swap={cons['theorem1']}"
              f"  degeneracy criterion={cons['theorem4']}\n")


def cmd_analyze(args):
    try:
        config = RunConfig(args.variety, _default_seed(args), args.tol,
                           args.gh_mode, args.samples, args.format)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    try:
        report, doc = _report_dict(config)
    except (ChartError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    except NonGenericPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    if config.output == "json":
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _print_analyze_text(doc, sys.stdout)
    if report.undecided:
        return EXIT_AMBIGUOUS
    if not report.theorem4_consistent or report.theorem1_consistent is False:
        return EXIT_INCONSISTENT
    return EXIT_OK


def _table_row(entry, seed, tol):
    row_id, name, spec, dual_name = entry
    chart = resolve(spec)
    # one independent stream per row so parallel and serial runs agree
    rng = np.random.default_rng([seed, row_id])
    report = refined_dual_defect(chart, rng=rng, tol=tol)
    ok = (
        not report.undecided
        and report.theorem4_consistent
        and report.theorem1_consistent is not False
        and report.n == report.l + report.r
        and report.n_star == report.N - report.l - 1 - report.delta_star
    )
    status = "ambiguous" if report.undecided else ("ok" if ok else "fail")
    return {
        "example_id": row_id,
        "name": name,
        "spec": spec,
        "N": report.N,
        "n": report.n,
        "l": report.l,
        "r": report.r,
        "l_star": report.l_star,
        "n_star": report.n_star,
        "delta_star": report.delta_star,
        "gh_all_singular": report.gh_all_singular,
        "dual_name": dual_name,
        "status": status,
    }


def table_rows(seed, tol=DEFAULT_RANK_TOL, jobs=1):
    """Measured dimension-table rows, in fixed example order."""
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda e: _table_row(e, seed, tol), TABLE_ROWS))
    else:
        rows = [_table_row(e, seed, tol) for e in TABLE_ROWS]
    return rows


def render_table(rows, fmt):
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["X", "N", "n", "l", "r", "l*", "n*", "X*"])
    for row in rows:
        writer.writerow([row["name"], row["N"], row["n"], row["l"], row["r"],
                         row["l_star"], row["n_star"], row["dual_name"]])
    return buf.getvalue()


def cmd_table(args):
    seed = _default_seed(args)
    try:
        if not (0.0 < args.tol < 1e-2):
            raise InputError(f"rank tolerance {args.tol} outside (0, 1e-2)")
        rows = table_rows(seed, args.tol, jobs=args.jobs)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    sys.stdout.write(render_table(rows, args.format))
    statuses = {row["status"] for row in rows}
    if "ambiguous" in statuses:
        return EXIT_AMBIGUOUS
    if "fail" in statuses:
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_foci(args):
    seed = _default_seed(args)
    try:
        chart = resolve(args.variety)
    except ChartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    if not isinstance(chart, RuledChart):
        print(f"error: {args.variety} is not ruled; no leaf lines to probe",
              file=sys.stderr)
        return EXIT_BAD_SPEC
    try:
        at = np.array([float(v) for v in args.at.split(",")])
        direction = np.array([float(v) for v in args.dir.split(",")])
        if at.shape[0] != chart.d:
            raise InputError(
                f"--at needs {chart.d} parameters, got {at.shape[0]}")
        line = LeafLine.from_vector(direction, chart.leaf_dim)
    except (ValueError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    doc = {"spec": args.variety, "seed": seed, "at": at.tolist(),
           "dir": direction.tolist(), "status": "ok"}
    try:
        analysis = analyze(chart, at, args.tol)
        ops = leaf_operators(chart, analysis)
        poly = focus_polynomial(chart, analysis, ops, line=line)
        doc["coefficients"] = poly.coefficients.tolist()
        roots = real_roots(poly, (-3.0, 3.0))
        doc["roots"] = [{"location": c.location, "multiplicity": c.multiplicity}
                        for c in roots]
        doc["scan"] = scan_foci(chart, analysis, line=line)
    except DegenerateLeafError:
        doc["status"] = "degenerate_leaf"
        doc["roots"] = doc["scan"] = None
    except NonGenericPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dualrank",
        description="Gauss-map and projective-duality invariants of "
                    "parametrized varieties")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="full duality report for one variety")
    pa.add_argument("--variety", required=True, help='spec string, e.g. "segre:1,2"')
    pa.add_argument("--seed", type=int, default=None)
    pa.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL)
    pa.add_argument("--gh-mode", default="auto",
                    choices=["auto", "probabilistic", "interpolated"])
    pa.add_argument("--samples", type=int, default=5)
    pa.add_argument("--format", default="json", choices=["json", "text"])
    pa.set_defaults(func=cmd_analyze)

    pt = sub.add_parser("table", help="reproduce the worked dimension table")
    pt.add_argument("--seed", type=int, default=None)
    pt.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL)
    pt.add_argument("--format", default="csv", choices=["csv", "json"])
    pt.add_argument("--jobs", type=int, default=1)
    pt.set_defaults(func=cmd_table)

    pf = sub.add_parser("foci", help="focal points along a leaf line")
    pf.add_argument("--variety", required=True)
    pf.add_argument("--at", required=True, help="comma-separated parameters")
    pf.add_argument("--dir", required=True,
                    help="leaf direction, l or l+1 comma-separated weights")
    pf.add_argument("--seed", type=int, default=None)
    pf.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL)
    pf.set_defaults(func=cmd_foci)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
