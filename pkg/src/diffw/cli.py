"""Command-line batch runner.

Subcommands:
  run                execute a verification suite and emit a JSON report
  evolve             integrate the chart evolution equation for a field config
  counterexample     reproduce the stretched-oscillation discontinuity values
  semidirect-verify  run the semidirect-product checks

Exit codes: 0 all checks passed, 1 suite failure, 2 configuration/parse
error, 3 I/O error.  A JSON config file may replace flags; explicit flags
win on conflict.  No environment variables are consulted.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import DiffwError, SuiteConfigError
from .reporting import build_report, render_figures, write_csv, write_json
from .suites import SUITE_NAMES, SuiteConfig, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="diffw", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a verification suite")
    run.add_argument("--suite", default=None, help=f"one of: {', '.join(SUITE_NAMES)}")
    run.add_argument("--dim", type=int, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--tol", type=float, default=None, help="override every check tolerance")
    run.add_argument("--report", default=None, help="output JSON path")
    run.add_argument("--csv", action="store_true", help="also write a CSV next to the report")
    run.add_argument("--figures", default=None, metavar="DIR",
                     help="render residual figures into DIR alongside the report")
    run.add_argument("--config", default=None, help="JSON config file; flags win on conflict")

    ev = sub.add_parser("evolve", help="integrate the evolution equation")
    ev.add_argument("--field", required=True, help="JSON file with the time-field config")
    ev.add_argument("--steps", type=int, default=200)
    ev.add_argument("--report", default="evolve_report.json")
    ev.add_argument("--dim", type=int, default=None, help="override the sample dimension")

    ce = sub.add_parser("counterexample", help="stretched-oscillation distance values")
    ce.add_argument("--max-n", type=int, default=20)
    ce.add_argument("--report", default="counterexample_report.json")
    ce.add_argument("--figures", default=None, metavar="DIR")

    sv = sub.add_parser("semidirect-verify", help="semidirect-product group checks")
    sv.add_argument("--dim", type=int, default=1)
    sv.add_argument("--seed", type=int, default=42)
    sv.add_argument("--report", default="semidirect_report.json")
    return top


def _load_config(args) -> SuiteConfig:
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise SuiteConfigError("config file must hold a JSON object")
    merged = {
        "suite": args.suite if args.suite is not None else base.get("suite", "all"),
        "dim": args.dim if args.dim is not None else base.get("dim", 1),
        "seed": args.seed if args.seed is not None else base.get("seed", 42),
        "tol": args.tol if args.tol is not None else base.get("tol"),
        "report": args.report if args.report is not None else base.get("report"),
        "csv": args.csv or bool(base.get("csv", False)),
        "figures": args.figures if args.figures is not None else base.get("figures"),
    }
    merged["box_halfwidth"] = float(base.get("box_halfwidth", 8.0))
    merged["points_per_axis"] = int(base.get("points_per_axis", 0))
    return SuiteConfig(**merged)


def _emit(cfg: SuiteConfig, records, passed) -> int:
    report = build_report(cfg, records, passed)
    path = cfg.report or f"{cfg.suite.replace('-', '_')}_report.json"
    try:
        write_json(report, path)
        if cfg.csv:
            write_csv(report, path.rsplit(".", 1)[0] + ".csv")
        if cfg.figures:
            render_figures(report, cfg.figures)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    failed = [r for r in records if not r["pass"]]
    for r in records:
        status = "pass" if r["pass"] else "FAIL"
        print(f"[{status}] {r['name']}: residual {r['residual']:.3e} (tol {r['tolerance']:.1e})")
    print(f"report written to {path} ({len(records)} checks, {len(failed)} failures)")
    return EXIT_OK if passed else EXIT_FAIL


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    records, passed = run_suite(cfg)
    return _emit(cfg, records, passed)


def _cmd_evolve(args) -> int:
    from .regularity import aux_derivative_check, evolve, field_from_config, lipschitz_bound
    from .weights import default_domain

    try:
        with open(args.field) as fh:
            field_cfg = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read field config: {exc}", file=sys.stderr)
        return EXIT_IO
    p = field_from_config(field_cfg)
    dim = args.dim or p.dim
    domain = default_domain(dim)
    K = lipschitz_bound(p, domain=domain)
    curve = evolve(p, args.steps, domain)
    samples = domain.grid[:: max(1, len(domain.grid) // 8)]
    aux = aux_derivative_check(p, curve, samples)
    report = {
        "field": field_cfg,
        "steps": args.steps,
        "dim": dim,
        "lipschitz_bound": K,
        "knot_defect": curve.defect,
        "aux_ode_max_deviation": aux["max_deviation"],
        "final_sup": float(np.max(np.abs(curve.value_at_knot(args.steps)))),
    }
    try:
        write_json(report, args.report)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"evolved {args.steps} steps; defect {curve.defect:.3e}; report at {args.report}")
    return EXIT_OK


def _cmd_counterexample(args) -> int:
    cfg = SuiteConfig(suite="counterexample")
    records, passed = run_suite(cfg)
    prefix = "counterexample-n"
    kept = [
        r
        for r in records
        if not (r["name"].startswith(prefix) and r["name"][len(prefix):].isdigit())
        or int(r["name"][len(prefix):]) <= args.max_n
    ]
    return _emit(
        SuiteConfig(
            suite="counterexample", report=args.report, figures=args.figures
        ),
        kept,
        all(r["pass"] for r in kept),
    )


def _cmd_semidirect(args) -> int:
    cfg = SuiteConfig(suite="actions", dim=args.dim, seed=args.seed, report=args.report)
    records, _ = run_suite(cfg)
    kept = [
        r
        for r in records
        if r["name"].startswith("semidirect-") or r["name"] == "action-homomorphism"
    ]
    return _emit(cfg, kept, all(r["pass"] for r in kept))


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    handlers = {
        "run": _cmd_run,
        "evolve": _cmd_evolve,
        "counterexample": _cmd_counterexample,
        "semidirect-verify": _cmd_semidirect,
    }
    try:
        return handlers[args.command](args)
    except (SuiteConfigError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DiffwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
