"""
Command-line front end: analyze, periods, monodromy, scan and serve.

Exit codes: 0 success, 2 parse/validation error, 3 numerical failure,
4 resource cap exceeded, 1 anything else (I/O).
"""

import argparse
import json
import sys
import time
from typing import Dict, List, Optional, Sequence

from lauricella import __version__
from lauricella.config import get_settings
from lauricella.errors import (
    LauricellaError,
    NumericalFailure,
    ParseError,
    ResourceCapError,
    ToleranceError,
    ValidationFailure,
)
from lauricella.periods import DEFAULT_NODES
from lauricella.reports import AnalysisReport, analyze_system, monodromy_report, periods_report
from lauricella.scanner import Filter, census_report, enumerate_systems, store_census
from lauricella.shared_logging import RunLogger, configure_logging
from lauricella.weights import parse_weights

run_logger = RunLogger("cli")


def exit_codes() -> Dict[int, str]:
    return {
        0: "success",
        LauricellaError.exit_code: "I/O or unexpected failure",
        ValidationFailure.exit_code: "parse or validation error",
        NumericalFailure.exit_code: "numerical tolerance failure",
        ResourceCapError.exit_code: "resource cap exceeded",
    }


def analyze(
    text: str, exact: bool = False, closure_bound: Optional[int] = None, threads: Optional[int] = None
) -> AnalysisReport:
    return analyze_system(parse_weights(text), exact=exact, closure_bound=closure_bound, threads=threads)


def parse_points(text: str) -> List[float]:
    points = []
    position = 0
    for token in text.split(","):
        try:
            points.append(float(token))
        except ValueError:
            raise ParseError(f"not a real number: {token.strip()!r}", position)
        position += len(token) + 1
    return points


def _dump(data) -> str:
    return json.dumps(data, indent=2)


def _print_analysis(report: AnalysisReport):
    print(f"weights:      {','.join(str(mu) for mu in report.weights)}")
    print(f"|mu|:         {report.total}")
    print(f"case:         {report.case.value}")
    print(f"INT (finite): {report.conditions_finite.int_ok}")
    print(f"half-INT:     {report.conditions_finite.half_int_ok}")
    if isinstance(report.conditions_infinity, str):
        print(f"with infinity: {report.conditions_infinity}")
    else:
        print(f"with infinity: INT={report.conditions_infinity.int_ok} half-INT={report.conditions_infinity.half_int_ok}")
    print(f"verdict:      {report.discreteness.conclusion}")
    cusps = report.cusps if isinstance(report.cusps, str) else len(report.cusps)
    print(f"cusps:        {cusps}")
    if isinstance(report.arithmetic, str):
        print(f"arithmetic:   {report.arithmetic}")
    else:
        witnesses = "; ".join(w.render() for w in report.arithmetic.witnesses)
        print(f"arithmetic:   {report.arithmetic.arithmetic}" + (f" ({witnesses})" if witnesses else ""))
    print(f"signature:    {report.gram.signature}")
    if not isinstance(report.cover, str):
        print(f"eigendims:    {report.cover.eigendims}")
        print(f"genus:        {report.cover.genus}")


def cmd_analyze(args) -> int:
    report = analyze(args.weights, exact=args.exact, closure_bound=args.closure_bound, threads=args.threads)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        _print_analysis(report)
    return 0


def cmd_periods(args) -> int:
    ws = parse_weights(args.weights)
    report = periods_report(ws, parse_points(args.points), nodes=args.nodes, step=args.step)
    for name in ("closure", "parabolic_pi"):
        residual = getattr(report.residuals, name)
        if residual is not None and residual > args.tolerance:
            raise ToleranceError(f"{name} residual {residual:.3e} exceeds {args.tolerance:g}")
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        for k, (re, im) in enumerate(report.F, start=1):
            print(f"F_{k} = {re:.15g} {im:+.15g}i")
        if report.F_inf is not None:
            print(f"F_inf = {report.F_inf[0]:.15g} {report.F_inf[1]:+.15g}i")
        print(f"error estimate: {report.error_estimate:.3e}")
        print(f"residuals: {report.residuals.model_dump()}")
        if report.ball_radius is not None:
            print(f"ball radius: {report.ball_radius:.12g}")
    return 0


def cmd_monodromy(args) -> int:
    ws = parse_weights(args.weights)
    print(_dump(monodromy_report(ws, exact=args.exact, closure=args.closure, bound=args.bound, threads=args.threads)))
    return 0


def cmd_scan(args) -> int:
    filters = [Filter(f) for f in args.filter or ()]
    entries = list(enumerate_systems(args.n, args.max_denom, filters, threads=args.threads))
    fmt = "json" if args.out and args.out.endswith(".json") else "csv"
    content = census_report(entries, fmt)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            f.write(content)
        print(f"{len(entries)} entries written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(content)
    if args.store:
        from lauricella.census_service import models
        from lauricella.census_service.database import SessionLocal, engine

        models.Base.metadata.create_all(bind=engine)
        db = SessionLocal()
        try:
            run_id = store_census(db, entries, args.n, args.max_denom, filters)
        finally:
            db.close()
        print(f"stored as census run {run_id}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("lauricella.census_service.main:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    epilog = "exit codes: " + ", ".join(f"{code} {meaning}" for code, meaning in sorted(exit_codes().items()))
    parser = argparse.ArgumentParser(prog="lauricella", description="Lauricella period and monodromy toolkit", epilog=epilog)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=None, help="worker count (default LAURICELLA_THREADS)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a weight system and report its invariants")
    p.add_argument("weights", help='comma separated rationals, e.g. "3/12,3/12,3/12,7/12"')
    p.add_argument("--json", action="store_true")
    p.add_argument("--exact", action="store_true", help="include exact cyclotomic coefficients")
    p.add_argument("--closure-bound", type=int, default=None, help="run group closure (elliptic case)")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("periods", help="evaluate the period vector and its identity residuals")
    p.add_argument("--weights", required=True)
    p.add_argument("--points", required=True, help="increasing reals, e.g. 0,1,2,3")
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_periods)

    p = sub.add_parser("monodromy", help="print the Dehn twist generators as JSON")
    p.add_argument("--weights", required=True)
    p.add_argument("--closure", action="store_true")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(handler=cmd_monodromy)

    p = sub.add_parser("scan", help="enumerate and classify weight systems")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-denom", type=int, required=True)
    p.add_argument("--filter", action="append", choices=[f.value for f in Filter])
    p.add_argument("--out", default=None, help="report.csv or report.json (default: CSV on stdout)")
    p.add_argument("--store", action="store_true", help="persist the run in the census database")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("serve", help="run the census HTTP service")
    p.add_argument("--host", default="0.0.0.0")
    p.add_argument("--port", type=int, default=8010)
    p.set_defaults(handler=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse usage errors count as validation errors
        return 2 if e.code else 0

    start_time = time.time()
    status = "ok"
    error_message = None
    try:
        configure_logging(args.log_level)
        if args.threads is None:
            args.threads = get_settings().threads
        return args.handler(args)
    except LauricellaError as e:
        status = "error"
        error_message = str(e)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        status = "error"
        error_message = str(e)
        print(f"error: {e}", file=sys.stderr)
        return 1
    finally:
        execution_time = (time.time() - start_time) * 1000
        run_logger.log_run(
            operation=args.command,
            status=status,
            parameters={k: v for k, v in vars(args).items() if k != "handler"},
            error_message=error_message,
            execution_time_ms=execution_time,
        )
