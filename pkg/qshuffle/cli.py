"""
Command-line front end: ``qshuffle verify | dump | bench``.

Exit status: 0 when every check passes, 1 when any fails, 2 on a usage error.
"""
import argparse
import logging
import sys
import time
from typing import Iterable, List, Optional, Sequence

import pandas as pd

from . import __version__
from .check_config import BACKENDS, CHECK_NAMES, CheckSpec, acceptance_suite, load_suite, max_degree
from .constructors import (
    K_METHODS, Spin, build_D, build_E, build_F, build_H, build_K, build_Kbar, build_R,
    build_R_half_closed, build_Rhat,
)
from .errors import QShuffleError
from .scalar import EXACT, NumericField
from .series import delta_n
from .utils import dump_json, log_memory_usage, rss_mb, write_output
from .verifier import Report, run_spec, run_suite

logger = logging.getLogger(__name__)

MATRICES = ("E", "F", "H", "R", "R_closed", "Rhat", "K", "Kbar", "D")
EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _spin_arg(value: str) -> str:
    try:
        return str(Spin.parse(value))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid spin {value!r}, use '1/2', '1', '3/2', ...") from None


def _degree_arg(value: str) -> int:
    try:
        degree = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid degree {value!r}") from None
    bound = max_degree()
    if not 0 <= degree <= bound:
        raise argparse.ArgumentTypeError(f"degree must be in [0, {bound}] (QSHUFFLE_MAX_DEGREE), but got {degree}")
    return degree


def _jobs_arg(value: str) -> int:
    jobs = int(value)
    if jobs < 1:
        raise argparse.ArgumentTypeError(f"jobs must be >= 1, but got {jobs}")
    return jobs


def _add_spin_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--j1", type=_spin_arg, default="1/2", help="first spin (default: 1/2)")
    parser.add_argument("--j2", type=_spin_arg, default="1/2", help="second spin (default: 1/2)")
    parser.add_argument("--j3", type=_spin_arg, default="1/2", help="third spin (default: 1/2)")
    parser.add_argument("--j", type=_spin_arg, default=None, help="single spin; overrides --j1")


def _add_backend_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--backend", choices=BACKENDS, default="exact")
    parser.add_argument("--q", type=float, action="append", default=None,
                        help="sample q for the numeric backend; repeatable (default: 1.3 and 1.7)")
    parser.add_argument("--tol", type=float, default=1e-8, help="numeric residual bound (default: 1e-8)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qshuffle",
                                     description="Verify fused R-, Ř- and K-matrix identities over the q-shuffle algebra.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run identity checks")
    selector = verify.add_mutually_exclusive_group(required=True)
    selector.add_argument("--check", choices=CHECK_NAMES, help="run one check")
    selector.add_argument("--all", action="store_true", help="run the full acceptance suite")
    selector.add_argument("--config", help="JSON file holding a list of check specs")
    _add_spin_flags(verify)
    verify.add_argument("--degree", type=_degree_arg, default=4, help="truncation degree D (default: 4)")
    verify.add_argument("--max-m", type=int, default=2, help="largest m for the Delta families (default: 2)")
    verify.add_argument("--max-n", type=int, default=5, help="largest Catalan half-length (default: 5)")
    verify.add_argument("--count", type=int, default=10, help="sign flips for the mutation check (default: 10)")
    verify.add_argument("--seed", type=int, default=0)
    _add_backend_flags(verify)
    verify.add_argument("--no-numeric", action="store_true", help="with --all, skip the numeric re-runs")
    verify.add_argument("--format", choices=("json", "text"), default="text")
    verify.add_argument("--output", default=None, help="output path (default: standard output)")
    verify.add_argument("--jobs", type=_jobs_arg, default=1, help="worker processes (default: 1)")
    verify.add_argument("--no-timing", action="store_true", help="omit wall times for byte-identical output")

    dump = sub.add_parser("dump", help="print a matrix or a Delta table")
    target = dump.add_mutually_exclusive_group(required=True)
    target.add_argument("--matrix", choices=MATRICES)
    target.add_argument("--delta", type=int, metavar="M", help="table of Delta^(M)_n for n <= degree")
    _add_spin_flags(dump)
    dump.add_argument("--degree", type=_degree_arg, default=4)
    dump.add_argument("--method", choices=K_METHODS, default="closed")
    dump.add_argument("--var", choices=("t", "s"), default="t")
    _add_backend_flags(dump)
    dump.add_argument("--format", choices=("json", "text"), default="json")
    dump.add_argument("--output", default=None)

    bench_parser = sub.add_parser("bench", help="time a check at increasing degrees, CSV output")
    bench_parser.add_argument("--check", choices=CHECK_NAMES, default="fm")
    _add_spin_flags(bench_parser)
    bench_parser.add_argument("--degrees", type=_degree_arg, nargs="+", default=[2, 4, 6])
    _add_backend_flags(bench_parser)
    bench_parser.add_argument("--output", default=None, help="CSV path (default: standard output)")
    return parser


def _spec_from_args(args: argparse.Namespace, name: str, **overrides) -> CheckSpec:
    values = dict(
        name=name, j1=args.j or args.j1, j2=args.j2, j3=args.j3,
        backend=args.backend, q_values=args.q or [1.3, 1.7], tol=args.tol,
    )
    for key in ("degree", "max_m", "max_n", "count", "seed"):
        if hasattr(args, key):
            values[key] = getattr(args, key)
    values.update(overrides)
    return CheckSpec.load(values)


def _format_reports(reports: Sequence[Report], fmt: str, timing: bool) -> str:
    if fmt == "json":
        return dump_json([r.to_json(timing=timing) for r in reports])
    lines = [r.summary(timing=timing) for r in reports]
    passed = sum(r.passed for r in reports)
    lines.append(f"{passed}/{len(reports)} checks passed")
    return "\n".join(lines) + "\n"


def _verify(args: argparse.Namespace) -> int:
    if args.all:
        specs = acceptance_suite(include_numeric=not args.no_numeric, q_values=args.q)
    elif args.config:
        specs = load_suite(args.config)
    else:
        specs = [_spec_from_args(args, args.check)]
    reports = run_suite(specs, jobs=args.jobs)
    write_output(_format_reports(reports, args.format, not args.no_timing), args.output)
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


def _field(args: argparse.Namespace):
    if args.backend == "exact":
        return EXACT
    return NumericField((args.q or [1.3])[0])


def _build_matrix(args: argparse.Namespace, field):
    j = Spin.parse(args.j or args.j1)
    j2 = Spin.parse(args.j2)
    name = args.matrix
    if name == "E":
        return build_E(j, field), {"j": str(j)}
    if name == "F":
        return build_F(j, field), {"j": str(j)}
    if name == "H":
        return build_H(j, field), {"j": str(j)}
    if name == "R":
        return build_R(j, j2, field=field), {"j1": str(j), "j2": str(j2)}
    if name == "R_closed":
        return build_R_half_closed(j, field=field), {"j": str(j)}
    if name == "Rhat":
        return build_Rhat(j, j2, field), {"j1": str(j), "j2": str(j2)}
    if name == "D":
        return build_D(j, field), {"j": str(j)}
    params = {"j": str(j), "degree": args.degree, "var": args.var, "method": args.method}
    if name == "K":
        return build_K(j, args.degree, var=args.var, method=args.method, field=field), params
    return build_Kbar(j, args.degree, var=args.var, method=args.method, field=field), params


def _dump(args: argparse.Namespace) -> int:
    field = _field(args)
    if args.delta is not None:
        table = [(n, delta_n(args.delta, n, field)) for n in range(args.degree + 1)]
        if args.format == "json":
            text = dump_json({"delta": args.delta, "field": field.name,
                              "table": [{"n": n, "poly": poly.to_json()} for n, poly in table]})
        else:
            text = "".join(f"Delta^({args.delta})_{n} = {poly}\n" for n, poly in table)
        write_output(text, args.output)
        return EXIT_PASS
    mat, params = _build_matrix(args, field)
    if args.format == "json":
        text = dump_json({"matrix": args.matrix, "params": params, "field": field.name, **mat.to_json()})
    else:
        text = f"{args.matrix} {params}\n{mat}\n"
    write_output(text, args.output)
    return EXIT_PASS


def bench(spec: CheckSpec, degrees: Iterable[int]) -> pd.DataFrame:
    """
    Wall time of ``spec`` at each degree, with the resident memory afterwards.

    :return: one row per degree: check, params, degree, millis, pass, rss_mb
    """
    rows = []
    for degree in degrees:
        run = CheckSpec.load(spec, degree=degree)
        start = time.perf_counter()
        report = run_spec(run)
        millis = (time.perf_counter() - start) * 1000
        log_memory_usage(f"{run.name} at degree {degree}")
        rows.append({
            "check": run.name,
            "params": " ".join(f"{k}={v}" for k, v in report.params.items() if k != "degree"),
            "degree": degree,
            "millis": round(millis, 3),
            "pass": report.passed,
            "rss_mb": round(rss_mb(), 1),
        })
    return pd.DataFrame(rows, columns=["check", "params", "degree", "millis", "pass", "rss_mb"])


def _bench(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args, args.check, degree=min(args.degrees))
    table = bench(spec, args.degrees)
    write_output(table.to_csv(index=False), args.output)
    return EXIT_PASS if table["pass"].all() else EXIT_FAIL


def _configure_logging(verbose: int):
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_PASS
    _configure_logging(args.verbose)
    commands = {"verify": _verify, "dump": _dump, "bench": _bench}
    try:
        return commands[args.command](args)
    except (QShuffleError, ValueError, TypeError, OSError) as e:
        parser.print_usage(sys.stderr)
        print(f"qshuffle {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
