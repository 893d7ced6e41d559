"""classforge command-line entry point: `python app.py <subcommand> ...`."""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from audit import run_audit
from config.settings import get_config, get_config_manager, validate_environment
from cubic_field import class_group_cubic, make_field
from descent import point_search, selmer_to_classgroup
from elliptic_curve import CurveQ, reduction_gcd, torsion_subgroup
from errors import ClassforgeError, ConsistencyError, InvalidInputError, LimitExceededError
from family_scan import FamilyReport, FamilyScanEngine
from quad_class import QuadField, class_group, norm_power_class
from report_processor import ReportProcessor, skipped_reasons
from shared.result_cache import get_result_cache
from utils import render_json


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONSISTENCY = 1
EXIT_INVALID = 2
EXIT_LIMIT = 3

Output = Union[str, bytes]


def _global_options() -> argparse.ArgumentParser:
    """Options accepted both before and after the subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--cache', default=argparse.SUPPRESS, help="JSON result cache file")
    parent.add_argument('--budget', type=int, default=argparse.SUPPRESS, help="work budget per call")
    parent.add_argument('--log-level', default=argparse.SUPPRESS, help="logging level for stderr diagnostics")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Parser for every subcommand; unknown commands and missing flags exit 2."""
    common = _global_options()
    parser = argparse.ArgumentParser(prog='classforge', parents=[common],
                                     description="Torsion, class groups and descent for y^2 = x^3 + n")
    commands = parser.add_subparsers(dest='command', required=True)

    torsion = commands.add_parser('torsion', parents=[common], help="rational torsion of y^2 = x^3 + ax + b")
    torsion.add_argument('--a', type=int, required=True)
    torsion.add_argument('--b', type=int, required=True)

    quad = commands.add_parser('classgroup', parents=[common], help="class group of Q(sqrt(d)), d < 0")
    quad.add_argument('--d', type=int, required=True)

    cubic = commands.add_parser('cubic', parents=[common], help="class group of Q(cbrt(m))")
    cubic.add_argument('--m', type=int, required=True)

    special = commands.add_parser('specialize', parents=[common], help="class of the norm-w ideal from u^2 - d = w^p")
    special.add_argument('--d', type=int, required=True)
    special.add_argument('--u', type=int, required=True)
    special.add_argument('--w', type=int, required=True)
    special.add_argument('--p', type=int, required=True)

    descent = commands.add_parser('descent', parents=[common], help="x - theta descent on y^2 = x^3 + n")
    descent.add_argument('--n', type=int, required=True)
    descent.add_argument('--search-bound', type=int, required=True)

    scan = commands.add_parser('scan', parents=[common], help="l-ranks over Q(sqrt(n - m^3))")
    scan.add_argument('--n', type=int, required=True)
    scan.add_argument('--l', type=int, required=True)
    scan.add_argument('--m-from', type=int, required=True)
    scan.add_argument('--m-to', type=int, required=True)
    _add_format_options(scan)

    scan_cubic = commands.add_parser('scan-cubic', parents=[common], help="class groups of Q(cbrt(n))")
    scan_cubic.add_argument('--from', dest='n_from', type=int, required=True)
    scan_cubic.add_argument('--to', dest='n_to', type=int, required=True)
    _add_format_options(scan_cubic)

    commands.add_parser('audit', parents=[common], help="recompute the audited claims")
    return parser


def _add_format_options(subparser: argparse.ArgumentParser):
    """Add --format and --out to a scan subcommand."""
    subparser.add_argument('--format', choices=['json', 'csv', 'xlsx'], default='json')
    subparser.add_argument('--out', default=None, help="write the report here instead of stdout")


def _json(document) -> str:
    """Render a report document in the wire format."""
    return render_json(document, get_config().json_indent)


def _torsion(args) -> Output:
    """Torsion subgroup plus the #E(F_p) gcd it must divide."""
    curve = CurveQ(args.a, args.b)
    torsion = torsion_subgroup(curve)
    g, counts = reduction_gcd(curve)
    if g % torsion.order:
        raise ConsistencyError(f"torsion order {torsion.order} does not divide gcd {g} of #E(F_p)")
    document = torsion.to_dict()
    document['reduction'] = {'gcd': g, 'counts': {str(p): n for p, n in counts.items()}}
    return _json(document)


def _classgroup(args) -> Output:
    """Class group of Q(sqrt(d)) with its 2- and 3-ranks."""
    group = class_group(QuadField(args.d))
    document = group.to_dict()
    document['d'] = args.d
    document['l_ranks'] = {str(l): group.l_rank(l) for l in (2, 3)}
    return _json(document)


def _cubic(args) -> Output:
    """Class group of Q(cbrt(m))."""
    return _json(class_group_cubic(make_field(args.m)).to_dict())


def _specialize(args) -> Output:
    """Class of the norm-w ideal for u^2 - d = w^p."""
    return _json(norm_power_class(QuadField(args.d), args.u, args.w, args.p).to_dict())


def _descent(args) -> Output:
    """Point search, then descent and class images on y^2 = x^3 + n."""
    curve = CurveQ(0, args.n)
    points = point_search(curve, args.search_bound)
    return _json(selmer_to_classgroup(curve, points).to_dict())


def _render_family(report: FamilyReport, fmt: str) -> Output:
    """Family report as JSON, CSV or XLSX bytes; skipped rows are logged."""
    for reason in skipped_reasons(report):
        logger.warning("skipped row: %s", reason)
    processor = ReportProcessor()
    logger.info("scan summary: %s", processor.get_summary_statistics(report))
    if fmt == 'csv':
        return processor.to_csv(report)
    if fmt == 'xlsx':
        return processor.to_xlsx(report)
    return _json(report.to_dict())


def _scan(args) -> Output:
    """Quadratic family scan over m_from..m_to."""
    report = FamilyScanEngine().scan_quadratic(args.n, args.l, args.m_from, args.m_to)
    return _render_family(report, args.format)


def _scan_cubic(args) -> Output:
    """Cubic family scan over n_from..n_to."""
    report = FamilyScanEngine().scan_cubic(args.n_from, args.n_to)
    return _render_family(report, args.format)


def _audit(args) -> Output:
    """Recompute every audited claim."""
    return _json(run_audit())


# subcommand -> (handler, argument names that identify the request)
HANDLERS: Dict[str, Tuple[Callable, Tuple[str, ...]]] = {
    'torsion': (_torsion, ('a', 'b')),
    'classgroup': (_classgroup, ('d',)),
    'cubic': (_cubic, ('m',)),
    'specialize': (_specialize, ('d', 'u', 'w', 'p')),
    'descent': (_descent, ('n', 'search_bound')),
    'scan': (_scan, ('n', 'l', 'm_from', 'm_to', 'format')),
    'scan-cubic': (_scan_cubic, ('n_from', 'n_to', 'format')),
    'audit': (_audit, ()),
}


def canonical_request(args) -> str:
    """Cache key: subcommand, its result-determining arguments, then any non-default limits."""
    _, fields = HANDLERS[args.command]
    parts = [args.command] + [f"{name}={getattr(args, name)}" for name in fields]
    overrides = get_config_manager().get_result_overrides()
    parts += [f"{name}={value}" for name, value in sorted(overrides.items())]
    return " ".join(parts)


def _configure(args):
    """Apply --budget, --cache and --log-level on top of the environment settings."""
    manager = get_config_manager()
    manager.reload_config()
    if hasattr(args, 'budget'):
        if args.budget < 1:
            raise InvalidInputError(f"--budget must be positive, got {args.budget}", code="bad-budget")
        manager.update_config_value('work_budget', args.budget)
    if hasattr(args, 'cache'):
        manager.update_config_value('cache_path', args.cache)
    level = getattr(args, 'log_level', get_config().log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    for warning in validate_environment():
        logger.warning(warning)
    logger.debug("budgets: %s", manager.get_budget_config())


def _execute(args) -> Output:
    """Run the handler, going through the result cache when one is configured."""
    handler, _ = HANDLERS[args.command]
    cache = get_result_cache(get_config().cache_path)
    if cache is None or getattr(args, 'format', 'json') == 'xlsx':
        return handler(args)
    key = canonical_request(args)
    with cache:
        output = cache.get(key)
        if output is None:
            output = handler(args)
            cache.put(key, output)
        else:
            logger.info("cache hit for %s", key)
    return output


def _emit(output: Output, out: Optional[str]):
    """Write to --out when given, else to stdout."""
    if out:
        path = Path(out)
        if isinstance(output, bytes):
            path.write_bytes(output)
        else:
            path.write_text(output, encoding='utf-8')
        return
    sys.stdout.write(output)


def _fail(exc: ClassforgeError, code: int) -> int:
    """Report the error as one JSON line on stderr and return the exit code."""
    sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID

    try:
        _configure(args)
        if getattr(args, 'format', None) == 'xlsx' and not args.out:
            raise InvalidInputError("xlsx output needs --out PATH", code="missing-out")
        _emit(_execute(args), getattr(args, 'out', None))
    except InvalidInputError as exc:
        return _fail(exc, EXIT_INVALID)
    except LimitExceededError as exc:
        return _fail(exc, EXIT_LIMIT)
    except ConsistencyError as exc:
        logger.error("internal verification failed: %s", exc)
        return _fail(exc, EXIT_CONSISTENCY)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
