import argparse
import logging
import sys
from typing import List, Optional

# Import our custom modules
from src.cover_curve import CensusResult, fix_table, hyperelliptic_census, make_cover_curve
from src.decomposer import JacobianDecomposer
from src.errors import DomainError, InconsistentRamificationError, InvariantViolation
from src.evaluator import FixtureEvaluator
from src.kani_rosen import AutGroup
from src.output_generator import ReportGenerator, build_census_document, build_curve_document
from src.settings import OUTPUT_FORMATS, AnalysisSettings
from src.torsion_group import parse_subgroup

logger = logging.getLogger("absurf")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_FIXTURE_FAILURE = 2
EXIT_INVARIANT_VIOLATION = 3

CENSUS_MAX_DEGREE = 4
CENSUS_ZERO_NOTE = "0 (Bryan Table 1): no smooth hyperelliptic curves in |L| for d > 4"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="report format (default text)")
    common.add_argument("--assume-A-split", dest="assume_a_split", action="store_true",
                        help="treat A as isogenous to a product of elliptic curves")
    common.add_argument("--max-group-order", type=int, default=None, help="partition search bound (default 200)")
    common.add_argument("--jobs", type=int, default=None, help="worker threads for relation gathering")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="absurf",
        description="Curves on (1,d)-polarized abelian surfaces: fixed points, partitions and Jacobian splittings",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[common], help="analyse the cover curve of one subgroup")
    analyze.add_argument("--d", type=int, required=True, help="polarization type (1, d)")
    analyze.add_argument("--subgroup", required=True, help='generators as integers mod d, e.g. "2,0;0,2"')

    census = commands.add_parser("census", parents=[common], help="count hyperelliptic curves for d <= 4")
    census.add_argument("--d", type=int, required=True)

    commands.add_parser("verify-paper", parents=[common], help="run the exact-match fixture suite")
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def process_analysis(args: argparse.Namespace, settings: AnalysisSettings) -> str:
    """
    Build the cover curve, classify its involutions and decompose its Jacobian.

    Args:
        args (argparse.Namespace): Parsed ``analyze`` arguments
        settings (AnalysisSettings): Effective settings

    Returns:
        str: Rendered report
    """
    curve = make_cover_curve(args.d, parse_subgroup(args.d, args.subgroup))
    result = JacobianDecomposer(settings).decompose(curve)
    document = build_curve_document(curve, fix_table(curve), result, AutGroup(curve), args.subgroup)
    return ReportGenerator().generate_outputs(document, [settings.output_format])[settings.output_format].decode("utf-8")


def process_census(args: argparse.Namespace, settings: AnalysisSettings) -> str:
    """
    Count hyperelliptic curves in the linear system of a (1, d) polarization.

    Past d = 4 the count is zero, so the report carries that note instead of
    a derivation.

    Args:
        args (argparse.Namespace): Parsed ``census`` arguments
        settings (AnalysisSettings): Effective settings

    Returns:
        str: Rendered report
    """
    if args.d > CENSUS_MAX_DEGREE:
        logger.info("census d=%d is past the hyperelliptic range", args.d)
        census = CensusResult(args.d, 0, (), (CENSUS_ZERO_NOTE,))
    else:
        census = hyperelliptic_census(args.d)
    document = build_census_document(census)
    return ReportGenerator().generate_outputs(document, [settings.output_format])[settings.output_format].decode("utf-8")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        settings = AnalysisSettings.from_env(
            max_group_order=args.max_group_order,
            jobs=args.jobs,
            assume_a_split=args.assume_a_split or None,
            output_format=args.format,
        )
        if args.command == "analyze":
            print(process_analysis(args, settings))
        elif args.command == "census":
            print(process_census(args, settings))
        else:
            evaluator = FixtureEvaluator(settings)
            results = evaluator.run_all()
            print(evaluator.generate_evaluation_report(results))
            if not all(r.passed for r in results):
                return EXIT_FIXTURE_FAILURE
        return EXIT_OK
    except (DomainError, ValueError) as e:
        logger.error("%s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (InvariantViolation, InconsistentRamificationError) as e:
        logger.error("internal invariant violated: %s", e)
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INVARIANT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
