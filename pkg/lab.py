import argparse
import logging
import sys
from typing import List, Optional, Union

from pydantic import ValidationError

from lsepso.benchmarks import BENCHMARKS, get_benchmark, resolve_function_id
from lsepso.catalog import build_catalog, catalog_file, save_catalog
from lsepso.config import Settings, apply_settings, load_settings
from lsepso.exceptions import LabBaseException, UnknownNameError
from lsepso.harness import report, run_experiment
from lsepso.logger import setup_logger
from lsepso.schemas import Algorithm, ExperimentSpec, LocalSearchVariant

logger = logging.getLogger("lsepso.cli")


def parse_algorithm(name: str) -> Algorithm:
    for algorithm in Algorithm:
        if name.strip().upper() == algorithm.value:
            return algorithm
    raise UnknownNameError("algorithm", name, [a.value for a in Algorithm])


def parse_denominator(value: str) -> Union[int, str]:
    if value.strip().lower() == "reference":
        return "reference"
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'reference', got '{value}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Multimodal PSO laboratory")
    parser.add_argument('--config', type=str, default=None, help='key=value config file (CLI flags win)')
    parser.add_argument('--log-level', type=str, default=None, help='Override LOG_LEVEL')
    subparsers = parser.add_subparsers(dest='command', help='Commands')

    # Run command
    run_parser = subparsers.add_parser('run', help='Run seeded replications of one optimizer on one benchmark')
    run_parser.add_argument('--function', required=True, help='f1..f5 or a full id such as F2_Ackley')
    run_parser.add_argument('--algorithm', required=True, help='PSO, EPSO, FERPSO or LSEPSO')
    run_parser.add_argument('--particles', type=int, required=True, help='Population size')
    run_parser.add_argument('--iterations', type=int, required=True, help='Iteration budget')
    run_parser.add_argument('--runs', type=int, default=None, help='Replications (default RUNS)')
    run_parser.add_argument('--seed', type=int, default=None, help='Base seed; run k uses seed + k')
    run_parser.add_argument('--w', type=float, default=None, help='Inertia weight')
    run_parser.add_argument('--c1', type=float, default=None, help='Cognitive coefficient')
    run_parser.add_argument('--c2', type=float, default=None, help='Social coefficient')
    run_parser.add_argument('--vmax-fraction', type=float, default=None, help='Velocity clamp as a fraction of box width')
    run_parser.add_argument('--n-neighbors', type=int, default=None, help='Neighbors used by the local search')
    run_parser.add_argument('--c1-ls', type=float, default=None, help='Local search trial-point coefficient')
    run_parser.add_argument('--ls-variant', type=str, default=None, choices=[v.value for v in LocalSearchVariant], help='Local search variant')
    run_parser.add_argument('--randomize-n', action='store_true', default=None, help='Draw n uniformly from [1, n-neighbors] per call')
    run_parser.add_argument('--no-local-search', action='store_true', help='Disable the LSEPSO local search phase')
    run_parser.add_argument('--position-epsilon', type=float, default=None, help='Match radius')
    run_parser.add_argument('--fitness-epsilon', type=float, default=None, help='Match objective slack')
    run_parser.add_argument('--denominator-override', type=parse_denominator, default=None, help="Peak-ratio denominator: an integer or 'reference'")
    run_parser.add_argument('--trajectory', action='store_true', help='Write per-run trajectory files')
    run_parser.add_argument('--stride', type=int, default=None, help='Trajectory sampling stride')
    run_parser.add_argument('--workers', type=int, default=None, help='Parallel runs')
    run_parser.add_argument('--catalog-dir', type=str, default=None, help='Catalog cache directory')
    run_parser.add_argument('--out', type=str, default=None, help='Output directory')

    # Catalog command
    catalog_parser = subparsers.add_parser('catalog', help='Build and store an optima catalog')
    catalog_parser.add_argument('--function', required=True, help="f1..f5, a full id, or 'all'")
    catalog_parser.add_argument('--grid-step', type=float, default=None, help='Oracle grid step')
    catalog_parser.add_argument('--tolerance', type=float, default=None, help='Oracle position tolerance')
    catalog_parser.add_argument('--out', type=str, default=None, help='Catalog directory')

    # Report command
    report_parser = subparsers.add_parser('report', help='Re-aggregate stored experiments into ANOF / peak-ratio tables')
    report_parser.add_argument('paths', nargs='+', help='Experiment directories (or their parent)')
    report_parser.add_argument('--denominator-override', type=parse_denominator, default=None, help="An integer or 'reference'")

    return parser


def spec_from_args(args: argparse.Namespace, cfg: Settings) -> ExperimentSpec:
    def pick(value, default):
        return default if value is None else value

    return ExperimentSpec(
        function_id=resolve_function_id(args.function),
        algorithm=parse_algorithm(args.algorithm),
        population=args.particles,
        iterations=args.iterations,
        runs=pick(args.runs, cfg.RUNS),
        base_seed=pick(args.seed, cfg.BASE_SEED),
        w=pick(args.w, cfg.W),
        c1=pick(args.c1, cfg.C1),
        c2=pick(args.c2, cfg.C2),
        vmax_fraction=pick(args.vmax_fraction, cfg.VMAX_FRACTION),
        n_neighbors=pick(args.n_neighbors, cfg.N_NEIGHBORS),
        c1_ls=pick(args.c1_ls, cfg.C1_LS),
        ls_variant=LocalSearchVariant(pick(args.ls_variant, cfg.LS_VARIANT)),
        ls_randomized_n=pick(args.randomize_n, cfg.LS_RANDOMIZED_N),
        ls_enabled=not args.no_local_search,
        position_epsilon=args.position_epsilon,
        fitness_epsilon=args.fitness_epsilon,
        denominator_override=args.denominator_override,
        trajectory=args.trajectory,
        stride=pick(args.stride, cfg.TRAJECTORY_STRIDE),
        out_dir=pick(args.out, cfg.OUTPUT_DIR),
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 0

    try:
        cfg = apply_settings(load_settings(args.config))
        setup_logger("lsepso", args.log_level or cfg.LOG_LEVEL)

        if args.command == 'run':
            spec = spec_from_args(args, cfg)
            summary = run_experiment(
                spec,
                catalog_dir=args.catalog_dir or cfg.CATALOG_DIR,
                workers=args.workers or cfg.WORKERS,
            )
            result = summary.result
            print(f"ANOF {result.anof:.2f} | peak ratio {result.peak_ratio:.6f} "
                  f"({result.anof:.2f}/{result.denominator}) | found per run {result.found_per_run}")

        elif args.command == 'catalog':
            if args.function.strip().lower() == 'all':
                function_ids = list(BENCHMARKS)
            else:
                function_ids = [resolve_function_id(args.function)]
            catalog_dir = args.out or cfg.CATALOG_DIR
            for function_id in function_ids:
                catalog = build_catalog(function_id, args.grid_step, args.tolerance)
                path = save_catalog(catalog, catalog_file(catalog_dir, function_id))
                benchmark = get_benchmark(function_id)
                print(f"{function_id.value}: {catalog.size} optima ({catalog.global_count} global), "
                      f"reference {benchmark.reference_globals}/{benchmark.reference_optima} -> {path}")

        elif args.command == 'report':
            print(report(args.paths, args.denominator_override))

    except (LabBaseException, ValidationError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return 2

    return 0


if __name__ == "__main__":
    sys.exit(main())
