import json
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from lsepso.benchmarks import BenchmarkFunction, get_benchmark
from lsepso.catalog import load_or_build_catalog
from lsepso.config import settings
from lsepso.exceptions import CatalogError, DenominatorError, OutputDirectoryError
from lsepso.formatter import format_result_row, format_tables
from lsepso.metrics import (
    aggregate,
    default_match_criteria,
    extract_candidates,
    match_candidates,
    mean_deviation,
)
from lsepso.optimizers import run_optimizer
from lsepso.schemas import (
    ExperimentResult,
    ExperimentSpec,
    ExperimentSummary,
    MatchCriteria,
    OptimaCatalog,
    RunRecord,
)
from lsepso.swarm import FitnessEvaluator, RngStream, Swarm

logger = logging.getLogger(__name__)

SUMMARY_FILE = "summary.json"
RESULTS_FILE = "results.csv"


def coordinate_columns(dimension: int) -> List[str]:
    return [f"x{d + 1}" for d in range(dimension)]


def trajectory_iterations(iterations: int, stride: int) -> List[int]:
    """Iteration 1, every multiple of stride, and the last iteration."""
    return [t for t in range(1, iterations + 1) if t == 1 or t % stride == 0 or t == iterations]


class TrajectoryRecorder:
    """Collects current positions and objective values at sampled iterations."""

    def __init__(self, run_index: int, iterations: int, stride: int, dimension: int):
        self.run_index = run_index
        self.sampled = set(trajectory_iterations(iterations, stride))
        self.columns = ["run", "iteration", "particle"] + coordinate_columns(dimension) + ["f"]
        self._blocks: List[pd.DataFrame] = []

    def __call__(self, iteration: int, swarm: Swarm) -> None:
        if iteration not in self.sampled:
            return
        n = len(swarm)
        block = pd.DataFrame(swarm.positions, columns=self.columns[3:-1])
        block.insert(0, "particle", np.arange(n))
        block.insert(0, "iteration", iteration)
        block.insert(0, "run", self.run_index)
        block["f"] = -swarm.fitness
        self._blocks.append(block)

    def to_frame(self) -> pd.DataFrame:
        if not self._blocks:
            return pd.DataFrame(columns=self.columns)
        return pd.concat(self._blocks, ignore_index=True)


class RunOutcome(NamedTuple):
    record: RunRecord
    candidates: pd.DataFrame
    trajectory: Optional[pd.DataFrame]


def execute_run(
    spec: ExperimentSpec,
    run_index: int,
    catalog: OptimaCatalog,
    criteria: MatchCriteria,
) -> RunOutcome:
    """
    One seeded run: initialize, iterate, reduce the final pbests to
    candidates and match them against the catalog.
    """
    benchmark = get_benchmark(spec.function_id)
    config = spec.swarm_config(run_index)
    evaluator = FitnessEvaluator(benchmark.evaluate)
    recorder = (
        TrajectoryRecorder(run_index, spec.iterations, spec.stride, benchmark.dimension)
        if spec.trajectory else None
    )

    swarm = run_optimizer(
        config, benchmark.bounds, evaluator, RngStream(config.seed), on_iteration=recorder
    )

    candidates = extract_candidates(swarm, criteria.position_epsilon)
    matches = match_candidates(candidates, catalog, criteria)

    matched_entry = np.full(len(candidates), -1)
    for m in matches:
        matched_entry[m.candidate_index] = m.entry_index
    candidate_frame = pd.DataFrame(
        [c.position for c in candidates], columns=coordinate_columns(benchmark.dimension)
    )
    candidate_frame["f"] = [c.value for c in candidates]
    candidate_frame["matched_entry"] = matched_entry

    record = RunRecord(
        run_index=run_index,
        seed=config.seed,
        found=len(matches),
        candidates=len(candidates),
        best_value=float(-swarm.pbest_fitness.max()),
        mean_deviation=mean_deviation(matches),
        evaluations={kind: int(count) for kind, count in sorted(evaluator.counts.items())},
    )
    logger.info(
        f"Run {run_index} (seed {config.seed}): {record.found} optima found from "
        f"{record.candidates} candidates, {record.total_evaluations} evaluations"
    )
    return RunOutcome(record, candidate_frame, recorder.to_frame() if recorder else None)


def resolve_criteria(
    spec: ExperimentSpec, benchmark: BenchmarkFunction, catalog: OptimaCatalog
) -> MatchCriteria:
    defaults = default_match_criteria(
        benchmark, catalog,
        settings.POSITION_EPSILON_FRACTION, settings.FITNESS_EPSILON_FRACTION,
    )
    return MatchCriteria(
        position_epsilon=spec.position_epsilon or defaults.position_epsilon,
        fitness_epsilon=spec.fitness_epsilon or defaults.fitness_epsilon,
    )


def resolve_denominator(
    override: Union[int, str, None], benchmark: BenchmarkFunction, catalog_size: int
) -> int:
    if override is None:
        return catalog_size
    if override == "reference":
        return benchmark.reference_optima
    return int(override)


def _write_json(model: BaseModel, path: Path) -> None:
    payload = json.loads(model.model_dump_json())
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _prepare_directory(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputDirectoryError(f"Cannot create output directory {path}: {e}") from e
    return path


def emit_trajectory(frame: pd.DataFrame, path: Path) -> Path:
    """Comma-delimited trajectory with header run,iteration,particle,x1,...,f."""
    try:
        frame.to_csv(path, index=False)
    except OSError as e:
        raise OutputDirectoryError(f"Cannot write trajectory {path}: {e}") from e
    return path


def run_experiment(
    spec: ExperimentSpec,
    catalog: Optional[OptimaCatalog] = None,
    catalog_dir: Optional[Union[str, Path]] = None,
    workers: int = 1,
) -> ExperimentSummary:
    """
    Execute spec.runs seeded runs (run k uses seed base_seed + k), write the
    artifacts under spec.out_dir/<label>/ and return the summary.
    """
    benchmark = get_benchmark(spec.function_id)
    if catalog is None:
        catalog = load_or_build_catalog(benchmark.id, catalog_dir or settings.CATALOG_DIR)
    if catalog.function_id != benchmark.id:
        raise CatalogError(f"Catalog is for {catalog.function_id.value}, not {benchmark.id.value}")

    criteria = resolve_criteria(spec, benchmark, catalog)
    denominator = resolve_denominator(spec.denominator_override, benchmark, catalog.size)
    if denominator < catalog.size:
        raise DenominatorError(
            f"Denominator {denominator} is below the catalog size {catalog.size} of {benchmark.id.value}"
        )

    out_dir = _prepare_directory(Path(spec.out_dir) / spec.label)
    logger.info(
        f"Running {spec.label}: {spec.runs} run(s) from seed {spec.base_seed}, "
        f"position_epsilon={criteria.position_epsilon:.4g}, "
        f"fitness_epsilon={criteria.fitness_epsilon:.4g}, denominator={denominator}"
    )

    job = partial(execute_run, spec, catalog=catalog, criteria=criteria)
    if workers > 1 and spec.runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(job, range(spec.runs)))
    else:
        outcomes = [job(k) for k in range(spec.runs)]

    try:
        for outcome in outcomes:
            k = outcome.record.run_index
            outcome.candidates.to_csv(out_dir / f"candidates_run{k}.csv", index=False)
            if outcome.trajectory is not None:
                emit_trajectory(outcome.trajectory, out_dir / f"trajectory_run{k}.csv")
    except OSError as e:
        raise OutputDirectoryError(f"Cannot write run artifacts to {out_dir}: {e}") from e

    records = [o.record for o in outcomes]
    result = aggregate(
        [r.found for r in records], denominator,
        spec.function_id, spec.algorithm, spec.population, spec.iterations,
    )
    summary = ExperimentSummary(
        spec=spec,
        result=result,
        catalog_size=catalog.size,
        position_epsilon=criteria.position_epsilon,
        fitness_epsilon=criteria.fitness_epsilon,
        run_records=records,
    )
    write_summary(summary, out_dir)
    logger.info(format_result_row(result))
    return summary


def write_summary(summary: ExperimentSummary, out_dir: Path) -> None:
    try:
        _write_json(summary, out_dir / SUMMARY_FILE)
        row = pd.DataFrame([{
            "function": summary.result.function_id.value,
            "algorithm": summary.result.algorithm.value,
            "particles": summary.result.population,
            "iterations": summary.result.iterations,
            "runs": summary.result.runs,
            "anof": summary.result.anof,
            "denominator": summary.result.denominator,
            "peak_ratio": summary.result.peak_ratio,
            "found_per_run": " ".join(str(f) for f in summary.result.found_per_run),
            "mean_evaluations": float(np.mean([r.total_evaluations for r in summary.run_records])),
        }])
        row.to_csv(out_dir / RESULTS_FILE, index=False)
    except OSError as e:
        raise OutputDirectoryError(f"Cannot write summary to {out_dir}: {e}") from e


def load_summary(path: Union[str, Path]) -> ExperimentSummary:
    """Accepts an experiment directory or its summary.json."""
    path = Path(path)
    if path.is_dir():
        path = path / SUMMARY_FILE
    try:
        return ExperimentSummary.model_validate_json(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise OutputDirectoryError(f"No experiment summary at {path}") from e


def find_summaries(paths: Sequence[Union[str, Path]]) -> List[Path]:
    """Summary files in the given experiment directories or their children."""
    found: List[Path] = []
    for p in map(Path, paths):
        if p.is_file():
            found.append(p)
        elif (p / SUMMARY_FILE).is_file():
            found.append(p / SUMMARY_FILE)
        elif p.is_dir():
            found.extend(sorted(p.glob(f"*/{SUMMARY_FILE}")))
    return found


def reaggregate(
    summary: ExperimentSummary, denominator_override: Union[int, str, None] = None
) -> ExperimentResult:
    """Rebuild the result from stored per-run counts, optionally with a new denominator."""
    if denominator_override is None:
        return summary.result
    benchmark = get_benchmark(summary.spec.function_id)
    denominator = resolve_denominator(denominator_override, benchmark, summary.catalog_size)
    found = [r.found for r in summary.run_records]
    if denominator < max(found):
        raise DenominatorError(f"Denominator {denominator} is below a stored count of {max(found)} optima")
    return aggregate(
        found, denominator,
        summary.spec.function_id, summary.spec.algorithm,
        summary.spec.population, summary.spec.iterations,
    )


def report(
    paths: Sequence[Union[str, Path]], denominator_override: Union[int, str, None] = None
) -> str:
    summaries = find_summaries(paths)
    if not summaries:
        raise OutputDirectoryError(f"No experiment summaries under {', '.join(map(str, paths))}")
    results = [reaggregate(load_summary(p), denominator_override) for p in summaries]
    logger.info(f"Re-aggregated {len(results)} experiment(s)")
    return format_tables(results)
