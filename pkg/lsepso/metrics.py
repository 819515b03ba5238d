"""
Scoring a finished run against an optima catalog, and aggregating runs into
ANOF (average number of optima found) and peak ratio.
"""
import logging
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from lsepso.benchmarks import BenchmarkFunction
from lsepso.schemas import Algorithm, ExperimentResult, FunctionId, MatchCriteria, OptimaCatalog
from lsepso.swarm import Swarm

logger = logging.getLogger(__name__)


class Candidate(NamedTuple):
    position: np.ndarray
    value: float  # objective value, minimization orientation


class Match(NamedTuple):
    candidate_index: int
    entry_index: int
    distance: float


def extract_candidates(swarm: Swarm, position_epsilon: float) -> List[Candidate]:
    """
    Greedy niche reduction over the final pbests: best first, keep a pbest
    only if it lies farther than position_epsilon from every kept one.
    """
    order = np.argsort(-swarm.pbest_fitness, kind="stable")
    kept: List[int] = []
    for i in order:
        if kept:
            gaps = np.linalg.norm(swarm.pbest_positions[kept] - swarm.pbest_positions[i], axis=1)
            if np.min(gaps) <= position_epsilon:
                continue
        kept.append(int(i))
    return [
        Candidate(position=swarm.pbest_positions[i].copy(), value=float(-swarm.pbest_fitness[i]))
        for i in kept
    ]


def match_candidates(
    candidates: Sequence[Candidate],
    catalog: OptimaCatalog,
    criteria: MatchCriteria,
) -> List[Match]:
    """
    Each candidate may claim only its nearest catalog entry, and only if it is
    within position_epsilon and fitness_epsilon of it; an entry is claimed at
    most once, by the first candidate in list order.
    """
    if not candidates:
        return []
    positions = catalog.positions
    values = catalog.values
    claimed = np.zeros(len(positions), dtype=bool)
    matches: List[Match] = []
    for k, candidate in enumerate(candidates):
        distances = np.linalg.norm(positions - candidate.position, axis=1)
        e = int(np.argmin(distances))
        if claimed[e]:
            continue
        if distances[e] <= criteria.position_epsilon and abs(candidate.value - values[e]) <= criteria.fitness_epsilon:
            claimed[e] = True
            matches.append(Match(candidate_index=k, entry_index=e, distance=float(distances[e])))
    return matches


def count_found_optima(
    candidates: Sequence[Candidate],
    catalog: OptimaCatalog,
    criteria: MatchCriteria,
) -> int:
    return len(match_candidates(candidates, catalog, criteria))


def mean_deviation(matches: Sequence[Match]) -> Optional[float]:
    """Average distance between matched candidates and their optima."""
    if not matches:
        return None
    return float(np.mean([m.distance for m in matches]))


def default_match_criteria(
    benchmark: BenchmarkFunction,
    catalog: OptimaCatalog,
    position_fraction: float = 0.05,
    fitness_fraction: float = 0.05,
) -> MatchCriteria:
    """
    position_epsilon = fraction of the narrowest box side, capped at half the
    smallest gap between catalog entries so no candidate can sit within reach
    of two entries; fitness_epsilon = fraction of the catalog value span.
    """
    position_epsilon = position_fraction * benchmark.box_width
    positions = catalog.positions
    if len(positions) > 1:
        gaps = np.linalg.norm(positions[:, None, :] - positions[None, :, :], axis=-1)
        np.fill_diagonal(gaps, np.inf)
        position_epsilon = min(position_epsilon, 0.5 * float(gaps.min()))
    span = float(np.ptp(catalog.values))
    fitness_epsilon = fitness_fraction * span if span > 0 else fitness_fraction
    return MatchCriteria(position_epsilon=position_epsilon, fitness_epsilon=fitness_epsilon)


def aggregate(
    found_per_run: Sequence[int],
    denominator: int,
    function_id: FunctionId,
    algorithm: Algorithm,
    population: int,
    iterations: int,
) -> ExperimentResult:
    found = [int(f) for f in found_per_run]
    anof = float(np.mean(found))
    return ExperimentResult(
        function_id=function_id,
        algorithm=algorithm,
        population=population,
        iterations=iterations,
        runs=len(found),
        found_per_run=found,
        anof=anof,
        peak_ratio=anof / denominator,
        denominator=denominator,
    )
