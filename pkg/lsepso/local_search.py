"""
Personal-best improvement from the n nearest neighbors.

A trial point is drawn on the line through pbest_i and a neighbor's pbest:
toward the neighbor when it is at least as good, away from it otherwise.
"""
import logging
from typing import List, Optional

import numpy as np

from lsepso.exceptions import NeighborCountError
from lsepso.schemas import Bounds, LocalSearchConfig, LocalSearchVariant
from lsepso.swarm import Objective, RngStream, Swarm

logger = logging.getLogger(__name__)


def n_nearest_neighbors(i: int, swarm: Swarm, n: int) -> List[int]:
    """
    Indices of the n pbests closest to pbest_i (excluding i), nearest first,
    lowest index on equal distance.
    """
    if n >= len(swarm):
        raise NeighborCountError(f"Asked for {n} neighbors in a swarm of {len(swarm)}")
    distances = np.linalg.norm(swarm.pbest_positions - swarm.pbest_positions[i], axis=1)
    distances[i] = np.inf
    order = np.argsort(distances, kind="stable")
    return [int(j) for j in order[:n]]


def trial_point(
    pbest_i: np.ndarray,
    fitness_i: float,
    pbest_neighbor: np.ndarray,
    fitness_neighbor: float,
    c1_ls: float,
    rng: RngStream,
    bounds: Optional[Bounds] = None,
) -> np.ndarray:
    """One uniform draw per dimension; clamped to bounds when given."""
    pbest_i = np.asarray(pbest_i, dtype=float)
    pbest_neighbor = np.asarray(pbest_neighbor, dtype=float)
    draws = rng.random(pbest_i.shape[0])
    if fitness_neighbor >= fitness_i:
        direction = pbest_neighbor - pbest_i
    else:
        direction = pbest_i - pbest_neighbor
    t = pbest_i + c1_ls * draws * direction
    return t if bounds is None else bounds.clip(t)


def local_search_improve(
    i: int,
    swarm: Swarm,
    cfg: LocalSearchConfig,
    bounds: Bounds,
    rng: RngStream,
    objective: Objective,
) -> bool:
    """
    Try to replace pbest_i with a trial point; returns True when it did.
    Costs n evaluations (prose variant) or 1 (pseudocode variant).
    """
    n = rng.integers(1, cfg.n_neighbors) if cfg.n_randomized else cfg.n_neighbors
    neighbors = n_nearest_neighbors(i, swarm, n)
    own_position = swarm.pbest_positions[i]
    own_fitness = float(swarm.pbest_fitness[i])

    if cfg.variant == LocalSearchVariant.PSEUDOCODE:
        # argmax keeps the nearest among equally good neighbors
        neighbor_fitness = swarm.pbest_fitness[neighbors]
        neighbors = [neighbors[int(np.argmax(neighbor_fitness))]]

    trials = np.stack([
        trial_point(
            own_position, own_fitness,
            swarm.pbest_positions[j], float(swarm.pbest_fitness[j]),
            cfg.c1_ls, rng, bounds,
        )
        for j in neighbors
    ])
    trial_fitness = objective(trials, kind="local_search")
    best = int(np.argmax(trial_fitness))
    if trial_fitness[best] > own_fitness:
        swarm.pbest_positions[i] = trials[best]
        swarm.pbest_fitness[i] = trial_fitness[best]
        return True
    return False


def improve_swarm(
    swarm: Swarm,
    cfg: LocalSearchConfig,
    bounds: Bounds,
    rng: RngStream,
    objective: Objective,
) -> int:
    """
    Local search for every particle in index order; later particles see
    earlier replacements. Returns the number of replaced pbests.
    """
    replaced = 0
    for i in range(len(swarm)):
        replaced += local_search_improve(i, swarm, cfg, bounds, rng, objective)
    logger.debug(f"Local search replaced {replaced}/{len(swarm)} personal bests")
    return replaced
