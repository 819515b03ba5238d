import logging
from typing import Callable, Dict, Optional

import numpy as np

from lsepso.attractors import (
    compute_alpha,
    select_electrostatic_targets,
    select_fer_targets,
)
from lsepso.local_search import improve_swarm
from lsepso.schemas import Algorithm, Bounds, SwarmConfig
from lsepso.swarm import Objective, RngStream, Swarm, init_swarm

logger = logging.getLogger(__name__)

StepFunction = Callable[[Swarm, SwarmConfig, Bounds, RngStream, Objective], Swarm]


def _own_pbests(swarm: Swarm) -> np.ndarray:
    return swarm.pbest_positions.copy()


def _alpha(swarm: Swarm, bounds: Bounds) -> float:
    # best pbest against the worst particle of the current population
    return compute_alpha(bounds, float(np.max(swarm.pbest_fitness)), float(np.min(swarm.fitness)))


def pso_step(swarm: Swarm, config: SwarmConfig, bounds: Bounds, rng: RngStream, objective: Objective) -> Swarm:
    """Global-best PSO: every particle is attracted to the best pbest."""
    attractors = np.repeat(swarm.pbest_positions[[swarm.best_index]], len(swarm), axis=0)
    swarm.advance(attractors, config, bounds, rng, objective)
    return swarm


def epso_step(
    swarm: Swarm,
    config: SwarmConfig,
    bounds: Bounds,
    rng: RngStream,
    objective: Objective,
    alpha: Optional[float] = None,
) -> Swarm:
    """
    Electrostatic PSO: each particle is attracted to the pbest exerting the
    largest force on its own pbest. Targets come from the iteration-start state.
    """
    if len(swarm) < 2:
        attractors = _own_pbests(swarm)
    else:
        alpha = _alpha(swarm, bounds) if alpha is None else alpha
        selection = select_electrostatic_targets(swarm, alpha)
        attractors = swarm.pbest_positions[selection.targets]
    swarm.advance(attractors, config, bounds, rng, objective)
    return swarm


def ferpso_step(swarm: Swarm, config: SwarmConfig, bounds: Bounds, rng: RngStream, objective: Objective) -> Swarm:
    """FER-PSO: each particle is attracted to the pbest with the highest FER."""
    if len(swarm) < 2:
        attractors = _own_pbests(swarm)
    else:
        selection = select_fer_targets(swarm, _alpha(swarm, bounds))
        attractors = swarm.pbest_positions[selection.targets]
    swarm.advance(attractors, config, bounds, rng, objective)
    return swarm


def lsepso_step(swarm: Swarm, config: SwarmConfig, bounds: Bounds, rng: RngStream, objective: Objective) -> Swarm:
    """
    Local search over all pbests, then electrostatic selection with alpha = 1,
    then the usual velocity/position update. Each phase finishes for the whole
    swarm before the next starts.
    """
    cfg = config.local_search_config()
    if cfg.enabled and len(swarm) > cfg.n_neighbors:
        improve_swarm(swarm, cfg, bounds, rng, objective)
    return epso_step(swarm, config, bounds, rng, objective, alpha=1.0)


STEP_FUNCTIONS: Dict[Algorithm, StepFunction] = {
    Algorithm.PSO: pso_step,
    Algorithm.EPSO: epso_step,
    Algorithm.FERPSO: ferpso_step,
    Algorithm.LSEPSO: lsepso_step,
}


def run_optimizer(
    config: SwarmConfig,
    bounds: Bounds,
    objective: Objective,
    rng: Optional[RngStream] = None,
    on_iteration: Optional[Callable[[int, Swarm], None]] = None,
) -> Swarm:
    """
    Initialize and iterate the configured algorithm; on_iteration receives
    (iteration, swarm) after every step, iterations numbered from 1.
    """
    rng = rng or RngStream(config.seed)
    step = STEP_FUNCTIONS[config.algorithm]
    swarm = init_swarm(config, bounds, rng, objective)
    for iteration in range(1, config.iterations + 1):
        step(swarm, config, bounds, rng, objective)
        if on_iteration is not None:
            on_iteration(iteration, swarm)
    logger.debug(
        f"{config.algorithm.value} finished {config.iterations} iterations, "
        f"best internal fitness {swarm.pbest_fitness.max():.6g}"
    )
    return swarm
