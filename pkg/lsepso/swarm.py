"""
Swarm state and the velocity/position update law shared by every optimizer.

Internal fitness is maximized: it is the negated objective value of the
(minimization) benchmark.

RNG consumption order, per run:
  1. init_swarm: one (population, dimension) block of uniforms, particle-major.
  2. each iteration, LSEPSO only: local search draws for particle 0, 1, ...
     (an integer for n when n is randomized, then dimension uniforms per
     trial point, trial points in ascending neighbor distance).
  3. each iteration: R1 then R2 (dimension uniforms each) for particle 0,
     then particle 1, and so on.
"""
import logging
from collections import Counter
from dataclasses import dataclass, replace
from typing import Callable, Iterator, List, Optional

import numpy as np

from lsepso.exceptions import DimensionError
from lsepso.schemas import Bounds, SwarmConfig

logger = logging.getLogger(__name__)

# (points, kind) -> internal fitness, one value per row
Objective = Callable[..., np.ndarray]


class RngStream:
    """Seeded uniform stream; one per run."""

    def __init__(self, seed: int):
        self.seed = seed
        self._generator = np.random.Generator(np.random.PCG64(seed))

    def random(self, size=None) -> np.ndarray:
        """Uniform reals in [0, 1)."""
        return self._generator.random(size)

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in [low, high], both ends included."""
        return int(self._generator.integers(low, high, endpoint=True))


class FitnessEvaluator:
    """
    Wraps an objective (minimization) and returns internal fitness.
    Counts evaluations per kind so run summaries can audit the budget.
    """

    def __init__(self, function: Callable[[np.ndarray], np.ndarray]):
        self.function = function
        self.counts: Counter = Counter()

    def __call__(self, points: np.ndarray, kind: str = "swarm") -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        self.counts[kind] += points.shape[0]
        return -np.asarray(self.function(points), dtype=float)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    fitness: float
    pbest_position: np.ndarray
    pbest_fitness: float

    @property
    def dimension(self) -> int:
        return self.position.shape[0]


class Swarm:
    """
    Population stored as arrays; indexing yields Particle snapshots.
    """

    def __init__(
        self,
        positions: np.ndarray,
        velocities: np.ndarray,
        fitness: np.ndarray,
        pbest_positions: Optional[np.ndarray] = None,
        pbest_fitness: Optional[np.ndarray] = None,
    ):
        self.positions = np.array(positions, dtype=float)
        self.velocities = np.array(velocities, dtype=float)
        self.fitness = np.array(fitness, dtype=float)
        self.pbest_positions = (
            self.positions.copy() if pbest_positions is None
            else np.array(pbest_positions, dtype=float)
        )
        self.pbest_fitness = (
            self.fitness.copy() if pbest_fitness is None
            else np.array(pbest_fitness, dtype=float)
        )
        self.iteration = 0

    @classmethod
    def from_particles(cls, particles: List[Particle]) -> "Swarm":
        return cls(
            positions=np.stack([p.position for p in particles]),
            velocities=np.stack([p.velocity for p in particles]),
            fitness=np.array([p.fitness for p in particles]),
            pbest_positions=np.stack([p.pbest_position for p in particles]),
            pbest_fitness=np.array([p.pbest_fitness for p in particles]),
        )

    def __len__(self) -> int:
        return self.positions.shape[0]

    def __getitem__(self, i: int) -> Particle:
        return Particle(
            position=self.positions[i].copy(),
            velocity=self.velocities[i].copy(),
            fitness=float(self.fitness[i]),
            pbest_position=self.pbest_positions[i].copy(),
            pbest_fitness=float(self.pbest_fitness[i]),
        )

    def __setitem__(self, i: int, p: Particle) -> None:
        self.positions[i] = p.position
        self.velocities[i] = p.velocity
        self.fitness[i] = p.fitness
        self.pbest_positions[i] = p.pbest_position
        self.pbest_fitness[i] = p.pbest_fitness

    def __iter__(self) -> Iterator[Particle]:
        for i in range(len(self)):
            yield self[i]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    @property
    def best_index(self) -> int:
        """Index of the best pbest; lowest index on ties."""
        return int(np.argmax(self.pbest_fitness))

    def copy(self) -> "Swarm":
        clone = Swarm(
            self.positions, self.velocities, self.fitness,
            self.pbest_positions, self.pbest_fitness,
        )
        clone.iteration = self.iteration
        return clone

    def advance(
        self,
        attractors: np.ndarray,
        config: SwarmConfig,
        bounds: Bounds,
        rng: RngStream,
        objective: Objective,
    ) -> None:
        """
        Velocity update, position step, evaluation and pbest update for the
        whole swarm. Same law and RNG order as the per-particle functions.
        """
        n, dim = self.positions.shape
        draws = rng.random((n, 2, dim))
        self.velocities = velocity_law(
            self.velocities, self.positions, self.pbest_positions, attractors,
            draws[:, 0, :], draws[:, 1, :], config, bounds.vmax(config.vmax_fraction),
        )
        self.positions, self.velocities = clamped_step(
            self.positions, self.velocities, bounds
        )
        self.fitness = objective(self.positions, kind="swarm")
        improved = self.fitness > self.pbest_fitness
        self.pbest_positions[improved] = self.positions[improved]
        self.pbest_fitness[improved] = self.fitness[improved]
        self.iteration += 1


def velocity_law(
    velocity: np.ndarray,
    position: np.ndarray,
    pbest: np.ndarray,
    attractor: np.ndarray,
    r1: np.ndarray,
    r2: np.ndarray,
    config: SwarmConfig,
    vmax: np.ndarray,
) -> np.ndarray:
    """w*v + R1*c1*(pbest - x) + R2*c2*(attractor - x), clamped to +-vmax."""
    v = (
        config.w * velocity
        + r1 * config.c1 * (pbest - position)
        + r2 * config.c2 * (attractor - position)
    )
    return np.clip(v, -vmax, vmax)


def clamped_step(position: np.ndarray, velocity: np.ndarray, bounds: Bounds):
    """x + v clamped to the box; clamped components lose their velocity."""
    moved = position + velocity
    clamped = bounds.clip(moved)
    hit = clamped != moved
    return clamped, np.where(hit, 0.0, velocity)


def init_swarm(
    config: SwarmConfig,
    bounds: Bounds,
    rng: RngStream,
    objective: Objective,
) -> Swarm:
    """
    Uniform positions in the box, zero velocities, pbest = initial point.
    """
    dim = bounds.dimension
    positions = bounds.low + rng.random((config.population, dim)) * bounds.width
    positions = bounds.clip(positions)
    fitness = objective(positions, kind="init")
    logger.debug(f"Initialized swarm of {config.population} particles in {dim}-D")
    return Swarm(positions, np.zeros_like(positions), fitness)


def update_velocity(
    p: Particle,
    attractor_pbest: np.ndarray,
    config: SwarmConfig,
    bounds: Bounds,
    rng: RngStream,
) -> np.ndarray:
    attractor_pbest = np.asarray(attractor_pbest, dtype=float)
    if attractor_pbest.shape != p.position.shape:
        raise DimensionError(
            f"Attractor has shape {attractor_pbest.shape}, particle {p.position.shape}"
        )
    draws = rng.random((2, p.dimension))
    return velocity_law(
        p.velocity, p.position, p.pbest_position, attractor_pbest,
        draws[0], draws[1], config, bounds.vmax(config.vmax_fraction),
    )


def step_position(p: Particle, bounds: Bounds) -> Particle:
    """Returns the particle moved by its velocity (velocity already updated)."""
    position, velocity = clamped_step(p.position, p.velocity, bounds)
    return replace(p, position=position, velocity=velocity)


def update_personal_best(p: Particle) -> Particle:
    # Strict improvement; ties keep the incumbent
    if p.fitness > p.pbest_fitness:
        return replace(p, pbest_position=p.position.copy(), pbest_fitness=p.fitness)
    return p
