"""
Per-particle attractor selection.

Electrostatic selection scores every other particle j by a Coulomb-style
force between the two personal bests; fitness-Euclidean-distance ratio (FER)
selection scores the gain of moving from particle i's current position to
pbest_j per unit distance. Both pick the argmax, lowest index on ties, and
read only the swarm state they are handed.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from lsepso.exceptions import DegenerateDistanceError, SwarmSizeError
from lsepso.schemas import Bounds
from lsepso.swarm import Swarm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AttractorChoice:
    particle_index: int
    target_index: int
    score: float
    degenerate: bool = False


class Selection(NamedTuple):
    """Whole-swarm selection result, one entry per particle."""
    targets: np.ndarray
    scores: np.ndarray
    degenerate: np.ndarray

    def choice(self, i: int) -> AttractorChoice:
        return AttractorChoice(
            particle_index=i,
            target_index=int(self.targets[i]),
            score=float(self.scores[i]),
            degenerate=bool(self.degenerate[i]),
        )


class ChargeView:
    """
    Strictly positive charges from internal fitness:
    shifted = fitness - worst + delta, delta = max(1e-9, 1e-6 * (best - worst)).
    """

    def __init__(self, fitness: np.ndarray):
        fitness = np.asarray(fitness, dtype=float)
        best, worst = float(np.max(fitness)), float(np.min(fitness))
        self.delta = max(1e-9, 1e-6 * (best - worst))
        self.shifted_fitness = fitness - worst + self.delta

    @classmethod
    def from_swarm(cls, swarm: Swarm) -> "ChargeView":
        return cls(swarm.pbest_fitness)

    @classmethod
    def from_charges(cls, charges: np.ndarray) -> "ChargeView":
        """Charges used as given; they must already be strictly positive."""
        charges = np.asarray(charges, dtype=float)
        if np.any(charges <= 0):
            raise ValueError("charges must be strictly positive")
        view = cls.__new__(cls)
        view.delta = 0.0
        view.shifted_fitness = charges
        return view


def coulomb_force(charge_i: float, charge_j: float, distance: float, alpha: float = 1.0) -> float:
    if distance <= 0:
        raise DegenerateDistanceError("Coulomb force is undefined at distance 0")
    return alpha * charge_i * charge_j / distance**2


def fer_value(pbest_fitness_j: float, current_fitness_i: float, distance: float, alpha: float = 1.0) -> float:
    if distance <= 0:
        raise DegenerateDistanceError("FER is undefined at distance 0")
    return alpha * (pbest_fitness_j - current_fitness_i) / distance


def compute_alpha(bounds: Bounds, best_fitness: float, worst_fitness: float) -> float:
    """Box diagonal over the best-worst fitness spread; 1 for a flat population."""
    spread = best_fitness - worst_fitness
    if spread <= 0:
        return 1.0
    return bounds.diagonal / spread


def _require_pair(swarm: Swarm) -> None:
    if len(swarm) < 2:
        raise SwarmSizeError(f"Attractor selection needs at least 2 particles, got {len(swarm)}")


def _distances(origins: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Euclidean distance matrix, origins along rows."""
    return np.linalg.norm(candidates[None, :, :] - origins[:, None, :], axis=-1)


def _masked(raw: np.ndarray, distances: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Self and coincident candidates can never win."""
    admissible = distances > 0
    admissible[np.arange(rows.size), rows] = False
    return np.where(admissible, raw, -np.inf)


def _select(scores: np.ndarray, rows: np.ndarray) -> Selection:
    targets = np.argmax(scores, axis=1)
    best = scores[np.arange(rows.size), targets]
    degenerate = ~np.isfinite(best)
    targets = np.where(degenerate, rows, targets)
    return Selection(targets=targets, scores=best, degenerate=degenerate)


# --- Electrostatic: pbest to pbest ---

def electrostatic_scores(
    swarm: Swarm,
    alpha: float,
    rows: Optional[np.ndarray] = None,
    charges: Optional[ChargeView] = None,
) -> np.ndarray:
    """F[i, j] = alpha * q_i * q_j / |pbest_i - pbest_j|^2, -inf if inadmissible."""
    rows = np.arange(len(swarm)) if rows is None else np.asarray(rows)
    q = (charges or ChargeView.from_swarm(swarm)).shifted_fitness
    distances = _distances(swarm.pbest_positions[rows], swarm.pbest_positions)
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = alpha * q[rows][:, None] * q[None, :] / distances**2
    return _masked(raw, distances, rows)


def select_electrostatic_targets(
    swarm: Swarm, alpha: float, charges: Optional[ChargeView] = None
) -> Selection:
    _require_pair(swarm)
    rows = np.arange(len(swarm))
    selection = _select(electrostatic_scores(swarm, alpha, rows, charges), rows)
    if selection.degenerate.any():
        logger.warning(f"{int(selection.degenerate.sum())} particle(s) have no distinct pbest to attract them")
    return selection


def select_electrostatic_target(
    i: int, swarm: Swarm, alpha: float, charges: Optional[ChargeView] = None
) -> AttractorChoice:
    _require_pair(swarm)
    return _single(electrostatic_scores(swarm, alpha, np.array([i]), charges), i)


# --- FER: current position to pbest ---

def fer_scores(swarm: Swarm, alpha: float, rows: Optional[np.ndarray] = None) -> np.ndarray:
    """FER[i, j] = alpha * (f(pbest_j) - f(x_i)) / |pbest_j - x_i|, -inf if inadmissible."""
    rows = np.arange(len(swarm)) if rows is None else np.asarray(rows)
    distances = _distances(swarm.positions[rows], swarm.pbest_positions)
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = alpha * (swarm.pbest_fitness[None, :] - swarm.fitness[rows][:, None]) / distances
    return _masked(raw, distances, rows)


def select_fer_targets(swarm: Swarm, alpha: float) -> Selection:
    _require_pair(swarm)
    rows = np.arange(len(swarm))
    return _select(fer_scores(swarm, alpha, rows), rows)


def select_fer_target(i: int, swarm: Swarm, alpha: float) -> AttractorChoice:
    _require_pair(swarm)
    return _single(fer_scores(swarm, alpha, np.array([i])), i)


def _single(scores: np.ndarray, i: int) -> AttractorChoice:
    selection = _select(scores, np.array([i]))
    return AttractorChoice(
        particle_index=i,
        target_index=int(selection.targets[0]),
        score=float(selection.scores[0]),
        degenerate=bool(selection.degenerate[0]),
    )
