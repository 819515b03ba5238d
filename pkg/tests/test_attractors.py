import math

import numpy as np
import pytest

from lsepso.attractors import (
    ChargeView,
    compute_alpha,
    coulomb_force,
    fer_value,
    select_electrostatic_target,
    select_electrostatic_targets,
    select_fer_target,
    select_fer_targets,
)
from lsepso.exceptions import DegenerateDistanceError, SwarmSizeError
from lsepso.schemas import Bounds
from lsepso.swarm import Swarm


def random_swarm(rng, n=10):
    positions = rng.uniform(-5, 5, (n, 2))
    return Swarm(
        positions,
        np.zeros_like(positions),
        rng.normal(size=n),
        pbest_positions=rng.uniform(-5, 5, (n, 2)),
        pbest_fitness=rng.normal(size=n),
    )


def brute_force_electrostatic(i, swarm, alpha):
    charges = ChargeView(swarm.pbest_fitness).shifted_fitness
    best_j, best_force = i, -math.inf
    for j in range(len(swarm)):
        d = float(np.linalg.norm(swarm.pbest_positions[i] - swarm.pbest_positions[j]))
        if j == i or d == 0:
            continue
        force = coulomb_force(charges[i], charges[j], d, alpha)
        if force > best_force:
            best_j, best_force = j, force
    return best_j


def brute_force_fer(i, swarm, alpha):
    best_j, best_ratio = i, -math.inf
    for j in range(len(swarm)):
        d = float(np.linalg.norm(swarm.pbest_positions[j] - swarm.positions[i]))
        if j == i or d == 0:
            continue
        ratio = fer_value(swarm.pbest_fitness[j], swarm.fitness[i], d, alpha)
        if ratio > best_ratio:
            best_j, best_ratio = j, ratio
    return best_j


def test_selection_agrees_with_brute_force():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        swarm = random_swarm(rng)
        alpha = float(rng.uniform(0.1, 10.0))
        for i in range(len(swarm)):
            assert select_electrostatic_target(i, swarm, alpha).target_index == brute_force_electrostatic(i, swarm, alpha)
            assert select_fer_target(i, swarm, alpha).target_index == brute_force_fer(i, swarm, alpha)


def test_whole_swarm_selection_matches_single_selection():
    rng = np.random.default_rng(7)
    for _ in range(100):
        swarm = random_swarm(rng)
        electrostatic = select_electrostatic_targets(swarm, 1.0)
        fer = select_fer_targets(swarm, 1.0)
        for i in range(len(swarm)):
            assert electrostatic.choice(i) == select_electrostatic_target(i, swarm, 1.0)
            assert fer.choice(i) == select_fer_target(i, swarm, 1.0)


def test_alpha_scale_invariance():
    rng = np.random.default_rng(11)
    for _ in range(100):
        swarm = random_swarm(rng)
        factor = float(rng.uniform(0.01, 100.0))
        np.testing.assert_array_equal(
            select_electrostatic_targets(swarm, 1.0).targets,
            select_electrostatic_targets(swarm, factor).targets,
        )
        np.testing.assert_array_equal(
            select_fer_targets(swarm, 1.0).targets,
            select_fer_targets(swarm, factor).targets,
        )


def test_fer_shift_invariance():
    rng = np.random.default_rng(12)
    for _ in range(100):
        swarm = random_swarm(rng)
        shifted = swarm.copy()
        c = float(rng.uniform(-50, 50))
        shifted.fitness += c
        shifted.pbest_fitness += c
        np.testing.assert_array_equal(
            select_fer_targets(swarm, 1.0).targets,
            select_fer_targets(shifted, 1.0).targets,
        )


def test_selection_does_not_mutate_swarm():
    swarm = random_swarm(np.random.default_rng(5))
    before = swarm.copy()
    select_electrostatic_targets(swarm, 2.0)
    select_fer_targets(swarm, 2.0)
    np.testing.assert_array_equal(swarm.pbest_positions, before.pbest_positions)
    np.testing.assert_array_equal(swarm.pbest_fitness, before.pbest_fitness)
    np.testing.assert_array_equal(swarm.fitness, before.fitness)


def test_electrostatic_prefers_close_strong_charge():
    # Particle 2 is both near particle 0 and the best charge
    pbests = np.array([[0.0, 0.0], [3.0, 0.0], [0.5, 0.0]])
    swarm = Swarm(pbests, np.zeros((3, 2)), np.array([0.0, 1.0, 2.0]))
    assert select_electrostatic_target(0, swarm, 1.0).target_index == 2


def test_coincident_pbests_are_skipped():
    pbests = np.array([[1.0, 1.0], [1.0, 1.0], [4.0, 4.0]])
    swarm = Swarm(pbests, np.zeros((3, 2)), np.array([0.0, 5.0, 1.0]))
    choice = select_electrostatic_target(0, swarm, 1.0)
    assert choice.target_index == 2
    assert not choice.degenerate


def test_all_coincident_is_degenerate():
    swarm = Swarm(np.ones((3, 2)), np.zeros((3, 2)), np.array([0.0, 1.0, 2.0]))
    selection = select_electrostatic_targets(swarm, 1.0)
    np.testing.assert_array_equal(selection.targets, [0, 1, 2])
    assert selection.degenerate.all()


def test_fer_prefers_gain_per_distance():
    swarm = Swarm(
        np.array([[0.0, 0.0], [10.0, 0.0], [1.0, 0.0]]),
        np.zeros((3, 2)),
        np.array([0.0, 0.0, 0.0]),
        pbest_fitness=np.array([0.0, 5.0, 1.0]),
    )
    # 5/10 from particle 1 against 1/1 from particle 2
    assert select_fer_target(0, swarm, 1.0).target_index == 2


def test_single_particle_rejected():
    swarm = Swarm(np.zeros((1, 2)), np.zeros((1, 2)), np.zeros(1))
    with pytest.raises(SwarmSizeError):
        select_electrostatic_targets(swarm, 1.0)
    with pytest.raises(SwarmSizeError):
        select_fer_target(0, swarm, 1.0)


def test_zero_distance_scores_rejected():
    with pytest.raises(DegenerateDistanceError):
        coulomb_force(1.0, 1.0, 0.0)
    with pytest.raises(DegenerateDistanceError):
        fer_value(1.0, 0.0, 0.0)


def test_force_and_fer_arithmetic():
    assert coulomb_force(2.0, 3.0, 2.0, alpha=0.5) == pytest.approx(0.75)
    assert fer_value(3.0, 1.0, 4.0, alpha=2.0) == pytest.approx(1.0)


def test_charge_view_is_strictly_positive():
    flat = ChargeView(np.array([1.0, 1.0, 1.0]))
    assert flat.delta == 1e-9
    assert np.all(flat.shifted_fitness > 0)

    spread = ChargeView(np.array([-5.0, 5.0]))
    assert spread.delta == pytest.approx(1e-5)
    assert spread.shifted_fitness.min() == pytest.approx(1e-5)
    assert spread.shifted_fitness.max() == pytest.approx(10.0 + 1e-5)


def test_compute_alpha():
    box = Bounds.square(0.0, 3.0)
    assert compute_alpha(box, 2.0, 1.0) == pytest.approx(3.0 * math.sqrt(2.0))
    assert compute_alpha(box, 1.0, 1.0) == 1.0


def test_near_neighbor_beats_distant_strong_charge():
    positions = np.array([[0.0, 0.0], [1.0, 0.0], [10.0, 0.0]])
    assert coulomb_force(1.0, 1.0, 1.0) == pytest.approx(1.0)
    assert coulomb_force(1.0, 9.0, 10.0) == pytest.approx(0.09)

    swarm = Swarm(positions, np.zeros((3, 2)), np.zeros(3))
    choice = select_electrostatic_target(0, swarm, 1.0, ChargeView.from_charges([1.0, 1.0, 9.0]))
    assert choice.target_index == 1
    assert choice.score == pytest.approx(1.0)


def test_explicit_charges_must_be_positive():
    with pytest.raises(ValueError):
        ChargeView.from_charges([1.0, 0.0])


def test_compute_alpha_on_rastrigin_box():
    box = Bounds.square(-5.12, 5.12)
    assert compute_alpha(box, -0.0, -80.5) == pytest.approx(10.24 * math.sqrt(2.0) / 80.5)
    assert compute_alpha(Bounds.square(0.0, 1.0), 5.0, 1.0) == pytest.approx(math.sqrt(2.0) / 4.0)
