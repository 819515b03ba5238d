import numpy as np
import pytest
from pydantic import ValidationError

from lsepso.benchmarks import get_benchmark
from lsepso.optimizers import (
    STEP_FUNCTIONS,
    epso_step,
    lsepso_step,
    run_optimizer,
)
from lsepso.schemas import Algorithm, Bounds, SwarmConfig
from lsepso.swarm import FitnessEvaluator, RngStream, init_swarm

F1 = get_benchmark("f1")
BOX = Bounds.square(-5.0, 5.0)


def sphere(points, kind="swarm"):
    return -np.sum(np.atleast_2d(points) ** 2, axis=1)


def config_for(algorithm, **overrides):
    values = dict(population=12, iterations=10, algorithm=algorithm, seed=3)
    values.update(overrides)
    return SwarmConfig(**values)


def test_every_algorithm_has_a_step():
    assert set(STEP_FUNCTIONS) == set(Algorithm)


@pytest.mark.parametrize("algorithm", list(Algorithm))
def test_zero_coefficients_freeze_positions(algorithm):
    config = config_for(algorithm, w=0.0, c1=0.0, c2=0.0)
    start = F1.bounds.low + RngStream(config.seed).random((12, 2)) * F1.bounds.width
    swarm = run_optimizer(config, F1.bounds, FitnessEvaluator(F1.evaluate))
    np.testing.assert_array_equal(swarm.positions, start)


@pytest.mark.parametrize("algorithm", list(Algorithm))
def test_same_seed_same_swarm(algorithm):
    config = config_for(algorithm)
    a = run_optimizer(config, F1.bounds, FitnessEvaluator(F1.evaluate))
    b = run_optimizer(config, F1.bounds, FitnessEvaluator(F1.evaluate))
    np.testing.assert_array_equal(a.positions, b.positions)
    np.testing.assert_array_equal(a.pbest_positions, b.pbest_positions)
    np.testing.assert_array_equal(a.velocities, b.velocities)

    c = run_optimizer(config_for(algorithm, seed=4), F1.bounds, FitnessEvaluator(F1.evaluate))
    assert not np.array_equal(a.positions, c.positions)


@pytest.mark.parametrize("algorithm", list(Algorithm))
def test_bounds_and_velocity_clamp_hold_every_iteration(algorithm):
    config = config_for(algorithm, vmax_fraction=0.2)
    vmax = F1.bounds.vmax(config.vmax_fraction)
    seen = []

    def check(iteration, swarm):
        seen.append(iteration)
        assert all(F1.bounds.contains(x) for x in swarm.positions)
        assert np.all(np.abs(swarm.velocities) <= vmax + 1e-12)

    run_optimizer(config, F1.bounds, FitnessEvaluator(F1.evaluate), on_iteration=check)
    assert seen == list(range(1, 11))


def test_pso_converges_on_sphere():
    config = config_for(Algorithm.PSO, population=20, iterations=100)
    swarm = run_optimizer(config, BOX, sphere)
    assert swarm.pbest_fitness.max() > -1e-4


@pytest.mark.parametrize("algorithm", [Algorithm.EPSO, Algorithm.FERPSO])
def test_lone_particle_follows_its_own_pbest(algorithm):
    config = config_for(algorithm, population=1, iterations=5)
    swarm = run_optimizer(config, F1.bounds, FitnessEvaluator(F1.evaluate))
    assert len(swarm) == 1
    assert F1.bounds.contains(swarm.positions[0])


def test_lsepso_needs_more_particles_than_neighbors():
    with pytest.raises(ValidationError):
        config_for(Algorithm.LSEPSO, population=3, n_neighbors=3)


def test_lsepso_step_runs_local_search_then_unit_alpha_epso(mocker):
    improve = mocker.patch("lsepso.optimizers.improve_swarm")
    epso = mocker.patch("lsepso.optimizers.epso_step")
    config = config_for(Algorithm.LSEPSO)
    rng = RngStream(0)
    swarm = init_swarm(config, F1.bounds, rng, FitnessEvaluator(F1.evaluate))

    lsepso_step(swarm, config, F1.bounds, rng, sphere)

    improve.assert_called_once()
    assert epso.call_args.kwargs["alpha"] == 1.0


def test_lsepso_without_local_search_is_unit_alpha_epso():
    config = config_for(Algorithm.LSEPSO, ls_enabled=False)
    lsepso = run_optimizer(config, F1.bounds, FitnessEvaluator(F1.evaluate))

    rng = RngStream(config.seed)
    evaluator = FitnessEvaluator(F1.evaluate)
    swarm = init_swarm(config, F1.bounds, rng, evaluator)
    for _ in range(config.iterations):
        epso_step(swarm, config, F1.bounds, rng, evaluator, alpha=1.0)

    np.testing.assert_array_equal(lsepso.positions, swarm.positions)
    np.testing.assert_array_equal(lsepso.pbest_positions, swarm.pbest_positions)


@pytest.mark.parametrize("ls_variant, per_call", [("prose", 3), ("pseudocode", 1)])
def test_evaluation_budget(ls_variant, per_call):
    config = config_for(Algorithm.LSEPSO, population=10, iterations=5, ls_variant=ls_variant)
    evaluator = FitnessEvaluator(F1.evaluate)
    run_optimizer(config, F1.bounds, evaluator)
    assert evaluator.counts["init"] == 10
    assert evaluator.counts["swarm"] == 50
    assert evaluator.counts["local_search"] == 50 * per_call


def test_pbest_never_degrades():
    for seed in range(100):
        config = config_for(Algorithm.LSEPSO, population=8, iterations=4, seed=seed)
        history = []
        run_optimizer(
            config, F1.bounds, FitnessEvaluator(F1.evaluate),
            on_iteration=lambda t, s: history.append(s.pbest_fitness.copy()),
        )
        for before, after in zip(history, history[1:]):
            assert np.all(after >= before)
