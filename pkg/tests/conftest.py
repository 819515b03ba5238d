import numpy as np
import pytest

from lsepso.benchmarks import get_benchmark
from lsepso.schemas import CatalogEntry, FunctionId, OptimaCatalog
from lsepso.swarm import FitnessEvaluator, Swarm

# The two global minima of the six-hump camel back
F1_GLOBALS = [
    ([0.0898420, -0.7126564], -1.0316285),
    ([-0.0898420, 0.7126564], -1.0316285),
]


@pytest.fixture
def f1_catalog():
    """Hand-built F1 catalog holding only the two global minima."""
    return OptimaCatalog(
        function_id=FunctionId.F1,
        grid_step=0.0044,
        position_tolerance=0.011,
        entries=[CatalogEntry(position=p, value=v, kind="global") for p, v in F1_GLOBALS],
    )


@pytest.fixture
def f1_evaluator():
    return FitnessEvaluator(get_benchmark(FunctionId.F1).evaluate)


@pytest.fixture
def make_swarm():
    """Swarm at rest from positions and fitness (pbests default to them)."""
    def build(positions, fitness, pbest_positions=None, pbest_fitness=None):
        positions = np.asarray(positions, dtype=float)
        return Swarm(
            positions,
            np.zeros_like(positions),
            np.asarray(fitness, dtype=float),
            pbest_positions,
            pbest_fitness,
        )
    return build
