"""
Two-dimensional multimodal test functions (minimization orientation).

Every formula is vectorized over the last axis: an (..., 2) array of points
gives an (...) array of objective values.
"""
import logging
from typing import Callable, Dict, Union

import numpy as np

from lsepso.exceptions import DimensionError, UnknownNameError
from lsepso.schemas import Bounds, FunctionId

logger = logging.getLogger(__name__)


def six_hump_camel(x: np.ndarray) -> np.ndarray:
    x1, x2 = x[..., 0], x[..., 1]
    return (
        (4.0 - 2.1 * x1**2 + x1**4 / 3.0) * x1**2
        + x1 * x2
        + (-4.0 + 4.0 * x2**2) * x2**2
    )


def ackley(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    sum_sq = np.sum(x**2, axis=-1)
    sum_cos = np.sum(np.cos(2.0 * np.pi * x), axis=-1)
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(sum_sq / n))
        - np.exp(sum_cos / n)
        + 20.0
        + np.e
    )


def rastrigin(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    return 10.0 * n + np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x), axis=-1)


_SHUBERT_I = np.arange(1, 6, dtype=float)


def _shubert_factor(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t)[..., None]
    return np.sum(_SHUBERT_I * np.cos((_SHUBERT_I + 1.0) * t + _SHUBERT_I), axis=-1)


def shubert(x: np.ndarray) -> np.ndarray:
    return _shubert_factor(x[..., 0]) * _shubert_factor(x[..., 1])


# 25 foxholes on the {-32, -16, 0, 16, 32}^2 lattice, first row varying fastest
_FOXHOLE_AXIS = np.array([-32.0, -16.0, 0.0, 16.0, 32.0])
FOXHOLES = np.array([[a1, a2] for a2 in _FOXHOLE_AXIS for a1 in _FOXHOLE_AXIS])
_FOXHOLE_J = np.arange(1, 26, dtype=float)


def dejong5(x: np.ndarray) -> np.ndarray:
    diff = x[..., None, :] - FOXHOLES
    terms = 1.0 / (_FOXHOLE_J + np.sum(diff**6, axis=-1))
    return 1.0 / (0.002 + np.sum(terms, axis=-1))


class BenchmarkFunction:
    """A test function with its search box and reference peak counts."""

    def __init__(
        self,
        function_id: FunctionId,
        formula: Callable[[np.ndarray], np.ndarray],
        bounds: Bounds,
        reference_globals: int,
        reference_optima: int,
        short_name: str,
    ):
        self.id = function_id
        self.formula = formula
        self.bounds = bounds
        self.reference_globals = reference_globals
        # Published total peak count, used as the peak-ratio denominator override
        self.reference_optima = reference_optima
        self.short_name = short_name

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    @property
    def box_width(self) -> float:
        """Narrowest side of the search box."""
        return float(np.min(self.bounds.width))

    def evaluate(self, x) -> Union[float, np.ndarray]:
        """Objective value at one point (float) or a batch of points (array)."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 or x.shape[-1] != self.dimension:
            raise DimensionError(
                f"{self.id.value} expects {self.dimension} coordinates, got shape {x.shape}"
            )
        value = self.formula(x)
        return float(value) if x.ndim == 1 else value

    __call__ = evaluate

    def __repr__(self) -> str:
        return f"BenchmarkFunction({self.id.value})"


BENCHMARKS: Dict[FunctionId, BenchmarkFunction] = {
    FunctionId.F1: BenchmarkFunction(
        FunctionId.F1, six_hump_camel,
        Bounds(lower=[-1.9, -1.1], upper=[1.9, 1.1]),
        reference_globals=2, reference_optima=6, short_name="f1",
    ),
    FunctionId.F2: BenchmarkFunction(
        FunctionId.F2, ackley, Bounds.square(-5.0, 5.0),
        reference_globals=1, reference_optima=121, short_name="f2",
    ),
    FunctionId.F3: BenchmarkFunction(
        FunctionId.F3, rastrigin, Bounds.square(-5.12, 5.12),
        reference_globals=1, reference_optima=121, short_name="f3",
    ),
    FunctionId.F4: BenchmarkFunction(
        FunctionId.F4, shubert, Bounds.square(-5.12, 5.12),
        reference_globals=4, reference_optima=201, short_name="f4",
    ),
    # The canonical foxhole box: the lattice spans +-32
    FunctionId.F5: BenchmarkFunction(
        FunctionId.F5, dejong5, Bounds.square(-65.536, 65.536),
        reference_globals=1, reference_optima=36, short_name="f5",
    ),
}


def resolve_function_id(name: Union[str, FunctionId]) -> FunctionId:
    """Accepts 'f2', 'F2', 'F2_Ackley' or a FunctionId."""
    if isinstance(name, FunctionId):
        return name
    key = str(name).strip().lower()
    for function_id, benchmark in BENCHMARKS.items():
        if key in (function_id.value.lower(), benchmark.short_name):
            return function_id
    valid = [f.value for f in FunctionId] + [b.short_name for b in BENCHMARKS.values()]
    raise UnknownNameError("function", str(name), valid)


def get_benchmark(name: Union[str, FunctionId]) -> BenchmarkFunction:
    return BENCHMARKS[resolve_function_id(name)]


def evaluate(function_id: Union[str, FunctionId], x) -> Union[float, np.ndarray]:
    return get_benchmark(function_id).evaluate(x)
