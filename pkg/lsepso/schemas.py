"""
Pydantic schemas for configuration, catalogs and experiment records.
"""
from enum import Enum
from typing import Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lsepso.config import settings


class Algorithm(str, Enum):
    PSO = "PSO"
    EPSO = "EPSO"
    FERPSO = "FERPSO"
    LSEPSO = "LSEPSO"


class LocalSearchVariant(str, Enum):
    PROSE = "prose"            # one trial point per nearest neighbor
    PSEUDOCODE = "pseudocode"  # one trial point toward the best nearest neighbor


class FunctionId(str, Enum):
    F1 = "F1_SixHumpCamel"
    F2 = "F2_Ackley"
    F3 = "F3_Rastrigin"
    F4 = "F4_Shubert"
    F5 = "F5_DeJong5"


# --- Search space ---

class Bounds(BaseModel):
    """Axis-aligned search box."""
    model_config = ConfigDict(frozen=True)

    lower: List[float] = Field(..., min_length=1)
    upper: List[float] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_box(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper must have the same length")
        for d, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if not lo < hi:
                raise ValueError(f"lower[{d}]={lo} must be below upper[{d}]={hi}")
        return self

    @classmethod
    def square(cls, low: float, high: float, dimension: int = 2) -> "Bounds":
        return cls(lower=[low] * dimension, upper=[high] * dimension)

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def low(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    @property
    def high(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    @property
    def width(self) -> np.ndarray:
        return self.high - self.low

    @property
    def diagonal(self) -> float:
        """Euclidean length of the box diagonal."""
        return float(np.linalg.norm(self.width))

    @property
    def center(self) -> np.ndarray:
        return (self.low + self.high) / 2.0

    def vmax(self, fraction: float) -> np.ndarray:
        return fraction * self.width

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.low, self.high)

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.low) & (x <= self.high)))


# --- Optimizer configuration ---

class LocalSearchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_neighbors: int = Field(default_factory=lambda: settings.N_NEIGHBORS, ge=1)
    c1_ls: float = Field(default_factory=lambda: settings.C1_LS, ge=0.0)
    variant: LocalSearchVariant = Field(default_factory=lambda: LocalSearchVariant(settings.LS_VARIANT))
    n_randomized: bool = Field(default_factory=lambda: settings.LS_RANDOMIZED_N)
    enabled: bool = True


class SwarmConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    population: int = Field(..., ge=1)
    iterations: int = Field(..., ge=1)
    w: float = Field(default_factory=lambda: settings.W, ge=0.0, description="Inertia weight")
    c1: float = Field(default_factory=lambda: settings.C1, ge=0.0, description="Cognitive coefficient")
    c2: float = Field(default_factory=lambda: settings.C2, ge=0.0, description="Social coefficient")
    n_neighbors: int = Field(default_factory=lambda: settings.N_NEIGHBORS, ge=1)
    vmax_fraction: float = Field(default_factory=lambda: settings.VMAX_FRACTION, gt=0.0, le=1.0)
    seed: int = Field(default_factory=lambda: settings.BASE_SEED, ge=0, lt=2**64)
    algorithm: Algorithm = Algorithm.LSEPSO

    # Local search options (LSEPSO only)
    ls_variant: LocalSearchVariant = Field(default_factory=lambda: LocalSearchVariant(settings.LS_VARIANT))
    ls_randomized_n: bool = Field(default_factory=lambda: settings.LS_RANDOMIZED_N)
    ls_enabled: bool = True
    c1_ls: float = Field(default_factory=lambda: settings.C1_LS, ge=0.0, description="Trial-point step coefficient")

    @model_validator(mode="after")
    def check_neighbors(self):
        # n is only consumed by the local search
        if (
            self.algorithm == Algorithm.LSEPSO
            and self.ls_enabled
            and self.n_neighbors >= self.population
        ):
            raise ValueError(
                f"n_neighbors ({self.n_neighbors}) must be below population ({self.population})"
            )
        return self

    def local_search_config(self) -> LocalSearchConfig:
        return LocalSearchConfig(
            n_neighbors=self.n_neighbors,
            c1_ls=self.c1_ls,
            variant=self.ls_variant,
            n_randomized=self.ls_randomized_n,
            enabled=self.ls_enabled,
        )


class MatchCriteria(BaseModel):
    model_config = ConfigDict(frozen=True)

    position_epsilon: float = Field(..., gt=0.0, description="Euclidean radius")
    fitness_epsilon: float = Field(..., gt=0.0, description="Absolute objective slack")


# --- Catalog ---

class CatalogEntry(BaseModel):
    position: List[float]
    value: float
    kind: Literal["global", "local"]


CATALOG_FORMAT_VERSION = 2


class OptimaCatalog(BaseModel):
    format_version: int = CATALOG_FORMAT_VERSION
    function_id: FunctionId
    grid_step: float = Field(..., gt=0.0)
    position_tolerance: float = Field(..., gt=0.0)
    entries: List[CatalogEntry] = Field(..., min_length=1)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def global_count(self) -> int:
        return sum(1 for e in self.entries if e.kind == "global")

    @property
    def positions(self) -> np.ndarray:
        return np.array([e.position for e in self.entries], dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries], dtype=float)


# --- Experiments ---

class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    function_id: FunctionId
    algorithm: Algorithm
    population: int = Field(..., ge=1)
    iterations: int = Field(..., ge=1)
    runs: int = Field(default_factory=lambda: settings.RUNS, ge=1)
    base_seed: int = Field(default_factory=lambda: settings.BASE_SEED, ge=0, lt=2**64)

    # Velocity law overrides
    w: float = Field(default_factory=lambda: settings.W, ge=0.0)
    c1: float = Field(default_factory=lambda: settings.C1, ge=0.0)
    c2: float = Field(default_factory=lambda: settings.C2, ge=0.0)
    vmax_fraction: float = Field(default_factory=lambda: settings.VMAX_FRACTION, gt=0.0, le=1.0)

    # Local search overrides
    n_neighbors: int = Field(default_factory=lambda: settings.N_NEIGHBORS, ge=1)
    c1_ls: float = Field(default_factory=lambda: settings.C1_LS, ge=0.0)
    ls_variant: LocalSearchVariant = Field(default_factory=lambda: LocalSearchVariant(settings.LS_VARIANT))
    ls_randomized_n: bool = Field(default_factory=lambda: settings.LS_RANDOMIZED_N)
    ls_enabled: bool = True

    # Match criteria overrides (None -> per-function defaults)
    position_epsilon: Optional[float] = Field(None, gt=0.0)
    fitness_epsilon: Optional[float] = Field(None, gt=0.0)
    denominator_override: Optional[Union[int, Literal["reference"]]] = None

    trajectory: bool = False
    stride: int = Field(default_factory=lambda: settings.TRAJECTORY_STRIDE, ge=1)
    out_dir: str = Field(default_factory=lambda: settings.OUTPUT_DIR)

    @field_validator("denominator_override")
    def check_denominator(cls, v):
        if isinstance(v, int) and v < 1:
            raise ValueError("denominator override must be a positive integer")
        return v

    @model_validator(mode="after")
    def check_seed_range(self):
        if self.base_seed + self.runs - 1 >= 2**64:
            raise ValueError("base_seed + runs exceeds the 64-bit seed range")
        return self

    @model_validator(mode="after")
    def check_neighbors(self):
        if (
            self.algorithm == Algorithm.LSEPSO
            and self.ls_enabled
            and self.n_neighbors >= self.population
        ):
            raise ValueError(
                f"n_neighbors ({self.n_neighbors}) must be below population ({self.population})"
            )
        return self

    def run_seed(self, run_index: int) -> int:
        """Seed of run k is base_seed + k."""
        return self.base_seed + run_index

    def swarm_config(self, run_index: int) -> SwarmConfig:
        return SwarmConfig(
            population=self.population,
            iterations=self.iterations,
            w=self.w,
            c1=self.c1,
            c2=self.c2,
            n_neighbors=self.n_neighbors,
            c1_ls=self.c1_ls,
            vmax_fraction=self.vmax_fraction,
            seed=self.run_seed(run_index),
            algorithm=self.algorithm,
            ls_variant=self.ls_variant,
            ls_randomized_n=self.ls_randomized_n,
            ls_enabled=self.ls_enabled,
        )

    @property
    def label(self) -> str:
        return f"{self.function_id.value}_{self.algorithm.value}_p{self.population}_i{self.iterations}"


class RunRecord(BaseModel):
    run_index: int
    seed: int
    found: int = Field(..., ge=0)
    candidates: int = Field(..., ge=0)
    best_value: float
    mean_deviation: Optional[float] = None
    evaluations: Dict[str, int]

    @property
    def total_evaluations(self) -> int:
        return sum(self.evaluations.values())


class ExperimentResult(BaseModel):
    function_id: FunctionId
    algorithm: Algorithm
    population: int
    iterations: int
    runs: int = Field(..., ge=1)
    found_per_run: List[int]
    anof: float
    peak_ratio: float
    denominator: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_counts(self):
        if len(self.found_per_run) != self.runs:
            raise ValueError("found_per_run must hold one count per run")
        for k, found in enumerate(self.found_per_run):
            if not 0 <= found <= self.denominator:
                raise ValueError(
                    f"run {k}: found={found} outside [0, {self.denominator}]"
                )
        return self


class ExperimentSummary(BaseModel):
    """Everything summary.json holds for one experiment."""
    spec: ExperimentSpec
    result: ExperimentResult
    catalog_size: int
    position_epsilon: float
    fitness_epsilon: float
    run_records: List[RunRecord]
