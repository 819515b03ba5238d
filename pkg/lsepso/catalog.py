"""
Optima catalogs: grid-seeded local descent enumerating every local minimizer
of a benchmark inside its box, cached on disk as versioned JSON.
"""
import json
import logging
import time
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.optimize
from pydantic import ValidationError

from lsepso.benchmarks import BenchmarkFunction, get_benchmark
from lsepso.config import settings
from lsepso.exceptions import CatalogError
from lsepso.schemas import (
    CATALOG_FORMAT_VERSION,
    CatalogEntry,
    FunctionId,
    OptimaCatalog,
)

logger = logging.getLogger(__name__)

GLOBAL_VALUE_TOLERANCE = 1e-6
_GRID_CHUNK_ROWS = 64
_MAX_DESCENT_WINDOWS = 200


def default_oracle_parameters(benchmark: BenchmarkFunction) -> Tuple[float, float]:
    """(grid_step, position_tolerance) from the narrowest box side."""
    width = benchmark.box_width
    return width / settings.GRID_DIVISIONS, width / settings.TOLERANCE_DIVISIONS


def _grid_axes(benchmark: BenchmarkFunction, grid_step: float) -> List[np.ndarray]:
    axes = []
    for lo, hi in zip(benchmark.bounds.lower, benchmark.bounds.upper):
        count = int(np.ceil((hi - lo) / grid_step)) + 1
        axes.append(np.linspace(lo, hi, count))
    return axes


def _evaluate_grid(benchmark: BenchmarkFunction, axes: List[np.ndarray]) -> np.ndarray:
    xs, ys = axes
    values = np.empty((xs.size, ys.size))
    # Chunked so the foxhole formula's (points, 25, 2) temporaries stay small
    for start in range(0, xs.size, _GRID_CHUNK_ROWS):
        block = xs[start:start + _GRID_CHUNK_ROWS]
        gx, gy = np.meshgrid(block, ys, indexing="ij")
        values[start:start + block.size] = benchmark.formula(np.stack([gx, gy], axis=-1))
    return values


def grid_minima(values: np.ndarray) -> np.ndarray:
    """Indices of grid cells no higher than any of their 8 neighbors."""
    padded = np.pad(values, 1, constant_values=np.inf)
    rows, cols = values.shape
    is_min = np.ones_like(values, dtype=bool)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            neighbor = padded[1 + dr:1 + dr + rows, 1 + dc:1 + dc + cols]
            is_min &= values <= neighbor
    return np.argwhere(is_min)


def probe_points(center: np.ndarray, radius: float) -> np.ndarray:
    angles = np.arange(8) * (np.pi / 4.0)
    return center + radius * np.stack([np.cos(angles), np.sin(angles)], axis=-1)


def is_local_minimizer(
    benchmark: BenchmarkFunction, position: np.ndarray, position_tolerance: float
) -> bool:
    """
    The point is no higher than 8 probes at distance position_tolerance/2.
    Probes may leave the box, which rejects minima that only exist because
    the box cuts the function off.
    """
    value = benchmark.formula(position)
    probes = benchmark.formula(probe_points(position, position_tolerance / 2.0))
    return bool(np.all(value <= probes))


def descend_in_basin(
    benchmark: BenchmarkFunction, start: np.ndarray, grid_step: float
) -> Tuple[np.ndarray, float]:
    """
    L-BFGS-B inside a window of +-grid_step around the current point. A
    result pinned to a window edge that is not a box edge recentres the
    window there, so the descent walks downhill without leaving the basin.
    """
    low, high = benchmark.bounds.low, benchmark.bounds.high
    center = np.asarray(start, dtype=float)
    for _ in range(_MAX_DESCENT_WINDOWS):
        window_low = np.maximum(low, center - grid_step)
        window_high = np.minimum(high, center + grid_step)
        result = scipy.optimize.minimize(
            lambda z: float(benchmark.formula(z)),
            center,
            method="L-BFGS-B",
            bounds=list(zip(window_low, window_high)),
            options={"ftol": 1e-15, "gtol": 1e-10, "maxiter": 1000},
        )
        x = np.asarray(result.x, dtype=float)
        pinned = ((x <= window_low) & (window_low > low)) | ((x >= window_high) & (window_high < high))
        if not pinned.any():
            break
        center = x
    else:
        logger.debug(f"Descent from {start} still moving after {_MAX_DESCENT_WINDOWS} windows")
    return x, float(result.fun)


def build_catalog(
    function_id: Union[str, FunctionId],
    grid_step: Optional[float] = None,
    position_tolerance: Optional[float] = None,
) -> OptimaCatalog:
    """
    Seed a local descent at every grid-cell minimum, keep converged points
    that pass the probe test, merge those closer than 2x position_tolerance
    and label the lowest-valued ones global.
    """
    benchmark = get_benchmark(function_id)
    default_step, default_tolerance = default_oracle_parameters(benchmark)
    grid_step = grid_step or default_step
    position_tolerance = position_tolerance or default_tolerance

    started = time.perf_counter()
    axes = _grid_axes(benchmark, grid_step)
    values = _evaluate_grid(benchmark, axes)
    seeds = grid_minima(values)
    logger.info(
        f"Catalog oracle for {benchmark.id.value}: grid {values.shape[0]}x{values.shape[1]}, "
        f"{len(seeds)} seeds"
    )

    converged = []
    for r, c in seeds:
        start = np.array([axes[0][r], axes[1][c]])
        position, value = descend_in_basin(benchmark, start, grid_step)
        if is_local_minimizer(benchmark, position, position_tolerance):
            converged.append((value, position))

    converged.sort(key=lambda item: item[0])
    accepted: List[Tuple[float, np.ndarray]] = []
    for value, position in converged:
        if all(np.linalg.norm(position - kept) > 2.0 * position_tolerance for _, kept in accepted):
            accepted.append((value, position))

    if not accepted:
        raise CatalogError(f"Oracle found no minimizer for {benchmark.id.value}")

    best = accepted[0][0]
    entries = [
        CatalogEntry(
            position=[float(v) for v in position],
            value=value,
            kind="global" if value - best <= GLOBAL_VALUE_TOLERANCE else "local",
        )
        for value, position in accepted
    ]
    catalog = OptimaCatalog(
        function_id=benchmark.id,
        grid_step=grid_step,
        position_tolerance=position_tolerance,
        entries=entries,
    )
    logger.info(
        f"Catalog for {benchmark.id.value}: {catalog.size} optima "
        f"({catalog.global_count} global) in {time.perf_counter() - started:.1f}s"
    )
    return catalog


def catalog_file(catalog_dir: Union[str, Path], function_id: FunctionId) -> Path:
    return Path(catalog_dir) / f"{function_id.value}.json"


def save_catalog(catalog: OptimaCatalog, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = json.loads(catalog.model_dump_json())
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Saved catalog to {path}")
    return path


def load_catalog(path: Union[str, Path]) -> OptimaCatalog:
    path = Path(path)
    try:
        catalog = OptimaCatalog.model_validate_json(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise CatalogError(f"No catalog at {path}") from e
    except ValidationError as e:
        raise CatalogError(f"Unreadable catalog {path}: {e}") from e
    if catalog.format_version != CATALOG_FORMAT_VERSION:
        raise CatalogError(
            f"Catalog {path} has format {catalog.format_version}, expected {CATALOG_FORMAT_VERSION}"
        )
    return catalog


def load_or_build_catalog(
    function_id: Union[str, FunctionId],
    catalog_dir: Union[str, Path],
    grid_step: Optional[float] = None,
    position_tolerance: Optional[float] = None,
) -> OptimaCatalog:
    """Cached catalog if its oracle parameters match, else a fresh build."""
    benchmark = get_benchmark(function_id)
    default_step, default_tolerance = default_oracle_parameters(benchmark)
    grid_step = grid_step or default_step
    position_tolerance = position_tolerance or default_tolerance
    path = catalog_file(catalog_dir, benchmark.id)

    if path.exists():
        try:
            cached = load_catalog(path)
            if (
                cached.function_id == benchmark.id
                and np.isclose(cached.grid_step, grid_step)
                and np.isclose(cached.position_tolerance, position_tolerance)
            ):
                return cached
            logger.warning(f"Cached catalog {path} was built with other oracle parameters; rebuilding")
        except CatalogError as e:
            logger.warning(f"Ignoring cached catalog: {e}")

    catalog = build_catalog(benchmark.id, grid_step, position_tolerance)
    save_catalog(catalog, path)
    return catalog
