from typing import List, Sequence

import pandas as pd

from lsepso.schemas import Algorithm, ExperimentResult

ALGORITHM_COLUMNS = [a.value for a in (Algorithm.FERPSO, Algorithm.EPSO, Algorithm.LSEPSO, Algorithm.PSO)]


def format_result_row(result: ExperimentResult) -> str:
    """
    One-line summary of an aggregated experiment.
    """
    return (
        f"{result.function_id.value} | {result.algorithm.value} | "
        f"particles={result.population} iterations={result.iterations} runs={result.runs} | "
        f"ANOF={result.anof:.2f} | "
        f"peak ratio={result.peak_ratio:.6f} ({result.anof:.2f}/{result.denominator})"
    )


def results_frame(results: Sequence[ExperimentResult]) -> pd.DataFrame:
    """Flat table, one row per experiment."""
    return pd.DataFrame([
        {
            "function": r.function_id.value,
            "algorithm": r.algorithm.value,
            "particles": r.population,
            "iterations": r.iterations,
            "runs": r.runs,
            "anof": r.anof,
            "denominator": r.denominator,
            "peak_ratio": r.peak_ratio,
        }
        for r in results
    ])


def _pivot(frame: pd.DataFrame, value: str) -> pd.DataFrame:
    table = frame.pivot_table(
        index=["function", "particles", "iterations"],
        columns="algorithm",
        values=value,
        aggfunc="mean",
    )
    ordered = [c for c in ALGORITHM_COLUMNS if c in table.columns]
    return table[ordered]


def format_tables(results: Sequence[ExperimentResult]) -> str:
    """
    ANOF and peak-ratio tables, one row per (function, particles, iterations)
    and one column per algorithm.
    """
    if not results:
        return "No results."
    frame = results_frame(results)
    parts: List[str] = [
        "Average number of optima found (ANOF)",
        _pivot(frame, "anof").to_string(float_format=lambda v: f"{v:.2f}", na_rep="-"),
        "",
        "ANOF / number of optima (peak ratio)",
        _pivot(frame, "peak_ratio").to_string(float_format=lambda v: f"{v:.6f}", na_rep="-"),
    ]
    return "\n".join(parts)
