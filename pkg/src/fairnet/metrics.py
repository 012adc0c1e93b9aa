"""Window averages and replicate aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import RunResult
from .game import Strategy


def window_average(trajectory: np.ndarray, window: int) -> np.ndarray:
    """Mean strategy frequencies over the trailing ``window`` rows."""
    trajectory = np.asarray(trajectory, dtype=np.float64)
    if window < 1:
        raise ValueError(f"window must be positive, got {window}")
    if trajectory.ndim != 2 or trajectory.shape[0] < window:
        raise ValueError(
            f"trajectory with {trajectory.shape[0] if trajectory.ndim == 2 else '?'} rows "
            f"cannot be averaged over a window of {window}"
        )
    return trajectory[-window:].mean(axis=0)


def fairness(freqs: np.ndarray) -> float:
    """Share of fair proposers: frequency of HH plus HL."""
    return float(freqs[Strategy.HH] + freqs[Strategy.HL])


def unfair_share(freqs: np.ndarray) -> float:
    return 1.0 - fairness(freqs)


def mean_se(values: Sequence[float]) -> tuple[float, float]:
    """Mean and standard error (sample standard deviation over sqrt(n)).

    A single value has zero standard error by convention.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot aggregate zero values")
    mean = float(arr.mean())
    if arr.size == 1:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / math.sqrt(arr.size))


@dataclass(frozen=True)
class Aggregate:
    """Replicate-level summary of a batch of runs."""

    replicate_count: int
    mean_freqs: np.ndarray
    mean_fairness: float
    se_fairness: float
    mean_cost: float
    se_cost: float

    @property
    def mean_unfair(self) -> float:
        return 1.0 - self.mean_fairness


def aggregate(results: Sequence[RunResult]) -> Aggregate:
    """Pool runs of one parameter set into means and standard errors."""
    if not results:
        raise ValueError("cannot aggregate zero runs")
    mean_freqs = np.mean([r.window_freq for r in results], axis=0)
    fair_mean, fair_se = mean_se([r.fairness for r in results])
    cost_mean, cost_se = mean_se([r.total_cost for r in results])
    return Aggregate(
        replicate_count=len(results),
        mean_freqs=mean_freqs,
        mean_fairness=fair_mean,
        se_fairness=fair_se,
        mean_cost=cost_mean,
        se_cost=cost_se,
    )
