"""Correct-decision rate, regret, plays-to-threshold and power-law fits."""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted, check_X_y, column_or_1d

from ._validation import check_probabilities


@dataclass
class RunTrace:
    """Selections and outcomes of one cycle; entry ``t`` is play ``t + 1``."""

    cycle: int
    arms: np.ndarray
    hits: np.ndarray

    def __post_init__(self):
        self.arms = np.asarray(self.arms, dtype=np.int64)
        self.hits = np.asarray(self.hits, dtype=bool)
        if self.arms.shape != self.hits.shape or self.arms.ndim != 1:
            raise ValueError("arms and hits must be 1-d arrays of equal length")

    def __len__(self):
        return self.arms.size


def selection_matrix(traces):
    """Stack traces into a (cycles, plays) array of selected arms."""
    traces = list(traces)
    if not traces:
        raise ValueError("need at least one trace")
    lengths = {len(t) for t in traces}
    if len(lengths) != 1:
        raise ValueError(f"traces have unequal play counts: {sorted(lengths)}")
    return np.stack([t.arms for t in traces]) if lengths != {0} else np.empty((len(traces), 0), int)


def cdr_curve(traces, best_arm):
    """Fraction of cycles that selected ``best_arm`` at each play."""
    return (selection_matrix(traces) == best_arm).mean(axis=0)


def regret_curve(traces, probabilities):
    """Expected-reward shortfall ``p * P_max - mean_cycles sum_{t<=p} P[arm_t]`` per play ``p``."""
    p = check_probabilities(probabilities)
    arms = selection_matrix(traces)
    if arms.size and arms.max() >= p.size:
        raise ValueError("trace selects an arm outside the probability vector")
    gap = p.max() - p[arms]
    return np.cumsum(gap.mean(axis=0))


def plays_to_threshold(cdr, threshold=0.95, start=1):
    """First play ``t >= start`` (1-based) with CDR >= threshold, or None.

    ``start`` lets callers skip a forced initial phase, e.g. the round-robin
    of UCB1-tuned, during which every cycle plays the same arm and the CDR
    touches 1 at the best arm's turn without any learning.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    if start < 1:
        raise ValueError(f"start must be >= 1, got {start}")
    hits = np.flatnonzero(np.asarray(cdr)[start - 1:] >= threshold)
    return int(hits[0]) + start if hits.size else None


@dataclass
class PowerLawFit:
    """``y = c * N**exponent`` fitted in log-log space."""

    c: float
    exponent: float
    residual: float
    points: list = field(default_factory=list)

    def __call__(self, n):
        return self.c * np.asarray(n, dtype=float) ** self.exponent


def _log_fit(n, y):
    n = np.asarray(n, dtype=float)
    y = np.asarray(y, dtype=float)
    if n.size < 2:
        raise ValueError("a power-law fit needs at least 2 points")
    if np.any(n <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit requires strictly positive N and y")
    if np.unique(n).size < 2:
        raise ValueError("power-law fit needs at least 2 distinct N values")
    ln_n, ln_y = np.log(n), np.log(y)
    slope, intercept = np.polyfit(ln_n, ln_y, 1)
    residual = float(np.sqrt(np.mean((ln_y - (intercept + slope * ln_n)) ** 2)))
    return float(np.exp(intercept)), float(slope), residual


def fit_power_law(points):
    """Least-squares line through ``(ln N, ln y)`` for a list of ``(N, y)`` pairs."""
    points = [(float(n), float(y)) for n, y in points]
    c, e, r = _log_fit([n for n, _ in points], [y for _, y in points])
    return PowerLawFit(c, e, r, points)


class PowerLawRegressor(RegressorMixin, BaseEstimator):
    """Estimator form of :func:`fit_power_law` (``X`` holds N in its single column)."""

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_min_samples=2)
        if X.shape[1] != 1:
            raise ValueError("X must have exactly one feature (N)")
        self.coef_, self.exponent_, self.residual_ = _log_fit(X[:, 0], y)
        return self

    def predict(self, X):
        check_is_fitted(self, "exponent_")
        n = column_or_1d(np.asarray(X, dtype=float).reshape(-1, 1))
        return self.coef_ * n**self.exponent_
