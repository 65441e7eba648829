"""Small input-validation helpers shared by the estimators and the runner."""

import numbers

import numpy as np


def check_positive_int(value, name, allow_zero=False):
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be {bound}, got {value}")
    return int(value)


def check_arm(arm, n_arms):
    if isinstance(arm, (bool, np.bool_)) or not isinstance(arm, numbers.Integral):
        raise TypeError(f"arm must be an integer index, got {arm!r}")
    if not 0 <= arm < n_arms:
        raise ValueError(f"arm {arm} out of range for {n_arms} arms")
    return int(arm)


def check_probabilities(probabilities):
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probabilities must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("every hit probability must lie in [0, 1]")
    return p


def check_counts(wins, pulls):
    """Validate a (wins, pulls) pair of per-arm counters and return float arrays."""
    w = np.asarray(wins, dtype=float)
    t = np.asarray(pulls, dtype=float)
    if w.shape != t.shape:
        raise ValueError(f"wins shape {w.shape} does not match pulls shape {t.shape}")
    if np.any(w < 0) or np.any(w > t):
        raise ValueError("counters must satisfy 0 <= wins <= pulls")
    return w, t


def argmax_random_tiebreak(values, u):
    """Row-wise argmax with exact ties resolved by a uniform draw.

    ``values`` has shape ``(..., n)`` and ``u`` holds one uniform in [0, 1)
    per row. Among the ``c`` maximal entries of a row, the ``floor(u * c)``-th
    one (in index order) is returned, so every tied arm is equally likely.
    """
    values = np.asarray(values)
    u = np.asarray(u, dtype=float)
    arms = values.argmax(axis=-1)
    mask = values == np.take_along_axis(values, arms[..., None], axis=-1)
    counts = mask.sum(axis=-1)
    tied = counts > 1
    if np.any(tied):
        pick = np.minimum(np.floor(u * counts).astype(np.int64), counts - 1)
        rank = np.cumsum(mask, axis=-1)
        chosen = np.argmax(rank > pick[..., None], axis=-1)
        arms = np.where(tied, chosen, arms)
    return arms
