"""Tug-of-war decision maker.

Each arm keeps hit/miss counters. From them the policy derives a zero-sum
bias vector B, adds ``k * B`` to the chaotic intensities and plays the arm
with the largest sum. The array functions below accept a leading batch axis
(cycles x arms) so the Monte Carlo engine can evaluate many cycles at once.
"""

import numpy as np

from ._policy import CounterPolicy
from ._validation import argmax_random_tiebreak


def estimates(wins, pulls):
    """Empirical hit rates W/T, taken as 0 for arms that were never played."""
    wins = np.asarray(wins, dtype=float)
    pulls = np.asarray(pulls, dtype=float)
    return np.divide(wins, pulls, out=np.zeros(np.broadcast(wins, pulls).shape), where=pulls > 0)


def tow_coefficients(p_hat):
    """Hit and miss weights ``(delta, omega)`` from the two largest estimates.

    ``omega = top1 + top2`` and ``delta = 2 - omega``; when two arms tie for
    the maximum, both top1 and top2 equal that value.
    """
    p_hat = np.asarray(p_hat, dtype=float)
    n = p_hat.shape[-1]
    if n < 2:
        raise ValueError("the tug-of-war coefficients need at least 2 arms")
    top = np.partition(p_hat, n - 2, axis=-1)[..., n - 2:]
    omega = top[..., 0] + top[..., 1]
    return 2.0 - omega, omega


def tow_biases(wins, losses, coefficients=None):
    """Zero-sum biases ``B_i = Q_i - mean_{j != i} Q_j`` with ``Q = delta*W - omega*L``.

    ``coefficients`` fixes ``(delta, omega)``; by default they are derived
    from the current estimates.
    """
    wins = np.asarray(wins, dtype=float)
    losses = np.asarray(losses, dtype=float)
    n = wins.shape[-1]
    if n < 2:
        raise ValueError(f"biases need at least 2 arms (mean over the other N-1), got {n}")
    if coefficients is None:
        coefficients = tow_coefficients(estimates(wins, wins + losses))
    delta, omega = (np.asarray(c, dtype=float) for c in coefficients)
    q = delta[..., None] * wins - omega[..., None] * losses
    return q - (q.sum(axis=-1, keepdims=True) - q) / (n - 1)


class TugOfWar(CounterPolicy):
    """Tug-of-war bandit policy driven by an external intensity signal.

    Parameters
    ----------
    n_arms : int
        Number of arms (>= 2).
    k : float, default=15.0
        Bias coefficient, in intensity counts per bias unit.
    random_state : int or Generator, optional
        Source of tie-break draws when ``select`` is not given one.

    Attributes
    ----------
    pulls_, wins_ : ndarray of int
        Per-arm plays T and hits W; ``losses_`` is T - W.
    """

    def __init__(self, n_arms=64, k=15.0, random_state=None):
        self.n_arms = n_arms
        self.k = k
        self.random_state = random_state

    def estimates(self):
        self._check_state()
        return estimates(self.wins_, self.pulls_)

    def coefficients(self):
        delta, omega = tow_coefficients(self.estimates())
        return float(delta), float(omega)

    def biases(self):
        self._check_state()
        return tow_biases(self.wins_, self.losses_)

    def select(self, intensities, u=None):
        """Arm maximizing ``intensities + k * biases()``.

        ``u`` is the uniform used to break exact ties; drawn from
        ``random_state`` when omitted.
        """
        self._check_state()
        intensities = np.asarray(intensities, dtype=float)
        if intensities.shape != (self.n_arms,):
            raise ValueError(f"expected {self.n_arms} intensities, got shape {intensities.shape}")
        score = intensities + self.k * self.biases()
        return int(argmax_random_tiebreak(score, self._tie_uniform(u)))

    def predict(self, X):
        """Selections for each row of intensities in ``X`` under the current counters."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.array([self.select(row) for row in X])
