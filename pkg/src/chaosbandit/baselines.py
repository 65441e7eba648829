"""Software baselines: Thompson sampling and UCB1-tuned for Bernoulli arms."""

import numpy as np

from ._policy import CounterPolicy
from ._validation import argmax_random_tiebreak, check_counts


def thompson_sample(wins, pulls, rng):
    """One posterior draw per arm from Beta(wins + 1, losses + 1).

    Beta variates come from the gamma ratio X / (X + Y) with
    X ~ Gamma(wins + 1), Y ~ Gamma(losses + 1), drawn in a single
    ``standard_gamma`` call (X values first, then Y).
    """
    w, t = check_counts(wins, pulls)
    g = rng.standard_gamma(np.concatenate([w + 1.0, t - w + 1.0], axis=-1))
    n = w.shape[-1]
    x, y = g[..., :n], g[..., n:]
    return x / (x + y)


def thompson_select(wins, pulls, rng, u=None):
    theta = thompson_sample(wins, pulls, rng)
    return int(argmax_random_tiebreak(theta, rng.random() if u is None else u))


def ucb1tuned_index(means, sq_means, pulls, t):
    """Auer et al. UCB1-tuned upper bounds for arms with ``pulls > 0``.

    ``mean + sqrt(ln t / n * min(1/4, V))``, where
    ``V = sq_mean - mean**2 + sqrt(2 ln t / n)``.
    """
    means = np.asarray(means, dtype=float)
    pulls = np.asarray(pulls, dtype=float)
    log_t = np.log(t)
    v = np.asarray(sq_means, dtype=float) - means**2 + np.sqrt(2.0 * log_t / pulls)
    return means + np.sqrt(log_t / pulls * np.minimum(0.25, v))


def ucb1tuned_select(wins, pulls, t, u=0.0, sq_sums=None):
    """Lowest-index unplayed arm if any, else the UCB1-tuned argmax.

    For Bernoulli rewards the sum of squared rewards equals ``wins``, which is
    the default for ``sq_sums``.
    """
    w, n = check_counts(wins, pulls)
    unplayed = np.flatnonzero(n == 0)
    if unplayed.size:
        return int(unplayed[0])
    sq = w if sq_sums is None else np.asarray(sq_sums, dtype=float)
    index = ucb1tuned_index(w / n, sq / n, n, t)
    return int(argmax_random_tiebreak(index, u))


class ThompsonSampling(CounterPolicy):
    """Beta-Bernoulli Thompson sampling with a uniform Beta(1, 1) prior."""

    def __init__(self, n_arms=64, random_state=None):
        self.n_arms = n_arms
        self.random_state = random_state

    def select(self, rng=None, u=None):
        """Arm with the largest posterior draw; ``rng`` defaults to ``random_state``."""
        self._check_state()
        rng = self._rng if rng is None else rng
        return thompson_select(self.wins_, self.pulls_, rng, self._tie_uniform(u))


class UCB1Tuned(CounterPolicy):
    """UCB1-tuned index policy; unplayed arms go first in index order."""

    def __init__(self, n_arms=64, random_state=None):
        self.n_arms = n_arms
        self.random_state = random_state

    def select(self, u=None):
        self._check_state()
        t = int(self.pulls_.sum())
        return ucb1tuned_select(self.wins_, self.pulls_, t, self._tie_uniform(u))
