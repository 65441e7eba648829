import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted, column_or_1d

from ._validation import check_arm, check_positive_int


class CounterPolicy(BaseEstimator):
    """Base for bandit policies whose state is per-arm pull/win counters.

    ``fit(arms, rewards)`` replays a history from scratch, ``partial_fit``
    appends to it and ``update`` records a single play. Arms are 0-based.
    Rewards are hits (1) or misses (0).
    """

    def _init_counters(self):
        n = check_positive_int(self.n_arms, "n_arms")
        self.pulls_ = np.zeros(n, dtype=np.int64)
        self.wins_ = np.zeros(n, dtype=np.int64)
        self._rng = np.random.default_rng(self.random_state)

    def _check_state(self):
        if not hasattr(self, "pulls_"):
            self._init_counters()

    def fit(self, arms, rewards):
        self._init_counters()
        return self.partial_fit(arms, rewards)

    def partial_fit(self, arms, rewards):
        self._check_state()
        arms = column_or_1d(arms).astype(np.int64, copy=False)
        rewards = column_or_1d(rewards)
        if arms.shape != rewards.shape:
            raise ValueError(f"{arms.size} arms but {rewards.size} rewards")
        if arms.size and (arms.min() < 0 or arms.max() >= self.n_arms):
            raise ValueError(f"arm indices must lie in [0, {self.n_arms})")
        if not np.all((rewards == 0) | (rewards == 1)):
            raise ValueError("rewards must be hits (1/True) or misses (0/False)")
        np.add.at(self.pulls_, arms, 1)
        np.add.at(self.wins_, arms, rewards.astype(np.int64))
        return self

    def update(self, arm, hit):
        self._check_state()
        arm = check_arm(arm, self.n_arms)
        self.pulls_[arm] += 1
        self.wins_[arm] += bool(hit)
        return self

    @property
    def losses_(self):
        check_is_fitted(self, "pulls_")
        return self.pulls_ - self.wins_

    def _tie_uniform(self, u):
        return self._rng.random() if u is None else u
