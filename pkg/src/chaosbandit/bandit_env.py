"""Stationary Bernoulli slot machines and the seeding scheme for Monte Carlo cycles."""

import numpy as np

from ._validation import check_arm, check_positive_int, check_probabilities

#: identifiers mixed into every random stream, one per policy
POLICY_IDS = {"tow-chaos": 0, "tow-uniform-noise": 1, "thompson": 2, "ucb1tuned": 3}


def standard_probabilities(n_arms):
    """Hit probabilities 0.7, 0.5, 0.9, 0.1 followed by (0.7, 0.5) pairs.

    Arm index 2 (the third machine) is the unique best arm.
    """
    n_arms = check_positive_int(n_arms, "n_arms")
    if n_arms < 4 or n_arms % 2:
        raise ValueError(
            "the standard pattern (0.7, 0.5, 0.9, 0.1, then 0.7/0.5 pairs) "
            f"needs an even number of arms >= 4, got {n_arms}"
        )
    return np.array([0.7, 0.5, 0.9, 0.1] + [0.7, 0.5] * ((n_arms - 4) // 2))


def cycle_seed(master_seed, policy, n_arms, cycle):
    """Seed sequence for one Monte Carlo cycle.

    The stream is numpy's ``SeedSequence(master_seed, spawn_key=(policy id,
    n_arms, cycle))``, which hashes its inputs into PCG64 state. Distinct
    (policy, n_arms, cycle) triples never share a stream, and the result does
    not depend on which cycles run before it or on which thread.
    """
    if policy not in POLICY_IDS:
        raise ValueError(f"unknown policy {policy!r}; expected one of {sorted(POLICY_IDS)}")
    master_seed = check_positive_int(master_seed, "master_seed", allow_zero=True)
    return np.random.SeedSequence(
        master_seed, spawn_key=(POLICY_IDS[policy], int(n_arms), int(cycle))
    )


class BanditEnv:
    """N Bernoulli arms with fixed hit probabilities.

    Parameters
    ----------
    probabilities : sequence of float
        Hit probability of each arm (0-based indexing).
    random_state : int, SeedSequence or numpy Generator, optional
        Source of the reward draws. Each play consumes exactly one uniform
        double, so a fixed seed and arm sequence reproduce the reward stream.
    """

    def __init__(self, probabilities, random_state=None):
        self.probabilities = check_probabilities(probabilities)
        self.probabilities.setflags(write=False)
        self.rng = np.random.default_rng(random_state)

    @property
    def n_arms(self):
        return self.probabilities.size

    @property
    def best_arm(self):
        return int(np.argmax(self.probabilities))

    @property
    def p_max(self):
        return float(self.probabilities.max())

    def play(self, arm):
        arm = check_arm(arm, self.n_arms)
        return bool(self.rng.random() < self.probabilities[arm])
