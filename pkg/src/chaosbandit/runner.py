"""Monte Carlo engine: many independent cycles advanced in lockstep.

Every cycle owns four random streams derived from
``(master_seed, policy, n_arms, cycle)`` (see :func:`cycle_streams`):

* field   - initial pixel states, jitter factors and, for the uniform-noise
            ablation, the noise intensities (blocks of ``BLOCK`` plays)
* env     - one uniform per play for the Bernoulli outcome
* tie     - one uniform per play for exact-tie resolution
* sampler - Thompson posterior draws

Block draws are consumed in a fixed schedule, so a cycle's trace does not
depend on which other cycles share its batch or on the thread count. Only
the macro-pixels hosting arms are iterated: pixels never couple, so the
unused ones cannot influence a decision.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bandit_env import POLICY_IDS, cycle_seed
from .baselines import ucb1tuned_index
from .chaos_field import GridGeometry, init_field, step_map
from .metrics import RunTrace, cdr_curve, fit_power_law, plays_to_threshold, regret_curve
from .tow import tow_biases
from ._validation import argmax_random_tiebreak

BLOCK = 256


def cycle_streams(config, policy, n_arms, cycle):
    """``(field, env, tie, sampler)`` generators of one cycle."""
    children = cycle_seed(config.master_seed, policy, n_arms, cycle).spawn(4)
    if config.tie_break_seed is not None:
        children[2] = np.random.SeedSequence(
            config.tie_break_seed, spawn_key=(POLICY_IDS[policy], int(n_arms), int(cycle))
        )
    return tuple(np.random.Generator(np.random.PCG64(s)) for s in children)


class CycleBatch:
    """Resumable lockstep simulation of a set of cycles for one (policy, N)."""

    def __init__(self, config, policy, n_arms, cycles):
        self.config = config
        self.policy = policy
        self.n_arms = n_arms
        self.cycles = list(cycles)
        self.probabilities = np.asarray(config.probabilities_for(n_arms))
        streams = [cycle_streams(config, policy, n_arms, c) for c in self.cycles]
        self._field_rng, self._env_rng, self._tie_rng, self._sampler_rng = (
            list(s) for s in zip(*streams)
        ) if streams else ([], [], [], [])
        shape = (len(self.cycles), n_arms)
        self.wins = np.zeros(shape)
        self.losses = np.zeros(shape)
        self.t = 0
        self._pos = BLOCK
        self.overrides = {}
        if policy == "tow-chaos":
            self._init_field()

    def _init_field(self):
        cfg = self.config
        geometry = GridGeometry(cfg.grid, self.n_arms)
        fields = [
            init_field(geometry, cfg.map_params, seed=rng, jitter=cfg.jitter, mode=cfg.mode)
            for rng in self._field_rng
        ]
        self.state = np.array([f.intensities() for f in fields]).reshape(len(fields), self.n_arms)
        if cfg.jitter is not None:
            self.overrides = {
                name: np.array([f.pixel_params[name].reshape(-1)[: self.n_arms] for f in fields])
                for name in ("a", "b", "f")
            }

    def _refill(self):
        self._env = np.array([g.random(BLOCK) for g in self._env_rng]).reshape(-1, BLOCK)
        self._tie = np.array([g.random(BLOCK) for g in self._tie_rng]).reshape(-1, BLOCK)
        if self.policy == "tow-uniform-noise":
            self._noise = np.array(
                [g.integers(0, 256, size=(BLOCK, self.n_arms), dtype=np.uint8)
                 for g in self._field_rng]
            ).reshape(-1, BLOCK, self.n_arms)
        self._pos = 0

    def _select(self, tie):
        cfg = self.config
        if self.policy == "tow-chaos":
            self.state = step_map(self.state, cfg.map_params, cfg.mode, **self.overrides)
            score = self.state + cfg.k * tow_biases(self.wins, self.losses)
        elif self.policy == "tow-uniform-noise":
            noise = self._noise[:, self._pos, :].astype(float)
            score = noise + cfg.k * tow_biases(self.wins, self.losses)
        elif self.policy == "thompson":
            # same draws as thompson_sample: Gamma(W+1) then Gamma(L+1) in one call
            shapes = np.concatenate([self.wins + 1.0, self.losses + 1.0], axis=1)
            g = np.array([rng.standard_gamma(shapes[i]) for i, rng in
                          enumerate(self._sampler_rng)]).reshape(shapes.shape)
            x, y = g[:, : self.n_arms], g[:, self.n_arms:]
            score = x / (x + y)
        else:
            pulls = self.wins + self.losses
            unplayed = pulls == 0
            if unplayed.any():
                # the round-robin phase is identical across cycles
                return np.argmax(unplayed, axis=1)
            mean = self.wins / pulls
            score = ucb1tuned_index(mean, mean, pulls, self.t)
        return argmax_random_tiebreak(score, tie)

    def advance(self, plays):
        """Run ``plays`` more plays; returns (arms, hits) arrays of shape (cycles, plays)."""
        b = len(self.cycles)
        arms = np.empty((b, plays), dtype=np.int64)
        hits = np.empty((b, plays), dtype=bool)
        rows = np.arange(b)
        for j in range(plays):
            if self._pos == BLOCK:
                self._refill()
            arm = self._select(self._tie[:, self._pos])
            hit = self._env[:, self._pos] < self.probabilities[arm]
            self.wins[rows, arm] += hit
            self.losses[rows, arm] += ~hit
            arms[:, j] = arm
            hits[:, j] = hit
            self._pos += 1
            self.t += 1
        return arms, hits


def _chunks(items, n):
    items = list(items)
    n = max(1, min(n, len(items)))
    size, extra = divmod(len(items), n)
    out, start = [], 0
    for i in range(n):
        stop = start + size + (i < extra)
        out.append(items[start:stop])
        start = stop
    return out


class CycleSet:
    """All cycles of one (policy, N), split over ``config.threads`` batches."""

    def __init__(self, config, policy, n_arms, cycles=None):
        cycles = range(config.cycles) if cycles is None else cycles
        self.batches = [CycleBatch(config, policy, n_arms, c)
                        for c in _chunks(cycles, config.threads)]
        self.threads = config.threads
        self._arms, self._hits = [], []

    def advance(self, plays):
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                parts = list(pool.map(lambda batch: batch.advance(plays), self.batches))
        else:
            parts = [batch.advance(plays) for batch in self.batches]
        self._arms.append(np.concatenate([p[0] for p in parts]))
        self._hits.append(np.concatenate([p[1] for p in parts]))

    def traces(self):
        cycles = [c for batch in self.batches for c in batch.cycles]
        if self._arms:
            arms = np.concatenate(self._arms, axis=1)
            hits = np.concatenate(self._hits, axis=1)
        else:
            arms = np.empty((len(cycles), 0), dtype=np.int64)
            hits = np.empty((len(cycles), 0), dtype=bool)
        return [RunTrace(c, arms[i], hits[i]) for i, c in enumerate(cycles)]


def run_cycles(config, policy=None, n_arms=None, plays=None, cycles=None):
    """Traces of the requested cycles (all of ``config.cycles`` by default)."""
    policy = config.policy if policy is None else policy
    n_arms = config.arms[0] if n_arms is None else n_arms
    plays = config.plays_for(n_arms) if plays is None else plays
    cs = CycleSet(config, policy, n_arms, cycles)
    cs.advance(plays)
    return cs.traces()


def run_episode(config, cycle, policy=None, n_arms=None, plays=None):
    """Trace of a single cycle; identical to that cycle inside any larger run."""
    return run_cycles(config.replace(threads=1), policy, n_arms, plays, [cycle])[0]


@dataclass
class PairResult:
    policy: str
    n_arms: int
    plays: int
    cdr: np.ndarray
    regret: np.ndarray
    plays_to_threshold: int = None
    regret_at_play: float = None


def run_pair(config, policy, n_arms):
    """Simulate all cycles of (policy, N) and reduce them to curves.

    With the automatic budget, play continues in whole-budget extensions
    until the CDR crosses the threshold (at most ``max_extensions`` times).
    The crossing is only counted after the first N plays.
    """
    probabilities = config.probabilities_for(n_arms)
    best = int(np.argmax(probabilities))
    budget = config.plays_for(n_arms)
    cs = CycleSet(config, policy, n_arms)
    cs.advance(budget)
    extensions = 0
    while True:
        traces = cs.traces()
        cdr = cdr_curve(traces, best)
        ptt = (plays_to_threshold(cdr, config.threshold, start=n_arms + 1)
               if cdr.size > n_arms else None)
        if ptt is not None or config.plays is not None or extensions >= config.max_extensions:
            break
        cs.advance(budget)
        extensions += 1
    regret = regret_curve(traces, probabilities)
    at = float(regret[config.regret_play - 1]) if regret.size >= config.regret_play else None
    return PairResult(policy, n_arms, cdr.size, cdr, regret, ptt, at)


@dataclass
class BenchmarkResult:
    config: object
    pairs: list
    scaling_fits: dict
    regret_fits: dict


def fit_results(pairs):
    """Power-law fits of plays-to-threshold and of regret at the fixed play, per policy."""
    scaling, regret = {}, {}
    for policy in dict.fromkeys(p.policy for p in pairs):
        rows = [p for p in pairs if p.policy == policy]
        pts = [(p.n_arms, p.plays_to_threshold) for p in rows if p.plays_to_threshold]
        if len({n for n, _ in pts}) >= 2:
            scaling[policy] = fit_power_law(pts)
        pts = [(p.n_arms, p.regret_at_play) for p in rows if p.regret_at_play]
        if len({n for n, _ in pts}) >= 2:
            regret[policy] = fit_power_law(pts)
    return scaling, regret


def run_benchmark(config, policies=None, progress=None):
    """Every (policy, N) pair of the sweep, in order, plus the fits."""
    policies = (config.policy,) if policies is None else tuple(policies)
    pairs = []
    for policy in policies:
        for n in config.arms:
            pairs.append(run_pair(config, policy, n))
            if progress:
                progress(pairs[-1])
    scaling, regret = fit_results(pairs)
    return BenchmarkResult(config, pairs, scaling, regret)
