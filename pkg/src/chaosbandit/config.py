"""Experiment configuration and the flat ``key = value`` config-file format.

One key per line, ``#`` starts a comment, blank lines are ignored. Keys are
the field names of :class:`ExperimentConfig` (dashes and underscores are
interchangeable). List values are comma separated; ``arms`` also accepts a
power-of-two range such as ``8..512``. Example::

    # scaling sweep
    policy = tow-chaos
    arms = 8..512
    cycles = 100
    master_seed = 7
    beta = 3.2
"""

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .bandit_env import POLICY_IDS, standard_probabilities
from .chaos_field import MODES, MapParams
from ._validation import check_positive_int, check_probabilities

DEFAULT_ARMS = (8, 16, 32, 64, 128, 256, 512)
#: plays-to-0.95 power law measured on the optoelectronic hardware
REFERENCE_FIT = (30.0, 0.86)
CHAOS_POLICIES = ("tow-chaos",)


@dataclass
class ExperimentConfig:
    policy: str = "tow-chaos"
    policies: tuple = ("tow-chaos", "thompson", "ucb1tuned")
    arms: tuple = DEFAULT_ARMS
    #: fixed play count per N; None selects the automatic budget
    plays: int = None
    budget_factor: float = 4.0
    #: automatic budgets grow by whole budgets until the threshold is crossed, up to this many
    max_extensions: int = 8
    cycles: int = 100
    master_seed: int = 0
    k: float = 15.0
    grid: int = 32
    mode: str = "continuous"
    a: float = 101.0
    b: float = 104.0
    f: float = 1.0 / 201.0
    beta: float = 3.2
    alpha: float = 201.0
    phi: float = 23.0
    jitter: float = None
    probabilities: tuple = None
    tie_break_seed: int = None
    threshold: float = 0.95
    regret_play: int = 6000
    threads: int = 1
    out: str = "results"
    plot_data: bool = False

    def __post_init__(self):
        self.arms = tuple(int(n) for n in self.arms)
        self.policies = tuple(self.policies)
        for p in (self.policy,) + self.policies:
            if p not in POLICY_IDS:
                raise ValueError(f"unknown policy {p!r}; expected one of {sorted(POLICY_IDS)}")
        if not self.arms:
            raise ValueError("arms must list at least one arm count")
        for n in self.arms:
            if n < 2:
                raise ValueError(f"every arm count must be >= 2, got {n}")
        check_positive_int(self.cycles, "cycles")
        check_positive_int(self.grid, "grid")
        check_positive_int(self.threads, "threads")
        check_positive_int(self.master_seed, "master_seed", allow_zero=True)
        check_positive_int(self.regret_play, "regret_play")
        check_positive_int(self.max_extensions, "max_extensions", allow_zero=True)
        if self.plays is not None:
            check_positive_int(self.plays, "plays", allow_zero=True)
        if not self.budget_factor > 0:
            raise ValueError(f"budget_factor must be > 0, got {self.budget_factor}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.jitter is not None and not self.jitter >= 0:
            raise ValueError(f"jitter spread must be >= 0, got {self.jitter}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        if any(p in CHAOS_POLICIES for p in (self.policy,) + self.policies):
            too_big = [n for n in self.arms if n > self.grid**2]
            if too_big:
                raise ValueError(
                    f"arms {too_big} exceed the {self.grid}x{self.grid} grid; raise `grid`"
                )
        if self.probabilities is not None:
            self.probabilities = tuple(check_probabilities(self.probabilities).tolist())
            if set(self.arms) != {len(self.probabilities)}:
                raise ValueError("explicit probabilities require arms to equal their length")
        else:
            for n in self.arms:
                standard_probabilities(n)
        self.map_params  # validates a, b, f, beta, alpha

    @property
    def map_params(self):
        return MapParams(self.a, self.b, self.f, self.beta, self.alpha, self.phi)

    def probabilities_for(self, n_arms):
        if self.probabilities is not None:
            return list(self.probabilities)
        return standard_probabilities(n_arms).tolist()

    def plays_for(self, n_arms):
        """Initial play budget for ``n_arms``: fixed, or a multiple of the reference fit."""
        if self.plays is not None:
            return self.plays
        c, e = REFERENCE_FIT
        return max(math.ceil(self.budget_factor * c * n_arms**e), self.regret_play)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["arms"] = list(self.arms)
        d["policies"] = list(self.policies)
        if self.probabilities is not None:
            d["probabilities"] = list(self.probabilities)
        return d


def _parse_arms(text):
    text = text.strip()
    if ".." in text:
        lo, hi = (int(x) for x in text.split(".."))
        if lo < 1 or hi < lo:
            raise ValueError(f"bad arms range {text!r}")
        out, n = [], lo
        while n <= hi:
            out.append(n)
            n *= 2
        return tuple(out)
    return tuple(int(x) for x in text.split(",") if x.strip())


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_FLOATS = {"budget_factor", "k", "a", "b", "alpha", "beta", "phi", "jitter", "threshold"}
_INTS = {"plays", "max_extensions", "cycles", "master_seed", "grid", "tie_break_seed",
         "regret_play", "threads"}


def parse_value(key, text):
    """Convert the string ``text`` for config field ``key``."""
    text = text.strip()
    if text.lower() in ("none", "") and key in {"plays", "jitter", "probabilities", "tie_break_seed"}:
        return None
    if key == "arms":
        return _parse_arms(text)
    if key == "policies":
        return tuple(x.strip() for x in text.split(",") if x.strip())
    if key == "probabilities":
        return tuple(float(x) for x in text.split(",") if x.strip())
    if key == "f":
        # allow "1/201"
        if "/" in text:
            num, den = text.split("/")
            return float(num) / float(den)
        return float(text)
    if key in _FLOATS:
        return float(text)
    if key in _INTS:
        return int(text)
    if key == "plot_data":
        return _parse_bool(text)
    return text


def normalize_key(key):
    key = key.strip().replace("-", "_")
    return {"seed": "master_seed", "m": "grid"}.get(key, key)


def read_config_file(path):
    """Parse a ``key = value`` file into a dict of typed overrides."""
    names = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, value = line.split("=", 1)
        key = normalize_key(key)
        if key not in names:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = parse_value(key, value)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return values
