"""Sinusoidal (Ikeda-type) feedback map on a grid of independent macro-pixels.

Each macro-pixel carries an 8-bit intensity that is fed back through

    x(t+1) = a * cos(2*pi * f * beta * x(t)) + b

which is the composition of the camera response ``a*cos(2*pi*f*s) + b`` with
the phase-compensated feedback ``(beta * x) mod alpha``. When ``f = 1/alpha``
the modulo drops out. Pixels never interact.

Two evaluation modes are supported:

``"quantized"``
    real-valued evaluation, then round half away from zero and clamp to
    [0, 255] (the camera and modulator are integer devices).
``"continuous"``
    plain float64 evaluation. Required for Lyapunov exponents and
    bifurcation diagrams, since quantized orbits are eventually periodic.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from ._validation import check_positive_int

MODES = ("quantized", "continuous")
LEVELS = 255
#: floor applied to |g'(x)| in the Lyapunov sum, so ln(0) becomes ln(1e-12)
DERIVATIVE_FLOOR = 1e-12


@dataclass(frozen=True)
class MapParams:
    """Parameters of the camera/modulator feedback map.

    Defaults are the values fitted to the experimental map at macro-pixel
    (4, 4): a=101, b=104, f=1/201 (so alpha=201), beta=3.2, phi=23.
    ``phi`` is the modulator phase offset; it is compensated before feedback
    and therefore never enters the simulated map.
    """

    a: float = 101.0
    b: float = 104.0
    f: float = 1.0 / 201.0
    beta: float = 3.2
    alpha: float = 201.0
    phi: float = 23.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"amplitude a must be > 0, got {self.a}")
        if self.b - self.a < 0 or self.b + self.a > LEVELS:
            raise ValueError(
                f"a={self.a}, b={self.b} leave the 8-bit range: need b-a >= 0 and b+a <= 255"
            )
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not np.isclose(self.f * self.alpha, 1.0, rtol=1e-9, atol=0.0):
            raise ValueError(f"f must equal 1/alpha (f={self.f}, alpha={self.alpha})")

    def with_beta(self, beta):
        return replace(self, beta=float(beta))

    @property
    def output_range(self):
        return self.b - self.a, self.b + self.a


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def quantize(x):
    """Round half away from zero and clamp to the 8-bit range."""
    x = np.asarray(x, dtype=float)
    r = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(r, 0, LEVELS)


def camera_response(s_slm, params=MapParams(), mode="quantized", *, a=None, b=None, f=None):
    """Camera intensity for a phase-compensated modulator level ``s_slm``.

    ``a``, ``b`` and ``f`` override the corresponding ``params`` fields and may
    be arrays (per-pixel parameters).
    """
    _check_mode(mode)
    a = params.a if a is None else a
    b = params.b if b is None else b
    f = params.f if f is None else f
    out = a * np.cos(2.0 * np.pi * f * np.asarray(s_slm, dtype=float)) + b
    return quantize(out) if mode == "quantized" else out


def feedback_signal(s_cam, params=MapParams(), mode="quantized"):
    """Modulator drive ``(beta * s_cam) mod alpha``; quantized mode rounds into [0, alpha)."""
    _check_mode(mode)
    out = np.mod(params.beta * np.asarray(s_cam, dtype=float), params.alpha)
    if mode == "quantized":
        out = np.mod(np.sign(out) * np.floor(np.abs(out) + 0.5), params.alpha)
    return out


def step_map(s, params=MapParams(), mode="quantized", *, a=None, b=None, f=None):
    """One iteration of the feedback map (the modulo is dropped since f = 1/alpha)."""
    _check_mode(mode)
    a = params.a if a is None else a
    b = params.b if b is None else b
    f = params.f if f is None else f
    out = a * np.cos(2.0 * np.pi * f * params.beta * np.asarray(s, dtype=float)) + b
    return quantize(out) if mode == "quantized" else out


def map_derivative(x, params=MapParams()):
    """Slope g'(x) = -2*pi*f*beta*a*sin(2*pi*f*beta*x) of the continuous map."""
    w = 2.0 * np.pi * params.f * params.beta
    return -w * params.a * np.sin(w * np.asarray(x, dtype=float))


def fixed_points(params=MapParams(), resolution=4096):
    """All solutions of g(x) = x on [b-a, b+a], refined by Brent's method."""
    from scipy.optimize import brentq

    lo, hi = params.output_range
    xs = np.linspace(lo, hi, resolution)
    h = step_map(xs, params, "continuous") - xs
    roots = []
    for i in np.nonzero(np.sign(h[:-1]) * np.sign(h[1:]) <= 0)[0]:
        if h[i] == 0.0:
            roots.append(xs[i])
        elif h[i + 1] != 0.0:
            roots.append(brentq(lambda x: step_map(x, params, "continuous") - x, xs[i], xs[i + 1]))
    return np.unique(np.round(roots, 9))


def orbit(x0, n, params=MapParams(), mode="continuous", transient=0):
    """Iterate the map from ``x0`` and return ``n`` states after ``transient`` steps."""
    n = check_positive_int(n, "n", allow_zero=True)
    transient = check_positive_int(transient, "transient", allow_zero=True)
    x = np.asarray(x0, dtype=float)
    for _ in range(transient):
        x = step_map(x, params, mode)
    out = np.empty((n,) + x.shape)
    for t in range(n):
        x = step_map(x, params, mode)
        out[t] = x
    return out


@dataclass(frozen=True)
class GridGeometry:
    """``m`` x ``m`` macro-pixels, the first ``n_arms`` of which (row-major) are arms.

    Macro-pixel (r, s), 1-based, hosts arm i = (r-1)*m + s.
    """

    m: int
    n_arms: int

    def __post_init__(self):
        check_positive_int(self.m, "m")
        check_positive_int(self.n_arms, "n_arms", allow_zero=True)
        if self.n_arms > self.m * self.m:
            raise ValueError(f"{self.n_arms} arms do not fit on a {self.m}x{self.m} grid")

    @property
    def n_pixels(self):
        return self.m * self.m

    def arm_index(self, r, s):
        if not (1 <= r <= self.m and 1 <= s <= self.m):
            raise ValueError(f"macro-pixel ({r}, {s}) outside a {self.m}x{self.m} grid")
        return (r - 1) * self.m + s

    def pixel(self, i):
        if not 1 <= i <= self.n_pixels:
            raise ValueError(f"arm {i} outside 1..{self.n_pixels}")
        return (i - 1) // self.m + 1, (i - 1) % self.m + 1


@dataclass
class ChaosField:
    geometry: GridGeometry
    params: MapParams
    state: np.ndarray
    frame: int = 0
    mode: str = "quantized"
    #: per-pixel (a, b, f) arrays of shape (m, m) when jitter is enabled
    pixel_params: dict = field(default=None)

    def intensities(self, n_arms=None):
        """Current intensities of the first ``n_arms`` macro-pixels (row-major)."""
        n = self.geometry.n_arms if n_arms is None else n_arms
        return self.state.reshape(-1)[:n]


def init_field(geometry, params=MapParams(), seed=None, jitter=None, mode="quantized"):
    """Grid with independent uniform 8-bit initial states.

    ``jitter`` is a relative spread ``s >= 0``: each pixel then gets its own
    a, b, f scaled by independent factors drawn uniformly from [1-s, 1+s],
    mimicking imperfectly aligned macro-pixels.
    """
    _check_mode(mode)
    if jitter is not None and not jitter >= 0:
        raise ValueError(f"jitter spread must be >= 0, got {jitter}")
    rng = np.random.default_rng(seed)
    shape = (geometry.m, geometry.m)
    state = rng.integers(0, LEVELS + 1, size=shape).astype(float)
    pixel_params = None
    if jitter is not None:
        pixel_params = {
            name: getattr(params, name) * (1.0 + jitter * rng.uniform(-1.0, 1.0, size=shape))
            for name in ("a", "b", "f")
        }
    return ChaosField(geometry, params, state, 0, mode, pixel_params)


def step_field(chaos):
    """Advance every pixel by one frame. Returns a new field."""
    overrides = chaos.pixel_params or {}
    state = step_map(chaos.state, chaos.params, chaos.mode, **overrides)
    return replace(chaos, state=state, frame=chaos.frame + 1)


def amplitude_histogram(waveform, bins=256):
    """Probability of each amplitude bin over [0, 255]. Returns ``(edges, probabilities)``."""
    x = np.asarray(waveform, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("waveform is empty")
    bins = check_positive_int(bins, "bins")
    counts, edges = np.histogram(x, bins=bins, range=(0.0, float(LEVELS)))
    return edges, counts / x.size


def bifurcation_scan(params=MapParams(), beta_range=(0.1, 4.0), beta_steps=400,
                     transient=1000, samples=200, x0=100.0):
    """Attractor samples of the continuous map over a sweep of beta.

    Returns a list of ``(beta, samples)`` pairs, ``samples`` being a 1-d array.
    """
    beta_steps = check_positive_int(beta_steps, "beta_steps")
    transient = check_positive_int(transient, "transient")
    samples = check_positive_int(samples, "samples")
    lo, hi = beta_range
    if not 0 < lo <= hi:
        raise ValueError(f"beta_range must satisfy 0 < lo <= hi, got {beta_range}")
    betas = np.linspace(lo, hi, beta_steps)
    w = 2.0 * np.pi * params.f * betas
    x = np.full_like(betas, float(x0))
    for _ in range(transient):
        x = params.a * np.cos(w * x) + params.b
    out = np.empty((samples, beta_steps))
    for t in range(samples):
        x = params.a * np.cos(w * x) + params.b
        out[t] = x
    return [(float(beta), out[:, j].copy()) for j, beta in enumerate(betas)]


def lyapunov_exponent(params=MapParams(), beta=None, iterations=10_000, transient=1000, x0=100.0):
    """Mean of ln|g'(x_t)| along a continuous orbit, after discarding ``transient`` steps.

    A derivative smaller than ``DERIVATIVE_FLOOR`` in magnitude contributes
    ``ln(DERIVATIVE_FLOOR)`` instead of minus infinity.
    """
    iterations = check_positive_int(iterations, "iterations")
    if iterations < 1000:
        raise ValueError(f"iterations must be >= 1000, got {iterations}")
    transient = check_positive_int(transient, "transient", allow_zero=True)
    p = params if beta is None else params.with_beta(beta)
    w = 2.0 * math.pi * p.f * p.beta
    x = float(x0)
    for _ in range(transient):
        x = p.a * math.cos(w * x) + p.b
    total = 0.0
    for _ in range(iterations):
        total += math.log(max(abs(w * p.a * math.sin(w * x)), DERIVATIVE_FLOOR))
        x = p.a * math.cos(w * x) + p.b
    return total / iterations


class IkedaMap(TransformerMixin, BaseEstimator):
    """Stateless transformer applying ``n_steps`` iterations of the feedback map.

    Exposes the map parameters through ``get_params`` so the map can sit in a
    scikit-learn pipeline or grid search.
    """

    def __init__(self, a=101.0, b=104.0, f=1.0 / 201.0, beta=3.2, alpha=201.0,
                 mode="quantized", n_steps=1):
        self.a = a
        self.b = b
        self.f = f
        self.beta = beta
        self.alpha = alpha
        self.mode = mode
        self.n_steps = n_steps

    def _params(self):
        return MapParams(a=self.a, b=self.b, f=self.f, beta=self.beta, alpha=self.alpha)

    def fit(self, X, y=None):
        check_array(X, ensure_2d=False)
        _check_mode(self.mode)
        self.params_ = self._params()
        return self

    def transform(self, X):
        X = check_array(X, ensure_2d=False, dtype=float)
        p = getattr(self, "params_", None) or self._params()
        for _ in range(check_positive_int(self.n_steps, "n_steps", allow_zero=True)):
            X = step_map(X, p, self.mode)
        return X
