"""Acceptance suite. Every test logs one PASS/FAIL line, repeated in the
terminal summary. Criteria 4-7 share one full sweep (N = 8..512, 100 cycles,
three policies), which takes a few minutes on a single core.

Run on its own with ``python tests/test_acceptance.py``.
"""

import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from chaosbandit.chaos_field import (MapParams, amplitude_histogram, fixed_points,
                                     lyapunov_exponent, map_derivative, orbit, step_map)
from chaosbandit.cli import main
from chaosbandit.config import ExperimentConfig
from chaosbandit.metrics import RunTrace, cdr_curve, plays_to_threshold, regret_curve
from chaosbandit.runner import run_benchmark, run_cycles
from chaosbandit.tow import estimates, tow_biases, tow_coefficients

P = MapParams()
SWEEP = (8, 16, 32, 64, 128, 256, 512)


def brute_biases(wins, losses):
    n = len(wins)
    p = [Fraction(w, w + l) if w + l else Fraction(0) for w, l in zip(wins, losses)]
    top = sorted(p, reverse=True)
    omega = top[0] + top[1]
    delta = 2 - omega
    q = [delta * w - omega * l for w, l in zip(wins, losses)]
    return [q[i] - sum(q[j] for j in range(n) if j != i) / (n - 1) for i in range(n)]


@pytest.fixture(scope="module")
def corpus():
    rng = np.random.default_rng(2024)
    states = []
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        states.append((rng.integers(0, 21, n), rng.integers(0, 21, n)))
    return states


def test_c1_biases_match_brute_force(corpus, record):
    t0 = time.perf_counter()
    got = [tow_biases(w, l) for w, l in corpus]
    elapsed = time.perf_counter() - t0
    err = max(np.max(np.abs(g - [float(x) for x in brute_biases(w.tolist(), l.tolist())]))
              for g, (w, l) in zip(got, corpus))
    assert record("C1a biases vs brute force (1000 states)", err <= 1e-9 and elapsed < 1.0,
                  f"max abs err {err:.2e} (tol 1e-9), {elapsed:.2f}s (< 1s)")


def test_c1_zero_sum_and_coefficients(corpus, record):
    zero_sum = max(abs(tow_biases(w, l).sum()) for w, l in corpus)
    coef = max(abs(sum(tow_coefficients(estimates(w, w + l))) - 2.0) for w, l in corpus)
    assert record("C1b sum B = 0 and delta + omega = 2", zero_sum <= 1e-9 and coef <= 1e-9,
                  f"max |sum B| {zero_sum:.1e}, max |delta+omega-2| {coef:.1e} (tol 1e-9)")


def test_c1_quantized_map_matches_high_precision(record):
    s = np.arange(256)
    t0 = time.perf_counter()
    got = step_map(s, P)
    elapsed = time.perf_counter() - t0
    expect = []
    with mpmath.workdps(50):
        for x in range(256):
            y = 101 * mpmath.cos(2 * mpmath.pi * mpmath.mpf("3.2") * x / 201) + 104
            r = int(mpmath.floor(abs(y) + mpmath.mpf("0.5"))) * (1 if y >= 0 else -1)
            expect.append(min(max(r, 0), 255))
    mismatches = int(np.sum(got != np.array(expect)))
    assert record("C1c quantized step_map vs 50-digit oracle", mismatches == 0 and elapsed < 1,
                  f"{mismatches} of 256 differ, {elapsed * 1e3:.2f} ms")


def test_c2_chaos_indicators(record):
    t0 = time.perf_counter()
    roots = fixed_points(P)
    slopes = np.abs(map_derivative(roots, P))
    lam_chaos = lyapunov_exponent(P, 3.2)
    lam_steady = lyapunov_exponent(P, 0.1)
    elapsed = time.perf_counter() - t0
    ok = roots.size > 0 and np.all(slopes > 1) and lam_chaos > 0 and lam_steady < 0
    assert record("C2a |g'| > 1 at crossings, lambda(3.2) > 0, lambda(0.1) < 0",
                  ok and elapsed < 10,
                  f"{roots.size} crossings, min |g'| {slopes.min():.3f}, lambda(3.2) "
                  f"{lam_chaos:.3f}, lambda(0.1) {lam_steady:.3f}, {elapsed:.1f}s")


def test_c2_histogram_double_peak(record):
    w = orbit(100.0, 100_000, P)
    edges, p = amplitude_histogram(w, bins=256)
    lo, hi = P.output_range
    decile = (hi - lo) / 10
    top = np.argsort(p)[-2:]
    centers = np.sort((edges[top] + edges[top + 1]) / 2)
    ok = centers[0] <= lo + decile and centers[1] >= hi - decile
    assert record("C2b two most probable bins in the edge deciles", ok,
                  f"peak bins at {centers[0]:.1f} and {centers[1]:.1f}; deciles "
                  f"[{lo}, {lo + decile:.1f}] and [{hi - decile:.1f}, {hi}]")


def test_c3_n64_reaches_threshold(record):
    t0 = time.perf_counter()
    cfg = ExperimentConfig(arms=(64,), cycles=100)
    cdr = cdr_curve(run_cycles(cfg, "tow-chaos", 64, 2200), 2)
    elapsed = time.perf_counter() - t0
    ptt = plays_to_threshold(cdr, 0.95, start=65)
    assert record("C3 N=64 tow-chaos CDR >= 0.95 within 2200 plays",
                  ptt is not None and elapsed < 30,
                  f"first crossing at play {ptt}, {elapsed:.1f}s (< 30s)")


@pytest.fixture(scope="module")
def sweep():
    cfg = ExperimentConfig(arms=SWEEP, cycles=100, master_seed=0)
    return run_benchmark(cfg, ("tow-chaos", "thompson", "ucb1tuned"))


def _e(fit):
    return "none" if fit is None else f"{fit.exponent:.3f}"


def _ptt(result, policy, n):
    return next(p.plays_to_threshold for p in result.pairs if p.policy == policy
                and p.n_arms == n)


@pytest.mark.slow
def test_c4_tow_scaling(sweep, record):
    fits = sweep.scaling_fits
    tow = fits.get("tow-chaos")
    others = [fits[p].exponent for p in ("thompson", "ucb1tuned") if p in fits]
    crossed = [_ptt(sweep, "tow-chaos", n) for n in SWEEP]
    ok = (tow is not None and None not in crossed and 0.70 <= tow.exponent <= 1.05
          and len(others) == 2 and all(tow.exponent < e for e in others))
    assert record("C4 tow-chaos exponent in [0.70, 1.05] and below both baselines", ok,
                  f"tow {_e(tow)}, thompson {_e(fits.get('thompson'))}, ucb1tuned "
                  f"{_e(fits.get('ucb1tuned'))}; tow plays {crossed}")


@pytest.mark.slow
def test_c5_baseline_scaling(sweep, record):
    th = sweep.scaling_fits.get("thompson")
    ucb = sweep.scaling_fits.get("ucb1tuned")
    ok = (th is not None and ucb is not None and abs(th.exponent - 1.13) <= 0.15
          and abs(ucb.exponent - 1.08) <= 0.15)
    assert record("C5 thompson 1.13 +- 0.15, ucb1tuned 1.08 +- 0.15", ok,
                  f"thompson {_e(th)} over {len(th.points) if th else 0} N, ucb1tuned "
                  f"{_e(ucb)} over {len(ucb.points) if ucb else 0} N")


@pytest.mark.slow
def test_c6_head_to_head_512(sweep, record):
    tow = _ptt(sweep, "tow-chaos", 512)
    ucb = _ptt(sweep, "ucb1tuned", 512)
    ucb_plays = next(p.plays for p in sweep.pairs if p.policy == "ucb1tuned" and p.n_arms == 512)
    # a UCB run that never crosses counts as at least its simulated length
    ucb_bound = ucb if ucb is not None else ucb_plays
    ok = tow is not None and 2 * tow <= ucb_bound
    ratio = f"{ucb_bound / tow:.2f}" if tow else "n/a"
    assert record("C6 N=512 tow-chaos at least 2x faster than ucb1tuned", ok,
                  f"tow {tow}, ucb1tuned {ucb if ucb is not None else f'> {ucb_plays}'}, "
                  f"ratio {ratio}")


@pytest.mark.slow
def test_c7_regret(sweep, record):
    th = sweep.regret_fits.get("thompson")
    tow = sweep.regret_fits.get("tow-chaos")
    monotone = all(np.all(np.diff(p.regret) >= -1e-9) for p in sweep.pairs)
    best = [RunTrace(0, np.full(500, 2), np.ones(500, bool))]
    zero = np.all(regret_curve(best, ExperimentConfig().probabilities_for(8)) == 0)
    ok = (th is not None and tow is not None and abs(th.exponent - 1.11) <= 0.15
          and tow.exponent < th.exponent and monotone and zero)
    assert record("C7 regret exponents: thompson 1.11 +- 0.15, tow-chaos below it", ok,
                  f"thompson {_e(th)}, tow-chaos {_e(tow)} (regret at play "
                  f"{sweep.config.regret_play}); monotone {monotone}, always-best regret 0 {zero}")


def test_c8_thread_count_byte_identical(tmp_path, record):
    args = ["--arms", "8..32", "--cycles", "100", "--seed", "11", "--regret-play", "500"]
    for threads in ("1", "8"):
        assert main(["bench", "--threads", threads, "--out", str(tmp_path / threads)] + args) == 0
    names = ["cdr.csv", "regret.csv", "scaling.csv"]
    same = [(tmp_path / "1" / n).read_bytes() == (tmp_path / "8" / n).read_bytes()
            for n in names]
    assert record("C8 bench CSVs byte-identical at 1 and 8 threads", all(same),
                  ", ".join(f"{n} {'same' if s else 'DIFFERENT'}" for n, s in zip(names, same)))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", "-s"]))
