import numpy as np
import pytest

from chaosbandit.bandit_env import BanditEnv
from chaosbandit.baselines import ThompsonSampling, UCB1Tuned
from chaosbandit.chaos_field import GridGeometry, init_field, step_field
from chaosbandit.config import ExperimentConfig, parse_value, read_config_file
from chaosbandit.runner import (BLOCK, CycleSet, cycle_streams, run_benchmark, run_cycles,
                                run_episode, run_pair)
from chaosbandit.tow import TugOfWar

POLICIES = ("tow-chaos", "tow-uniform-noise", "thompson", "ucb1tuned")


def small(**kw):
    kw.setdefault("arms", (8,))
    return ExperimentConfig(**kw)


def reference_episode(cfg, policy, n, plays, cycle):
    """Plain one-play-at-a-time loop over the public building blocks."""
    field_rng, env_rng, tie_rng, sampler_rng = cycle_streams(cfg, policy, n, cycle)
    env = BanditEnv(cfg.probabilities_for(n), random_state=env_rng)
    if policy.startswith("tow"):
        agent = TugOfWar(n_arms=n, k=cfg.k)
    elif policy == "thompson":
        agent = ThompsonSampling(n_arms=n)
    else:
        agent = UCB1Tuned(n_arms=n)
    if policy == "tow-chaos":
        field = init_field(GridGeometry(cfg.grid, n), cfg.map_params, seed=field_rng,
                           jitter=cfg.jitter, mode=cfg.mode)
    arms, hits = [], []
    for t in range(plays):
        if t % BLOCK == 0:
            # the engine draws its uniforms in blocks; the streams are the same
            env_block = env_rng.random(BLOCK)
            tie_block = tie_rng.random(BLOCK)
            if policy == "tow-uniform-noise":
                noise = field_rng.integers(0, 256, size=(BLOCK, n), dtype=np.uint8)
        u = tie_block[t % BLOCK]
        if policy == "tow-chaos":
            field = step_field(field)
            arm = agent.select(field.intensities(n), u=u)
        elif policy == "tow-uniform-noise":
            arm = agent.select(noise[t % BLOCK].astype(float), u=u)
        elif policy == "thompson":
            arm = agent.select(rng=sampler_rng, u=u)
        else:
            arm = agent.select(u=u)
        hit = bool(env_block[t % BLOCK] < env.probabilities[arm])
        agent.update(arm, hit)
        arms.append(arm)
        hits.append(hit)
    if policy == "tow-chaos":
        assert field.frame == plays
    return np.array(arms, dtype=np.int64), np.array(hits)


def test_bandit_env_stream_matches_block_draws():
    rng_a = np.random.default_rng(3)
    rng_b = np.random.default_rng(3)
    env = BanditEnv([0.5] * 4, random_state=rng_a)
    block = rng_b.random(BLOCK)
    assert [env.play(0) for _ in range(BLOCK)] == (block < 0.5).tolist()


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("mode", ["continuous", "quantized"])
def test_engine_matches_reference_loop(policy, mode):
    cfg = small(grid=4, mode=mode, cycles=3, master_seed=5)
    plays = 300
    traces = run_cycles(cfg, policy, 8, plays)
    for tr in traces:
        arms, hits = reference_episode(cfg, policy, 8, plays, tr.cycle)
        np.testing.assert_array_equal(tr.arms, arms)
        np.testing.assert_array_equal(tr.hits, hits)


def test_engine_matches_reference_loop_with_jitter():
    cfg = small(grid=3, jitter=0.03, cycles=2, master_seed=8)
    for tr in run_cycles(cfg, "tow-chaos", 8, 260):
        arms, hits = reference_episode(cfg, "tow-chaos", 8, 260, tr.cycle)
        np.testing.assert_array_equal(tr.arms, arms)
        np.testing.assert_array_equal(tr.hits, hits)


@pytest.mark.parametrize("policy", POLICIES)
def test_determinism_and_episode_equals_batch_row(policy):
    cfg = small(grid=4, cycles=5, master_seed=1, threads=2)
    a = run_cycles(cfg, policy, 8, 200)
    b = run_cycles(cfg.replace(threads=1), policy, 8, 200)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.arms, y.arms)
        np.testing.assert_array_equal(x.hits, y.hits)
    ep = run_episode(cfg, 3, policy, 8, 200)
    np.testing.assert_array_equal(ep.arms, a[3].arms)
    assert [t.cycle for t in a] == list(range(5))


def test_resuming_equals_one_shot():
    cfg = small(grid=4, cycles=3)
    cs = CycleSet(cfg, "tow-chaos", 8)
    cs.advance(100)
    cs.advance(333)
    one = run_cycles(cfg, "tow-chaos", 8, 433)
    for x, y in zip(cs.traces(), one):
        np.testing.assert_array_equal(x.arms, y.arms)


def test_streams_differ_between_policies_sizes_and_cycles():
    cfg = small(grid=4)
    first = {(p, n, c): cycle_streams(cfg, p, n, c)[1].random()
             for p in POLICIES for n in (8, 16) for c in range(3)}
    assert len(set(first.values())) == len(first)
    other = cfg.replace(master_seed=1)
    assert cycle_streams(other, "thompson", 8, 0)[1].random() != first[("thompson", 8, 0)]


def test_tie_break_seed_only_changes_tie_stream():
    cfg = small(grid=4)
    a = cycle_streams(cfg, "tow-chaos", 8, 0)
    b = cycle_streams(cfg.replace(tie_break_seed=99), "tow-chaos", 8, 0)
    for i in (0, 1, 3):
        assert a[i].random() == b[i].random()
    assert a[2].random() != b[2].random()


def test_zero_plays_gives_empty_trace():
    tr = run_episode(small(grid=4, plays=0), 0, "tow-chaos", 8)
    assert len(tr) == 0


def test_late_selections_concentrate_on_best_arm():
    cfg = small(grid=8, cycles=1)
    for cycle in range(3):
        tr = run_episode(cfg, cycle, "tow-chaos", 64, 3000)
        assert np.mean(tr.arms[-500:] == 2) > 0.95


def test_run_pair_extension_and_start():
    # a tiny budget forces automatic extension until the threshold is crossed
    cfg = small(grid=4, cycles=20, regret_play=50, budget_factor=0.01)
    pair = run_pair(cfg, "tow-chaos", 8)
    assert pair.plays_to_threshold is not None
    assert pair.plays % 50 == 0 and pair.plays >= pair.plays_to_threshold
    assert pair.plays_to_threshold > 8
    assert pair.regret_at_play == pytest.approx(pair.regret[49])


def test_fixed_plays_never_extend():
    cfg = small(grid=4, cycles=4, plays=20)
    pair = run_pair(cfg, "ucb1tuned", 8)
    assert pair.plays == 20 and pair.cdr.size == 20
    # the round-robin turn of the best arm (play 3) is not a crossing
    assert pair.cdr[2] == 1.0
    assert pair.plays_to_threshold is None or pair.plays_to_threshold > 8
    assert pair.regret_at_play is None


def test_single_cycle_benchmark_reduces_to_trace():
    cfg = small(grid=4, cycles=1, plays=150, arms=(8,))
    res = run_benchmark(cfg)
    tr = run_episode(cfg, 0, "tow-chaos", 8)
    pair = res.pairs[0]
    np.testing.assert_array_equal(pair.cdr, (tr.arms == 2).astype(float))
    p = np.array(cfg.probabilities_for(8))
    np.testing.assert_allclose(pair.regret, np.cumsum(0.9 - p[tr.arms]))


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(policy="greedy")
    with pytest.raises(ValueError):
        ExperimentConfig(arms=(8, 64), grid=4)
    ExperimentConfig(arms=(64,), grid=4, policy="thompson", policies=("thompson",))
    with pytest.raises(ValueError):
        ExperimentConfig(arms=(6, 7))
    with pytest.raises(ValueError):
        ExperimentConfig(threshold=1.0)
    with pytest.raises(ValueError):
        ExperimentConfig(mode="binary")
    with pytest.raises(ValueError):
        ExperimentConfig(probabilities=(0.2, 0.4), arms=(8,))
    with pytest.raises(TypeError):
        ExperimentConfig(cycles=1.5)
    with pytest.raises(ValueError):
        ExperimentConfig(cycles=0)
    with pytest.raises(ValueError):
        ExperimentConfig(beta=-1.0)
    cfg = ExperimentConfig(probabilities=(0.2, 0.4, 0.3), arms=(3,), policies=("tow-chaos",))
    assert cfg.probabilities_for(3) == [0.2, 0.4, 0.3]


def test_automatic_budget():
    cfg = ExperimentConfig()
    assert cfg.plays_for(8) == 6000
    assert cfg.plays_for(512) == int(np.ceil(4 * 30 * 512**0.86))
    assert ExperimentConfig(plays=77).plays_for(512) == 77


def test_parse_values():
    assert parse_value("arms", "8..64") == (8, 16, 32, 64)
    assert parse_value("arms", "8, 24") == (8, 24)
    assert parse_value("f", "1/201") == pytest.approx(1 / 201)
    assert parse_value("plays", "none") is None
    assert parse_value("plot_data", "yes") is True
    with pytest.raises(ValueError):
        parse_value("cycles", "many")


def test_read_config_file(tmp_path):
    path = tmp_path / "exp.conf"
    path.write_text("# sweep\npolicy = thompson\narms = 8..32  # three sizes\n\n"
                    "seed = 7\nregret-play = 100\n")
    values = read_config_file(path)
    assert values == {"policy": "thompson", "arms": (8, 16, 32), "master_seed": 7,
                      "regret_play": 100}
    assert ExperimentConfig(**values).master_seed == 7
    path.write_text("policy = thompson\nbogus = 3\n")
    with pytest.raises(ValueError, match=":2:"):
        read_config_file(path)
    path.write_text("just words\n")
    with pytest.raises(ValueError, match=":1:"):
        read_config_file(path)
