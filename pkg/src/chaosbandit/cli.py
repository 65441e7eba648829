"""Command-line entry point: ``chaosbandit {dynamics,run,bench,fit,compare}``."""

import argparse
import json
import logging
import sys
import time

import numpy as np

from .chaos_field import (GridGeometry, amplitude_histogram, bifurcation_scan, init_field,
                          lyapunov_exponent, step_field)
from .config import ExperimentConfig, normalize_key, parse_value, read_config_file
from .metrics import fit_power_law
from .outputs import OutputSet, fit_record, read_scaling_csv, write_benchmark
from .runner import run_benchmark, run_episode

log = logging.getLogger("chaosbandit")

# flag name -> config key
_CONFIG_FLAGS = {
    "seed": "master_seed", "threads": "threads", "out": "out", "policy": "policy",
    "policies": "policies", "arms": "arms", "plays": "plays", "cycles": "cycles",
    "mode": "mode", "k": "k", "grid": "grid", "beta": "beta", "jitter": "jitter",
    "threshold": "threshold", "regret_play": "regret_play",
    "budget_factor": "budget_factor", "probabilities": "probabilities",
    "tie_break_seed": "tie_break_seed",
}


def _add_common(p):
    p.add_argument("--config", help="key = value config file; flags override its entries")
    p.add_argument("--seed", help="master seed (u64)")
    p.add_argument("--threads", help="worker threads; results do not depend on it")
    p.add_argument("--out", help="output directory")
    p.add_argument("--policy", help="tow-chaos, tow-uniform-noise, thompson or ucb1tuned")
    p.add_argument("--policies", help="comma list of policies for compare")
    p.add_argument("--arms", help="comma list or power-of-two range, e.g. 8..512")
    p.add_argument("--plays", help="fixed plays per N (default: automatic budget)")
    p.add_argument("--cycles", help="Monte Carlo cycles per N")
    p.add_argument("--mode", help="quantized or continuous chaos field")
    p.add_argument("--k", help="bias coefficient")
    p.add_argument("--grid", help="macro-pixels per side")
    p.add_argument("--beta", help="feedback coefficient")
    p.add_argument("--jitter", help="relative per-pixel spread of a, b, f")
    p.add_argument("--threshold", help="CDR threshold for plays-to-threshold")
    p.add_argument("--regret-play", help="play at which regret is compared across N")
    p.add_argument("--budget-factor", help="automatic budget as a multiple of 30*N^0.86")
    p.add_argument("--probabilities", help="explicit comma-separated hit probabilities")
    p.add_argument("--tie-break-seed", help="separate seed for tie-break streams")
    p.add_argument("--plot-data", action="store_true", default=None,
                   help="also write wide, ready-to-plot CSVs")


def build_config(args, forced=None, **defaults):
    """Defaults, then the config file, then flags, then ``forced``."""
    values = dict(defaults)
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for flag, key in _CONFIG_FLAGS.items():
        raw = getattr(args, flag, None)
        if raw is not None:
            values[normalize_key(key)] = parse_value(key, raw)
    if getattr(args, "plot_data", None):
        values["plot_data"] = True
    values.update(forced or {})
    return ExperimentConfig(**values)


def cmd_dynamics(args):
    # no decisions are made here, so the arm sweep need not fit on the grid
    cfg = build_config(args, forced={"arms": (4,), "policy": "thompson",
                                     "policies": ("thompson",)},
                       **({"grid": 8} if args.grid is None else {}))
    geometry = GridGeometry(cfg.grid, cfg.grid * cfg.grid)
    field = init_field(geometry, cfg.map_params, seed=cfg.master_seed, jitter=cfg.jitter,
                       mode=cfg.mode)
    frames = [field.state]
    for _ in range(args.frames):
        field = step_field(field)
        frames.append(field.state)
    frames = np.array(frames)
    m = cfg.grid

    def snapshot_rows():
        for t, frame in enumerate(frames):
            for r in range(m):
                for s in range(m):
                    yield t, r + 1, s + 1, frame[r, s]

    edges, prob = amplitude_histogram(frames[1:], bins=args.bins)
    scan = bifurcation_scan(cfg.map_params, (args.beta_min, args.beta_max), args.beta_steps,
                            args.transient, args.samples)
    lyap = [(beta, lyapunov_exponent(cfg.map_params, beta, args.lyapunov_iterations,
                                     args.transient)) for beta, _ in scan]
    with OutputSet(cfg.out) as out:
        out.write_csv("snapshots.csv", ["frame", "row", "col", "intensity"], snapshot_rows())
        out.write_csv("histogram.csv", ["bin_lo", "bin_hi", "probability"],
                      zip(edges[:-1], edges[1:], prob))
        out.write_csv("bifurcation.csv", ["beta", "sample"],
                      ((beta, x) for beta, xs in scan for x in xs))
        out.write_csv("lyapunov.csv", ["beta", "lambda"], lyap)
    print(f"wrote {len(out.written)} files to {cfg.out}")


def cmd_run(args):
    cfg = build_config(args)
    n = cfg.arms[0]
    trace = run_episode(cfg, args.cycle, cfg.policy, n)
    best = int(np.argmax(cfg.probabilities_for(n)))
    with OutputSet(cfg.out) as out:
        out.write_csv("trace.csv", ["play", "arm", "hit"],
                      ((t, a + 1, h) for t, (a, h) in enumerate(zip(trace.arms, trace.hits), 1)))
    tail = trace.arms[-max(1, len(trace) // 10):]
    print(f"{cfg.policy} N={n} cycle={args.cycle}: {len(trace)} plays, "
          f"{int(trace.hits.sum())} hits, best arm {best + 1} chosen in "
          f"{np.mean(tail == best):.3f} of the last {len(tail)} plays")


def _progress(t0):
    def report(p):
        log.info("%s N=%d plays=%d plays_to_threshold=%s (%.0fs)", p.policy, p.n_arms,
                 p.plays, p.plays_to_threshold, time.time() - t0)
    return report


def cmd_bench(args):
    cfg = build_config(args)
    result = run_benchmark(cfg, [cfg.policy], progress=_progress(time.time()))
    write_benchmark(result, cfg.out, single_policy=True)
    fit = result.scaling_fits.get(cfg.policy)
    if fit:
        print(f"{cfg.policy}: plays to CDR {cfg.threshold} ~ {fit.c:.4g} * N^{fit.exponent:.3f}")
    else:
        print(f"{cfg.policy}: fewer than two N values reached CDR {cfg.threshold}")


def cmd_compare(args):
    cfg = build_config(args)
    result = run_benchmark(cfg, cfg.policies, progress=_progress(time.time()))
    write_benchmark(result, cfg.out, single_policy=False)
    n_max = max(cfg.arms)
    rows = []
    for policy in cfg.policies:
        sf = result.scaling_fits.get(policy)
        rf = result.regret_fits.get(policy)
        at_max = next((p.plays_to_threshold for p in result.pairs
                       if p.policy == policy and p.n_arms == n_max), None)
        rows.append((policy, sf.c if sf else None, sf.exponent if sf else None,
                     rf.exponent if rf else None, at_max))
    header = ["policy", "c", "exponent", "regret_exponent", f"plays_at_N{n_max}"]
    with OutputSet(cfg.out) as out:
        out.write_csv("compare.csv", header, rows)
    print("  ".join(f"{h:>16}" for h in header))
    for row in rows:
        print("  ".join(f"{'-' if v is None else (format(v, '.4g') if isinstance(v, float) else v):>16}"
                        for v in row))


def cmd_fit(args):
    points, policy = read_scaling_csv(args.scaling_csv, args.policy)
    fit = fit_power_law(points)
    record = fit_record(policy, fit)
    if args.out:
        with OutputSet(args.out) as out:
            out.write_json("fit.json", record)
    print(json.dumps(record, indent=2))


def make_parser():
    parser = argparse.ArgumentParser(prog="chaosbandit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dynamics", help="field snapshots, histogram, bifurcation, Lyapunov CSVs")
    _add_common(p)
    p.add_argument("--frames", type=int, default=1000)
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--beta-min", type=float, default=0.1)
    p.add_argument("--beta-max", type=float, default=4.0)
    p.add_argument("--beta-steps", type=int, default=400)
    p.add_argument("--transient", type=int, default=1000)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--lyapunov-iterations", type=int, default=5000)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("run", help="one episode with a per-play trace dump")
    _add_common(p)
    p.add_argument("--cycle", type=int, default=0)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="sweep N for one policy")
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("compare", help="sweep N for several policies and tabulate the fits")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("fit", help="power-law fit of a scaling CSV")
    p.add_argument("scaling_csv")
    p.add_argument("--policy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
