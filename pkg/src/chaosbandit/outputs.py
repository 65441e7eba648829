"""CSV / JSON emitters. Floats are printed with 9 significant digits."""

import csv
import json
import subprocess
from pathlib import Path

import numpy as np

from . import __version__


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".9g")
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(format(float(x), ".9g"))
    return x


def version_string():
    """``git describe``-style version: ``v<version>-g<commit>[-dirty]`` when in a checkout."""
    try:
        desc = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--abbrev=7"],
            cwd=Path(__file__).resolve().parent, capture_output=True, text=True, timeout=5,
        )
        if desc.returncode == 0 and desc.stdout.strip():
            return f"v{__version__}-g{desc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return f"v{__version__}"


class OutputSet:
    """Writes a group of files into one directory, all or nothing.

    Used as a context manager: if anything inside the block fails, every
    file written so far is removed and I/O errors are re-raised naming the
    offending path.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.written = []

    def __enter__(self):
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create output directory {self.directory}: {exc}") from exc
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            for path in self.written:
                path.unlink(missing_ok=True)
            self.written.clear()
        return False

    def _open(self, name):
        path = self.directory / name
        self.written.append(path)
        try:
            return path, open(path, "w", newline="")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc

    def write_csv(self, name, header, rows):
        path, fh = self._open(name)
        try:
            with fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                for row in rows:
                    w.writerow([fmt(v) for v in row])
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        return path

    def write_json(self, name, obj):
        path, fh = self._open(name)
        try:
            with fh:
                json.dump(_jsonable(obj), fh, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        return path


def fit_record(policy, fit):
    return {"policy": policy, "c": fit.c, "exponent": fit.exponent,
            "residual": fit.residual, "points": [list(p) for p in fit.points]}


def _curve_rows(pairs, attr):
    for p in pairs:
        for t, v in enumerate(getattr(p, attr), 1):
            yield p.policy, p.n_arms, t, v


def _wide_rows(pairs, attr):
    longest = max((p.plays for p in pairs), default=0)
    for t in range(longest):
        yield [t + 1] + [getattr(p, attr)[t] if t < p.plays else None for p in pairs]


def write_benchmark(result, directory, single_policy=True):
    """Write cdr/regret/scaling CSVs, fit.json and summary.json for a benchmark."""
    pairs = result.pairs
    fits = [fit_record(pol, f) for pol, f in result.scaling_fits.items()]
    cfg = result.config
    with OutputSet(directory) as out:
        out.write_csv("cdr.csv", ["policy", "arms", "play", "cdr"], _curve_rows(pairs, "cdr"))
        out.write_csv("regret.csv", ["policy", "arms", "play", "regret"],
                      _curve_rows(pairs, "regret"))
        out.write_csv("scaling.csv", ["policy", "arms", "plays_to_threshold"],
                      ((p.policy, p.n_arms, p.plays_to_threshold) for p in pairs))
        if single_policy:
            out.write_json("fit.json", fits[0] if fits else {})
        else:
            out.write_json("fit.json", fits)
        if cfg.plot_data:
            cols = [f"{p.policy}:{p.n_arms}" for p in pairs]
            out.write_csv("cdr_wide.csv", ["play"] + cols, _wide_rows(pairs, "cdr"))
            out.write_csv("regret_wide.csv", ["play"] + cols, _wide_rows(pairs, "regret"))
        out.write_json("summary.json", {
            "version": version_string(),
            "config": cfg.to_dict(),
            "results": [
                {"policy": p.policy, "arms": p.n_arms, "plays": p.plays,
                 "plays_to_threshold": p.plays_to_threshold,
                 "final_cdr": float(p.cdr[-1]) if p.plays else None,
                 "regret_at_play": p.regret_at_play}
                for p in pairs
            ],
            "scaling_fits": fits,
            "regret_fits": [fit_record(pol, f) for pol, f in result.regret_fits.items()],
            "regret_play": cfg.regret_play,
        })
    return out.written


def read_scaling_csv(path, policy=None):
    """``(N, plays)`` points from a scaling.csv, skipping rows that never crossed."""
    points, policies = [], set()
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            policies.add(row["policy"])
            if policy is not None and row["policy"] != policy:
                continue
            if row["plays_to_threshold"]:
                points.append((int(row["arms"]), float(row["plays_to_threshold"])))
    if policy is None and len(policies) > 1:
        raise ValueError(f"{path} holds several policies {sorted(policies)}; pick one")
    return points, (policy or next(iter(policies), None))
