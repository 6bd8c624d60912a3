"""Monte Carlo harness: replicas keyed by (size, index), CSV rows, JSON summary.

Config document (JSON)::

    {
      "kind": "radius" | "profile" | "looptree" | "snake",
      "sizes": [5000, 20000],        # faces, looptree vertices, or snake grid
      "replicas": 2000,
      "seed": 20141,
      "rescale": 0.888...,           # a in (a n)^(1/4); default 8/9
      "output": "radius.csv",        # optional; summary goes to <output>.summary.json
      "summary": "radius.json",      # optional explicit summary path
      "alpha": 1.5, "k_max": 10000,  # looptree only
      "profile_kind": "vertex",      # profile only: "vertex" or "edge"
      "radius_method": "labels",     # radius only: "labels" or "bfs"
      "snake_method": "sequential",  # snake/oracle labels: "sequential" or "cholesky"
      "oracle": {"grid": 2000, "replicas": 2000}   # optional snake-width oracle
    }
"""

import csv
import io
import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from randmaps import __version__
from randmaps.cvs import tree_to_quad
from randmaps.looptree import build_looptree, loop_diameter
from randmaps.seeding import KIND_TAGS, replica_rng
from randmaps.snake import ise_summary, sample_snake, snake_widths
from randmaps.stats import ks_distance, ks_two_sample, mixture, rescale_profile
from randmaps.tree import heavy_tail_offspring, sample_gw_conditioned, sample_labeled_tree

CSV_HEADER = ("kind", "n", "replica", "statistic", "value")
BROWNIAN_MAP_RESCALE = 8.0 / 9.0

CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["kind", "sizes", "replicas", "seed"],
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["profile", "radius", "looptree", "snake"]},
        "sizes": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
        "replicas": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "rescale": {"type": "number", "exclusiveMinimum": 0},
        "output": {"type": "string"},
        "summary": {"type": "string"},
        "alpha": {"type": "number", "exclusiveMinimum": 1, "exclusiveMaximum": 2},
        "k_max": {"type": "integer", "minimum": 2},
        "profile_kind": {"enum": ["vertex", "edge"]},
        "radius_method": {"enum": ["labels", "bfs"]},
        "snake_method": {"enum": ["cholesky", "sequential"]},
        "oracle": {
            "type": "object",
            "required": ["grid", "replicas"],
            "additionalProperties": False,
            "properties": {
                "grid": {"type": "integer", "minimum": 2},
                "replicas": {"type": "integer", "minimum": 1},
            },
        },
    },
}


class ConfigError(ValueError):
    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass
class ExperimentConfig:
    kind: str
    sizes: list
    replicas: int
    seed: int
    rescale: float = BROWNIAN_MAP_RESCALE
    output: str = None
    summary: str = None
    alpha: float = 1.5
    k_max: int = 10**4
    profile_kind: str = "vertex"
    radius_method: str = "labels"
    snake_method: str = "sequential"
    oracle: dict = None

    def __post_init__(self):
        validate_config(self.to_dict())

    @classmethod
    def from_dict(cls, doc):
        validate_config(doc)
        return cls(**doc)

    def to_dict(self):
        doc = {k: v for k, v in self.__dict__.items() if v is not None}
        return doc

    @property
    def summary_path(self):
        if self.summary:
            return self.summary
        if self.output:
            return os.path.splitext(self.output)[0] + ".summary.json"
        return None


def validate_config(doc):
    validator = jsonschema.Draft7Validator(CONFIG_SCHEMA)
    problems = [f"/{'/'.join(map(str, err.absolute_path))}: {err.message}"
                for err in sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))]
    if problems:
        raise ConfigError(problems)


def load_config(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"/: invalid JSON ({exc})"]) from exc
    return ExperimentConfig.from_dict(doc)


# -------------------------------------------------------------- replicas

def _radius(cfg, n, i):
    rng = replica_rng(cfg.seed, KIND_TAGS["radius"], n, i)
    lt = sample_labeled_tree(n, rng)
    if cfg.radius_method == "bfs":
        q = tree_to_quad(lt, int(rng.integers(2)))
        radius = int(q.bfs_distances(q.pointed_vertex).max())
    else:
        # max distance to the pointed vertex, by the label identity
        radius = int(lt.label.max() - lt.label.min() + 1)
    return [("radius", radius / (cfg.rescale * n) ** 0.25)]


def _profile(cfg, n, i):
    rng = replica_rng(cfg.seed, KIND_TAGS["profile"], n, i)
    q = tree_to_quad(sample_labeled_tree(n, rng), int(rng.integers(2)))
    mu = rescale_profile(q.distance_profile(cfg.profile_kind), cfg.rescale, n=n).shift_nonnegative()
    return [("sup", mu.sup), ("mean", mu.mean())], mu


def _looptree(cfg, n, i, offspring):
    rng = replica_rng(cfg.seed, KIND_TAGS["looptree"], n, i)
    tau = sample_gw_conditioned(offspring, n, rng)
    return [("diameter", n ** (-1.0 / cfg.alpha) * loop_diameter(build_looptree(tau)))]


def _snake(cfg, m, i):
    rng = replica_rng(cfg.seed, KIND_TAGS["snake"], m, i)
    s = ise_summary(sample_snake(m, rng, cfg.snake_method))
    return [("width", s.width), ("sup", s.sup), ("inf", s.inf)]


class ReplicaError(RuntimeError):
    def __init__(self, n, replica, exc):
        super().__init__(f"replica {replica} at size {n} failed: {exc!r}")
        self.n, self.replica = n, replica


def _threads():
    try:
        return max(1, int(os.environ.get("RANDMAPS_THREADS", "1")))
    except ValueError:
        return 1


def _run_keys(func, keys):
    def guarded(key):
        try:
            return func(*key)
        except Exception as exc:  # re-raised with its replica key
            raise ReplicaError(key[0], key[1], exc) from exc

    threads = _threads()
    if threads == 1:
        return [guarded(k) for k in keys]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(guarded, keys))


@dataclass
class ExperimentResult:
    rows: list
    summary: dict
    measures: dict = field(default_factory=dict)

    def values(self, n, statistic):
        return np.array([r[4] for r in self.rows if r[1] == n and r[3] == statistic])

    def to_csv(self):
        return results_csv(self.rows)


def results_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for kind, n, i, stat, value in rows:
        w.writerow([kind, n, i, stat, repr(float(value))])
    return buf.getvalue()


def run_experiment(cfg):
    keys = [(n, i) for n in cfg.sizes for i in range(cfg.replicas)]
    measures = {}
    if cfg.kind == "radius":
        out = _run_keys(lambda n, i: _radius(cfg, n, i), keys)
    elif cfg.kind == "profile":
        pairs = _run_keys(lambda n, i: _profile(cfg, n, i), keys)
        out = [p[0] for p in pairs]
        for (n, _), (_, mu) in zip(keys, pairs):
            measures.setdefault(n, []).append(mu)
    elif cfg.kind == "looptree":
        offspring = heavy_tail_offspring(cfg.alpha, cfg.k_max)
        out = _run_keys(lambda n, i: _looptree(cfg, n, i, offspring), keys)
    else:
        out = _run_keys(lambda n, i: _snake(cfg, n, i), keys)
    rows = [(cfg.kind, n, i, stat, float(val))
            for (n, i), stats in zip(keys, out) for stat, val in stats]
    result = ExperimentResult(rows, {}, measures)
    result.summary = _summarise(cfg, result)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(result.to_csv())
    if cfg.summary_path:
        with open(cfg.summary_path, "w") as fh:
            json.dump(result.summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result


MAIN_STATISTIC = {"radius": "radius", "profile": "sup", "looptree": "diameter", "snake": "width"}


def _summarise(cfg, result):
    stat = MAIN_STATISTIC[cfg.kind]
    summary = {
        "version": __version__,
        "config": cfg.to_dict(),
        "statistic": stat,
        "mean": {str(n): float(result.values(n, stat).mean()) for n in cfg.sizes},
        "ks_between_sizes": {
            f"{a}-{b}": ks_two_sample(result.values(a, stat), result.values(b, stat))
            for a, b in itertools.combinations(cfg.sizes, 2)
        },
    }
    if result.measures:
        mean_measures = {n: mixture(ms) for n, ms in result.measures.items()}
        summary["ks_mean_measure_between_sizes"] = {
            f"{a}-{b}": ks_distance(mean_measures[a], mean_measures[b])
            for a, b in itertools.combinations(cfg.sizes, 2)
        }
    if cfg.oracle and cfg.kind in ("radius", "profile"):
        widths = snake_widths(cfg.oracle["grid"], cfg.oracle["replicas"], cfg.seed, cfg.snake_method)
        summary["oracle"] = {"grid": cfg.oracle["grid"], "replicas": cfg.oracle["replicas"],
                             "mean_width": float(widths.mean())}
        summary["ks_vs_oracle"] = {str(n): ks_two_sample(result.values(n, stat), widths)
                                   for n in cfg.sizes}
    return summary
