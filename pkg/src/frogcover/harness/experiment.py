"""Experiment configuration and seeded trial execution."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from joblib import Parallel, delayed

from .._rng import RandomStream
from ..engine import (DEFAULT_BUDGET, FrogInitSpec, InitDistribution, RunRecord, StopRule,
                      frozen_y_setup, run, self_similar_setup)
from ..oracles import ModelParams
from ..substrate import WalkKind, build_tree

SCHEMA_VERSION = 1
JOBS_ENV = "FROGCOVER_JOBS"
VARIANTS = ("standard", "nonbacktracking", "self_similar", "frozen_y")
CSV_COLUMNS = ("trial", "seed", "d", "n", "mu", "variant", "cover_time", "budget_exhausted",
               "n_returns")


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a batch of trials.

    Variants:
      standard         simple-random-walk frog model on T_d^n, start at the root
      nonbacktracking  same with root-biased nonbacktracking paths
      self_similar     uniform nonbacktracking paths, subtree gate, frozen at leaves
      frozen_y         T_d^{n*}, frogs frozen on moving to y
    """
    d: int = 2
    n: int = 4
    mu: float | None = None
    beta: float | None = None
    variant: str = "standard"
    distribution: str = "poisson"
    horizon: int = 10 ** 7
    stop_on_cover: bool = True
    budget: int = DEFAULT_BUDGET
    observe: str = "root"  # "root", "y" or "none"
    trials: int = 100
    seed: int = 0
    n_jobs: int = field(default_factory=default_jobs)
    output: str | None = None
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {self.schema_version}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.horizon < 0:
            raise ConfigError("horizon must be >= 0")
        if self.mu is None and self.beta is None:
            raise ConfigError("give mu or beta")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if self.observe not in ("root", "y", "none"):
            raise ConfigError("observe must be root, y or none")
        try:
            self.params
            InitDistribution(self.distribution, self.effective_mu)
            build_tree(self.d, self.n)
        except ValueError as e:
            raise ConfigError(str(e)) from e

    @property
    def params(self) -> ModelParams:
        if self.beta is not None:
            p = ModelParams.from_beta(self.d, self.n, self.beta)
            if self.mu is not None and not np.isclose(self.mu, p.mu, rtol=1e-12):
                raise ConfigError("mu inconsistent with beta")
            return p
        return ModelParams(self.d, self.n, self.mu)

    @property
    def effective_mu(self) -> float:
        return self.params.mu

    def build(self) -> tuple[FrogInitSpec, WalkKind, StopRule, int | None]:
        mu = self.effective_mu
        if self.variant == "self_similar":
            spec, rules = self_similar_setup(self.d, self.n, mu)
            spec = dataclasses.replace(spec, distribution=InitDistribution(self.distribution, mu))
            kind = WalkKind.UniformNonbacktracking
        elif self.variant == "frozen_y":
            spec, rules = frozen_y_setup(self.d, self.n, mu, dist=self.distribution)
            kind = WalkKind.SimpleRandomWalk
        else:
            shape = build_tree(self.d, self.n)
            spec = FrogInitSpec(shape, InitDistribution(self.distribution, mu))
            rules = StopRule()
            kind = (WalkKind.SimpleRandomWalk if self.variant == "standard"
                    else WalkKind.RootBiasedNonbacktracking)
        observe = {"root": 0, "y": spec.shape.y, "none": None}[self.observe]
        return spec, kind, rules, observe

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out.pop("n_jobs")
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: dict, **overrides) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        merged = {**data, **{k: v for k, v in overrides.items() if v is not None}}
        if "schema_version" not in data:
            raise ConfigError("config must declare schema_version")
        return cls(**merged)


def _run_one(config: ExperimentConfig, built, index: int, reducer):
    spec, kind, rules, observe = built
    rng = RandomStream(config.seed).child(index)
    rec = run(spec, kind, rules, config.horizon, observe, rng,
              stop_on_cover=config.stop_on_cover, budget=config.budget)
    return reducer(rec) if reducer is not None else rec


def _run_chunk(config, built, indices, reducer):
    return [_run_one(config, built, i, reducer) for i in indices]


def run_trials(config: ExperimentConfig, reducer: Callable[[RunRecord], object] | None = None,
               n_jobs: int | None = None) -> list:
    """Run `config.trials` trials; trial i always uses child stream i of the base seed.

    With a reducer, each record is reduced in the worker and only the
    reduced values are returned (in trial order).
    """
    built = config.build()
    jobs = n_jobs if n_jobs is not None else config.n_jobs
    idx = np.arange(config.trials)
    if jobs <= 1 or config.trials < 2:
        return _run_chunk(config, built, idx, reducer)
    chunks = [c for c in np.array_split(idx, jobs * 4) if c.size]
    parts = Parallel(n_jobs=jobs)(delayed(_run_chunk)(config, built, c, reducer) for c in chunks)
    return [r for part in parts for r in part]


def trial_rows(config: ExperimentConfig, records) -> list[dict]:
    rows = []
    for i, rec in enumerate(records):
        rows.append({
            "trial": i, "seed": config.seed, "d": config.d, "n": config.n,
            "mu": config.effective_mu, "variant": config.variant,
            "cover_time": "" if rec.cover_time is None else rec.cover_time,
            "budget_exhausted": int(rec.budget_exhausted),
            "n_returns": int(rec.returns.size),
        })
    return rows


def fmt_float(x) -> str:
    return format(float(x), ".17g")


def write_csv(rows, fh, header_comment: str | None = None) -> None:
    if header_comment:
        for line in header_comment.splitlines():
            fh.write(f"# {line}\n")
    w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: fmt_float(v) if isinstance(v, float) else v for k, v in r.items()})


def csv_text(config: ExperimentConfig, records) -> str:
    buf = io.StringIO()
    write_csv(trial_rows(config, records), buf,
              header_comment="config " + json.dumps(config.to_dict(), sort_keys=True))
    return buf.getvalue()
