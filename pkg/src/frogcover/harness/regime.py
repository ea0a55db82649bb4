"""Cover-time scaling in the dense and sparse regimes, with two competing growth models."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ..engine import DEFAULT_BUDGET
from .experiment import ExperimentConfig, run_trials
from .stats import mean_ci


def _column(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return X.reshape(-1) if X.ndim == 2 else X


class NLogNScaling(RegressorMixin, BaseEstimator):
    """cover ~ a + b * n log n (least squares)."""

    def __init__(self, fit_intercept: bool = True):
        self.fit_intercept = fit_intercept

    def fit(self, X, y):
        n = _column(X)
        f = n * np.log(n)
        A = np.column_stack([f, np.ones_like(f)]) if self.fit_intercept else f[:, None]
        coef, *_ = np.linalg.lstsq(A, np.asarray(y, float), rcond=None)
        self.slope_ = float(coef[0])
        self.intercept_ = float(coef[1]) if self.fit_intercept else 0.0
        return self

    def predict(self, X):
        check_is_fitted(self, "slope_")
        n = _column(X)
        return self.intercept_ + self.slope_ * n * np.log(n)


class SqrtExpScaling(RegressorMixin, BaseEstimator):
    """log cover ~ a + b * sqrt(n log d); predictions are returned on the cover scale."""

    def __init__(self, d: int = 2):
        self.d = d

    def feature(self, X) -> np.ndarray:
        return np.sqrt(_column(X) * math.log(self.d))

    def fit(self, X, y):
        x = self.feature(X)
        A = np.column_stack([x, np.ones_like(x)])
        coef, *_ = np.linalg.lstsq(A, np.log(np.asarray(y, float)), rcond=None)
        self.slope_, self.intercept_ = float(coef[0]), float(coef[1])
        self.log_residual_norm_ = float(np.linalg.norm(A @ coef - np.log(y)))
        return self

    def predict(self, X):
        check_is_fitted(self, "slope_")
        return np.exp(self.intercept_ + self.slope_ * self.feature(X))


def normalized_residual(model, n, y) -> float:
    """RMS relative error on the cover-time scale, so both models are comparable."""
    y = np.asarray(y, float)
    return float(np.sqrt(np.mean(((model.predict(n) - y) / y) ** 2)))


def relative_spread(x) -> float:
    """(max - min) / mean."""
    x = np.asarray(x, float)
    return float((x.max() - x.min()) / x.mean())


def monotone_blowup(x, growth: float = 1.5) -> bool:
    """Strictly increasing throughout and the last value at least `growth` times the first."""
    x = np.asarray(x, float)
    return bool(len(x) >= 3 and np.all(np.diff(x) > 0) and x[-1] >= growth * x[0])


@dataclass
class RegimeData:
    mu: float
    n: list
    mean_cover: list
    ci_halfwidth: list
    completed: list
    trials: int
    min_cover_over_n: float
    ratio_nlogn: list = field(default_factory=list)
    relative_spread: float = float("nan")
    relative_std: float = float("nan")
    blowup: bool = False
    nlogn_fit: dict = field(default_factory=dict)
    sqrt_exp_fit: dict = field(default_factory=dict)
    preferred: str = ""
    flags: list = field(default_factory=list)


@dataclass
class RegimeFitResult:
    d: int
    seed: int
    high: RegimeData
    low: RegimeData

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def collect(d: int, n_list, mu: float, trials: int, seed: int, budget: int,
            n_jobs: int | None = None) -> RegimeData:
    means, hws, done = [], [], []
    min_ratio = math.inf
    flags = []
    for i, n in enumerate(n_list):
        cfg = ExperimentConfig(d=d, n=int(n), mu=mu, trials=trials, seed=seed + 1000 * i,
                               budget=budget, horizon=10 ** 12)
        covers = run_trials(cfg, reducer=lambda r: -1 if r.cover_time is None else r.cover_time,
                            n_jobs=n_jobs)
        c = np.array([x for x in covers if x >= 0], dtype=float)
        if c.size < trials:
            flags.append(f"n={n}: {trials - c.size} of {trials} trials hit the frog-step budget")
        if c.size < 2:
            raise RuntimeError(f"n={n}: fewer than two completed trials")
        m, hw = mean_ci(c)
        means.append(m)
        hws.append(hw)
        done.append(int(c.size))
        min_ratio = min(min_ratio, float(c.min()) / n)
    return RegimeData(mu, [int(n) for n in n_list], means, hws, done, trials, min_ratio,
                      flags=flags)


def analyse(data: RegimeData, d: int) -> RegimeData:
    n = np.asarray(data.n, float)
    y = np.asarray(data.mean_cover, float)
    data.ratio_nlogn = (y / (n * np.log(n))).tolist()
    data.relative_spread = relative_spread(data.ratio_nlogn)
    data.relative_std = float(np.std(data.ratio_nlogn) / np.mean(data.ratio_nlogn))
    data.blowup = monotone_blowup(data.ratio_nlogn)
    a = NLogNScaling().fit(n, y)
    b = SqrtExpScaling(d).fit(n, y)
    ra, rb = normalized_residual(a, n, y), normalized_residual(b, n, y)
    data.nlogn_fit = {"slope": a.slope_, "intercept": a.intercept_, "normalized_residual": ra,
                      "C_d_estimate": float(data.mu * np.mean(data.ratio_nlogn))}
    data.sqrt_exp_fit = {"slope": b.slope_, "intercept": b.intercept_, "normalized_residual": rb,
                         "log_residual_norm": b.log_residual_norm_}
    data.preferred = "n_log_n" if ra <= rb else "sqrt_exp"
    return data


def regime_fit(d: int, n_list, mu_high: float, mu_low: float, trials: int, seed: int = 0,
               budget: int = DEFAULT_BUDGET, n_jobs: int | None = None,
               n_list_low=None) -> RegimeFitResult:
    """Mean cover times for a dense and a sparse frog density, each fitted by both models.

    `n_list_low` defaults to `n_list`; the sparse regime usually needs smaller heights.
    """
    n_list = list(n_list)
    n_low = list(n_list_low) if n_list_low is not None else n_list
    for ns in (n_list, n_low):
        if len(ns) < 3 or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 2:
            raise ValueError("n_list must be ascending, start at >= 2 and have >= 3 entries")
    if mu_low > d / 100:
        raise ValueError(f"mu_low must be <= d/100 = {d / 100}")
    if mu_high < mu_low:
        raise ValueError("mu_high must be >= mu_low")
    high = analyse(collect(d, n_list, mu_high, trials, seed, budget, n_jobs), d)
    low = analyse(collect(d, n_low, mu_low, trials, seed + 1, budget, n_jobs), d)
    return RegimeFitResult(d, seed, high, low)
