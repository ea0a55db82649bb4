"""Confidence intervals and bound-direction verdicts."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

Z99 = float(stats.norm.ppf(0.995))
MIN_TRIALS = 400

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def mean_ci(x, z: float = Z99) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("no samples")
    m = float(x.mean())
    if x.size < 2:
        return m, float("inf")
    return m, z * float(x.std(ddof=1)) / math.sqrt(x.size)


def clopper_pearson(k: int, n: int, level: float = 0.99) -> tuple[float, float]:
    a = (1 - level) / 2
    lo = 0.0 if k == 0 else float(stats.beta.ppf(a, k, n - k + 1))
    hi = 1.0 if k == n else float(stats.beta.ppf(1 - a, k + 1, n - k))
    return lo, hi


def proportion_ci(k: int, n: int, level: float = 0.99) -> tuple[float, float]:
    """Point estimate and half-width; exact (Clopper-Pearson) width, taken on the wider side."""
    p = k / n
    lo, hi = clopper_pearson(k, n, level)
    return p, max(p - lo, hi - p)


def ratio_ci(num, den, z: float = Z99) -> tuple[float, float]:
    """Ratio of means with a delta-method half-width."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    mn, md = num.mean(), den.mean()
    if md == 0:
        return float("nan"), float("inf")
    r = mn / md
    resid = num - r * den
    se = resid.std(ddof=1) / (md * math.sqrt(num.size))
    return float(r), float(z * se)


def verdict_upper(estimate: float, hw: float, bound: float, tol: float = 0.0) -> str:
    """Claim: true value <= bound."""
    if estimate - hw > bound + tol:
        return FAIL
    if estimate + hw <= bound + tol:
        return PASS
    return INCONCLUSIVE


def verdict_lower(estimate: float, hw: float, bound: float, tol: float = 0.0) -> str:
    """Claim: true value >= bound."""
    if estimate + hw < bound - tol:
        return FAIL
    if estimate - hw >= bound - tol:
        return PASS
    return INCONCLUSIVE


def verdict_equal(estimate: float, hw: float, target: float, tol: float = 0.0) -> str:
    return PASS if abs(estimate - target) <= hw + tol else FAIL


def combine(verdicts) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


@dataclass
class Claim:
    """One inequality or equality checked inside a report."""
    label: str
    estimate: float
    ci_halfwidth: float
    bound: float
    direction: str  # "upper", "lower", "equal"
    verdict: str

    @property
    def margin(self) -> float:
        """Signed slack in favour of the claim, in CI half-widths when available."""
        if self.direction == "upper":
            gap = self.bound - self.estimate
        elif self.direction == "lower":
            gap = self.estimate - self.bound
        else:
            gap = -abs(self.estimate - self.bound)
        if self.ci_halfwidth > 0:
            return gap / self.ci_halfwidth
        # exact values: relative slack, scaled to sort after any noisy claim of similar size
        return gap / max(abs(self.bound), 1e-300) * 1e6


def make_claim(label, estimate, hw, bound, direction, tol=0.0) -> Claim:
    fn = {"upper": verdict_upper, "lower": verdict_lower, "equal": verdict_equal}[direction]
    return Claim(label, float(estimate), float(hw), float(bound), direction,
                 fn(estimate, hw, bound, tol))


@dataclass
class CheckReport:
    check_id: str
    params: dict
    estimate: float
    ci_halfwidth: float
    bound_or_target: float
    verdict: str
    trials: int
    wall_time: float
    claims: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @classmethod
    def from_claims(cls, check_id, params, claims, trials, wall_time, details=None):
        worst = min(claims, key=lambda c: (c.verdict == PASS, c.verdict == INCONCLUSIVE, c.margin))
        return cls(check_id, params, worst.estimate, worst.ci_halfwidth, worst.bound,
                   combine(c.verdict for c in claims), trials, wall_time, claims, details or {})

    def to_dict(self) -> dict:
        out = asdict(self)
        return out
