"""Exact and closed-form reference values that do not touch the simulator."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import mpmath
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy import stats

from .substrate import (TreeShape, WalkKind, WalkState, build_tree, neighbors, spine,
                        transition_probs)

DEFAULT_CAP = 10 ** 7


class UnreachableTargetError(ValueError):
    pass


class DomainError(ValueError):
    pass


# -- hitting times --------------------------------------------------------------

@dataclass(frozen=True)
class WeightedChain:
    """Reversible chain on a weighted graph: moves along edges with probability proportional to weight."""
    weights: tuple  # symmetric matrix as nested tuples
    labels: tuple = ()

    @classmethod
    def from_matrix(cls, w, labels=()):
        w = np.asarray(w, dtype=float)
        if w.shape[0] != w.shape[1] or not np.allclose(w, w.T) or np.any(w < 0):
            raise ValueError("weights must be a symmetric nonnegative matrix")
        return cls(tuple(map(tuple, w)), tuple(labels))

    @property
    def n_states(self) -> int:
        return len(self.weights)

    def transition_matrix(self) -> sp.csr_matrix:
        w = np.asarray(self.weights, dtype=float)
        tot = w.sum(axis=1)
        P = np.divide(w, tot[:, None], out=np.zeros_like(w), where=tot[:, None] > 0)
        return sp.csr_matrix(P)


@dataclass(frozen=True)
class HittingProblem:
    start: int
    targets: frozenset
    shape: TreeShape | None = None
    chain: WeightedChain | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", frozenset(int(t) for t in self.targets))
        if (self.shape is None) == (self.chain is None):
            raise ValueError("give exactly one of shape or chain")
        if not self.targets:
            raise ValueError("targets must be nonempty")
        if self.start in self.targets:
            raise ValueError("start must not be a target")
        n = self.n_states
        for v in (self.start, *self.targets):
            if not 0 <= v < n:
                raise IndexError(f"state {v} out of range")

    @property
    def n_states(self) -> int:
        return self.shape.n_vertices if self.shape is not None else self.chain.n_states

    def transition_matrix(self) -> sp.csr_matrix:
        if self.chain is not None:
            return self.chain.transition_matrix()
        return srw_matrix(self.shape)


def srw_matrix(shape: TreeShape) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    for v in range(shape.n_vertices):
        nb = neighbors(shape, v)
        for w in nb:
            rows.append(v)
            cols.append(w)
            vals.append(1.0 / len(nb))
        if not nb:
            rows.append(v)
            cols.append(v)
            vals.append(1.0)
    n = shape.n_vertices
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _transient_block(p: HittingProblem):
    P = p.transition_matrix()
    n = P.shape[0]
    is_target = np.zeros(n, dtype=bool)
    is_target[list(p.targets)] = True
    # states reachable from start before hitting a target
    seen = np.zeros(n, dtype=bool)
    seen[p.start] = True
    frontier = [p.start]
    Pc = P.tocsr()
    while frontier:
        nxt = []
        for v in frontier:
            for w in Pc.indices[Pc.indptr[v]:Pc.indptr[v + 1]]:
                if not seen[w] and not is_target[w]:
                    seen[w] = True
                    nxt.append(w)
        frontier = nxt
    Q = np.flatnonzero(seen)
    # every reachable transient state must be able to reach a target
    can = is_target.copy()
    Pt = Pc.T.tocsr()
    frontier = list(np.flatnonzero(is_target))
    while frontier:
        nxt = []
        for v in frontier:
            for w in Pt.indices[Pt.indptr[v]:Pt.indptr[v + 1]]:
                if not can[w]:
                    can[w] = True
                    nxt.append(w)
        frontier = nxt
    if not np.all(can[Q]):
        raise UnreachableTargetError("some states reachable from start cannot reach the targets")
    idx = {int(v): i for i, v in enumerate(Q)}
    PQQ = Pc[Q][:, Q]
    return Q, idx, PQQ


def exact_hitting_expectation(p: HittingProblem) -> float:
    """Expected hitting time of the target set by solving (I - P_QQ) E = 1."""
    Q, idx, PQQ = _transient_block(p)
    A = sp.identity(len(Q), format="csc") - PQQ.tocsc()
    b = np.ones(len(Q))
    if len(Q) <= 400:
        E = np.linalg.solve(A.toarray(), b)
    else:
        E = spla.spsolve(A, b)
    res = np.abs(A @ E - b).max()
    if not np.isfinite(E).all() or res > 1e-10 * max(1.0, np.abs(E).max()):
        raise UnreachableTargetError("linear system is singular or ill-conditioned")
    return float(E[idx[p.start]])


def hitting_time_distribution(p: HittingProblem, tol: float = 1e-15, t_max: int = 10 ** 7):
    """Exact P[tau = t] by iterating the substochastic transient kernel.

    Returns (pmf, survival) with pmf[t] = P[tau = t] and survival[t] = P[tau > t]
    for t = 0 .. T, where T is the first time survival drops below `tol`.
    """
    Q, idx, PQQ = _transient_block(p)
    out_rate = 1.0 - np.asarray(PQQ.sum(axis=1)).ravel()
    PT = PQQ.T.tocsr()
    mass = np.zeros(len(Q))
    mass[idx[p.start]] = 1.0
    pmf = [0.0]
    surv = [1.0]
    t = 0
    while surv[-1] > tol and t < t_max:
        hit = float(mass @ out_rate)
        mass = PT @ mass
        t += 1
        pmf.append(hit)
        surv.append(float(mass.sum()))
    return np.array(pmf), np.array(surv)


def truncated_expectation(p: HittingProblem, tol: float = 1e-15):
    """E tau = sum_t P[tau > t] from the DP, plus a geometric estimate of the truncated tail.

    Returns (value, tail_bound) where tail_bound is the geometric tail added.
    """
    _, surv = hitting_time_distribution(p, tol)
    head = float(surv[:-1].sum())
    s_T = surv[-1]
    if s_T == 0.0:
        return head, 0.0
    r = surv[-1] / surv[-2] if surv[-2] > 0 else 0.0
    tail = s_T / (1.0 - r) if r < 1 else float("inf")
    return head + tail, tail


def spine_problem(d: int, n: int, k: int) -> HittingProblem:
    """SRW on T_d^n from v_k until it hits v_{k-1} or v_{k+1} (the spine of the first leaf)."""
    shape = build_tree(d, n)
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    sp_ = spine(shape, shape.level_start(n))
    targets = {sp_[k - 1]} | ({sp_[k + 1]} if k < n else set())
    return HittingProblem(start=sp_[k], targets=frozenset(targets), shape=shape)


def excursion_chain(d: int, k: int) -> WeightedChain:
    """Symmetry quotient of the excursion from v_k: state 0 = {v_{k-1}, v_{k+1}}, 1 = v_k,
    1 + i = the merged depth-i descendants of v_k off the spine."""
    if d < 2 or k < 1:
        raise DomainError("need d >= 2 and k >= 1")
    m = k + 2
    w = np.zeros((m, m))
    w[0, 1] = w[1, 0] = 2.0
    w[1, 2] = w[2, 1] = d - 1.0
    for i in range(1, k):
        w[1 + i, 2 + i] = w[2 + i, 1 + i] = float(d ** i * (d - 1))
    labels = ("boundary", "v_k") + tuple(f"depth{i}" for i in range(1, k + 1))
    return WeightedChain.from_matrix(w, labels)


def excursion_problem(d: int, k: int) -> HittingProblem:
    return HittingProblem(start=1, targets=frozenset({0}), chain=excursion_chain(d, k))


# -- spine, roots, closed forms -------------------------------------------------

def spine_formulas(J: int, k: int) -> tuple[float, float]:
    """(P[sigma_k < sigma_{J+1}] from v_J, E[V_k | sigma_0 < sigma_{J+1}])."""
    if not 1 <= k <= J:
        raise DomainError(f"need 1 <= k <= J, got J={J}, k={k}")
    return 1.0 / (J + 1 - k), 2.0 * k * (1.0 - k / (J + 1))


def theta_threshold(d: int) -> float:
    return (d - 1) ** 2 / (4.0 * d)


def theta_roots(d: int, mu: float) -> tuple[float, float]:
    """Roots of theta^2 - (d+1) theta + (1+mu) d = 0, smaller first."""
    if d < 2 or mu < 0:
        raise DomainError("need d >= 2 and mu >= 0")
    disc = (d + 1) ** 2 - 4.0 * (1.0 + mu) * d
    if disc < 0:
        if disc > -1e-12 * (d + 1) ** 2:
            disc = 0.0
        else:
            raise DomainError(f"mu={mu} exceeds (d-1)^2/4d={theta_threshold(d)}: complex roots")
    r = math.sqrt(disc)
    # stable form for the smaller root
    t1 = ((d + 1) + r) / 2.0
    t0 = (1.0 + mu) * d / t1
    return t0, t1


def brw_bound_values(d: int, mu: float, h: int) -> tuple[float, float, float, float]:
    """(EN_root, EX_root, EN_level, EX_level) mean bounds for frozen branching walks."""
    if mu > theta_threshold(d) * (1 + 1e-12) or mu < 0:
        raise DomainError(f"need 0 <= mu <= (d-1)^2/4d = {theta_threshold(d)}")
    if h < 0:
        raise DomainError("need h >= 0")
    g = 1.0 + 2.0 * d * mu / (d - 1)
    q = d * (1.0 - 2.0 * mu / (d - 1))
    return g ** h, 1.0 / q, g, q ** (-h)


def J_index(d: int, n: int, beta: float) -> int:
    """floor(log_d n + log_d(log n) + 5 log_d 10 - log_d beta), natural inner log."""
    if d < 2 or n < 2 or beta <= 0:
        raise DomainError("need d >= 2, n >= 2, beta > 0")
    with mpmath.workdps(60):
        ld = mpmath.log(d)
        x = (mpmath.log(n) + mpmath.log(mpmath.log(n)) + 5 * mpmath.log(10) - mpmath.log(beta)) / ld
        return int(mpmath.floor(x + mpmath.mpf(10) ** -40))


def J_sanity(d: int, n: int, beta: float) -> bool:
    """d^J <= 10^5 n log n / beta < d^(J+1)."""
    J = J_index(d, n, beta)
    with mpmath.workdps(60):
        X = mpmath.mpf(10) ** 5 * n * mpmath.log(n) / beta
        return bool(mpmath.power(d, J) <= X * (1 + mpmath.mpf(10) ** -30) < mpmath.power(d, J + 1))


def H_sequence(d: int, mu: float, C_induction: float, j: int) -> int:
    if j < 1:
        raise DomainError("need j >= 1")
    if mu >= d - 1 or mu < 0:
        raise DomainError(f"need 0 <= mu < d - 1, got mu={mu}")
    if j == 1:
        return 1
    with mpmath.workdps(60):
        x = C_induction * j * (mpmath.log(1 + mpmath.mpf(mu)) + j) / mpmath.log(d / (1 + mpmath.mpf(mu)))
        return int(mpmath.ceil(x - mpmath.mpf(10) ** -40))


def induction_target(d: int, mu: float) -> float:
    return 0.8 / (1.0 + 2.0 * d * mu / (d - 1))


# -- bounds -------------------------------------------------------------------

@dataclass(frozen=True)
class PoiLower:
    lam: float
    alpha: float

    def validate(self):
        if not (self.lam > 0 and 0 < self.alpha < 1):
            raise DomainError("PoiLower needs lam > 0 and 0 < alpha < 1")

    def value(self) -> float:
        return math.exp(-(1 - self.alpha) ** 2 * self.lam / 2)


@dataclass(frozen=True)
class PoiUpper:
    lam: float
    alpha: float

    def validate(self):
        if not (self.lam > 0 and self.alpha > 1):
            raise DomainError("PoiUpper needs lam > 0 and alpha > 1")

    def value(self) -> float:
        a = self.alpha
        return math.exp(-(a - 1) * self.lam / (2.0 / 3.0 + 2.0 / (a - 1)))


@dataclass(frozen=True)
class GeoSum:
    n: int
    p: float
    lam: float

    def validate(self):
        if not (self.n >= 1 and 0 < self.p <= 1 and self.lam >= 2):
            raise DomainError("GeoSum needs n >= 1, 0 < p <= 1, lam >= 2")

    def value(self) -> float:
        return math.exp(-self.n * (self.lam / 2 - 1))


@dataclass(frozen=True)
class ExpSum:
    C: float
    b: float
    b_prime: float
    n: int = 1

    def validate(self):
        if not (self.C > 0 and self.b > 0 and self.b_prime > 0 and self.n >= 1):
            raise DomainError("ExpSum needs C > 0, b > 0, b' > 0, n >= 1")

    def value(self) -> float:
        """The constant C' = 2(b' + C)/b."""
        return 2.0 * (self.b_prime + self.C) / self.b

    def tail(self) -> float:
        return math.exp(-self.b_prime * self.n)


@dataclass(frozen=True)
class PoiSeq:
    g1: float
    g2: float
    k: int

    def validate(self):
        if not (self.g1 >= 2 * self.g2 > 0 and self.g1 >= 8 and self.k >= 1):
            raise DomainError("PoiSeq needs g1 >= 2 g2 > 0, g1 >= 8, k >= 1")

    def value(self) -> float:
        return 2.0 * math.exp(-(1 - self.g2 / self.g1) ** 2 * self.g1 * self.k / 2)


@dataclass(frozen=True)
class BallsBins:
    m: int
    n: int

    def validate(self):
        if not (self.n >= 1 and self.m >= 3 * self.n):
            raise DomainError("BallsBins needs m >= 3n")

    def value(self) -> float:
        return math.exp(-self.m / 54.0)


@dataclass(frozen=True)
class RootMiss:
    d: int
    k: int
    t: int

    def validate(self):
        if not (self.d >= 2 and self.k >= 2 and self.k + 2 <= self.t <= self.d ** self.k):
            raise DomainError("RootMiss needs d >= 2, k >= 2, k+2 <= t <= d^k")

    def value(self) -> float:
        return (self.t - self.k - 2) * float(self.d) ** (-self.k) / 4.0


# Constants for the random-walk root-hitting lower bound. They are not
# determined analytically; these values hold for every exactly enumerated
# instance with d^n <= 2^13 (see tests).
RW_ROOT_A = 0.1
RW_ROOT_B = 0.125


@dataclass(frozen=True)
class RwRoot:
    d: int
    n: int
    t: int
    a: float = RW_ROOT_A
    b: float = RW_ROOT_B

    def validate(self):
        if not (self.d >= 2 and self.n >= 1 and self.a > 0 and self.b > 0):
            raise DomainError("RwRoot needs d >= 2, n >= 1, a > 0, b > 0")
        if not (self.n * math.log(self.d) / self.a <= self.t <= self.d ** self.n):
            raise DomainError("RwRoot needs n log d / a <= t <= d^n")

    def value(self) -> float:
        return self.b * self.t * float(self.d) ** (-self.n)


@dataclass(frozen=True)
class AllAwake:
    mu: float
    t: int
    c1: float = 10.0
    d: int | None = None
    H: int | None = None

    def validate(self):
        if not (self.mu >= 0 and self.t >= 0 and self.c1 > 0):
            raise DomainError("AllAwake needs mu >= 0, t >= 0, c1 > 0")

    def value(self) -> float:
        return self.c1 * self.mu * self.t


BoundSpec = PoiLower | PoiUpper | GeoSum | ExpSum | PoiSeq | BallsBins | RootMiss | RwRoot | AllAwake
LOWER_BOUNDS = (RootMiss, RwRoot)


def bound_value(spec) -> float:
    spec.validate()
    return float(spec.value())


def exact_probability(spec, family: str = "poisson", trials: int | None = None) -> float:
    """Exact probability (or expectation for AllAwake) that the bound controls.

    For PoiLower/PoiUpper `family` selects Poisson or Binomial(trials, lam/trials).
    For ExpSum the extremal family P[X >= l] = min(1, C e^{-bl}) is used and the
    returned value is P[sum >= C' n].
    """
    spec.validate()
    if isinstance(spec, (PoiLower, PoiUpper)):
        lam, a = spec.lam, spec.alpha
        if family == "poisson":
            dist = stats.poisson(lam)
        elif family == "binomial":
            if trials is None or trials < lam:
                raise DomainError("binomial family needs trials >= lam")
            dist = stats.binom(trials, lam / trials)
        else:
            raise ValueError(f"unknown family {family!r}")
        if isinstance(spec, PoiLower):
            return float(dist.cdf(math.floor(a * lam + 1e-12)))
        return float(dist.sf(math.ceil(a * lam - 1e-12) - 1))
    if isinstance(spec, GeoSum):
        k = math.ceil(spec.lam * spec.n / spec.p - 1e-9)
        return float(stats.binom.cdf(spec.n - 1, k - 1, spec.p))
    if isinstance(spec, PoiSeq):
        return poi_seq_union(spec)[0]
    if isinstance(spec, BallsBins):
        z = math.floor(2 * spec.n / 3)
        return float(balls_bins_cdf(spec.m, spec.n, z))
    if isinstance(spec, RootMiss):
        return float(root_hit_cdf(spec.d, spec.k, WalkKind.RootBiasedNonbacktracking, spec.t)[spec.t])
    if isinstance(spec, RwRoot):
        return float(root_hit_cdf(spec.d, spec.n, WalkKind.SimpleRandomWalk, spec.t)[spec.t])
    if isinstance(spec, AllAwake):
        if spec.d is None or spec.H is None:
            raise DomainError("AllAwake exact value needs d and H")
        return all_awake_expectation(spec.d, spec.H, spec.mu, spec.t)
    if isinstance(spec, ExpSum):
        return exp_sum_tail(spec)
    raise TypeError(f"no exact value for {type(spec).__name__}")


def poi_seq_union(spec: PoiSeq, horizon: int = 100000) -> tuple[float, float]:
    """(worst case over couplings, independent case) of P[X_i < g2 i for some i >= k]."""
    terms = []
    i = spec.k
    while i < spec.k + horizon:
        q = float(stats.poisson.cdf(math.ceil(spec.g2 * i) - 1, spec.g1 * i))
        terms.append(q)
        if q < 1e-300 or (len(terms) > 10 and q < 1e-18 * terms[0]):
            break
        i += 1
    terms = np.array(terms)
    worst = min(1.0, float(terms.sum()))
    indep = float(-np.expm1(np.log1p(-np.minimum(terms, 1 - 1e-300)).sum()))
    return worst, indep


def exp_sum_tail(spec: ExpSum, support: int | None = None) -> float:
    """P[X_1 + ... + X_n >= C' n] for i.i.d. X with P[X >= l] = min(1, C e^{-b l})."""
    Cp = spec.value()
    thr = math.ceil(Cp * spec.n - 1e-12)
    L = support or max(64, int(40.0 / spec.b) + 2 * thr + 10)
    ell = np.arange(L + 1)
    tail = np.minimum(1.0, spec.C * np.exp(-spec.b * ell))
    tail[0] = 1.0
    pmf = tail[:-1] - tail[1:]
    total = np.array([1.0])
    base = pmf
    m = spec.n
    while m:
        if m & 1:
            total = np.convolve(total, base)[:thr + 1]
        m >>= 1
        if m:
            base = np.convolve(base, base)[:thr + 1]
    below = float(total[:thr].sum())
    return max(0.0, 1.0 - below)


def balls_bins_cdf(m: int, n: int, z: int) -> Fraction:
    """Exact P[Z <= z] for Z = number of occupied bins, m balls into n bins."""
    total = Fraction(0)
    for j in range(0, min(z, n) + 1):
        surj = sum((-1) ** i * math.comb(j, i) * (j - i) ** m for i in range(j + 1))
        total += Fraction(math.comb(n, j) * surj)
    return total / Fraction(n ** m)


def root_hit_cdf(d: int, n: int, kind: WalkKind, t_max: int) -> np.ndarray:
    """P[a walk from the first leaf of T_d^n visits the root within t steps], t = 0..t_max."""
    shape = build_tree(d, n)
    leaf = shape.level_start(n)
    return hit_by_time(shape, kind, leaf, {0}, t_max)


def all_awake_expectation(d: int, H: int, mu: float, t: int) -> float:
    """Exact E W: SRW particles on T_d^{H*}, one at the root, mean-mu at other heap vertices,
    frozen at y; W = number frozen by time t. Uses level lumpability."""
    # q[l] = P[hit y within s steps | start at level l], levels 0..H
    q = np.zeros(H + 1)
    up = 1.0 / (d + 1)
    for _ in range(t):
        new = np.empty_like(q)
        new[0] = up + d * up * q[1] if H >= 1 else 1.0
        for lv in range(1, H):
            new[lv] = up * q[lv - 1] + d * up * q[lv + 1]
        if H >= 1:
            new[H] = q[H - 1]
        q = new
    weights = np.array([float(d) ** lv for lv in range(H + 1)])
    return float(q[0] + mu * (weights[1:] * q[1:]).sum())


def all_awake_explicit_bound(d: int, H: int, mu: float, t: int) -> float:
    """The explicit bound 1/d + (mu/d + 2 d^{-H} + 2mu/(1-1/d)) t from the all-awake argument."""
    return 1.0 / d + (mu / d + 2.0 * float(d) ** (-H) + 2.0 * mu / (1 - 1.0 / d)) * t


# -- walk enumeration ---------------------------------------------------------

@dataclass
class WalkDistribution:
    states: list          # (current, previous) with previous -1 when absent
    state_probs: np.ndarray  # shape (t_max+1, n_states)
    occupation: np.ndarray   # shape (t_max+1, n_vertices)


def _walk_states(shape: TreeShape, kind: WalkKind, start: int, absorbing: set):
    """Reachable (current, previous) states with their successor distributions."""
    kind = WalkKind.parse(kind)
    first = (start, -1)
    index = {first: 0}
    states = [first]
    rows, cols, vals = [], [], []
    i = 0
    while i < len(states):
        cur, prev = states[i]
        if cur in absorbing:
            succ = {(cur, prev): 1.0}
        else:
            ws = WalkState(cur, None if prev < 0 else prev)
            tp = transition_probs(shape, kind, ws)
            if kind is WalkKind.SimpleRandomWalk:
                succ = {(w, -1): p for w, p in tp.items()}
            else:
                succ = {(w, cur): p for w, p in tp.items()}
        for s, p in succ.items():
            j = index.get(s)
            if j is None:
                j = index[s] = len(states)
                states.append(s)
            rows.append(i)
            cols.append(j)
            vals.append(p)
        i += 1
    m = len(states)
    P = sp.csr_matrix((vals, (rows, cols)), shape=(m, m))
    return states, P


def enumerate_small_walk_distribution(shape: TreeShape, kind, start: int, t_max: int,
                                      cap: int = DEFAULT_CAP, absorbing=()) -> WalkDistribution:
    """Exact law of the walk at times 0..t_max by dynamic programming.

    Vertices in `absorbing` hold their mass once reached.
    """
    kind = WalkKind.parse(kind)
    start = shape.check(start)
    absorbing = set(int(a) for a in absorbing)
    states, P = _walk_states(shape, kind, start, absorbing)
    if len(states) * (t_max + 1) > cap:
        raise MemoryError(f"{len(states)} states x {t_max + 1} steps exceeds cap {cap}")
    PT = P.T.tocsr()
    probs = np.zeros((t_max + 1, len(states)))
    probs[0, 0] = 1.0
    for t in range(t_max):
        probs[t + 1] = PT @ probs[t]
    cur = np.array([s[0] for s in states])
    occ = np.zeros((t_max + 1, shape.n_vertices))
    for j in range(len(states)):
        occ[:, cur[j]] += probs[:, j]
    return WalkDistribution(states, probs, occ)


def hit_by_time(shape: TreeShape, kind, start: int, targets, t_max: int) -> np.ndarray:
    """P[the walk visits `targets` within t steps] for t = 0..t_max (no cap, O(states) memory)."""
    kind = WalkKind.parse(kind)
    targets = set(int(v) for v in targets)
    out = np.zeros(t_max + 1)
    if start in targets:
        out[:] = 1.0
        return out
    states, P = _walk_states(shape, kind, start, targets)
    cur = np.array([s[0] for s in states])
    hit = np.isin(cur, list(targets))
    PT = P.T.tocsr()
    mass = np.zeros(len(states))
    mass[0] = 1.0
    for t in range(1, t_max + 1):
        mass = PT @ mass
        out[t] = mass[hit].sum()
    return out


# -- model parameters -----------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    d: int
    n: int
    mu: float
    beta: float | None = None
    C_induction: float = 1.0
    beta0: float = 1.0
    c: float = 1.0
    c1: float = 10.0

    def __post_init__(self):
        if self.d < 2 or self.n < 0 or self.mu < 0:
            raise DomainError("need d >= 2, n >= 0, mu >= 0")
        if self.beta is not None and not math.isclose(self.mu, mu_from_beta(self.d, self.beta),
                                                      rel_tol=1e-12):
            raise DomainError("mu inconsistent with (3 + beta) d (d + 1)")

    @classmethod
    def from_beta(cls, d: int, n: int, beta: float, **kw) -> "ModelParams":
        return cls(d, n, mu_from_beta(d, beta), beta, **kw)

    @property
    def eps(self) -> float:
        """Low-density exponent 1 - log_d mu, clipped to (0, 1]."""
        if self.mu <= 0:
            return 1.0
        e = 1.0 - math.log(self.mu) / math.log(self.d)
        return min(1.0, max(e, 1e-12))

    def to_dict(self) -> dict:
        return asdict(self)


def mu_from_beta(d: int, beta: float) -> float:
    return (3.0 + beta) * d * (d + 1)


def oracle_json(values: dict) -> str:
    def conv(x):
        if isinstance(x, Fraction):
            return {"num": x.numerator, "den": x.denominator, "float": float(x)}
        if isinstance(x, (np.floating, np.integer)):
            return x.item()
        if isinstance(x, np.ndarray):
            return x.tolist()
        if isinstance(x, tuple):
            return list(x)
        raise TypeError(type(x))
    return json.dumps(values, default=conv, sort_keys=True, indent=2)
