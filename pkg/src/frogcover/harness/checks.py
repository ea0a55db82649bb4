"""Registry of runnable checks, each turning one quantitative claim into a CheckReport."""
from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np
from scipy import stats

from .. import _walkers as W
from .._rng import RandomStream
from ..engine import (StopRule, TagConfig, fm_spec, frozen_y_setup, init, run,
                      sample_I_k, self_similar_setup, step_model)
from .. import oracles as O
from ..substrate import WalkKind, build_tree, spine
from .stats import (MIN_TRIALS, PASS, Z99, CheckReport, make_claim, mean_ci, proportion_ci,
                    ratio_ci)


class HypothesisError(ValueError):
    """Parameters outside the claim's hypotheses."""


REGISTRY: dict[str, Callable] = {}
PARAMS: dict[str, tuple[str, ...]] = {}


def register(name, *params):
    def deco(fn):
        REGISTRY[name] = fn
        PARAMS[name] = params
        return fn
    return deco


def verify(check_id: str, params: dict | None = None, trials: int | None = None,
           seed: int = 0) -> CheckReport:
    if check_id not in REGISTRY:
        raise KeyError(f"unknown check {check_id!r}; known: {sorted(REGISTRY)}")
    params = dict(params or {})
    unknown = set(params) - set(PARAMS[check_id])
    if unknown:
        raise HypothesisError(f"{check_id} does not take {sorted(unknown)}; "
                              f"parameters: {list(PARAMS[check_id])}")
    t0 = time.perf_counter()
    claims, used, eff, details = REGISTRY[check_id](params, trials, seed)
    return CheckReport.from_claims(check_id, {**eff, "seed": seed}, claims, used,
                                   time.perf_counter() - t0, details)


def _floor(trials, default):
    t = default if trials is None else int(trials)
    return max(t, MIN_TRIALS)


def _require(cond, msg):
    if not cond:
        raise HypothesisError(msg)


def _records(spec, kind, rules, horizon, observe, seed, trials, reducer, budget=10 ** 9):
    base = RandomStream(seed)
    out = []
    for i in range(trials):
        rec = run(spec, kind, rules, horizon, observe, base.child(i), budget=budget)
        out.append(reducer(rec))
    return out


# -- self-similar model -------------------------------------------------------

@register("RETURN_FLOW", "d", "n", "alpha", "mu", "t_max")
def _return_flow(p, trials, seed):
    d = int(p.get("d", 2))
    n = int(p.get("n", 8))
    alpha = float(p.get("alpha", 6.0))
    mu = float(p.get("mu", 3 * d * (d + 1) + alpha * (d + 1)))
    t_max = int(p.get("t_max", n - 1))
    _require(mu >= 3 * d * (d + 1) + alpha * (d + 1) - 1e-12, "need mu >= 3d(d+1) + alpha(d+1)")
    _require(1 <= t_max <= n - 1, "need 1 <= t_max <= n - 1")
    trials = _floor(trials, 10 ** 4)
    spec, rules = self_similar_setup(d, n, mu)
    ts = np.arange(1, t_max + 1)
    counts = np.array(_records(spec, WalkKind.UniformNonbacktracking, rules, 2 * t_max, 0, seed,
                               trials, lambda r: np.searchsorted(r.returns, 2 * ts, side="right")))
    claims = []
    for j, t in enumerate(ts):
        m, hw = mean_ci(counts[:, j])
        claims.append(make_claim(f"E returns by {2 * t} >= {alpha * t:g}", m, hw, alpha * t, "lower"))
    return claims, trials, {"d": d, "n": n, "alpha": alpha, "mu": mu, "t_max": t_max}, {}


@register("POS_FRAC", "d", "k", "beta", "C", "p")
def _pos_frac(p, trials, seed):
    d = int(p.get("d", 2))
    k = int(p.get("k", 6))
    beta = float(p.get("beta", 2.0))
    C = float(p.get("C", 8.0))
    target = float(p.get("p", 0.5))
    _require(k >= 1, "need k >= 1")
    _require(beta >= 2 and C >= 8, "the p >= 1/2 statement needs beta >= 2 and C >= 8")
    mu = O.mu_from_beta(d, beta)
    trials = _floor(trials, 10 ** 4)
    spec, rules = self_similar_setup(d, k + 1, mu)
    shape = spec.shape
    horizon = int(math.floor(C * k))
    leaves = shape.level_vertices(k + 1)

    def visited_half(rec):
        fv = rec.first_visit[leaves]
        return int(np.count_nonzero((fv >= 0) & (fv <= horizon))) >= d ** k / 2

    ok = np.array(_records(spec, WalkKind.UniformNonbacktracking, rules, horizon, None, seed,
                           trials, visited_half))
    est, hw = proportion_ci(int(ok.sum()), trials)
    se = math.sqrt(max(est * (1 - est), 1e-300) / trials)
    claims = [make_claim(f"P[>= d^k/2 leaves by {horizon}] >= {target}", est, hw, target, "lower")]
    return claims, trials, {"d": d, "k": k, "beta": beta, "C": C, "mu": mu}, {"se": se}


@register("SPEED_TAIL", "d", "beta", "t_max")
def _speed_tail(p, trials, seed):
    d = int(p.get("d", 2))
    beta = float(p.get("beta", 2.0))
    t_max = int(p.get("t_max", 3))
    _require(beta > 0 and t_max >= 1, "need beta > 0, t_max >= 1")
    mu = O.mu_from_beta(d, beta)
    n = 2 * t_max + 3
    trials = _floor(trials, 10 ** 4)
    spec, rules = self_similar_setup(d, n, mu)
    horizon = n - 1

    def tau1(rec):
        fv = rec.first_visit
        v0 = next(c for c in range(1, d + 1) if fv[c] == 1)
        v1 = d * v0 + 1
        return horizon + 1 if fv[v1] < 0 else int(fv[v1] - fv[v0])

    taus = np.array(_records(spec, WalkKind.UniformNonbacktracking, rules, horizon, None, seed,
                             trials, tau1))
    claims = []
    for t in range(1, t_max + 1):
        est, hw = proportion_ci(int(np.count_nonzero(taus > 2 * t - 1)), trials)
        claims.append(make_claim(f"P[tau_1 > {2 * t - 1}] <= e^-{beta * t:g}", est, hw,
                                 math.exp(-beta * t), "upper"))
    return claims, trials, {"d": d, "beta": beta, "mu": mu, "t_max": t_max}, {}


# -- hitting times on the spine -----------------------------------------------

@register("E_TAU", "d", "n", "k")
def _e_tau(p, trials, seed):
    d = int(p.get("d", 2))
    n = int(p.get("n", 6))
    k = int(p.get("k", 3))
    _require(1 <= k < n, "need 1 <= k < n")
    trials = _floor(trials, 10 ** 5)
    prob = O.spine_problem(d, n, k)
    exact = O.exact_hitting_expectation(prob)
    shape = prob.shape
    mask = np.zeros(shape.n_vertices, dtype=np.bool_)
    mask[list(prob.targets)] = True
    times = W.hit_times(d, n, -1, 0, shape.levels, prob.start, mask, trials,
                        RandomStream(seed).key64(), 10 ** 9)
    m, hw = mean_ci(times)
    claims = [make_claim("E tau_k equals linear-solve value", m, hw, exact, "equal")]
    return claims, trials, {"d": d, "n": n, "k": k}, {"exact": exact,
                                                      "reduced_chain": O.exact_hitting_expectation(
                                                          O.excursion_problem(d, k))}


@register("E_VK", "J", "k")
def _e_vk(p, trials, seed):
    J = int(p.get("J", 3))
    k = int(p.get("k", 1))
    _require(1 <= k <= J, "need 1 <= k <= J")
    accepted = _floor(trials, 10 ** 6)
    s, s2, acc, tried = W.spine_visits(J, k, accepted, RandomStream(seed).key64())
    m = s / acc
    var = (s2 - acc * m * m) / (acc - 1)
    hw = Z99 * math.sqrt(var / acc)
    p_hit, target = O.spine_formulas(J, k)
    claims = [make_claim("E[V_k | sigma_0 < sigma_{J+1}]", m, hw, target, "equal")]
    return claims, acc, {"J": J, "k": k}, {"acceptance_rate": acc / tried,
                                           "expected_acceptance": 1.0 / (J + 1),
                                           "relative_error": abs(m - target) / target}


@register("HIT_PROB", "d", "n", "beta")
def _hit_prob(p, trials, seed):
    d = int(p.get("d", 2))
    n = int(p.get("n", 10))
    beta = float(p.get("beta", 1e5))
    J = O.J_index(d, n, beta)
    _require(1 <= J < n, f"need 1 <= J < n, got J={J}")
    steps = 4e5 * n * math.log(n) / beta
    t_lim = math.ceil(steps) - 1  # strictly fewer than `steps` steps
    shape = build_tree(d, n)
    sp_ = spine(shape, shape.level_start(n))
    exact = float(O.hit_by_time(shape, WalkKind.SimpleRandomWalk, sp_[J], {sp_[0]}, t_lim)[t_lim])
    trials = _floor(trials, 10 ** 5)
    mask = np.zeros(shape.n_vertices, dtype=np.bool_)
    mask[sp_[0]] = True
    times = W.hit_times(d, n, -1, 0, shape.levels, sp_[J], mask, trials,
                        RandomStream(seed).key64(), t_lim)
    est, hw = proportion_ci(int(np.count_nonzero(times >= 0)), trials)
    # rejection sampling on E = {hit v_0 before v_{J+1}}
    mask[sp_[J + 1]] = True
    ctimes, where = W.first_hits(d, n, -1, 0, shape.levels, sp_[J], mask, trials,
                                 RandomStream(seed).child(1).key64(), 10 ** 12)
    acc = where == sp_[0]
    n_acc = int(acc.sum())
    bound = 1.0 / (3.0 * math.log(n) / math.log(d))
    claims = [make_claim("P[hit v_0 in time] >= 1/(3 log_d n) (MC)", est, hw, bound, "lower"),
              make_claim("P[hit v_0 in time] >= 1/(3 log_d n) (exact)", exact, 0.0, bound, "lower")]
    details = {"J": J, "step_limit": t_lim, "exact": exact, "acceptance_rate": n_acc / trials,
               "expected_acceptance": 1.0 / (J + 1)}
    if n_acc:
        f_e, f_hw = proportion_ci(int(np.count_nonzero(ctimes[acc] <= t_lim)), n_acc)
        claims.append(make_claim("P[F | E] >= 1/2", f_e, f_hw, 0.5, "lower"))
    return claims, trials, {"d": d, "n": n, "beta": beta}, details


# -- exact lower bounds ----------------------------------------------------------

@register("ROOT_MISS", "d", "k")
def _root_miss(p, trials, seed):
    d = int(p.get("d", 2))
    k = int(p.get("k", 6))
    _require(k >= 2 and d >= 2, "need d >= 2, k >= 2")
    T = d ** k
    cdf = O.root_hit_cdf(d, k, WalkKind.RootBiasedNonbacktracking, T)
    claims = []
    for t in range(k + 2, T + 1):
        b = O.bound_value(O.RootMiss(d, k, t))
        claims.append(make_claim(f"P[T <= {t}]", cdf[t], 0.0, b, "lower", tol=1e-12))
    worst = min(claims, key=lambda c: c.estimate - c.bound)
    return [worst], 0, {"d": d, "k": k}, {"n_times": len(claims),
                                          "all_pass": all(c.verdict == PASS for c in claims)}


@register("RW_ROOT", "d", "n", "a", "b")
def _rw_root(p, trials, seed):
    d = int(p.get("d", 2))
    n = int(p.get("n", 8))
    a = float(p.get("a", O.RW_ROOT_A))
    b = float(p.get("b", O.RW_ROOT_B))
    T = d ** n
    t0 = math.ceil(n * math.log(d) / a)
    _require(t0 <= T, "empty time range: n log d / a > d^n")
    cdf = O.root_hit_cdf(d, n, WalkKind.SimpleRandomWalk, T)
    claims = []
    for t in range(t0, T + 1):
        bnd = O.bound_value(O.RwRoot(d, n, t, a, b))
        claims.append(make_claim(f"P[hit root by {t}]", cdf[t], 0.0, bnd, "lower", tol=1e-12))
    worst = min(claims, key=lambda c: c.estimate - c.bound)
    return [worst], 0, {"d": d, "n": n, "a": a, "b": b}, {"n_times": len(claims)}


@register("BALLS_BINS", "m", "n", "method")
def _balls_bins(p, trials, seed):
    m = int(p.get("m", 9))
    nb = int(p.get("n", 3))
    method = p.get("method", "exact")
    spec = O.BallsBins(m, nb)
    try:
        spec.validate()
    except O.DomainError as e:
        raise HypothesisError(str(e))
    bound = O.bound_value(spec)
    z = math.floor(2 * nb / 3)
    if method == "exact":
        fr = O.balls_bins_cdf(m, nb, z)
        claims = [make_claim("P[Z <= 2n/3] (exact)", float(fr), 0.0, bound, "upper")]
        return claims, 0, {"m": m, "n": nb, "method": method}, {
            "exact_fraction": f"{fr.numerator}/{fr.denominator}"}
    trials = _floor(trials, 10 ** 5)
    occ = W.balls_in_bins_occupied(m, nb, trials, RandomStream(seed).key64())
    est, hw = proportion_ci(int(np.count_nonzero(occ <= z)), trials)
    claims = [make_claim("P[Z <= 2n/3] (MC)", est, hw, bound, "upper")]
    return claims, trials, {"m": m, "n": nb, "method": method}, {
        "exact": float(O.balls_bins_cdf(m, nb, z))}


# -- branching-walk comparisons on T_d^{h*} -------------------------------------

def _kbrw(p, trials, seed, start_level):
    d = int(p.get("d", 2))
    mu = float(p.get("mu", 0.05))
    h = int(p.get("h", 3))
    _require(0 <= mu <= O.theta_threshold(d), "need mu <= (d-1)^2/4d")
    _require(h >= 1, "need h >= 1")
    trials = _floor(trials, 10 ** 5)
    shape = build_tree(d, h, True)
    start = 0 if start_level == 0 else shape.level_start(h - 1)
    spec, rules = frozen_y_setup(d, h, mu, start, freeze_levels=(h,))
    y = shape.y
    leaf0 = shape.level_start(h)

    def nx(rec):
        return (int(np.count_nonzero(rec.frozen_vertex >= leaf0) - np.count_nonzero(rec.frozen_vertex == y)),
                int(np.count_nonzero(rec.frozen_vertex == y)))

    vals = np.array(_records(spec, WalkKind.SimpleRandomWalk, rules, 10 ** 9, None, seed, trials, nx))
    ENr, EXr, ENl, EXl = O.brw_bound_values(d, mu, h)
    bN, bX = (ENr, EXr) if start_level == 0 else (ENl, EXl)
    mN, hN = mean_ci(vals[:, 0])
    mX, hX = mean_ci(vals[:, 1])
    claims = [make_claim("E N (frozen at L_h)", mN, hN, bN, "upper"),
              make_claim("E X (frozen at y)", mX, hX, bX, "upper")]
    return claims, trials, {"d": d, "mu": mu, "h": h}, {}


@register("KBRW1", "d", "mu", "h")
def _kbrw1(p, trials, seed):
    return _kbrw(p, trials, seed, 0)


@register("KBRW2", "d", "mu", "h")
def _kbrw2(p, trials, seed):
    return _kbrw(p, trials, seed, 1)


def martingale_terms(state, thetas, mu: float, h: int):
    """Exact conditional drift E[w(xi_{t+1}) - w(xi_t) | F_t] and current w(xi_t) for each theta.

    Active frogs sit at levels 0..h-1 (everything at y or L_h is frozen).
    A frog at level L moves up with probability 1/(d+1), down to each child
    with probability 1/(d+1). An unvisited child c of a vertex holding m
    active frogs is entered with probability 1 - (d/(d+1))^m and then
    contributes mu theta^{-L(c)} in expectation.
    """
    shape = state.shape
    d = shape.degree
    lv = shape.levels.astype(np.int64)
    pos = state.f_pos[state.act[:state.n_active]]
    woken = np.flatnonzero(state.f_status != 0)
    wl = lv[state.f_pos[woken]]
    out = []
    if pos.size:
        uniq, cnt = np.unique(pos, return_counts=True)
        Lu = lv[uniq]
        kids = uniq[:, None] * d + 1 + np.arange(d)[None, :]
        unvisited = (state.v_first[kids] < 0).sum(axis=1)
        p_enter = 1.0 - (d / (d + 1.0)) ** cnt
        L = lv[pos]
    for th in thetas:
        w = float(np.sum(th ** (-wl.astype(float))))
        if pos.size == 0:
            out.append((0.0, w))
            continue
        own = float(np.sum(th ** (-L.astype(float)))) * ((th + d / th) / (d + 1) - 1.0)
        wake = float(np.sum(unvisited * p_enter * mu * th ** (-(Lu + 1.0))))
        out.append((own + wake, w))
    return out


@register("SUPERMARTINGALE", "d", "mu", "h", "t_max")
def _supermartingale(p, trials, seed):
    d = int(p.get("d", 2))
    mu = float(p.get("mu", 0.05))
    h = int(p.get("h", 4))
    t_max = int(p.get("t_max", 20))
    _require(0 <= mu <= O.theta_threshold(d), "need mu <= (d-1)^2/4d")
    trials = _floor(trials, 20000)
    thetas = O.theta_roots(d, mu)
    spec, rules = frozen_y_setup(d, h, mu, 0, freeze_levels=(h,))
    base = RandomStream(seed)
    drift = np.zeros((trials, t_max, 2))
    raw = np.zeros((trials, t_max, 2))
    for i in range(trials):
        st = init(spec, base.child(i))
        prev = martingale_terms(st, thetas, mu, h)
        for t in range(t_max):
            if st.n_active == 0:
                break  # absorbed: drift and increments are zero from here on
            step_model(st, WalkKind.SimpleRandomWalk, rules)
            cur = martingale_terms(st, thetas, mu, h)
            for a in range(2):
                drift[i, t, a] = prev[a][0]
                raw[i, t, a] = cur[a][1] - prev[a][1]
            prev = cur
    claims = []
    raw_summary = {}
    for a, name in enumerate(("theta0", "theta1")):
        for t in range(t_max):
            m, hw = mean_ci(drift[:, t, a])
            claims.append(make_claim(f"drift {name} t={t}", m, hw, 0.0, "upper", tol=1e-12))
            rm, rhw = mean_ci(raw[:, t, a])
            raw_summary[f"{name}_t{t}"] = [rm, rhw]
    return claims, trials, {"d": d, "mu": mu, "h": h, "t_max": t_max}, {
        "thetas": list(thetas), "raw_increment_mean_ci": raw_summary}


@register("ALL_AWAKE", "d", "H", "mu", "c1", "t_min", "t_max")
def _all_awake(p, trials, seed):
    d = int(p.get("d", 8))
    H = int(p.get("H", 3))
    mu = float(p.get("mu", 0.08))
    c1 = float(p.get("c1", 10.0))
    t_lo = int(p.get("t_min", 1))
    t_hi = int(p.get("t_max", 64))
    _require(H >= 1 and mu >= 0 and 1 <= t_lo <= t_hi, "need H >= 1, mu >= 0, 1 <= t_min <= t_max")
    claims = []
    for t in range(t_lo, t_hi + 1):
        ew = O.all_awake_expectation(d, H, mu, t)
        claims.append(make_claim(f"E W(t={t}) <= c1 mu t", ew, 0.0, c1 * mu * t, "upper"))
        claims.append(make_claim(f"E W(t={t}) <= explicit", ew, 0.0,
                                 O.all_awake_explicit_bound(d, H, mu, t), "upper"))
    return claims, 0, {"d": d, "H": H, "mu": mu, "c1": c1, "t_min": t_lo, "t_max": t_hi}, {}


@register("INDUCTION_BASE", "d", "mu", "j", "H", "C_induction")
def _induction_base(p, trials, seed):
    d = int(p.get("d", 2))
    mu = float(p.get("mu", 0.01))
    j = int(p.get("j", 1))
    C = float(p.get("C_induction", 1.0))
    _require(mu <= d / 100 + 1e-12, "need mu <= d/100")
    H = int(p.get("H", O.H_sequence(d, mu, C, j) if j > 1 else 3))
    _require(H >= O.H_sequence(d, mu, C, j), "need H >= H_j")
    trials = _floor(trials, 10 ** 4 if j == 1 else 4000)
    spec, rules = frozen_y_setup(d, H, mu)
    y = spec.shape.y
    horizon = 2 ** j
    xs = np.array(_records(spec, WalkKind.SimpleRandomWalk, rules, horizon, None, seed, trials,
                           lambda r: int(np.count_nonzero(r.frozen_vertex == y))))
    m, hw = mean_ci(xs)
    se = float(xs.std(ddof=1) / math.sqrt(trials))
    if j == 1:
        target = 1.0 / (d + 1)
        claims = [make_claim("E X^(1,H) = 1/(d+1)", m, 3 * se, target, "equal")]
    else:
        target = O.induction_target(d, mu)
        claims = [make_claim(f"E X^({j},{H}) <= .8/(1+2d mu/(d-1))", m, hw, target, "upper")]
    return claims, trials, {"d": d, "mu": mu, "j": j, "H": H, "C_induction": C}, {"se": se}


@register("TAG_DECAY", "d", "mu", "H", "h", "j")
def _tag_decay(p, trials, seed):
    d = int(p.get("d", 2))
    mu = float(p.get("mu", 0.02))
    H = int(p.get("H", 3))
    h = int(p.get("h", 3))
    j = int(p.get("j", 3))
    trials = _floor(trials, 10 ** 4)
    spec, rules = frozen_y_setup(d, H + h, mu)
    rules = StopRule(freeze_on_move_to=rules.freeze_on_move_to, tags=TagConfig(h, j))
    y = spec.shape.y
    horizon = 2 ** (j + 1)
    imax = 64

    def red(rec):
        row = np.zeros(imax + 1)
        for lab, (X, N, M) in rec.tags.items():
            if lab[0] == "B":
                row[int(lab[1:])] = N
        xs = sum(v[0] for v in rec.tags.values())
        row[imax] = int(np.count_nonzero(rec.frozen_vertex == y)) - xs
        return row

    rows = np.array(_records(spec, WalkKind.SimpleRandomWalk, rules, horizon, None, seed,
                             trials, red))
    decomposition_violations = int(np.count_nonzero(rows[:, imax]))
    NB = rows[:, :imax]
    claims = []
    i = 0
    while i + 1 < imax and NB[:, i + 1].sum() >= 30:
        r, hw = ratio_ci(NB[:, i + 1], NB[:, i])
        claims.append(make_claim(f"E N_B{i + 1} / E N_B{i} <= 1", r, hw, 1.0, "upper"))
        i += 1
    claims.append(make_claim("decomposition violations", decomposition_violations, 0.0, 0.0,
                             "equal"))
    return claims, trials, {"d": d, "mu": mu, "H": H, "h": h, "j": j}, {
        "mean_N_B": NB.mean(axis=0)[:i + 2].tolist()}


@register("IK_TAIL", "d", "k", "beta")
def _ik_tail(p, trials, seed):
    d = int(p.get("d", 2))
    k = int(p.get("k", 4))
    beta = float(p.get("beta", 10.0))
    trials = _floor(trials, 1000)
    base = RandomStream(seed)
    ik = np.array([sample_I_k(d, k, beta, base.child(i)) for i in range(trials)])
    ells = np.arange(1, int(ik.max()) + 1)
    surv = np.array([np.mean(ik > l) for l in ells])
    pos = surv > 0
    details = {"survival": surv.tolist(), "max_I_k": int(ik.max()), "cap": beta * d ** k + 1}
    if pos.sum() >= 2:
        x = ells[pos].astype(float)
        yv = np.log(surv[pos])
        A = np.vstack([x, np.ones_like(x)]).T
        coef, res, *_ = np.linalg.lstsq(A, yv, rcond=None)
        dof = max(1, len(x) - 2)
        s2 = float(np.sum((yv - A @ coef) ** 2)) / dof
        se = math.sqrt(s2 / np.sum((x - x.mean()) ** 2)) if len(x) > 2 else abs(coef[0]) / 10
        hw = float(stats.t.ppf(0.975, dof) * se)
        claims = [make_claim("log-survival slope < 0", float(coef[0]), hw, 0.0, "upper")]
    else:
        # degenerate tail: I_k never exceeds 1 (or 1 step), decay holds trivially
        est, hw = proportion_ci(int(np.count_nonzero(ik > 1)), trials, level=0.95)
        details["degenerate"] = True
        claims = [make_claim("P[I_k > 1] below 1 (degenerate tail)", est, hw, 1.0, "upper")]
    return claims, trials, {"d": d, "k": k, "beta": beta}, details


# -- concentration bounds ------------------------------------------------------

@register("CONCENTRATION")
def _concentration(p, trials, seed):
    """Exact probabilities against every bound on a fixed parameter grid."""
    claims = []
    for spec, fam in concentration_grid():
        exact = O.exact_probability(spec, **fam)
        claims.append(make_claim(repr(spec) + (f" {fam}" if fam else ""), exact, 0.0,
                                 O.bound_value(spec), "upper", tol=1e-15))
    return claims, 0, {}, {"n_points": len(claims)}


def concentration_grid():
    out = []
    for lam in (1.0, 4.0, 8.0, 20.0, 50.0):
        for a in (0.1, 0.3, 0.5, 0.8):
            out.append((O.PoiLower(lam, a), {}))
            out.append((O.PoiLower(lam, a), {"family": "binomial", "trials": int(4 * lam)}))
        for a in (1.2, 1.5, 2.0, 4.0):
            out.append((O.PoiUpper(lam, a), {}))
            out.append((O.PoiUpper(lam, a), {"family": "binomial", "trials": int(4 * lam)}))
    for n in (1, 2, 5, 10, 30):
        for pp in (0.1, 0.5, 0.9):
            for lam in (2.0, 3.0, 5.0):
                out.append((O.GeoSum(n, pp, lam), {}))
    for g1 in (8.0, 12.0, 20.0):
        for frac in (0.1, 0.3, 0.5):
            for k in (1, 2, 5):
                out.append((O.PoiSeq(g1, g1 * frac, k), {}))
    return out
