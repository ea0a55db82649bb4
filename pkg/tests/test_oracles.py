import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import stats

from frogcover import WalkKind, build_tree
from frogcover import oracles as O
from frogcover.substrate import spine


# -- hitting times ---------------------------------------------------------------

def test_first_step_value():
    assert O.exact_hitting_expectation(O.spine_problem(2, 4, 1)) == pytest.approx(2.0, rel=1e-12)


def test_k2_value_is_four():
    v = O.exact_hitting_expectation(O.spine_problem(2, 5, 2))
    assert v == pytest.approx(4.0, rel=1e-12)
    assert v != pytest.approx(2 ** 1 * 1 / 2)  # not d^(k-1)(d-1)/2


@pytest.mark.parametrize("d,k", [(2, 1), (2, 3), (3, 2), (4, 2), (2, 6)])
def test_hitting_time_is_d_to_the_k(d, k):
    full = O.exact_hitting_expectation(O.spine_problem(d, k + 2, k))
    reduced = O.exact_hitting_expectation(O.excursion_problem(d, k))
    assert full == pytest.approx(d ** k, rel=1e-10)
    assert reduced == pytest.approx(full, rel=1e-10)


def test_forced_step_is_one():
    chain = O.WeightedChain.from_matrix([[0, 1], [1, 0]])
    assert O.exact_hitting_expectation(O.HittingProblem(0, {1}, chain=chain)) == 1.0


def test_unreachable_target():
    w = np.zeros((3, 3))
    w[0, 1] = w[1, 0] = 1
    chain = O.WeightedChain.from_matrix(w)
    with pytest.raises(O.UnreachableTargetError):
        O.exact_hitting_expectation(O.HittingProblem(0, {2}, chain=chain))


def test_problem_validation():
    with pytest.raises(ValueError):
        O.HittingProblem(1, {1}, shape=build_tree(2, 2))
    with pytest.raises(ValueError):
        O.HittingProblem(0, set(), shape=build_tree(2, 2))
    with pytest.raises(IndexError):
        O.HittingProblem(0, {99}, shape=build_tree(2, 2))


def small_instances(max_states=1000):
    for d in range(2, 11):
        for n in range(1, 12):
            for y in (False, True):
                shape = build_tree(d, n, y)
                if shape.n_vertices > max_states:
                    continue
                yield shape


def test_solver_matches_dp_on_all_small_trees():
    """Linear solve vs truncated DP enumeration: every tree with <= 10^3 vertices,
    spine targets at every k, plus root-from-leaf and y-from-leaf problems."""
    count = 0
    for shape in small_instances():
        n = shape.height
        problems = []
        if not shape.has_y:
            problems += [O.spine_problem(shape.degree, n, k) for k in range(1, n + 1)]
        leaf = shape.level_start(n)
        problems.append(O.HittingProblem(leaf, {0}, shape=shape))
        if shape.has_y:
            problems.append(O.HittingProblem(leaf, {shape.y}, shape=shape))
        for p in problems:
            exact = O.exact_hitting_expectation(p)
            dp, tail = O.truncated_expectation(p, tol=1e-15)
            assert abs(dp - exact) <= 1e-8 * exact, (shape, p.start, p.targets, exact, dp)
            count += 1
    assert count > 50


@given(st.integers(2, 4), st.integers(1, 4), st.data())
def test_solver_matches_dp_random_targets(d, n, data):
    shape = build_tree(d, n, data.draw(st.booleans()))
    nv = shape.n_vertices
    start = data.draw(st.integers(0, nv - 1))
    targets = data.draw(st.frozensets(st.integers(0, nv - 1), min_size=1, max_size=4))
    assume(start not in targets)
    p = O.HittingProblem(start, targets, shape=shape)
    exact = O.exact_hitting_expectation(p)
    dp, _ = O.truncated_expectation(p)
    assert dp == pytest.approx(exact, rel=1e-8)
    pmf, surv = O.hitting_time_distribution(p)
    assert abs(pmf.sum() + surv[-1] - 1) < 1e-12


# -- closed forms -----------------------------------------------------------------

def test_spine_formulas():
    assert O.spine_formulas(3, 1) == pytest.approx((1 / 3, 1.5))
    for J in range(1, 8):
        assert O.spine_formulas(J, J) == pytest.approx((1.0, 2 * J / (J + 1)))
    with pytest.raises(O.DomainError):
        O.spine_formulas(3, 4)


def test_spine_formula_against_exact_chain():
    """E[V_k | hit 0 before J+1] from an explicit path chain, J=5."""
    J = 5
    for k in range(1, J + 1):
        # Doob h-transform: conditioned walk steps down w.p. h(x-1)/(2h(x)), h(x) = (J+1-x)/(J+1)
        h = lambda x: (J + 1 - x) / (J + 1)
        P = np.zeros((J + 2, J + 2))
        for x in range(1, J + 1):
            P[x, x - 1] = h(x - 1) / (2 * h(x))
            P[x, x + 1] = h(x + 1) / (2 * h(x))
        Q = P[1:J + 1, 1:J + 1]
        G = np.linalg.inv(np.eye(J) - Q)  # expected visits
        assert G[J - 1, k - 1] == pytest.approx(O.spine_formulas(J, k)[1], rel=1e-12)


def test_theta_roots():
    assert O.theta_roots(2, 0) == pytest.approx((1.0, 2.0))
    assert O.theta_roots(2, 1 / 8) == pytest.approx((1.5, 1.5))
    with pytest.raises(O.DomainError):
        O.theta_roots(3, 1)


@given(st.integers(2, 50), st.floats(0, 1))
def test_theta_roots_solve_quadratic(d, frac):
    mu = frac * O.theta_threshold(d)
    t0, t1 = O.theta_roots(d, mu)
    assert t0 <= t1
    for t in (t0, t1):
        assert t * t - (d + 1) * t + (1 + mu) * d == pytest.approx(0, abs=1e-9 * d * d)


def test_brw_bounds():
    assert O.brw_bound_values(2, 0.05, 0)[0] == 1
    assert O.brw_bound_values(3, 0.0, 4) == pytest.approx((1, 1 / 3, 1, 3 ** -4))
    assert O.brw_bound_values(2, 0.1, 3)[0] == pytest.approx(2.744)
    with pytest.raises(O.DomainError):
        O.brw_bound_values(2, 0.2, 3)


def test_J_index():
    assert O.J_index(2, 1024, 10) == 26
    assert O.J_index(2, 2, 1e5) <= 0
    assert O.J_sanity(2, 1024, 10)


@given(st.integers(2, 6), st.integers(3, 10 ** 6), st.floats(1e-2, 1e6))
def test_J_shift_by_degree(d, n, beta):
    x = math.log(1e5 * n * math.log(n) / beta, d)
    assume(abs(x - round(x)) > 1e-6 and abs(x - 1 - round(x - 1)) > 1e-6)
    assert O.J_index(d, n, beta * d) == O.J_index(d, n, beta) - 1


def test_H_sequence():
    assert O.H_sequence(8, 1, 1, 1) == 1
    assert O.H_sequence(8, 1, 1, 2) == 4
    hs = [O.H_sequence(8, 0.08, 1, j) for j in range(1, 51)]
    assert all(a <= b for a, b in zip(hs, hs[1:]))
    assert hs[1:3] == [3, 5]


# -- bounds ---------------------------------------------------------------------

def test_poi_lower_example():
    b = O.bound_value(O.PoiLower(8, 0.5))
    assert b == pytest.approx(math.exp(-1))
    assert O.exact_probability(O.PoiLower(8, 0.5)) == pytest.approx(stats.poisson.cdf(4, 8))


def test_balls_bins_exact():
    assert O.balls_bins_cdf(9, 3, 2) == Fraction(1533, 19683)
    assert O.bound_value(O.BallsBins(9, 3)) == pytest.approx(math.exp(-9 / 54))
    with pytest.raises(O.DomainError):
        O.bound_value(O.BallsBins(5, 3))


@given(st.integers(1, 5), st.integers(1, 9))
def test_balls_bins_cdf_is_a_cdf(n, m):
    vals = [O.balls_bins_cdf(m, n, z) for z in range(0, n + 1)]
    assert vals[-1] == 1
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_exp_sum_constant():
    assert O.ExpSum(1, 1, 1, 7).value() == 4


@given(st.floats(0.5, 3), st.floats(0.2, 2), st.floats(0.2, 2), st.integers(1, 12))
def test_exp_sum_tail_within_bound(C, b, bp, n):
    spec = O.ExpSum(C, b, bp, n)
    assert O.exp_sum_tail(spec) <= spec.tail() + 1e-12


@given(st.floats(0.5, 100), st.floats(0.01, 0.99))
def test_poi_lower_holds(lam, a):
    spec = O.PoiLower(lam, a)
    assert O.exact_probability(spec) <= O.bound_value(spec) + 1e-15


@given(st.floats(0.5, 100), st.floats(1.01, 10))
def test_poi_upper_holds(lam, a):
    spec = O.PoiUpper(lam, a)
    assert O.exact_probability(spec) <= O.bound_value(spec) + 1e-15


@given(st.integers(1, 40), st.floats(0.05, 1), st.floats(2, 8))
def test_geo_sum_holds(n, p, lam):
    spec = O.GeoSum(n, p, lam)
    assert O.exact_probability(spec) <= O.bound_value(spec) + 1e-15


@given(st.floats(8, 40), st.floats(0.05, 0.5), st.integers(1, 8))
def test_poi_seq_holds(g1, frac, k):
    spec = O.PoiSeq(g1, g1 * frac, k)
    worst, indep = O.poi_seq_union(spec)
    assert indep <= worst + 1e-15
    assert worst <= O.bound_value(spec) + 1e-15


def test_bounds_reject_bad_domains():
    for bad in (O.PoiLower(1, 1.5), O.PoiUpper(1, 0.5), O.GeoSum(0, 0.5, 3),
                O.PoiSeq(4, 1, 1), O.RootMiss(2, 3, 100), O.AllAwake(-1, 2)):
        with pytest.raises(O.DomainError):
            O.bound_value(bad)


@pytest.mark.parametrize("d,k", [(2, 2), (2, 5), (3, 3), (4, 2)])
def test_root_miss_lower_bound(d, k):
    cdf = O.root_hit_cdf(d, k, WalkKind.RootBiasedNonbacktracking, d ** k)
    for t in range(k + 2, d ** k + 1):
        assert cdf[t] >= O.bound_value(O.RootMiss(d, k, t)) - 1e-15


def test_root_miss_degenerate_case():
    p = O.exact_probability(O.RootMiss(2, 2, 4))
    assert O.bound_value(O.RootMiss(2, 2, 4)) == 0.0 <= p


@pytest.mark.parametrize("d,n", [(2, 8), (2, 11), (3, 6), (5, 4)])
def test_rw_root_lower_bound(d, n):
    T = d ** n
    cdf = O.root_hit_cdf(d, n, WalkKind.SimpleRandomWalk, T)
    t0 = math.ceil(n * math.log(d) / O.RW_ROOT_A)
    for t in range(t0, T + 1, max(1, (T - t0) // 200)):
        assert cdf[t] >= O.bound_value(O.RwRoot(d, n, t)) - 1e-15


def test_all_awake_small_cases():
    # with mu = 0 only the root frog matters: P[hit y within 1 step] = 1/(d+1)
    assert O.all_awake_expectation(2, 3, 0.0, 1) == pytest.approx(1 / 3)
    for t in range(1, 40):
        ew = O.all_awake_expectation(8, 3, 0.08, t)
        assert ew <= O.all_awake_explicit_bound(8, 3, 0.08, t)


@given(st.integers(2, 4), st.integers(1, 4), st.floats(0, 1), st.integers(1, 12))
def test_all_awake_matches_walk_enumeration(d, H, mu, t):
    shape = build_tree(d, H, True)
    total = 0.0
    for v in range(shape.n_heap):
        hit = O.hit_by_time(shape, "srw", v, {shape.y}, t)[t]
        total += hit if v == 0 else mu * hit
    assert O.all_awake_expectation(d, H, mu, t) == pytest.approx(total, rel=1e-10, abs=1e-14)


# -- walk enumeration -------------------------------------------------------------

def test_walk_distribution_examples():
    wd = O.enumerate_small_walk_distribution(build_tree(2, 1), "srw", 0, 1)
    assert wd.occupation[1, 1] == pytest.approx(0.5) and wd.occupation[1, 2] == pytest.approx(0.5)


@given(st.integers(2, 3), st.integers(1, 4), st.booleans(), st.sampled_from(list(WalkKind)),
       st.integers(1, 15))
def test_walk_distribution_is_stochastic(d, n, y, kind, t):
    shape = build_tree(d, n, y)
    wd = O.enumerate_small_walk_distribution(shape, kind, shape.level_start(n), t)
    assert np.allclose(wd.occupation.sum(axis=1), 1, atol=1e-12)


def test_enumeration_cap():
    with pytest.raises(MemoryError):
        O.enumerate_small_walk_distribution(build_tree(2, 6), "rbnb", 0, 100, cap=1000)


def test_hit_by_time_agrees_with_enumeration():
    shape = build_tree(2, 4)
    leaf = shape.level_start(4)
    a = O.hit_by_time(shape, "rbnb", leaf, {0}, 30)
    wd = O.enumerate_small_walk_distribution(shape, "rbnb", leaf, 30, absorbing={0})
    assert np.allclose(a, wd.occupation[:, 0], atol=1e-14)


# -- parameters -----------------------------------------------------------------

def test_model_params():
    p = O.ModelParams.from_beta(2, 10, 2.0)
    assert p.mu == 30.0
    with pytest.raises(O.DomainError):
        O.ModelParams(2, 10, 31.0, beta=2.0)
    assert O.ModelParams(2, 5, 0.02).eps == 1.0
    assert 0 < O.ModelParams(2, 5, 1.5).eps < 1


def test_oracle_json_handles_fractions():
    s = O.oracle_json({"p": Fraction(1, 3), "a": np.arange(2), "x": np.float64(0.5)})
    out = json.loads(s)
    assert out["p"]["num"] == 1 and out["p"]["den"] == 3 and out["a"] == [0, 1]
