import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frogcover.harness import (PARAMS, REGISTRY, ConfigError, ExperimentConfig, HypothesisError,
                               regime_fit, run_trials, verify)
from frogcover.harness import stats as S
from frogcover.harness.experiment import CSV_COLUMNS, csv_text, trial_rows
from frogcover.harness.regime import (NLogNScaling, collect, SqrtExpScaling, monotone_blowup,
                                      relative_spread)

finite = st.floats(-1e6, 1e6, allow_nan=False)
width = st.floats(0, 1e3, allow_nan=False)


# -- verdicts -------------------------------------------------------------------

@given(finite, width, finite)
def test_upper_never_passes_above_bound(est, hw, bound):
    v = S.verdict_upper(est, hw, bound)
    if est > bound:
        assert v != S.PASS
    if est - hw > bound:
        assert v == S.FAIL


@given(finite, width, finite)
def test_lower_never_passes_below_bound(est, hw, bound):
    v = S.verdict_lower(est, hw, bound)
    if est < bound:
        assert v != S.PASS
    if est + hw < bound:
        assert v == S.FAIL


def test_verdict_bands():
    assert S.verdict_upper(1.0, 0.1, 2.0) == S.PASS
    assert S.verdict_upper(1.95, 0.1, 2.0) == S.INCONCLUSIVE
    assert S.verdict_lower(1.0, 0.0, 1.0) == S.PASS
    assert S.verdict_equal(1.0, 0.1, 1.05) == S.PASS
    assert S.verdict_equal(1.0, 0.1, 1.2) == S.FAIL
    assert S.combine([S.PASS, S.INCONCLUSIVE]) == S.INCONCLUSIVE
    assert S.combine([S.PASS, S.FAIL, S.INCONCLUSIVE]) == S.FAIL


def test_clopper_pearson_covers():
    lo, hi = S.clopper_pearson(0, 100)
    assert lo == 0 and 0 < hi < 0.06
    lo, hi = S.clopper_pearson(50, 100)
    assert lo < 0.5 < hi


def test_mean_ci_normal_width():
    x = np.tile([0.0, 2.0], 200)
    m, hw = S.mean_ci(x)
    assert m == 1.0
    assert hw == pytest.approx(S.Z99 * x.std(ddof=1) / math.sqrt(400))
    with pytest.raises(ValueError):
        S.mean_ci([])


@given(st.lists(st.floats(0, 100), min_size=3, max_size=50), st.randoms())
def test_statistics_ignore_completion_order(x, rnd):
    y = list(x)
    rnd.shuffle(y)
    assert S.mean_ci(x) == pytest.approx(S.mean_ci(y), rel=1e-12, abs=1e-12)


def test_report_keeps_worst_claim():
    claims = [S.make_claim("a", 1, 0.1, 2, "upper"), S.make_claim("b", 1.9, 0.05, 2, "upper"),
              S.make_claim("c", 3, 0.1, 2, "upper")]
    rep = S.CheckReport.from_claims("X", {}, claims, 400, 0.0)
    assert rep.verdict == S.FAIL and rep.estimate == 3
    rep = S.CheckReport.from_claims("X", {}, claims[:2], 400, 0.0)
    assert rep.verdict == S.PASS and rep.estimate == 1.9


# -- configs and trials ---------------------------------------------------------

def test_config_round_trip():
    cfg = ExperimentConfig(d=3, n=3, mu=0.25, trials=7, seed=5, variant="nonbacktracking")
    again = ExperimentConfig.from_dict(json.loads(cfg.to_json()))
    assert again.to_dict() == cfg.to_dict()


@given(st.integers(2, 5), st.integers(1, 6), st.floats(0, 20), st.integers(0, 2 ** 31),
       st.sampled_from(["standard", "nonbacktracking", "self_similar", "frozen_y"]))
def test_config_round_trip_property(d, n, mu, seed, variant):
    cfg = ExperimentConfig(d=d, n=n, mu=mu, seed=seed, variant=variant)
    assert ExperimentConfig.from_dict(json.loads(cfg.to_json())) == cfg


def test_config_is_strict():
    with pytest.raises(ConfigError, match="unknown"):
        ExperimentConfig.from_dict({"schema_version": 1, "mu": 1, "nn": 3})
    with pytest.raises(ConfigError, match="schema_version"):
        ExperimentConfig.from_dict({"mu": 1})
    with pytest.raises(ConfigError):
        ExperimentConfig(mu=1, schema_version=2)
    with pytest.raises(ConfigError):
        ExperimentConfig(mu=1, variant="lazy")
    with pytest.raises(ConfigError):
        ExperimentConfig(d=1, mu=1)
    with pytest.raises(ConfigError):
        ExperimentConfig(d=2, n=4, mu=1.0, beta=2.0)


def test_beta_parametrization():
    assert ExperimentConfig(d=2, n=4, beta=2.0).effective_mu == 30


def cover(rec):
    return rec.cover_time


def test_trials_identical_across_worker_counts():
    cfg = ExperimentConfig(d=2, n=4, mu=0.5, trials=24, seed=11)
    a = run_trials(cfg, cover, n_jobs=1)
    b = run_trials(cfg, cover, n_jobs=3)
    assert a == b
    assert run_trials(cfg, cover) == a


def test_records_are_reproducible():
    cfg = ExperimentConfig(d=2, n=3, mu=1.0, trials=3, seed=4)
    a = [r.to_dict() for r in run_trials(cfg)]
    b = [r.to_dict() for r in run_trials(cfg)]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_csv_layout_and_float_round_trip():
    cfg = ExperimentConfig(d=2, n=3, mu=1 / 3, trials=5, seed=2)
    recs = run_trials(cfg)
    text = csv_text(cfg, recs)
    lines = text.splitlines()
    assert lines[0].startswith("# config ")
    assert json.loads(lines[0][len("# config "):]) == cfg.to_dict()
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert float(rows[0]["mu"]) == 1 / 3
    assert [int(r["cover_time"]) for r in rows] == [r.cover_time for r in recs]
    assert len(trial_rows(cfg, recs)) == 5


def test_cover_time_nonincreasing_in_mu():
    means = []
    for mu in (0.0, 0.3, 1.0, 3.0):
        c = np.array(run_trials(ExperimentConfig(d=2, n=4, mu=mu, trials=600, seed=3), cover),
                     dtype=float)
        means.append((c.mean(), c.std(ddof=1) / math.sqrt(c.size)))
    for (m0, s0), (m1, s1) in zip(means, means[1:]):
        assert m1 <= m0 + 3 * math.hypot(s0, s1)


# -- checks ----------------------------------------------------------------------

def test_registry_lists_all_checks():
    expected = {"RETURN_FLOW", "POS_FRAC", "SPEED_TAIL", "E_TAU", "E_VK", "HIT_PROB",
                "ROOT_MISS", "RW_ROOT", "BALLS_BINS", "KBRW1", "KBRW2", "SUPERMARTINGALE",
                "ALL_AWAKE", "INDUCTION_BASE", "TAG_DECAY", "IK_TAIL", "CONCENTRATION"}
    assert set(REGISTRY) == expected == set(PARAMS)


def test_unknown_check_and_parameter():
    with pytest.raises(KeyError):
        verify("NOPE")
    with pytest.raises(HypothesisError, match="does not take"):
        verify("BALLS_BINS", {"q": 1})


def test_balls_bins_exact_report():
    rep = verify("BALLS_BINS", {"m": 9, "n": 3, "method": "exact"})
    assert rep.verdict == S.PASS
    assert rep.estimate == pytest.approx(float(Fraction(1533, 19683)))
    assert rep.bound_or_target == pytest.approx(math.exp(-9 / 54))


def test_hypothesis_violation_is_reported():
    with pytest.raises(HypothesisError):
        verify("BALLS_BINS", {"m": 5, "n": 3, "method": "exact"})
    with pytest.raises((HypothesisError, ValueError)):
        verify("SUPERMARTINGALE", {"d": 2, "mu": 1.0, "h": 3})


def test_reports_reproducible_from_seed():
    a = verify("E_TAU", {"d": 2, "n": 4, "k": 2}, trials=400, seed=9)
    b = verify("E_TAU", {"d": 2, "n": 4, "k": 2}, trials=400, seed=9)
    c = verify("E_TAU", {"d": 2, "n": 4, "k": 2}, trials=400, seed=10)
    assert a.claims == b.claims
    assert a.estimate != c.estimate
    assert a.params["seed"] == 9 and a.trials == 400


def test_trial_floor():
    rep = verify("E_TAU", {"d": 2, "n": 3, "k": 1}, trials=10)
    assert rep.trials == S.MIN_TRIALS


@pytest.mark.parametrize("check_id,params", [
    ("ROOT_MISS", {"d": 2, "k": 4}),
    ("RW_ROOT", {"d": 2, "n": 6}),
    ("ALL_AWAKE", {}),
    ("CONCENTRATION", {}),
    ("E_TAU", {"d": 3, "n": 3, "k": 2}),
])
def test_cheap_checks_pass(check_id, params):
    rep = verify(check_id, params, trials=2000, seed=1)
    assert rep.verdict == S.PASS, rep.to_dict()


def test_report_serializes():
    rep = verify("BALLS_BINS", {"m": 9, "n": 3, "method": "exact"})
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["check_id"] == "BALLS_BINS" and d["verdict"] == "pass"


# -- regime fit ------------------------------------------------------------------

def test_scaling_models_recover_exact_laws():
    n = np.arange(3, 12)
    a = NLogNScaling().fit(n, 2 + 3 * n * np.log(n))
    assert (a.slope_, a.intercept_) == pytest.approx((3, 2))
    b = SqrtExpScaling(2).fit(n, np.exp(0.5 + 1.7 * np.sqrt(n * math.log(2))))
    assert (b.slope_, b.intercept_) == pytest.approx((1.7, 0.5))
    assert b.score(n, b.predict(n)) == pytest.approx(1.0)


def test_spread_and_blowup():
    assert relative_spread([1, 1, 1]) == 0
    assert relative_spread([1, 2, 3]) == pytest.approx(1.0)
    assert monotone_blowup([1, 1.2, 2])
    assert not monotone_blowup([1, 0.9, 2])
    assert not monotone_blowup([1, 1.1, 1.2])


def test_small_regime_fit():
    res = regime_fit(2, [3, 4, 5], 30.0, 0.02, trials=20, seed=0)
    assert res.high.min_cover_over_n >= 1 and res.low.min_cover_over_n >= 1
    assert res.high.preferred in ("n_log_n", "sqrt_exp")
    assert len(res.low.ratio_nlogn) == 3
    assert json.loads(res.to_json())["d"] == 2


def test_regime_fit_validation():
    with pytest.raises(ValueError):
        regime_fit(2, [5, 4, 6], 30, 0.02, 10)
    with pytest.raises(ValueError):
        regime_fit(2, [3, 4, 5], 30, 0.5, 10)


def test_budget_cap_is_flagged():
    data = collect(2, [4, 5], 0.0, trials=10, seed=0, budget=2000)
    assert data.completed[0] == 10 and data.completed[1] < 10
    assert data.flags and data.flags[0].startswith("n=5")
    with pytest.raises(RuntimeError, match="completed"):
        collect(2, [4, 5], 0.0, trials=10, seed=0, budget=200)
