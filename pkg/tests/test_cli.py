import json

import pytest

from frogcover.cli import main, parse_check_params


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_oracle_theta(capsys):
    code, out, _ = run(capsys, "oracle", "theta", "--d", "2", "--mu", "0")
    assert code == 0 and out.strip() == "theta0=1 theta1=2"


def test_oracle_domain_error_names_precondition(capsys):
    code, _, err = run(capsys, "oracle", "theta", "--d", "3", "--mu", "1")
    assert code == 1 and "mu" in err


@pytest.mark.parametrize("argv,expect", [
    (["oracle", "hitting", "--d", "2", "--k", "1"], 2.0),
    (["oracle", "J", "--d", "2", "--n", "1024", "--beta", "10"], 26),
])
def test_oracle_values(capsys, argv, expect):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert float(out.split("=")[1]) == pytest.approx(expect, rel=1e-12)


def test_cover_time_mean_near_five(capsys, tmp_path):
    csv_path = tmp_path / "trials.csv"
    code, out, _ = run(capsys, "cover-time", "--d", "2", "--n", "1", "--mu", "0",
                       "--trials", "100000", "--seed", "7", "--output", str(csv_path))
    assert code == 0
    summary = json.loads(out)
    assert abs(summary["mean"] - 5) <= summary["ci99_halfwidth"] + 1e-9
    assert summary["config"]["seed"] == 7
    text = csv_path.read_text().splitlines()
    assert text[0].startswith("# config ") and len(text) == 100002


def test_verify_e_vk(capsys):
    code, out, _ = run(capsys, "verify", "E_VK", "--J", "3", "--k", "1", "--trials", "1000000",
                       "--seed", "1")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "pass"
    assert rep["config"]["params"] == {"J": 3, "k": 1}


def test_verify_fail_exit_code(capsys, monkeypatch):
    from frogcover.harness import checks
    from frogcover.harness.stats import make_claim

    def always_fails(p, trials, seed):
        return [make_claim("x", 2.0, 0.0, 1.0, "upper")], 1, {}, {}

    monkeypatch.setitem(checks.REGISTRY, "E_TAU", always_fails)
    code, out, _ = run(capsys, "verify", "E_TAU")
    assert code == 2 and json.loads(out)["verdict"] == "fail"


def test_config_errors_exit_one(capsys, tmp_path):
    assert run(capsys, "verify", "NOPE")[0] == 1
    assert run(capsys, "verify", "BALLS_BINS", "--bogus", "1")[0] == 1
    assert run(capsys, "cover-time", "--d", "1", "--mu", "0")[0] == 1
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"schema_version": 1, "mu": 0, "typo": 1}))
    code, _, err = run(capsys, "cover-time", "--config", str(bad))
    assert code == 1 and "typo" in err
    assert run(capsys, "simulate", "--unknown-flag")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_flags_override_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"schema_version": 1, "d": 3, "n": 2, "mu": 0.5, "trials": 5}))
    code, out, _ = run(capsys, "cover-time", "--config", str(cfg), "--n", "3", "--seed", "4")
    eff = json.loads(out)["config"]
    assert code == 0 and (eff["d"], eff["n"], eff["trials"], eff["seed"]) == (3, 3, 5, 4)


def test_simulate_trace_is_reproducible(capsys, tmp_path):
    paths = [tmp_path / "a.ndjson", tmp_path / "b.ndjson"]
    outs = []
    for p in paths:
        code, out, _ = run(capsys, "simulate", "--d", "2", "--n", "3", "--mu", "1", "--seed",
                           "3", "--trace", str(p))
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert paths[0].read_bytes() == paths[1].read_bytes()
    lines = paths[0].read_text().splitlines()
    assert json.loads(lines[0])["config"]["seed"] == 3
    assert all(json.loads(line) for line in lines[1:])


def test_return_process(capsys):
    code, out, _ = run(capsys, "return-process", "--variant", "self_similar", "--d", "2",
                       "--n", "4", "--mu", "36", "--trials", "5", "--horizon", "6",
                       "--no-stop-on-cover")
    data = json.loads(out)
    assert code == 0 and len(data["returns"]) == 5
    assert set(data["mean_count_by_even_time"]) == {"2", "4", "6"}


def test_regime_fit_small(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "regime-fit", "--n-list", "3..5", "--trials", "10",
                       "--output", str(out_file))
    assert code == 0
    assert json.loads(out_file.read_text())["config"]["n_list"] == [3, 4, 5]


def test_parse_check_params():
    assert parse_check_params(["--J", "3", "--mu=0.5", "--method", "exact"]) == \
        {"J": 3, "mu": 0.5, "method": "exact"}
