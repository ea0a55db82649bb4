"""Command-line front end: `frogcover <subcommand> ...`."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import oracles as O
from ._rng import RandomStream
from .engine import run, write_trace
from .harness.checks import PARAMS, REGISTRY, HypothesisError, verify
from .harness.experiment import ConfigError, ExperimentConfig, csv_text, run_trials
from .harness.regime import regime_fit
from .harness.stats import FAIL, mean_ci

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 1, 2

_OVERRIDABLE = ("d", "n", "mu", "beta", "trials", "seed", "horizon", "variant", "output",
                "distribution", "observe", "budget")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _emit(payload: dict, output: str | None, stream=None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=_jsonable)
    if output:
        Path(output).write_text(text + "\n")
    print(text, file=stream or sys.stdout)


def _jsonable(x):
    if isinstance(x, (np.integer, np.floating)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def load_config(args) -> ExperimentConfig:
    """Config file values, then flag overrides."""
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    else:
        data = {"schema_version": 1}
    over = {k: getattr(args, k, None) for k in _OVERRIDABLE}
    if getattr(args, "jobs", None) is not None:
        over["n_jobs"] = args.jobs
    if getattr(args, "no_stop_on_cover", False):
        over["stop_on_cover"] = False
    if data.get("mu") is None and data.get("beta") is None and over["mu"] is None \
            and over["beta"] is None:
        over["mu"] = 0.0
    try:
        return ExperimentConfig.from_dict(data, **over)
    except TypeError as e:
        raise ConfigError(str(e)) from e


def _add_config_flags(p, horizon_default=None):
    p.add_argument("--config", help="JSON experiment config (schema_version 1)")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--horizon", type=int, default=horizon_default)
    p.add_argument("--variant", choices=("standard", "nonbacktracking", "self_similar", "frozen_y"))
    p.add_argument("--distribution", choices=("poisson", "bernoulli_extended", "deterministic"))
    p.add_argument("--observe", choices=("root", "y", "none"))
    p.add_argument("--budget", type=int, help="frog-step budget per trial")
    p.add_argument("--output", help="output file")
    p.add_argument("--jobs", type=int, help="parallel workers (default: $FROGCOVER_JOBS or 1)")
    p.add_argument("--no-stop-on-cover", action="store_true",
                   help="keep running after cover until the horizon")


def cmd_simulate(args) -> int:
    cfg = load_config(args)
    spec, kind, rules, observe = cfg.build()
    rec = run(spec, kind, rules, cfg.horizon, observe, RandomStream(cfg.seed).child(0),
              stop_on_cover=cfg.stop_on_cover, budget=cfg.budget, trace=args.trace is not None)
    if args.trace:
        write_trace(rec, args.trace, header={"config": cfg.to_dict(), "trial": 0})
    payload = {"config": cfg.to_dict(), "trial": 0, "record": rec.to_dict()}
    _emit(payload, cfg.output)
    return EXIT_OK


def cmd_cover_time(args) -> int:
    cfg = load_config(args)
    recs = run_trials(cfg)
    covers = np.array([r.cover_time for r in recs if r.cover_time is not None], dtype=float)
    summary = {"config": cfg.to_dict(), "trials": cfg.trials, "completed": int(covers.size),
               "budget_exhausted": int(sum(r.budget_exhausted for r in recs))}
    if covers.size:
        m, hw = mean_ci(covers)
        summary.update(mean=m, ci99_halfwidth=hw if np.isfinite(hw) else None,
                       min=float(covers.min()), max=float(covers.max()),
                       median=float(np.median(covers)))
    if cfg.output:
        Path(cfg.output).write_text(csv_text(cfg, recs))
    _emit(summary, None)
    return EXIT_OK


def cmd_return_process(args) -> int:
    cfg = load_config(args)
    recs = run_trials(cfg)
    seqs = [r.returns.tolist() for r in recs]
    horizon = max((r.final_time for r in recs), default=0)
    even = np.arange(2, horizon + 1, 2)
    mean_counts = [float(np.mean([np.searchsorted(r.returns, t, side="right") for r in recs]))
                   for t in even]
    payload = {"config": cfg.to_dict(), "returns": seqs,
               "mean_count_by_even_time": dict(zip((int(t) for t in even), mean_counts))}
    _emit(payload, cfg.output)
    return EXIT_OK


def _coerce(v: str):
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    return v


def parse_check_params(extra: list[str]) -> dict:
    """`--key value` or `--key=value` pairs into a dict with numeric coercion."""
    out = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"missing value for {tok}")
            val = extra[i + 1]
            i += 2
        out[key.replace("-", "_")] = _coerce(val)
    return out


def cmd_verify(args, extra) -> int:
    if args.check_id not in REGISTRY:
        raise ConfigError(f"unknown check {args.check_id!r}; known: {sorted(REGISTRY)}")
    params = parse_check_params(extra)
    rep = verify(args.check_id, params, args.trials, args.seed)
    payload = rep.to_dict()
    payload["config"] = {"check_id": args.check_id, "params": params, "trials": args.trials,
                         "seed": args.seed}
    _emit(payload, args.output)
    return EXIT_CHECK if rep.verdict == FAIL else EXIT_OK


def _int_list(s: str) -> list[int]:
    if ".." in s:
        a, b = s.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in s.split(",") if x]


def cmd_regime_fit(args) -> int:
    res = regime_fit(args.d, args.n_list, args.mu_high, args.mu_low, args.trials, args.seed,
                     budget=args.budget, n_jobs=args.jobs, n_list_low=args.n_list_low)
    payload = res.to_dict()
    payload["config"] = {"d": args.d, "n_list": args.n_list, "n_list_low": args.n_list_low,
                         "mu_high": args.mu_high, "mu_low": args.mu_low, "trials": args.trials,
                         "seed": args.seed, "budget": args.budget}
    _emit(payload, args.output)
    return EXIT_OK


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError(f"oracle {args.name} needs --{' --'.join(missing)}")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def cmd_oracle(args) -> int:
    name = args.name
    if name == "theta":
        _need(args, "d", "mu")
        t0, t1 = O.theta_roots(args.d, args.mu)
        print(f"theta0={_fmt(t0)} theta1={_fmt(t1)}")
    elif name == "hitting":
        _need(args, "d", "k")
        # tau_k stops at v_{k+1}, so any n > k gives the same value
        n = args.n if args.n is not None else args.k + 1
        v = O.exact_hitting_expectation(O.spine_problem(args.d, n, args.k))
        print(f"E_tau={_fmt(v)}")
    elif name == "spine":
        _need(args, "J", "k")
        p, ev = O.spine_formulas(args.J, args.k)
        print(f"P_hit={_fmt(p)} E_visits={_fmt(ev)}")
    elif name == "brw":
        _need(args, "d", "mu", "h")
        a, b, c, e = O.brw_bound_values(args.d, args.mu, args.h)
        print(f"EN_root={_fmt(a)} EX_root={_fmt(b)} EN_level={_fmt(c)} EX_level={_fmt(e)}")
    elif name == "J":
        _need(args, "d", "n", "beta")
        print(f"J={O.J_index(args.d, args.n, args.beta)}")
    elif name == "H":
        _need(args, "d", "mu", "j")
        print(f"H={O.H_sequence(args.d, args.mu, args.C, args.j)}")
    elif name == "balls-bins":
        _need(args, "m", "n")
        fr = O.balls_bins_cdf(args.m, args.n, (2 * args.n) // 3)
        bound = O.bound_value(O.BallsBins(args.m, args.n))
        print(f"P={fr.numerator}/{fr.denominator} float={_fmt(fr)} bound={_fmt(bound)}")
    elif name == "all-awake":
        _need(args, "d", "H", "mu", "t")
        ew = O.all_awake_expectation(args.d, args.H, args.mu, args.t)
        print(f"EW={_fmt(ew)} explicit_bound={_fmt(O.all_awake_explicit_bound(args.d, args.H, args.mu, args.t))}")
    elif name == "mu":
        _need(args, "d", "beta")
        print(f"mu={_fmt(O.mu_from_beta(args.d, args.beta))}")
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown oracle {name}")
    return EXIT_OK


ORACLES = ("theta", "hitting", "spine", "brw", "J", "H", "balls-bins", "all-awake", "mu")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="frogcover", description="Frog model cover-time simulator and checks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="one trial, optional NDJSON event trace")
    _add_config_flags(p)
    p.add_argument("--trace", help="write the event trace here (NDJSON)")

    p = sub.add_parser("cover-time", help="batch of trials with summary statistics")
    _add_config_flags(p)

    p = sub.add_parser("return-process", help="arrival times at the observed vertex per trial")
    _add_config_flags(p)

    p = sub.add_parser("verify", help="run a registered check; extra --key value pairs are "
                                      "check parameters",
                       epilog="checks: " + ", ".join(
                           f"{k}({', '.join(v)})" for k, v in sorted(PARAMS.items())))
    p.add_argument("check_id")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")

    p = sub.add_parser("regime-fit", help="dense vs sparse cover-time scaling fits")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n-list", type=_int_list, default=list(range(4, 11)),
                   help="heights, e.g. 4..10 or 4,6,8")
    p.add_argument("--n-list-low", type=_int_list, default=None,
                   help="heights for the sparse regime (default: --n-list)")
    p.add_argument("--mu-high", type=float, default=30.0)
    p.add_argument("--mu-low", type=float, default=0.02)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10 ** 9)
    p.add_argument("--jobs", type=int)
    p.add_argument("--output")

    p = sub.add_parser("oracle", help="print a closed-form or exact value")
    p.add_argument("name", choices=ORACLES)
    for flag, typ in (("d", int), ("n", int), ("k", int), ("J", int), ("h", int), ("H", int),
                      ("j", int), ("m", int), ("t", int), ("mu", float), ("beta", float)):
        p.add_argument(f"--{flag}", type=typ)
    p.add_argument("--C", type=float, default=1.0, help="induction constant for H")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args, extra = ap.parse_known_args(argv)
        if extra and args.command != "verify":
            ap.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as e:  # usage errors and --help
        return e.code if isinstance(e.code, int) else EXIT_CONFIG
    try:
        if args.command == "verify":
            return cmd_verify(args, extra)
        handler = {"simulate": cmd_simulate, "cover-time": cmd_cover_time,
                   "return-process": cmd_return_process, "regime-fit": cmd_regime_fit,
                   "oracle": cmd_oracle}[args.command]
        return handler(args)
    except (ConfigError, HypothesisError, O.DomainError, ValueError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"frogcover: error: {msg}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
