"""Discrete-time frog model: initial configurations, stop rules, runs and records."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import _kernel as K
from ._rng import (CLASS_ETA, CLASS_INITIAL, CLASS_SLEEPER, CLASS_SPECIAL, RandomStream)
from .substrate import TreeShape, WalkKind, WalkState, ancestors, build_tree, subtree

DEFAULT_BUDGET = 10 ** 9
MAX_TAG_INDEX = 256

_DIST_CODES = {"poisson": 0, "bernoulli_extended": 1, "deterministic": 2}


@dataclass(frozen=True)
class InitDistribution:
    """Law of the number of sleeping frogs per vertex."""
    kind: str
    mean: float

    def __post_init__(self):
        if self.kind not in _DIST_CODES:
            raise ValueError(f"unknown distribution {self.kind!r}")
        if not (self.mean >= 0) or not math.isfinite(self.mean):
            raise ValueError(f"mean must be finite and >= 0, got {self.mean}")
        if self.kind == "deterministic" and self.mean != int(self.mean):
            raise ValueError("deterministic count must be an integer")

    @property
    def code(self) -> int:
        return _DIST_CODES[self.kind]


def Poisson(mu: float) -> InitDistribution:
    return InitDistribution("poisson", float(mu))


def BernoulliExtended(mu: float) -> InitDistribution:
    return InitDistribution("bernoulli_extended", float(mu))


def Deterministic(k: int) -> InitDistribution:
    return InitDistribution("deterministic", float(int(k)))


@dataclass(frozen=True)
class SpecialFrogs:
    vertex: int
    count: int
    away_from_parent: bool = True


@dataclass(frozen=True)
class FrogInitSpec:
    shape: TreeShape
    distribution: InitDistribution
    start_vertex: int = 0
    zero_vertices: frozenset = frozenset()
    overrides: tuple = ()  # (vertex, count) pairs
    special_frogs: SpecialFrogs | None = None
    initial_frog: bool = True
    start_sleepers: bool = False  # sleepers at the start vertex are awake at time 0

    def __post_init__(self):
        object.__setattr__(self, "zero_vertices", frozenset(int(v) for v in self.zero_vertices))
        object.__setattr__(self, "overrides", tuple(sorted((int(v), int(c)) for v, c in self.overrides)))
        self.shape.check(self.start_vertex)
        for v in self.zero_vertices:
            self.shape.check(v)
        for v, c in self.overrides:
            self.shape.check(v)
            if c < 0:
                raise ValueError("override counts must be >= 0")
        if self.special_frogs is not None:
            self.shape.check(self.special_frogs.vertex)
            if self.special_frogs.count < 0:
                raise ValueError("special frog count must be >= 0")

    def to_dict(self) -> dict:
        out = {
            "shape": asdict(self.shape),
            "distribution": asdict(self.distribution),
            "start_vertex": self.start_vertex,
            "zero_vertices": sorted(self.zero_vertices),
            "overrides": [list(p) for p in self.overrides],
            "special_frogs": None if self.special_frogs is None else asdict(self.special_frogs),
            "initial_frog": self.initial_frog,
            "start_sleepers": self.start_sleepers,
        }
        return out


@dataclass(frozen=True)
class TagConfig:
    """Tag instrumentation on T_d^{(H+h)*}: boundary level h, time scale 2^j."""
    h: int
    j: int

    def __post_init__(self):
        if self.h < 1 or self.j < 0:
            raise ValueError("tagging needs h >= 1 and j >= 0")


@dataclass(frozen=True)
class StopRule:
    """The set of stop rules applied to a run.

    Movers arriving at `freeze_on_move_to` freeze; any frog (including a
    freshly woken one) sitting at `freeze_at` or, with `freeze_at_leaves`,
    at a leaf freezes. `self_similar` turns on the subtree gate.
    """
    freeze_at: frozenset = frozenset()
    freeze_on_move_to: frozenset = frozenset()
    freeze_at_leaves: bool = False
    halt_at: int | None = None
    self_similar: bool = False
    tags: TagConfig | None = None

    def __post_init__(self):
        object.__setattr__(self, "freeze_at", frozenset(int(v) for v in self.freeze_at))
        object.__setattr__(self, "freeze_on_move_to", frozenset(int(v) for v in self.freeze_on_move_to))

    def to_dict(self) -> dict:
        return {
            "freeze_at": sorted(self.freeze_at),
            "freeze_on_move_to": sorted(self.freeze_on_move_to),
            "freeze_at_leaves": self.freeze_at_leaves,
            "halt_at": self.halt_at,
            "self_similar": self.self_similar,
            "tags": None if self.tags is None else asdict(self.tags),
        }


def tag_label(kind: int, index: int) -> str | None:
    if kind == K.T_NONE:
        return None
    if kind == K.T_A:
        return "A"
    return ("B" if kind == K.T_B else "C") + str(int(index))


class SimState:
    """Complete frog-model state in flat arrays.

    Frogs are numbered: the initial frog (if any), then special frogs,
    then sleepers grouped by origin vertex. Sleepers at v occupy indices
    v_start[v] .. v_start[v] + v_eta[v] - 1.
    """

    def __init__(self, spec: FrogInitSpec, key: np.uint64, seed_info: dict):
        self.spec = spec
        self.shape = spec.shape
        self.key = np.uint64(key)
        self.seed_info = seed_info
        shape = self.shape
        nv = shape.n_vertices

        zero = np.zeros(nv, dtype=np.bool_)
        for v in spec.zero_vertices:
            zero[v] = True
        if shape.has_y:
            zero[shape.y] = True
        if not spec.start_sleepers:
            zero[spec.start_vertex] = True
        eta = np.zeros(nv, dtype=np.int64)
        K.sample_counts(spec.distribution.code, spec.distribution.mean, self.key,
                        CLASS_ETA, nv, zero, eta)
        for v, c in spec.overrides:
            if not zero[v]:
                eta[v] = c

        n_init = 1 if spec.initial_frog else 0
        sp = spec.special_frogs
        n_spec = sp.count if sp is not None else 0
        n_pre = n_init + n_spec
        total = n_pre + int(eta.sum())
        self.n_frogs = total

        v_start = np.empty(nv, dtype=np.int64)
        v_start[0] = n_pre
        np.cumsum(eta[:-1], out=v_start[1:])
        v_start[1:] += n_pre

        cls = np.full(total, CLASS_SLEEPER, dtype=np.int64)
        origin = np.empty(total, dtype=np.int64)
        index = np.empty(total, dtype=np.int64)
        origin[n_pre:] = np.repeat(np.arange(nv, dtype=np.int64), eta)
        index[n_pre:] = np.arange(total - n_pre, dtype=np.int64) - np.repeat(v_start - n_pre, eta)
        if n_init:
            cls[0] = CLASS_INITIAL
            origin[0] = spec.start_vertex
            index[0] = 0
        if n_spec:
            cls[n_init:n_pre] = CLASS_SPECIAL
            origin[n_init:n_pre] = sp.vertex
            index[n_init:n_pre] = np.arange(n_spec)
        self.f_origin = origin
        self.f_key = np.empty(total, dtype=np.uint64)
        K.fill_keys(self.key, cls, origin, index, self.f_key)

        self.f_status = np.zeros(total, dtype=np.int8)
        self.f_pos = origin.copy()
        self.f_prev = np.full(total, -1, dtype=np.int64)
        self.f_steps = np.zeros(total, dtype=np.int64)
        self.f_down = np.zeros(total, dtype=np.bool_)
        self.f_tk = np.zeros(total, dtype=np.int8)
        self.f_ti = np.zeros(total, dtype=np.int64)
        self.f_ftime = np.full(total, -1, dtype=np.int64)

        self.v_start = v_start
        self.v_eta = eta
        self.v_first = np.full(nv, -1, dtype=np.int64)
        self.v_gate = np.zeros(nv, dtype=np.int8)
        self.v_frozen = np.zeros(nv, dtype=np.int64)

        awake = list(range(n_pre))
        s = spec.start_vertex
        if spec.start_sleepers:
            awake.extend(range(v_start[s], v_start[s] + eta[s]))
        awake = np.asarray(awake, dtype=np.int64)
        self.f_status[awake] = K.ACTIVE
        self.f_tk[awake] = K.T_A
        if n_spec:
            self.f_down[n_init:n_pre] = sp.away_from_parent
        self.v_first[s] = 0
        if shape.has_y and s != shape.y:
            self.v_gate[s] = 1

        self.act = np.zeros(total, dtype=np.int64)
        self.act[:awake.size] = awake
        self.act2 = np.zeros(total, dtype=np.int64)
        self.fl = np.zeros(total, dtype=np.int8)
        self.claim = np.full(nv, -1, dtype=np.int64)
        self.tagX = np.zeros((4, MAX_TAG_INDEX), dtype=np.int64)
        self.tagN = np.zeros((4, MAX_TAG_INDEX), dtype=np.int64)
        self.tagM = np.zeros((4, MAX_TAG_INDEX), dtype=np.int64)
        self.ret = np.zeros(0, dtype=np.int64)
        self.tr = np.zeros((0, 6), dtype=np.int64)

        self.sc = np.zeros(K.N_SC, dtype=np.int64)
        self.sc[K.S_NACT] = awake.size
        self.sc[K.S_VISITED] = 1
        self.sc[K.S_COVER] = 0 if nv == 1 else -1
        self.sc[K.S_ASLEEP] = int(eta.sum()) - (int(eta[s]) if spec.start_sleepers else 0)
        self.initial_total = total
        self.trace_prefix: list[tuple] = []
        for f in awake:
            self.trace_prefix.append((0, K.EV_WAKE if f >= n_pre else K.EV_MOVE, s, int(f), K.T_A, 0))
        self.exit_code = None

    # -- read-only views -------------------------------------------------

    @property
    def time(self) -> int:
        return int(self.sc[K.S_TIME])

    @property
    def n_active(self) -> int:
        return int(self.sc[K.S_NACT])

    @property
    def n_sleeping(self) -> int:
        return int(self.sc[K.S_ASLEEP])

    @property
    def n_frozen(self) -> int:
        return int(self.sc[K.S_FROZEN])

    @property
    def cover_time(self) -> int | None:
        c = int(self.sc[K.S_COVER])
        return None if c < 0 else c

    @property
    def frog_steps(self) -> int:
        return int(self.sc[K.S_STEPS])

    def active_ids(self) -> np.ndarray:
        return self.act[:self.n_active].copy()

    def active(self) -> list[tuple[WalkState, str | None]]:
        out = []
        for f in self.act[:self.n_active]:
            prev = int(self.f_prev[f])
            out.append((WalkState(int(self.f_pos[f]), None if prev < 0 else prev),
                        tag_label(self.f_tk[f], self.f_ti[f])))
        return out

    def sleeping(self) -> np.ndarray:
        """Per-vertex sleeping counts (zero at visited vertices)."""
        return np.where(self.v_first < 0, self.v_eta, 0)

    def frozen(self) -> dict[int, list[tuple[int, str | None]]]:
        out: dict[int, list] = {}
        idx = np.flatnonzero(self.f_status == K.FROZEN)
        idx = idx[np.lexsort((idx, self.f_ftime[idx]))]
        for f in idx:
            out.setdefault(int(self.f_pos[f]), []).append(
                (int(self.f_ftime[f]), tag_label(self.f_tk[f], self.f_ti[f])))
        return out

    def check_conservation(self) -> None:
        status = self.f_status
        n_act = int(np.count_nonzero(status == K.ACTIVE))
        n_frz = int(np.count_nonzero(status == K.FROZEN))
        n_slp = int(self.sleeping().sum())
        if n_act != self.n_active or n_frz != self.n_frozen or n_slp != self.n_sleeping:
            raise AssertionError("state counters disagree with frog arrays")
        if n_act + n_frz + n_slp != self.initial_total:
            raise AssertionError(
                f"conservation violated: {n_act}+{n_slp}+{n_frz} != {self.initial_total}")
        if int(self.v_frozen.sum()) != n_frz:
            raise AssertionError("frozen tallies disagree")
        visited = self.v_first >= 0
        asleep = status == K.ASLEEP
        if np.any(visited[self.f_origin[asleep]]):
            raise AssertionError("sleeping frog at a visited vertex")

    def _ensure_buffers(self, code: int, trace: bool):
        if code == K.EXIT_RETURNS_FULL:
            grow = max(1024, 2 * self.ret.size, int(self.sc[K.S_NRET]) + 2 * self.n_active)
            new = np.zeros(grow, dtype=np.int64)
            new[:self.ret.size] = self.ret
            self.ret = new
        elif code == K.EXIT_TRACE_FULL:
            need = int(self.sc[K.S_NTR]) + 4 * self.n_active + 2 * self.n_sleeping \
                + 2 * self.shape.n_vertices
            grow = max(4096, 2 * self.tr.shape[0], need)
            new = np.zeros((grow, 6), dtype=np.int64)
            new[:self.tr.shape[0]] = self.tr
            self.tr = new


def init(spec: FrogInitSpec, rng: RandomStream) -> SimState:
    seed_info = {"seed": rng.seed, "path": list(rng.path)}
    return SimState(spec, rng.key64(), seed_info)


def _cfg(state: SimState, kind: WalkKind, rules: StopRule, horizon: int, observe: int | None,
         stop_on_cover: bool, budget: int, trace: bool):
    shape = state.shape
    if rules.tags is not None and not shape.has_y:
        raise ValueError("tagging requires a tree with y")
    if rules.self_similar and kind is WalkKind.SimpleRandomWalk:
        raise ValueError("the self-similar gate needs a nonbacktracking walk")
    sp = state.spec.special_frogs
    if sp is not None and sp.count > 0 and kind is WalkKind.SimpleRandomWalk:
        raise ValueError("special frogs are only defined for nonbacktracking walks")
    nv = shape.n_vertices
    cfg = np.zeros(K.N_CFG, dtype=np.int64)
    cfg[K.C_D] = shape.degree
    cfg[K.C_N] = shape.height
    cfg[K.C_Y] = shape.y_index
    cfg[K.C_KIND] = int(kind)
    cfg[K.C_START] = state.spec.start_vertex
    cfg[K.C_OBSERVE] = -1 if observe is None else shape.check(observe)
    cfg[K.C_LEAVES] = int(rules.freeze_at_leaves)
    cfg[K.C_SELFSIM] = int(rules.self_similar)
    if rules.tags is not None:
        cfg[K.C_TAG] = 1
        cfg[K.C_TAG_H] = rules.tags.h
        cfg[K.C_TAG_J] = rules.tags.j
    if rules.halt_at is not None:
        horizon = min(horizon, int(rules.halt_at))
    cfg[K.C_HORIZON] = horizon
    cfg[K.C_BUDGET] = budget
    cfg[K.C_STOP_COVER] = int(stop_on_cover)
    cfg[K.C_TRACE] = int(trace)
    cfg[K.C_NV] = nv
    fa, fm = _freeze_masks(shape, rules.freeze_at, rules.freeze_on_move_to)
    return cfg, fa, fm


@lru_cache(maxsize=256)
def _freeze_masks(shape: TreeShape, freeze_at: frozenset, freeze_on_move_to: frozenset):
    masks = []
    for vs in (freeze_at, freeze_on_move_to):
        m = np.zeros(shape.n_vertices, dtype=np.bool_)
        for v in vs:
            m[shape.check(v)] = True
        m.flags.writeable = False
        masks.append(m)
    return tuple(masks)


def _advance(state: SimState, cfg, fa, fm, trace: bool) -> int:
    s = state
    while True:
        code = K.run_ticks(cfg, s.sc, s.shape.levels, fa, fm,
                           s.f_key, s.f_status, s.f_pos, s.f_prev, s.f_steps, s.f_down,
                           s.f_tk, s.f_ti, s.f_ftime,
                           s.v_start, s.v_eta, s.v_first, s.v_gate, s.v_frozen,
                           s.act, s.act2, s.fl, s.claim,
                           s.tagX, s.tagN, s.tagM, s.ret, s.tr)
        if code in (K.EXIT_RETURNS_FULL, K.EXIT_TRACE_FULL):
            s._ensure_buffers(code, trace)
            continue
        s.exit_code = int(code)
        return int(code)


def step_model(state: SimState, kind: WalkKind, rules: StopRule = StopRule(),
               rng: RandomStream | None = None, observe: int | None = None) -> SimState:
    """Advance one tick in place and return the state.

    Frog paths are fixed by per-frog streams created at init, so `rng`
    is accepted for interface symmetry but not consumed.
    """
    kind = WalkKind.parse(kind)
    cfg, fa, fm = _cfg(state, kind, rules, state.time + 1, observe, False, DEFAULT_BUDGET, False)
    _advance(state, cfg, fa, fm, False)
    return state


@dataclass
class RunRecord:
    first_visit: np.ndarray
    returns: np.ndarray
    cover_time: int | None
    final_time: int
    exit_reason: str
    budget_exhausted: bool
    frog_steps: int
    n_frogs: int
    frozen_vertex: np.ndarray
    frozen_time: np.ndarray
    frozen_tag: list
    tags: dict = field(default_factory=dict)
    trace: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def to_dict(self, include_frozen: bool = True) -> dict:
        out = {
            "first_visit": self.first_visit.tolist(),
            "returns": self.returns.tolist(),
            "cover_time": self.cover_time,
            "final_time": self.final_time,
            "exit_reason": self.exit_reason,
            "budget_exhausted": self.budget_exhausted,
            "frog_steps": self.frog_steps,
            "n_frogs": self.n_frogs,
            "tags": {k: list(v) for k, v in self.tags.items()},
            "meta": self.meta,
        }
        if include_frozen:
            out["frozen"] = [[int(v), int(t), g] for v, t, g in
                             zip(self.frozen_vertex, self.frozen_time, self.frozen_tag)]
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True, separators=(",", ":"))

    def frozen_at(self, vertex: int) -> np.ndarray:
        """Sorted freeze times of frogs frozen at `vertex`."""
        return np.sort(self.frozen_time[self.frozen_vertex == vertex])

    def count_by(self, times: np.ndarray, t: int | np.ndarray) -> np.ndarray:
        return np.searchsorted(times, t, side="right")


_EXIT_NAMES = {K.EXIT_HORIZON: "horizon", K.EXIT_IDLE: "idle", K.EXIT_COVERED: "covered",
               K.EXIT_BUDGET: "budget"}


def config_digest(spec: FrogInitSpec, kind: WalkKind, rules: StopRule, horizon: int,
                  observe: int | None) -> str:
    return _digest(spec, WalkKind.parse(kind), rules, int(horizon), observe)


@lru_cache(maxsize=1024)
def _digest(spec, kind, rules, horizon, observe) -> str:
    blob = json.dumps({"spec": spec.to_dict(), "kind": WalkKind.parse(kind).name,
                       "rules": rules.to_dict(), "horizon": horizon, "observe": observe},
                      sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _tag_dict(state: SimState) -> dict:
    out = {}
    X, N, M = state.tagX, state.tagN, state.tagM
    for kind in (K.T_A, K.T_B, K.T_C):
        nz = np.flatnonzero(X[kind] | N[kind] | M[kind])
        if kind == K.T_A:
            nz = nz[:1] if X[kind, 0] else nz[:0]
        for i in nz:
            out[tag_label(kind, i)] = (int(X[kind, i]), int(N[kind, i]), int(M[kind, i]))
    return out


def record_from_state(state: SimState, kind, rules, horizon, observe, trace=False) -> RunRecord:
    if int(state.sc[K.S_TAG_OVF]):
        raise RuntimeError(f"tag index exceeded {MAX_TAG_INDEX}")
    frz = np.flatnonzero(state.f_status == K.FROZEN)
    order = np.lexsort((frz, state.f_pos[frz], state.f_ftime[frz]))
    frz = frz[order]
    tagged = rules.tags is not None
    tags = [tag_label(state.f_tk[f], state.f_ti[f]) if tagged else None for f in frz]
    tr = None
    if trace:
        pre = np.asarray(state.trace_prefix, dtype=np.int64).reshape(-1, 6)
        tr = np.concatenate([pre, state.tr[:int(state.sc[K.S_NTR])]])
    code = state.exit_code
    return RunRecord(
        first_visit=state.v_first.copy(),
        returns=state.ret[:int(state.sc[K.S_NRET])].copy(),
        cover_time=state.cover_time,
        final_time=state.time,
        exit_reason=_EXIT_NAMES.get(code, "none"),
        budget_exhausted=code == K.EXIT_BUDGET,
        frog_steps=state.frog_steps,
        n_frogs=state.n_frogs,
        frozen_vertex=state.f_pos[frz].copy(),
        frozen_time=state.f_ftime[frz].copy(),
        frozen_tag=tags,
        tags=_tag_dict(state) if tagged else {},
        trace=tr,
        meta={**state.seed_info,
              "config_digest": config_digest(state.spec, kind, rules, horizon, observe)},
    )


def run(spec: FrogInitSpec, kind, rules: StopRule = StopRule(), horizon: int = 10 ** 6,
        observe: int | None = None, rng: RandomStream | None = None, *,
        stop_on_cover: bool = False, budget: int = DEFAULT_BUDGET, trace: bool = False,
        check: bool = False) -> RunRecord:
    """Initialize and run until the horizon, idleness, cover (if requested) or budget."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    kind = WalkKind.parse(kind)
    rng = rng if rng is not None else RandomStream(0)
    state = init(spec, rng)
    cfg, fa, fm = _cfg(state, kind, rules, horizon, observe, stop_on_cover, budget, trace)
    _advance(state, cfg, fa, fm, trace)
    if check:
        state.check_conservation()
    return record_from_state(state, kind, rules, horizon, observe, trace)


def tag_counters(record: RunRecord) -> dict[str, tuple[int, int, int]]:
    return dict(record.tags)


def return_process(record: RunRecord) -> np.ndarray:
    return record.returns


_EV_NAMES = {K.EV_MOVE: "move", K.EV_VISIT: "visit", K.EV_WAKE: "wake", K.EV_RETAG: "retag",
             K.EV_FREEZE: "freeze", K.EV_RETURN: "return"}


def trace_records(record: RunRecord) -> Iterable[dict]:
    if record.trace is None:
        raise ValueError("run was not traced")
    for t, ev, v, f, tk, ti in record.trace:
        yield {"time": int(t), "event": _EV_NAMES[int(ev)], "vertex": int(v), "frog": int(f),
               "tag": tag_label(int(tk), int(ti))}


def write_trace(record: RunRecord, path, header: dict | None = None) -> None:
    """NDJSON, one event per line; an optional header object goes on the first line."""
    with open(path, "w") as fh:
        if header is not None:
            fh.write(json.dumps(header, sort_keys=True) + "\n")
        for row in trace_records(record):
            fh.write(json.dumps(row) + "\n")


# -- FM(v_k, l) and I_k ------------------------------------------------------

def fm_spec(d: int, k: int, beta: float, ell: int) -> FrogInitSpec:
    """FM(v_k, l) laid out on T_d^{k*}: root is v_k, y is v_{k+1}, vertex 1 is v_{k-1}."""
    shape = build_tree(d, k, True)
    mu = (3.0 + beta) * d * (d + 1)
    zero = set(subtree(shape, 1).tolist()) if k >= 1 else set()
    return FrogInitSpec(shape, Poisson(mu), start_vertex=0, zero_vertices=frozenset(zero),
                        special_frogs=SpecialFrogs(0, int(ell), True),
                        initial_frog=False, start_sleepers=True)


def fm_frozen_counts(d: int, k: int, beta: float, ell: int, rng: RandomStream,
                     budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Cumulative count of frogs frozen at v_{k-1} by each time t = 0..d^k."""
    spec = fm_spec(d, k, beta, ell)
    shape = spec.shape
    rules = StopRule(freeze_on_move_to=frozenset({1, shape.y}))
    T = d ** k
    rec = run(spec, WalkKind.RootBiasedNonbacktracking, rules, T, observe=1, rng=rng, budget=budget)
    if rec.budget_exhausted:
        raise RuntimeError("frog-step budget exhausted while measuring I_k")
    return np.searchsorted(rec.returns, np.arange(T + 1), side="right")


def _ik_condition(counts: np.ndarray, ell: int, beta: float, T: int) -> bool:
    lo = max(3, math.ceil(ell / beta))
    if lo > T:
        return True
    t = np.arange(lo, T + 1)
    return bool(np.all(counts[lo:T + 1] >= beta * t / 10000.0))


def sample_I_k(d: int, k: int, beta: float, rng: RandomStream,
               budget: int = DEFAULT_BUDGET) -> int:
    """Smallest l meeting the frozen-flow threshold in the coupled FM(v_k, l) family.

    The frozen count is monotone in l under the coupling, so the condition
    is monotone and a doubling search followed by bisection finds the same
    l as trying l = 1, 2, ... in turn.
    """
    if k < 1 or beta <= 0:
        raise ValueError("need k >= 1 and beta > 0")
    T = d ** k
    vac = math.floor(beta * T) + 1
    while math.ceil((vac - 1) / beta) > T:
        vac -= 1

    def ok(ell):
        if ell >= vac:
            return True
        return _ik_condition(fm_frozen_counts(d, k, beta, ell, rng, budget), ell, beta, T)

    if ok(1):
        return 1
    lo, hi = 1, 2
    while not ok(hi):
        lo, hi = hi, min(2 * hi, vac)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def measure_I_k(shape: TreeShape, v_k: int, beta: float, rng: RandomStream,
                budget: int = DEFAULT_BUDGET) -> int:
    from .oracles import J_index
    v_k = shape.check(v_k)
    if shape.has_y and v_k == shape.y:
        raise ValueError("v_k must be a tree vertex")
    n = shape.height
    k = n - int(shape.levels[v_k])
    J = J_index(shape.degree, n, beta)
    if not (J < k < n):
        raise ValueError(f"k={k} must satisfy J={J} < k < n={n}")
    return sample_I_k(shape.degree, k, beta, rng, budget)


# -- standard setups ----------------------------------------------------------

def frozen_y_setup(d: int, H: int, mu: float, start: int = 0, *,
                   freeze_levels: Iterable[int] = (), dist: str = "bernoulli_extended"
                   ) -> tuple[FrogInitSpec, StopRule]:
    """T_d^{H*} with one frog at `start`, none at y or above `start`, frogs frozen on reaching y.

    `freeze_levels` adds freezing at every vertex of the listed levels.
    """
    shape = build_tree(d, H, True)
    zero = frozenset(ancestors(shape, start))
    spec = FrogInitSpec(shape, InitDistribution(dist, mu), start_vertex=start, zero_vertices=zero)
    fa = set()
    for lv in freeze_levels:
        fa.update(shape.level_vertices(lv).tolist())
    rules = StopRule(freeze_at=frozenset(fa), freeze_on_move_to=frozenset({shape.y}))
    return spec, rules


def self_similar_setup(d: int, n: int, mu: float, *, leaf_freeze: bool = True
                       ) -> tuple[FrogInitSpec, StopRule]:
    """Self-similar model on T_d^n: start at the root, one child per frog cascade."""
    shape = build_tree(d, n, False)
    spec = FrogInitSpec(shape, Poisson(mu), start_vertex=0)
    return spec, StopRule(self_similar=True, freeze_at_leaves=leaf_freeze)
