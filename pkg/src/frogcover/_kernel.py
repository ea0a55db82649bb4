"""Numba tick loop for the frog model.

All state lives in flat arrays owned by ``engine.SimState``; the kernel
mutates them in place and returns an exit code. Scalars live in ``sc``
and configuration in ``cfg`` (indices below).
"""
import numba as nb
import numpy as np

from ._rng import bernoulli_extended, frog_key, poisson, uniform
from .substrate import next_vertex

# cfg slots
C_D, C_N, C_Y, C_KIND, C_START, C_OBSERVE, C_LEAVES, C_SELFSIM, C_TAG, C_TAG_H, C_TAG_J, \
    C_HORIZON, C_BUDGET, C_STOP_COVER, C_TRACE, C_NV = range(16)
N_CFG = 16

# sc slots
S_TIME, S_NACT, S_VISITED, S_COVER, S_STEPS, S_NRET, S_NTR, S_ASLEEP, S_FROZEN, S_TAG_OVF = range(10)
N_SC = 10

# frog status
ASLEEP, ACTIVE, FROZEN = 0, 1, 2

# tag kinds
T_NONE, T_A, T_B, T_C = 0, 1, 2, 3

# exit codes
EXIT_HORIZON, EXIT_IDLE, EXIT_COVERED, EXIT_BUDGET, EXIT_RETURNS_FULL, EXIT_TRACE_FULL = range(6)

# trace event kinds
EV_MOVE, EV_VISIT, EV_WAKE, EV_RETAG, EV_FREEZE, EV_RETURN = range(6)


@nb.njit(cache=True)
def _trace(tr, sc, t, ev, v, f, tk, ti):
    i = sc[S_NTR]
    tr[i, 0] = t
    tr[i, 1] = ev
    tr[i, 2] = v
    tr[i, 3] = f
    tr[i, 4] = tk
    tr[i, 5] = ti
    sc[S_NTR] = i + 1


@nb.njit(cache=True)
def _freeze(f, v, t, cfg, sc, f_status, f_ftime, f_tk, f_ti, v_frozen, tagX, tr):
    f_status[f] = FROZEN
    f_ftime[f] = t
    v_frozen[v] += 1
    sc[S_FROZEN] += 1
    tk = f_tk[f]
    if cfg[C_TAG] and v == cfg[C_Y] and tk != T_NONE and t <= (np.int64(1) << (cfg[C_TAG_J] + 1)):
        tagX[tk, f_ti[f]] += 1
    if cfg[C_TRACE]:
        _trace(tr, sc, t, EV_FREEZE, v, f, tk, f_ti[f])


@nb.njit(cache=True)
def run_ticks(cfg, sc, levels, freeze_at, freeze_move,
              f_key, f_status, f_pos, f_prev, f_steps, f_down, f_tk, f_ti, f_ftime,
              v_start, v_eta, v_first, v_gate, v_frozen,
              act, act2, fl, claim,
              tagX, tagN, tagM, ret, tr):
    d = cfg[C_D]
    n = cfg[C_N]
    y = cfg[C_Y]
    kind = cfg[C_KIND]
    start = cfg[C_START]
    observe = cfg[C_OBSERVE]
    nv = cfg[C_NV]
    tag_on = cfg[C_TAG] != 0
    h = cfg[C_TAG_H]
    t_mid = np.int64(1) << cfg[C_TAG_J]
    t_end = np.int64(1) << (cfg[C_TAG_J] + 1)
    kmax = tagX.shape[1]
    tracing = cfg[C_TRACE] != 0
    ret_cap = ret.shape[0]
    tr_cap = tr.shape[0]

    while True:
        t0 = sc[S_TIME]
        nact = sc[S_NACT]
        if nact == 0:
            return EXIT_IDLE
        if sc[S_COVER] >= 0 and cfg[C_STOP_COVER]:
            return EXIT_COVERED
        if t0 >= cfg[C_HORIZON]:
            return EXIT_HORIZON
        if sc[S_STEPS] >= cfg[C_BUDGET]:
            return EXIT_BUDGET
        if observe >= 0 and sc[S_NRET] + nact > ret_cap:
            return EXIT_RETURNS_FULL
        if tracing and sc[S_NTR] + 4 * nact + 2 * sc[S_ASLEEP] + 2 * nv > tr_cap:
            return EXIT_TRACE_FULL
        t = t0 + 1

        # 1. every active frog takes one step
        for i in range(nact):
            f = act[i]
            cur = f_pos[f]
            u = uniform(f_key[f], f_steps[f])
            nxt = next_vertex(d, n, y, kind, levels, cur, f_prev[f], f_down[f], u)
            f_down[f] = False
            f_steps[f] += 1
            f_prev[f] = cur
            f_pos[f] = nxt
            fl[i] = 0
            if nxt == observe:
                ret[sc[S_NRET]] = t
                sc[S_NRET] += 1
                if tracing:
                    _trace(tr, sc, t, EV_RETURN, nxt, f, f_tk[f], f_ti[f])
            if tracing:
                _trace(tr, sc, t, EV_MOVE, nxt, f, f_tk[f], f_ti[f])
        sc[S_STEPS] += nact

        # 2. self-similar gate: one entrant per fresh child, returns to start freeze
        if cfg[C_SELFSIM]:
            for i in range(nact):
                f = act[i]
                nxt = f_pos[f]
                if nxt == start:
                    fl[i] = 1
                elif nxt != y and levels[nxt] == levels[f_prev[f]] + 1:
                    if v_gate[nxt]:
                        fl[i] = 1
                    elif claim[nxt] < 0 or f < claim[nxt]:
                        claim[nxt] = f
            for i in range(nact):
                f = act[i]
                nxt = f_pos[f]
                if fl[i] == 0 and nxt != start and nxt != y and levels[nxt] == levels[f_prev[f]] + 1:
                    if claim[nxt] != f:
                        fl[i] = 1
            for i in range(nact):
                nxt = f_pos[act[i]]
                if nxt != y and claim[nxt] >= 0:
                    v_gate[nxt] = 1
                    claim[nxt] = -1

        # 3. retag movers
        if tag_on and t <= t_end:
            for i in range(nact):
                f = act[i]
                tk = f_tk[f]
                if tk == T_NONE:
                    continue
                ti = f_ti[f]
                lc = levels[f_prev[f]]
                ln = levels[f_pos[f]]
                nk = tk
                ni = ti
                if tk == T_A:
                    if ln == h:
                        nk = T_B
                        ni = 0
                        tagN[T_B, 0] += 1
                elif lc == h - 1 and ln == h:
                    ni = ti + 1
                    if ni >= kmax:
                        sc[S_TAG_OVF] = 1
                        ni = kmax - 1
                    tagN[tk, ni] += 1
                elif lc == h and ln == h - 1:
                    if tk == T_B and t >= t_mid:
                        nk = T_C
                        ni = 0
                        tagM[T_C, 0] += 1
                    else:
                        tagM[tk, ti] += 1
                if nk != tk or ni != ti:
                    f_tk[f] = nk
                    f_ti[f] = ni
                    if tracing:
                        _trace(tr, sc, t, EV_RETAG, f_pos[f], f, nk, ni)
        elif tag_on and t == t_end + 1:
            for i in range(nact):
                f = act[i]
                f_tk[f] = T_NONE
                f_ti[f] = 0

        # 4. wake sleepers at freshly visited vertices
        m = 0
        for i in range(nact):
            f = act[i]
            v = f_pos[f]
            if v_first[v] < 0 and (claim[v] < 0 or f < claim[v]):
                claim[v] = f
        for i in range(nact):
            f = act[i]
            v = f_pos[f]
            if v_first[v] >= 0 or claim[v] != f:
                continue
            claim[v] = -1
            v_first[v] = t
            sc[S_VISITED] += 1
            if tracing:
                _trace(tr, sc, t, EV_VISIT, v, f, f_tk[f], f_ti[f])
            cnt = v_eta[v]
            if cnt == 0:
                continue
            s0 = v_start[v]
            tk = f_tk[f]
            ti = f_ti[f]
            for s in range(s0, s0 + cnt):
                f_status[s] = ACTIVE
                f_pos[s] = v
                f_prev[s] = -1
                f_tk[s] = tk
                f_ti[s] = ti
                act2[nact + m] = s
                m += 1
                if tracing:
                    _trace(tr, sc, t, EV_WAKE, v, s, tk, ti)
            sc[S_ASLEEP] -= cnt
            if tag_on and t <= t_end and levels[v] == h and (tk == T_B or tk == T_C):
                tagN[tk, ti] += cnt

        # 5. freeze; rebuild the active list
        leaves = cfg[C_LEAVES] != 0
        k = 0
        for i in range(nact):
            f = act[i]
            v = f_pos[f]
            if fl[i] or freeze_at[v] or freeze_move[v] or (leaves and levels[v] == n):
                _freeze(f, v, t, cfg, sc, f_status, f_ftime, f_tk, f_ti, v_frozen, tagX, tr)
            else:
                act[k] = f
                k += 1
        for i in range(m):
            f = act2[nact + i]
            v = f_pos[f]
            if freeze_at[v] or (leaves and levels[v] == n):
                _freeze(f, v, t, cfg, sc, f_status, f_ftime, f_tk, f_ti, v_frozen, tagX, tr)
            else:
                act[k] = f
                k += 1
        sc[S_NACT] = k
        sc[S_TIME] = t
        if sc[S_COVER] < 0 and sc[S_VISITED] == nv:
            sc[S_COVER] = t


@nb.njit(cache=True)
def sample_counts(dist, mu, base, eta_class, nv, zero, out):
    """Per-vertex sleeper counts; dist 0 Poisson, 1 extended Bernoulli, 2 deterministic."""
    for v in range(nv):
        if zero[v]:
            out[v] = 0
            continue
        if dist == 2:
            out[v] = np.int64(mu)
            continue
        key = frog_key(base, eta_class, v, 0)
        if dist == 0:
            out[v] = poisson(mu, key)
        else:
            out[v] = bernoulli_extended(mu, key)


@nb.njit(cache=True)
def fill_keys(base, cls, origin, index, out):
    for i in range(out.shape[0]):
        out[i] = frog_key(base, cls[i], origin[i], index[i])
