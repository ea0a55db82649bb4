"""Independent single-walker samplers for Monte Carlo cross-checks."""
import numba as nb
import numpy as np

from ._rng import derive, uniform
from .substrate import next_vertex


@nb.njit(cache=True)
def hit_times(d, n, y, kind, levels, start, target_mask, n_walks, key, t_cap):
    """Hitting time of the target set for n_walks independent walks; -1 if beyond t_cap."""
    out = np.empty(n_walks, dtype=np.int64)
    for w in range(n_walks):
        k = derive(key, w)
        cur = start
        prev = -1
        t = 0
        out[w] = -1
        while t < t_cap:
            nxt = next_vertex(d, n, y, kind, levels, cur, prev, False, uniform(k, t))
            prev = cur
            cur = nxt
            t += 1
            if target_mask[cur]:
                out[w] = t
                break
    return out


@nb.njit(cache=True)
def spine_visits(J, k, n_accept, key):
    """Simple random walk on {0..J+1} from J, kept when it hits 0 before J+1.

    Returns (sum of visits to k, sum of squares, accepted, attempted).
    Visits count every time the walk sits at k, including time 0.
    """
    s = 0.0
    s2 = 0.0
    acc = 0
    tried = 0
    while acc < n_accept:
        kk = derive(key, tried)
        tried += 1
        pos = J
        visits = 1 if pos == k else 0
        c = 0
        while pos != 0 and pos != J + 1:
            if uniform(kk, c) < 0.5:
                pos -= 1
            else:
                pos += 1
            c += 1
            if pos == k:
                visits += 1
        if pos == 0:
            acc += 1
            s += visits
            s2 += visits * visits
    return s, s2, acc, tried


@nb.njit(cache=True)
def balls_in_bins_occupied(m, n, trials, key):
    out = np.empty(trials, dtype=np.int64)
    seen = np.zeros(n, dtype=np.int64)
    for r in range(trials):
        kk = derive(key, r)
        z = 0
        for i in range(m):
            b = int(uniform(kk, i) * n)
            if seen[b] != r + 1:
                seen[b] = r + 1
                z += 1
        out[r] = z
    return out


@nb.njit(cache=True)
def first_hits(d, n, y, kind, levels, start, target_mask, n_walks, key, t_cap):
    """Like hit_times, also returning which target vertex was reached (-1 if none)."""
    times = np.full(n_walks, -1, dtype=np.int64)
    where = np.full(n_walks, -1, dtype=np.int64)
    for w in range(n_walks):
        k = derive(key, w)
        cur = start
        prev = -1
        t = 0
        while t < t_cap:
            nxt = next_vertex(d, n, y, kind, levels, cur, prev, False, uniform(k, t))
            prev = cur
            cur = nxt
            t += 1
            if target_mask[cur]:
                times[w] = t
                where[w] = cur
                break
    return times, where
