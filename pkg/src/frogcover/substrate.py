"""Full d-ary trees in heap layout and the three walk kernels."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numba as nb
import numpy as np

from ._rng import RandomStream


class WalkKind(enum.IntEnum):
    SimpleRandomWalk = 0
    UniformNonbacktracking = 1
    RootBiasedNonbacktracking = 2

    @classmethod
    def parse(cls, value) -> "WalkKind":
        if isinstance(value, WalkKind):
            return value
        if isinstance(value, str):
            aliases = {"srw": cls.SimpleRandomWalk, "unb": cls.UniformNonbacktracking,
                       "rbnb": cls.RootBiasedNonbacktracking}
            key = value.strip()
            if key.lower() in aliases:
                return aliases[key.lower()]
            return cls[key]
        return cls(int(value))


@dataclass(frozen=True)
class TreeShape:
    """Full d-ary tree of height n, optionally with an extra vertex y above the root.

    Vertices are heap indices: root 0, children of v are d*v+1 .. d*v+d.
    y, when present, is the index one past the last heap vertex.
    """
    degree: int
    height: int
    has_y: bool = False

    def __post_init__(self):
        if int(self.degree) < 2:
            raise ValueError(f"degree must be >= 2, got {self.degree}")
        if int(self.height) < 0:
            raise ValueError(f"height must be >= 0, got {self.height}")

    @cached_property
    def n_heap(self) -> int:
        d, n = self.degree, self.height
        return (d ** (n + 1) - 1) // (d - 1)

    @cached_property
    def n_vertices(self) -> int:
        return self.n_heap + (1 if self.has_y else 0)

    @property
    def y(self) -> int | None:
        return self.n_heap if self.has_y else None

    @property
    def y_index(self) -> int:
        """y for the kernels, -1 when absent."""
        return self.n_heap if self.has_y else -1

    @cached_property
    def levels(self) -> np.ndarray:
        d, n = self.degree, self.height
        lv = np.empty(self.n_vertices, dtype=np.int16)
        start = 0
        for k in range(n + 1):
            width = d ** k
            lv[start:start + width] = k
            start += width
        if self.has_y:
            lv[-1] = -1
        lv.flags.writeable = False
        return lv

    def level_start(self, k: int) -> int:
        """Heap index of the first vertex on level k."""
        return (self.degree ** k - 1) // (self.degree - 1)

    def level_vertices(self, k: int) -> np.ndarray:
        a = self.level_start(k)
        return np.arange(a, a + self.degree ** k)

    def is_valid(self, v) -> bool:
        return 0 <= int(v) < self.n_vertices

    def check(self, v) -> int:
        v = int(v)
        if not self.is_valid(v):
            raise IndexError(f"vertex {v} not in tree with {self.n_vertices} vertices")
        return v


def build_tree(d: int, n: int, with_y: bool = False) -> TreeShape:
    return TreeShape(int(d), int(n), bool(with_y))


def level(shape: TreeShape, v: int) -> int:
    return int(shape.levels[shape.check(v)])


def parent(shape: TreeShape, v: int) -> int | None:
    v = shape.check(v)
    if v == shape.y_index:
        return None
    if v == 0:
        return shape.y
    return (v - 1) // shape.degree


def children(shape: TreeShape, v: int) -> list[int]:
    v = shape.check(v)
    if v == shape.y_index:
        return [0]
    if shape.levels[v] == shape.height:
        return []
    d = shape.degree
    return list(range(d * v + 1, d * v + d + 1))


def neighbors(shape: TreeShape, v: int) -> list[int]:
    """Neighbors in kernel order: the upward neighbor first (if any), then children."""
    v = shape.check(v)
    if v == shape.y_index:
        return [0]
    up = parent(shape, v)
    out = [] if up is None else [up]
    return out + children(shape, v)


def spine(shape: TreeShape, leaf: int) -> list[int]:
    """Path [v_0, ..., v_n] from a leaf up to the root."""
    leaf = shape.check(leaf)
    if leaf == shape.y_index or shape.levels[leaf] != shape.height:
        raise ValueError(f"vertex {leaf} is not a leaf")
    path = [leaf]
    v = leaf
    while v > 0:
        v = (v - 1) // shape.degree
        path.append(v)
    return path


def subtree(shape: TreeShape, v: int) -> np.ndarray:
    """All heap vertices in the subtree rooted at v, level by level."""
    v = shape.check(v)
    if v == shape.y_index:
        raise ValueError("y has no subtree")
    d = shape.degree
    out = []
    lo = hi = v
    for _ in range(shape.levels[v], shape.height + 1):
        out.append(np.arange(lo, hi + 1))
        lo, hi = d * lo + 1, d * hi + d
    return np.concatenate(out)


def ancestors(shape: TreeShape, v: int) -> list[int]:
    """Strict ancestors of v inside the heap (y excluded), nearest first."""
    v = shape.check(v)
    out = []
    while 0 < v < shape.n_heap:
        v = (v - 1) // shape.degree
        out.append(v)
    return out


@dataclass(frozen=True)
class WalkState:
    current: int
    previous: int | None = None


# -- kernel ---------------------------------------------------------------

@nb.njit(cache=True)
def next_vertex(d, n, y, kind, levels, cur, prev, down_only, u):
    """Successor of `cur` given uniform u in [0,1).

    y < 0 means the tree has no extra vertex. `down_only` restricts the
    step to the children of cur (used for special frogs).
    """
    if cur == y:
        return np.int64(0)
    lv = levels[cur]
    internal = lv < n
    has_up = cur > 0 or y >= 0
    up = (cur - 1) // d if cur > 0 else y
    if down_only and internal:
        return np.int64(d * cur + 1 + int(u * d))
    m = (1 if has_up else 0) + (d if internal else 0)
    if m == 0:
        return np.int64(cur)
    if kind == 0 or prev < 0:
        if kind == 2 and prev < 0 and not internal:
            return np.int64(up)
        idx = int(u * m)
        if has_up:
            if idx == 0:
                return np.int64(up)
            idx -= 1
        return np.int64(d * cur + 1 + idx)
    if kind == 2:
        if cur == 0 and y < 0:
            # root of the bare tree, arriving from child prev
            q = 1.0 / (d * d)
            if u < q:
                return np.int64(prev)
            j = int((u - q) * (d * d) / (d + 1))
            if j > d - 2:
                j = d - 2
            c = d * cur + 1 + j
            if c >= prev:
                c += 1
            return np.int64(c)
        if not internal:
            return np.int64(up)
    # uniform over neighbors except prev
    if m == 1:
        return np.int64(prev)
    idx = int(u * (m - 1))
    if has_up:
        if prev != up:
            if idx == 0:
                return np.int64(up)
            idx -= 1
        c = d * cur + 1 + idx
        if prev != up and c >= prev:
            c += 1
        return np.int64(c)
    c = d * cur + 1 + idx
    if c >= prev:
        c += 1
    return np.int64(c)


def transition_probs(shape: TreeShape, kind: WalkKind, state: WalkState,
                     down_only: bool = False) -> dict[int, float]:
    """Exact successor distribution, written directly from the kernel definitions."""
    kind = WalkKind.parse(kind)
    v = shape.check(state.current)
    prev = state.previous
    nb_ = neighbors(shape, v)
    kids = children(shape, v)
    d = shape.degree
    if prev is not None and prev not in nb_:
        raise ValueError(f"previous {prev} not adjacent to {v}")
    if not nb_:
        return {v: 1.0}
    if down_only and kids:
        return {c: 1.0 / len(kids) for c in kids}
    if kind is WalkKind.SimpleRandomWalk or prev is None:
        if kind is WalkKind.RootBiasedNonbacktracking and prev is None and not kids:
            return {parent(shape, v): 1.0}
        return {w: 1.0 / len(nb_) for w in nb_}
    if kind is WalkKind.RootBiasedNonbacktracking:
        if v == 0 and not shape.has_y:
            out = {c: (d + 1) / d ** 2 for c in kids if c != prev}
            out[prev] = 1.0 / d ** 2
            return out
        if not kids:
            return {parent(shape, v): 1.0}
    rest = [w for w in nb_ if w != prev]
    if not rest:
        return {prev: 1.0}
    return {w: 1.0 / len(rest) for w in rest}


def step(shape: TreeShape, kind: WalkKind, state: WalkState, rng: RandomStream,
         down_only: bool = False) -> WalkState:
    kind = WalkKind.parse(kind)
    cur = shape.check(state.current)
    if state.previous is not None:
        shape.check(state.previous)
    prev = -1 if state.previous is None else int(state.previous)
    u = rng.generator.random()
    nxt = next_vertex(shape.degree, shape.height, shape.y_index, int(kind),
                      shape.levels, cur, prev, down_only, u)
    return WalkState(int(nxt), cur)
