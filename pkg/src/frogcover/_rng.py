"""Counter-based random numbers for the simulation kernels.

Every frog owns a 64-bit key. The u-th uniform it consumes is a pure
function of (key, u), so a frog's path does not depend on how many other
frogs exist or in which order they are processed.
"""
from __future__ import annotations

import math

import numba as nb
import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_SALT = np.uint64(0xD1B54A32D192ED03)
_INV53 = 1.0 / 9007199254740992.0

# key classes used by the engine
CLASS_SLEEPER = 0
CLASS_INITIAL = 1
CLASS_SPECIAL = 2
CLASS_ETA = 3
CLASS_WALKER = 4


@nb.njit(cache=True)
def mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@nb.njit(cache=True)
def uniform(key, counter):
    """Uniform on [0, 1) for position `counter` of stream `key`."""
    z = mix64(key + (np.uint64(counter) + np.uint64(1)) * GAMMA)
    return np.float64(z >> np.uint64(11)) * _INV53


@nb.njit(cache=True)
def derive(key, a):
    return mix64((key ^ _SALT) + (np.uint64(a) + np.uint64(1)) * GAMMA)


@nb.njit(cache=True)
def frog_key(base, cls, vertex, index):
    return derive(derive(derive(base, cls), vertex), index)


@nb.njit(cache=True)
def _poisson_small(mu, key):
    u = uniform(key, 0)
    p = math.exp(-mu)
    cdf = p
    k = 0
    while u > cdf and k < 10000:
        k += 1
        p *= mu / k
        cdf += p
        if p == 0.0 and k > mu:
            break
    return k


@nb.njit(cache=True)
def _poisson_ptrs(lam, key):
    # transformed rejection with squeeze (Hormann 1993), valid for lam >= 10
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    c = 0
    while True:
        u = uniform(key, c) - 0.5
        v = uniform(key, c + 1)
        c += 2
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + lam + 0.43)
        if us >= 0.07 and v <= vr:
            return np.int64(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        lhs = math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b)
        rhs = -lam + k * loglam - math.lgamma(k + 1.0)
        if lhs <= rhs:
            return np.int64(k)


@nb.njit(cache=True)
def poisson(mu, key):
    if mu <= 0.0:
        return np.int64(0)
    if mu < 30.0:
        return np.int64(_poisson_small(mu, key))
    return _poisson_ptrs(mu, key)


@nb.njit(cache=True)
def bernoulli_extended(mu, key):
    fl = math.floor(mu)
    extra = 1 if uniform(key, 0) < mu - fl else 0
    return np.int64(fl) + extra


class RandomStream:
    """Seedable, splittable randomness source.

    Children are addressed by index, so trial i always gets the same
    stream no matter how trials are scheduled across workers.
    """

    def __init__(self, seed: int | np.random.SeedSequence = 0):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
        else:
            if int(seed) < 0:
                raise ValueError("seed must be non-negative")
            self._seq = np.random.SeedSequence(int(seed))
        self._gen = None

    @property
    def seed(self) -> int:
        return int(self._seq.entropy)

    @property
    def path(self) -> tuple:
        return tuple(self._seq.spawn_key)

    def child(self, index: int) -> "RandomStream":
        seq = np.random.SeedSequence(self._seq.entropy,
                                     spawn_key=tuple(self._seq.spawn_key) + (int(index),))
        return RandomStream(seq)

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            self._gen = np.random.Generator(np.random.PCG64(self._seq))
        return self._gen

    def key64(self) -> np.uint64:
        # word 5 is never consumed by PCG64 seeding (which uses words 0..3)
        return np.uint64(self._seq.generate_state(6, np.uint64)[5])

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, path={self.path})"
