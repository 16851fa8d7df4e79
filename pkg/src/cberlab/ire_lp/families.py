"""Decorated patterns on the window {0, ..., n-1} of Z, encoded as integers.

A family lists its variables (base code, decoration code) for a window of
size n and knows how to restrict both codes to the sub-window of size n-1
starting at offset 0 or 1. Everything is vectorized over numpy arrays so the
n = 6 Ramsey family (about 9 * 10^5 patterns) builds in about a second.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial

import numpy as np


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict:
    """Bit position of each pair (a, b), a < b, in a colouring code."""
    return {p: i for i, p in enumerate(combinations(range(n), 2))}


@lru_cache(maxsize=None)
def pair_mask(n: int, subset: int) -> int:
    pts = [i for i in range(n) if subset >> i & 1]
    idx = pair_index(n)
    m = 0
    for p in combinations(pts, 2):
        m |= 1 << idx[p]
    return m


def popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        out += (a & np.uint64(1)).astype(np.int64)
        a = a >> np.uint64(1)
    return out


class WindowFamily:
    name = "family"

    def count(self, n: int) -> int:
        raise NotImplementedError

    def variables(self, n: int) -> tuple:
        raise NotImplementedError

    def restrict_base(self, base: np.ndarray, n: int, off: int) -> np.ndarray:
        raise NotImplementedError

    def restrict_dec(self, dec: np.ndarray, n: int, off: int) -> np.ndarray:
        raise NotImplementedError

    def dec_size(self, n: int) -> int:
        raise NotImplementedError

    def base_law(self, n: int) -> dict:
        raise NotImplementedError

    def marked_origin(self, dec: np.ndarray) -> np.ndarray:
        raise NotImplementedError(f"{self.name} has no marked set")

    def describe(self) -> dict:
        return {"family": self.name}


class RamseyFamily(WindowFamily):
    """Base: iid pair colours (bit 1 = R with probability p). Decoration: a marked set T.

    With ``homogeneous`` only marked sets whose pairs all share a colour are
    listed; ``nonempty`` additionally drops T = {}.
    """

    name = "ramsey"

    def __init__(self, p=Fraction(1, 2), homogeneous: bool = True, nonempty: bool = False):
        self.p = Fraction(p)
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        self.homogeneous = homogeneous
        self.nonempty = nonempty

    def describe(self) -> dict:
        return {"family": self.name, "p": str(self.p), "homogeneous": self.homogeneous,
                "nonempty": self.nonempty}

    def count(self, n: int) -> int:
        P = comb(n, 2)
        total = 0
        for k in range(n + 1):
            if k == 0 and self.nonempty:
                continue
            per = 2 ** P
            if self.homogeneous and k >= 2:
                per = 2 * 2 ** (P - comb(k, 2))
            total += comb(n, k) * per
        return total

    def variables(self, n: int) -> tuple:
        P = comb(n, 2)
        colours = np.arange(1 << P, dtype=np.int64)
        bases, decs = [], []
        for T in range(1 << n):
            if T == 0 and self.nonempty:
                continue
            if self.homogeneous:
                m = pair_mask(n, T)
                sel = colours[((colours & m) == 0) | ((colours & m) == m)]
            else:
                sel = colours
            bases.append(sel)
            decs.append(np.full(len(sel), T, dtype=np.int64))
        base = np.concatenate(bases)
        dec = np.concatenate(decs)
        order = np.lexsort((dec, base))
        return base[order], dec[order]

    def restrict_base(self, base, n, off):
        src = pair_index(n)
        out = np.zeros_like(base)
        for i, (a, b) in enumerate(combinations(range(n - 1), 2)):
            out |= ((base >> src[(a + off, b + off)]) & 1) << i
        return out

    def restrict_dec(self, dec, n, off):
        return (dec >> off) & ((1 << (n - 1)) - 1)

    def dec_size(self, n: int) -> int:
        return 1 << n

    def base_law(self, n: int) -> dict:
        P = comb(n, 2)
        codes = np.arange(1 << P, dtype=np.int64)
        ones = popcount(codes)
        p, q = self.p, 1 - self.p
        weights = [p ** k * q ** (P - k) for k in range(P + 1)]
        return {int(c): weights[int(k)] for c, k in zip(codes, ones) if weights[int(k)] != 0}

    def marked_origin(self, dec):
        return (dec & 1).astype(np.int64)


def _encode_ranks(ranks: np.ndarray, width: int) -> np.ndarray:
    powers = width ** np.arange(ranks.shape[1], dtype=np.int64)
    return ranks.astype(np.int64) @ powers


def _decode_ranks(codes: np.ndarray, width: int) -> np.ndarray:
    return np.stack([(codes // width ** i) % width for i in range(width)], axis=1)


class LinearizationFamily(WindowFamily):
    """Base: the empty partial order. Decoration: a linear order, stored as position ranks."""

    name = "linearization"

    def count(self, n: int) -> int:
        return factorial(n)

    def variables(self, n: int) -> tuple:
        ranks = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
        dec = np.sort(_encode_ranks(ranks, n))
        return np.zeros(len(dec), dtype=np.int64), dec

    def restrict_base(self, base, n, off):
        return np.zeros_like(base)

    def restrict_dec(self, dec, n, off):
        ranks = _decode_ranks(dec, n)[:, off:off + n - 1]
        return _encode_ranks(np.argsort(np.argsort(ranks, axis=1), axis=1), n - 1)

    def dec_size(self, n: int) -> int:
        return max(n, 1) ** n

    def base_law(self, n: int) -> dict:
        return {0: Fraction(1)}


class TrivialFamily(WindowFamily):
    """No decoration at all: the expansion language equals the base language."""

    def __init__(self, inner: WindowFamily):
        self.inner = inner
        self.name = f"trivial-{inner.name}"

    def describe(self) -> dict:
        return {"family": self.name, "inner": self.inner.describe()}

    def count(self, n: int) -> int:
        return len(self.inner.base_law(n))

    def variables(self, n: int) -> tuple:
        base = np.array(sorted(self.inner.base_law(n)), dtype=np.int64)
        return base, np.zeros(len(base), dtype=np.int64)

    def restrict_base(self, base, n, off):
        return self.inner.restrict_base(base, n, off)

    def restrict_dec(self, dec, n, off):
        return np.zeros_like(dec)

    def dec_size(self, n: int) -> int:
        return 1

    def base_law(self, n: int) -> dict:
        return self.inner.base_law(n)
