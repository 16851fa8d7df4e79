"""Pair colourings of {0, ..., n-1} and their largest homogeneous sets.

Adjacency is kept as Python-int bitsets. ``max_homogeneous`` runs a
branch and bound with a greedy-colouring bound on both colour graphs.
The bound is an upper bound on any clique extending the current one, so
pruning never loses the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..rng import make_rng

MAX_EXACT_N = 80
MAX_BRUTE_N = 22


class SizeError(ValueError):
    """Instance too large for the exact algorithm."""


@dataclass(frozen=True)
class PairColouring:
    """Colour R or S on every pair; ``red[i]`` is the bitset of R-neighbours of i."""

    n: int
    red: tuple

    def __post_init__(self):
        if len(self.red) != self.n:
            raise ValueError("one bitset per vertex")
        full = (1 << self.n) - 1
        for i, m in enumerate(self.red):
            if m & ~full or m >> i & 1:
                raise ValueError(f"bad R-neighbourhood at {i}")
            for j in range(self.n):
                if (m >> j & 1) != (self.red[j] >> i & 1):
                    raise ValueError("R must be symmetric")

    @classmethod
    def from_pairs(cls, n: int, red_pairs) -> "PairColouring":
        red = [0] * n
        for i, j in red_pairs:
            if i == j:
                raise ValueError("pairs need two distinct points")
            red[i] |= 1 << j
            red[j] |= 1 << i
        return cls(n, tuple(red))

    @classmethod
    def constant(cls, n: int, colour: str = "R") -> "PairColouring":
        pairs = combinations(range(n), 2) if colour == "R" else ()
        return cls.from_pairs(n, pairs)

    @property
    def blue(self) -> tuple:
        full = (1 << self.n) - 1
        return tuple(full & ~m & ~(1 << i) for i, m in enumerate(self.red))

    def colour(self, i: int, j: int) -> str:
        if i == j:
            raise ValueError("pairs need two distinct points")
        return "R" if self.red[i] >> j & 1 else "S"

    def red_pairs(self) -> list:
        return [(i, j) for i, j in combinations(range(self.n), 2) if self.red[i] >> j & 1]

    def is_homogeneous(self, subset) -> bool:
        return len({self.colour(i, j) for i, j in combinations(sorted(subset), 2)}) <= 1

    def to_json(self) -> dict:
        return {"n": self.n, "R": [list(p) for p in self.red_pairs()]}

    @classmethod
    def from_json(cls, data: dict) -> "PairColouring":
        return cls.from_pairs(int(data["n"]), [tuple(p) for p in data["R"]])


def sample_pair_colouring(n: int, p=Fraction(1, 2), seed: int = 0, stream: int = 0) -> PairColouring:
    """Each pair is R independently with probability p."""
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    rng = make_rng(seed, stream)
    iu, ju = np.triu_indices(n, 1)
    coin = rng.random(len(iu)) < float(p)
    return PairColouring.from_pairs(n, zip(iu[coin].tolist(), ju[coin].tolist()))


def _colour_bound(P: int, adj: list) -> tuple:
    """Greedy colouring of the candidate set: vertices in order, with colour numbers."""
    order, bounds = [], []
    uncoloured = P
    k = 0
    while uncoloured:
        k += 1
        Q = uncoloured
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~adj[v] & ~low
            uncoloured &= ~low
            order.append(v)
            bounds.append(k)
    return order, bounds


def max_clique(adj: list, n: int) -> tuple:
    """Size and members of a maximum clique (bitset adjacency)."""
    best = [0, 0]  # size, members bitset

    def expand(size: int, members: int, P: int):
        order, bounds = _colour_bound(P, adj)
        for v, b in zip(reversed(order), reversed(bounds)):
            if size + b <= best[0]:
                return
            bit = 1 << v
            newP = P & adj[v]
            if newP:
                expand(size + 1, members | bit, newP)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, members | bit
            P &= ~bit

    if n:
        expand(0, 0, (1 << n) - 1)
    return best[0], [i for i in range(n) if best[1] >> i & 1]


def max_homogeneous(c: PairColouring, witness: bool = False):
    """Exact size of the largest set all of whose pairs share one colour."""
    if c.n > MAX_EXACT_N:
        raise SizeError(f"n = {c.n} exceeds the exact-solver limit of {MAX_EXACT_N}")
    r = max_clique(list(c.red), c.n)
    s = max_clique(list(c.blue), c.n)
    best = r if r[0] >= s[0] else s
    return best if witness else best[0]


def max_homogeneous_bruteforce(c: PairColouring) -> int:
    """Subset dynamic programme: S is homogeneous for a colour iff S minus its top
    vertex is, and the top vertex is joined to all of the rest in that colour."""
    n = c.n
    if n > MAX_BRUTE_N:
        raise SizeError(f"n = {n} exceeds the brute-force limit of {MAX_BRUTE_N}")
    best = min(n, 1)
    pop = np.zeros(1 << n, dtype=np.int64)
    for t in range(n):
        pop[1 << t: 2 << t] = pop[: 1 << t] + 1
    for nbrs in (c.red, c.blue):
        ok = np.zeros(1 << n, dtype=bool)
        ok[0] = True
        for t in range(n):
            rest = np.arange(1 << t, dtype=np.int64)
            ok[1 << t: 2 << t] = ok[: 1 << t] & ((rest & nbrs[t]) == rest)
        best = max(best, int(pop[ok].max()))
    return best


def expected_max_homogeneous(n: int, p=Fraction(1, 2)) -> Fraction:
    """Exact expectation over all 2^C(n,2) colourings."""
    P = n * (n - 1) // 2
    if P > 15:
        raise SizeError("exhaustive expectation is limited to n <= 6")
    p = Fraction(p)
    pairs = list(combinations(range(n), 2))
    total = Fraction(0)
    for bits in range(1 << P):
        red = [pr for i, pr in enumerate(pairs) if bits >> i & 1]
        k = len(red)
        total += p ** k * (1 - p) ** (P - k) * max_homogeneous(PairColouring.from_pairs(n, red))
    return total


@dataclass
class CliqueSample:
    n: int
    p: Fraction
    seed: int
    values: list

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def se(self) -> float:
        return float(np.std(self.values, ddof=1) / np.sqrt(len(self.values))) if len(self.values) > 1 else 0.0

    def to_json(self) -> dict:
        return {"n": self.n, "p": str(self.p), "seed": self.seed, "samples": len(self.values),
                "mean": self.mean, "se": self.se, "min": min(self.values), "max": max(self.values)}


def sample_max_homogeneous(n: int, p=Fraction(1, 2), samples: int = 200, seed: int = 0) -> CliqueSample:
    """Sample i uses the random stream (seed, i)."""
    values = [max_homogeneous(sample_pair_colouring(n, p, seed, i)) for i in range(samples)]
    return CliqueSample(n, Fraction(p), seed, values)
