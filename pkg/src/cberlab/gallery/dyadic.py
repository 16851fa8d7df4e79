"""The dyadic order L on the index-2 subrelation F0 of E0.

Points of 2^N are finite binary prefixes followed by a tail: eventually 0,
eventually 1, or a symbolic tail ``t`` that is never inspected. Everything
reduces to explicit prefixes:

* two points with the same tail differ only inside their prefixes, so F0 is
  a parity count over the padded prefixes;
* x L y looks at the maximal differing index n and the parity of x below n,
  both of which live in the prefix;
* the successor map f reads at most the first one at a position >= 1 and
  the bit after it, so it needs the prefix only up to there.

When a computation would have to read a symbolic tail it raises
:class:`UndeterminedError` instead of guessing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cmp_to_key

import numpy as np

from ..local_rules import UndeterminedError


class DomainError(ValueError):
    """Input outside the domain of the operation (e.g. f at 1 0^inf)."""


class Order(enum.Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


CONSTANT_TAILS = ("0", "1")


@dataclass(frozen=True)
class DyadicPoint:
    prefix: tuple = ()
    tail: str = "0"

    def __post_init__(self):
        bits = tuple(int(b) for b in self.prefix)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("prefix must be binary")
        if not self.tail:
            raise ValueError("tail tag must be nonempty")
        if self.tail in CONSTANT_TAILS:
            t = int(self.tail)
            while bits and bits[-1] == t:
                bits = bits[:-1]
        object.__setattr__(self, "prefix", bits)

    @classmethod
    def parse(cls, text: str) -> "DyadicPoint":
        """``"0110:t"``, ``"1:0"``; a bare ``"011"`` means eventually 0."""
        bits, _, tail = text.strip().partition(":")
        bits = bits.replace(",", "").replace(" ", "")
        return cls(tuple(int(c) for c in bits), tail or "0")

    def __str__(self) -> str:
        return "".join(map(str, self.prefix)) + ":" + self.tail

    @property
    def symbolic(self) -> bool:
        return self.tail not in CONSTANT_TAILS

    def bit(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        if self.symbolic:
            raise UndeterminedError(f"bit {i} of {self} lies in the symbolic tail")
        return int(self.tail)

    def padded(self, length: int) -> tuple:
        return tuple(self.bit(i) for i in range(length))

    def to_json(self) -> dict:
        return {"prefix": "".join(map(str, self.prefix)), "tail": self.tail}


def _aligned(x: DyadicPoint, y: DyadicPoint) -> tuple | None:
    """Padded prefixes of equal length, or None if the tails differ everywhere."""
    if x.tail != y.tail:
        if x.symbolic or y.symbolic:
            raise UndeterminedError(f"tails of {x} and {y} are not comparable")
        return None  # 0^inf against 1^inf: infinitely many differences
    if x.symbolic and len(x.prefix) != len(y.prefix):
        raise UndeterminedError(f"symbolic tails of {x} and {y} start at different positions")
    m = max(len(x.prefix), len(y.prefix))
    return x.padded(m), y.padded(m)


def f0_equivalent(x: DyadicPoint, y: DyadicPoint) -> bool:
    pair = _aligned(x, y)
    if pair is None:
        return False
    a, b = pair
    return sum(u != v for u, v in zip(a, b)) % 2 == 0


def l_compare(x: DyadicPoint, y: DyadicPoint) -> Order:
    if not f0_equivalent(x, y):
        raise DomainError(f"{x} and {y} are not F0-equivalent")
    a, b = _aligned(x, y)
    diff = [i for i, (u, v) in enumerate(zip(a, b)) if u != v]
    if not diff:
        return Order.EQ
    n = diff[-1]
    return Order.LT if sum(a[:n]) % 2 == 0 else Order.GT


def dyadic_successor(x: DyadicPoint) -> DyadicPoint:
    """f(0 i x) = 1 (1-i) x and f(1 0^n 1 i x) = 0^(n+1) 1 (1-i) x."""
    if x.bit(0) == 0:
        i = x.bit(1)
        return DyadicPoint((1, 1 - i) + x.prefix[2:], x.tail)
    k = 1
    while True:
        if k >= len(x.prefix):
            if x.symbolic:
                raise UndeterminedError(f"the first 1 after position 0 of {x} is in the symbolic tail")
            if x.tail == "0":
                raise DomainError("f is undefined at 1 0^inf")
            break  # tail of ones: bit k is 1
        if x.prefix[k] == 1:
            break
        k += 1
    i = x.bit(k + 1)
    head = (0,) * k + (1, 1 - i)
    rest = x.prefix[k + 2:]
    return DyadicPoint(head + rest, x.tail)


def flip_head(x: DyadicPoint) -> DyadicPoint:
    """g: flip coordinate 0."""
    b = x.bit(0)
    return DyadicPoint((1 - b,) + x.prefix[1:], x.tail)


# ---------------------------------------------------------------------------
# exhaustive checks on truncations: all words of a fixed length, same symbolic tail


def _words(length: int):
    return [DyadicPoint(tuple((w >> i) & 1 for i in range(length)), "t") for w in range(1 << length)]


def _int_of(x: DyadicPoint) -> int:
    return sum(b << i for i, b in enumerate(x.prefix))


def _l_less_int(x: int, y: int) -> bool:
    """x L y, x != y, for words of the same length and parity (bit i = coordinate i)."""
    n = (x ^ y).bit_length() - 1
    return bin(x & ((1 << n) - 1)).count("1") % 2 == 0


def truncation_orders(length: int) -> dict:
    """Parity class -> words of that class sorted by L, via comparisons only."""
    cmp = cmp_to_key(lambda a, b: 0 if a == b else (-1 if _l_less_int(a, b) else 1))
    out = {}
    for parity in (0, 1):
        cls = [w for w in range(1 << length) if bin(w).count("1") % 2 == parity]
        out[parity] = sorted(cls, key=cmp)
    return out


@dataclass
class TruncationReport:
    length: int
    checked: int
    counterexamples: list
    undefined: int = 0

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {"length": self.length, "checked": self.checked, "undefined": self.undefined,
                "counterexamples": len(self.counterexamples),
                "examples": [list(map(str, c)) for c in self.counterexamples[:5]]}


def successor_check(length: int = 16) -> TruncationReport:
    """f(x) against the successor read off the L-sorted truncation.

    Where f needs a bit of the symbolic tail, x must be the top of its
    truncated class (nothing inside the truncation lies above it).
    """
    succ: dict = {}
    for order in truncation_orders(length).values():
        for a, b in zip(order, order[1:] + [None]):
            succ[a] = b
    bad = []
    undefined = 0
    for w, x in enumerate(_words(length)):
        try:
            fx = _int_of(dyadic_successor(x))
        except UndeterminedError:
            undefined += 1
            if succ[w] is not None:
                bad.append((x, "undefined", succ[w]))
            continue
        if succ[w] != fx:
            bad.append((x, fx, succ[w]))
    return TruncationReport(length, 1 << length, bad, undefined)


def conjugation_check(length: int = 12) -> TruncationReport:
    """g(f(x)) is the L-predecessor of g(x) wherever f(x) is defined on the truncation."""
    pred: dict = {}
    for order in truncation_orders(length).values():
        for a, b in zip([None] + order[:-1], order):
            pred[b] = a
    bad = []
    checked = undefined = 0
    for x in _words(length):
        try:
            fx = dyadic_successor(x)
        except UndeterminedError:
            undefined += 1
            continue
        checked += 1
        if pred[_int_of(flip_head(x))] != _int_of(flip_head(fx)):
            bad.append((x, fx))
    return TruncationReport(length, checked, bad, undefined)


def _less_matrix(words: np.ndarray, length: int) -> np.ndarray:
    size = 1 << length
    highbit = np.zeros(size, dtype=np.int64)
    highbit[1:] = np.floor(np.log2(np.arange(1, size))).astype(np.int64)
    parity = np.zeros(size, dtype=np.int64)
    for i in range(length):
        parity ^= (np.arange(size) >> i) & 1
    X = words[:, None]
    Y = words[None, :]
    D = X ^ Y
    below = X & ((1 << highbit[D]) - 1)
    return (D != 0) & (parity[below] == 0)


@dataclass
class OrderReport:
    length: int
    triples: int
    transitivity_violations: int
    totality_violations: int
    reversal_pairs: int
    reversal_violations: int

    @property
    def ok(self) -> bool:
        return not (self.transitivity_violations or self.totality_violations
                    or self.reversal_violations)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def order_check(length: int = 10) -> OrderReport:
    """Exhaustive transitivity and totality of L on each truncated class, and
    order reversal of g between the two classes (all pairs)."""
    triples = trans = total = pairs = rev = 0
    w = np.arange(1 << length)
    pop = np.zeros(len(w), dtype=np.int64)
    for i in range(length):
        pop += (w >> i) & 1
    for parity in (0, 1):
        cls = w[pop % 2 == parity]
        M = _less_matrix(cls, length)
        k = len(cls)
        triples += k ** 3
        # float64 BLAS is exact here: entries are counts below 2^53
        two_step = M.astype(np.float64) @ M.astype(np.float64)
        trans += int(two_step[~M].sum())
        off = ~np.eye(k, dtype=bool)
        total += int(np.sum(off & ~(M | M.T))) // 2 + int(np.sum(M & M.T)) // 2
        G = _less_matrix(cls ^ 1, length)  # G[a, b]: g(a) L g(b)
        pairs += int(M.sum())
        rev += int(np.sum(M & ~G.T))  # x L y should give g(y) L g(x)
    return OrderReport(length, triples, trans, total, pairs, rev)
