"""Finitely generated groups with exact canonical forms.

Three families are supported: the integers, free abelian groups Z^d and free
groups F_k. Elements are plain Python values so they hash, compare and
serialize cheaply:

* Z    -> ``int``
* Z^d  -> ``tuple`` of ``d`` ints
* F_k  -> :class:`Word`, a tuple of nonzero ints where ``i`` is the i-th
  generator and ``-i`` its inverse, always freely reduced.

Every group carries one global length-lex enumeration (negative coordinates
and inverse letters first). All tie-breaking in the package goes through
:meth:`GroupModel.sort_key`, so nothing depends on hash order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable

LETTERS = "abcdefghijklmnopqrstuvwxyz"


class ModelMismatchError(TypeError):
    """An element was handed to a group it does not belong to."""


class Word(tuple):
    """Freely reduced word in a free group; letters are +-1..+-k."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def _reduce(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return Word(out)


def format_word(w: Iterable[int]) -> str:
    parts = []
    for a in w:
        ch = LETTERS[abs(a) - 1]
        parts.append(ch if a > 0 else ch + "^-1")
    return "".join(parts)


_TOKEN = re.compile(r"([a-z])(\^(-?\d+))?")


def parse_word(text: str, rank: int) -> Word:
    """Parse ``"ab^-1a"``-style strings (also ``a^3``); ``""`` or ``"1"`` is the identity."""
    text = text.replace(" ", "")
    if text in ("", "1"):
        return Word()
    letters: list[int] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        gen = LETTERS.index(m.group(1)) + 1
        if gen > rank:
            raise ValueError(f"letter {m.group(1)!r} exceeds rank {rank}")
        power = int(m.group(3)) if m.group(3) else 1
        letters.extend([gen if power > 0 else -gen] * abs(power))
        pos = m.end()
    return _reduce(letters)


def _zkey(c: int) -> int:
    # 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ...
    return 2 * abs(c) - (c < 0)


def _letter_rank(a: int) -> int:
    # a^-1 < a < b^-1 < b < ...
    return 2 * (abs(a) - 1) + (a > 0)


@dataclass(frozen=True)
class Window:
    """A ball B(radius), optionally with a padding radius for right-multiplying algorithms."""

    group: "GroupModel"
    radius: int
    elements: tuple
    padding: int = 0

    def __contains__(self, g) -> bool:
        return g in self.element_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def element_set(self) -> frozenset:
        return _frozen(self.elements)


@lru_cache(maxsize=256)
def _frozen(elements: tuple) -> frozenset:
    return frozenset(elements)


@dataclass(frozen=True)
class GroupModel:
    """One of Z, Z^d or F_k with standard symmetric generators.

    ``kind`` is ``"Z"``, ``"Zd"`` or ``"F"``; ``rank`` is d or k (1 for Z).
    """

    kind: str
    rank: int = 1
    _gens: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("Z", "Zd", "F"):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.kind == "Z" and self.rank != 1:
            raise ValueError("Z has rank 1; use kind 'Zd' for Z^d")
        if self.kind == "F" and self.rank > len(LETTERS):
            raise ValueError("free groups are limited to 26 generators")
        object.__setattr__(self, "_gens", tuple(self._make_generators()))

    # construction helpers -------------------------------------------------
    def _make_generators(self) -> list:
        if self.kind == "Z":
            return [-1, 1]
        if self.kind == "Zd":
            gens = []
            for i in range(self.rank):
                for s in (-1, 1):
                    v = [0] * self.rank
                    v[i] = s
                    gens.append(tuple(v))
            return gens
        return [Word((s * i,)) for i in range(1, self.rank + 1) for s in (-1, 1)]

    @property
    def name(self) -> str:
        if self.kind == "Z":
            return "Z"
        if self.kind == "Zd":
            return f"Z^{self.rank}"
        return f"F{self.rank}"

    def __str__(self) -> str:
        return self.name

    @property
    def identity(self):
        if self.kind == "Z":
            return 0
        if self.kind == "Zd":
            return (0,) * self.rank
        return Word()

    @property
    def generators(self) -> tuple:
        """Symmetric generating set, inverse first within each pair."""
        return self._gens

    # membership ------------------------------------------------------------
    def is_element(self, g: Any) -> bool:
        if self.kind == "Z":
            return type(g) is int
        if self.kind == "Zd":
            return (type(g) is tuple and len(g) == self.rank
                    and all(type(c) is int for c in g))
        if not isinstance(g, Word):
            return False
        for i, a in enumerate(g):
            if type(a) is not int or a == 0 or abs(a) > self.rank:
                return False
            if i and g[i - 1] == -a:
                return False
        return True

    def check(self, *elements) -> None:
        for g in elements:
            if not self.is_element(g):
                raise ModelMismatchError(f"{g!r} is not a canonical element of {self.name}")

    # arithmetic ------------------------------------------------------------
    def mul(self, g, h):
        self.check(g, h)
        return self._mul(g, h)

    def _mul(self, g, h):
        if self.kind == "Z":
            return g + h
        if self.kind == "Zd":
            return tuple(a + b for a, b in zip(g, h))
        i = 0
        n = min(len(g), len(h))
        while i < n and g[len(g) - 1 - i] == -h[i]:
            i += 1
        return Word(g[: len(g) - i] + h[i:])

    def inv(self, g):
        self.check(g)
        return self._inv(g)

    def _inv(self, g):
        if self.kind == "Z":
            return -g
        if self.kind == "Zd":
            return tuple(-c for c in g)
        return Word(-a for a in reversed(g))

    def length(self, g) -> int:
        """Word length with respect to the standard generators."""
        self.check(g)
        if self.kind == "Z":
            return abs(g)
        if self.kind == "Zd":
            return sum(abs(c) for c in g)
        return len(g)

    def sort_key(self, g):
        """Key of the global length-lex order."""
        if self.kind == "Z":
            return (abs(g), _zkey(g))
        if self.kind == "Zd":
            return (sum(abs(c) for c in g), tuple(_zkey(c) for c in g))
        return (len(g), tuple(_letter_rank(a) for a in g))

    def sorted(self, elements: Iterable) -> list:
        return sorted(elements, key=self.sort_key)

    def neighbours(self, g) -> list:
        """Right Cayley neighbours g*s; left translation preserves these edges."""
        return [self._mul(g, s) for s in self._gens]

    # balls and the enumeration --------------------------------------------
    def ball(self, r: int, padding: int = 0) -> Window:
        if r < 0:
            raise ValueError("radius must be nonnegative")
        return Window(self, r, _ball(self, r), padding)

    def ball_size(self, r: int) -> int:
        """Closed-form |B(r)|."""
        if self.kind == "Z":
            return 2 * r + 1
        if self.kind == "Zd":
            from math import comb
            d = self.rank
            return sum(2 ** k * comb(d, k) * comb(r, k) for k in range(min(d, r) + 1))
        k = self.rank
        if k == 1:
            return 2 * r + 1
        return 1 + 2 * k * ((2 * k - 1) ** r - 1) // (2 * k - 2)

    def enumerate(self, n: int) -> list:
        """First ``n`` elements of the length-lex enumeration gamma_0, gamma_1, ..."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        r = 0
        while self.ball_size(r) < n:
            r += 1
        return list(_ball(self, r)[:n])

    def translate_set(self, g, elements: Iterable) -> frozenset:
        return frozenset(self._mul(g, x) for x in elements)

    # serialization ---------------------------------------------------------
    def to_json(self, g):
        self.check(g)
        if self.kind == "Z":
            return g
        if self.kind == "Zd":
            return list(g)
        return format_word(g)

    def from_json(self, value):
        if self.kind == "Z":
            if type(value) is not int:
                raise ModelMismatchError(f"{value!r} is not an integer")
            return value
        if self.kind == "Zd":
            g = tuple(value)
            self.check(g)
            return g
        if not isinstance(value, str):
            raise ModelMismatchError(f"{value!r} is not a word string")
        return parse_word(value, self.rank)


@lru_cache(maxsize=64)
def _ball(G: GroupModel, r: int) -> tuple:
    seen = {G.identity}
    frontier = [G.identity]
    for _ in range(r):
        nxt = []
        for g in frontier:
            for s in G.generators:
                h = G._mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return tuple(sorted(seen, key=G.sort_key))


def parse_group(text: str) -> GroupModel:
    """``"Z"``, ``"Z^3"`` (also ``"Z3"``) or ``"F2"``."""
    t = text.strip().replace(" ", "")
    if t == "Z":
        return GroupModel("Z")
    m = re.fullmatch(r"Z\^?(\d+)", t)
    if m:
        return GroupModel("Zd", int(m.group(1)))
    m = re.fullmatch(r"F_?(\d+)", t)
    if m:
        return GroupModel("F", int(m.group(1)))
    raise ValueError(f"unknown group {text!r}; expected Z, Z^d or Fk")


Z = GroupModel("Z")
Z2 = GroupModel("Zd", 2)
F2 = GroupModel("F", 2)
