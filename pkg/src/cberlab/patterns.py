"""Finite relational structures whose universe is a finite subset of a group.

A :class:`Pattern` is immutable. Relations are stored as frozensets of
tuples and serialized in a canonical sorted order, so the JSON form (and the
hash derived from it) is a faithful fingerprint of the structure.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .groups import GroupModel, parse_group


class SublanguageError(ValueError):
    """Requested language is not contained in the pattern's language."""


class PatternDomainError(ValueError):
    """A subset or tuple leaves the pattern's universe."""


@dataclass(frozen=True, order=True)
class Symbol:
    name: str
    arity: int

    def __post_init__(self):
        if not self.name or not isinstance(self.name, str):
            raise ValueError("symbol names must be nonempty strings")
        if self.arity < 1:
            raise ValueError(f"symbol {self.name!r} needs a positive arity")


@dataclass(frozen=True)
class Language:
    """A finite relational language; symbols are kept sorted by name."""

    symbols: tuple = ()

    def __post_init__(self):
        syms = tuple(sorted(self.symbols))
        names = [s.name for s in syms]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        object.__setattr__(self, "symbols", syms)

    @classmethod
    def of(cls, **arities: int) -> "Language":
        return cls(tuple(Symbol(n, a) for n, a in arities.items()))

    @property
    def names(self) -> tuple:
        return tuple(s.name for s in self.symbols)

    def arity(self, name: str) -> int:
        for s in self.symbols:
            if s.name == name:
                return s.arity
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def issubset(self, other: "Language") -> bool:
        return set(self.symbols) <= set(other.symbols)

    def union(self, other: "Language") -> "Language":
        merged = {s.name: s for s in self.symbols}
        for s in other.symbols:
            if s.name in merged and merged[s.name] != s:
                raise ValueError(f"symbol {s.name!r} has two arities")
            merged[s.name] = s
        return Language(tuple(merged.values()))

    def to_json(self) -> list:
        return [{"name": s.name, "arity": s.arity} for s in self.symbols]


class Pattern:
    """A finite structure: group, language, universe and one relation per symbol."""

    __slots__ = ("group", "language", "universe", "_rels", "_hash")

    def __init__(self, group: GroupModel, language: Language, universe: Iterable,
                 relations: Mapping[str, Iterable] | None = None, *, check: bool = True):
        universe = frozenset(universe)
        relations = dict(relations or {})
        unknown = set(relations) - set(language.names)
        if unknown:
            raise SublanguageError(f"relations {sorted(unknown)} are not in the language")
        rels = []
        for sym in language.symbols:
            tuples = frozenset(tuple(t) for t in relations.get(sym.name, ()))
            if check:
                for t in tuples:
                    if len(t) != sym.arity:
                        raise ValueError(f"{sym.name}{t} has wrong arity (expected {sym.arity})")
                    for x in t:
                        if x not in universe:
                            raise PatternDomainError(f"{sym.name}{t}: {x!r} is outside the universe")
            rels.append((sym.name, tuples))
        if check:
            group.check(*universe)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "language", language)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "_rels", tuple(rels))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("Pattern is immutable")

    def rel(self, name: str) -> frozenset:
        for n, t in self._rels:
            if n == name:
                return t
        raise KeyError(name)

    @property
    def relations(self) -> dict:
        return dict(self._rels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return (self.group == other.group and self.language == other.language
                and self.universe == other.universe and self._rels == other._rels)

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.group, self.language, self.universe, self._rels)))
        return self._hash

    def __repr__(self) -> str:
        sizes = ", ".join(f"{n}:{len(t)}" for n, t in self._rels)
        return f"Pattern({self.group.name}, |U|={len(self.universe)}, {sizes})"

    def sorted_universe(self) -> list:
        return self.group.sorted(self.universe)

    def sorted_tuples(self, name: str) -> list:
        key = self.group.sort_key
        return sorted(self.rel(name), key=lambda t: tuple(key(x) for x in t))


# ---------------------------------------------------------------------------
# operations


def translate(g, A: Pattern) -> Pattern:
    """Logic action: move every point x to g*x."""
    G = A.group
    G.check(g)
    mul = G._mul
    return Pattern(G, A.language, (mul(g, x) for x in A.universe),
                   {n: (tuple(mul(g, x) for x in t) for t in ts) for n, ts in A._rels},
                   check=False)


def reduct(A: Pattern, sublanguage: Language) -> Pattern:
    if not sublanguage.issubset(A.language):
        raise SublanguageError(f"{sublanguage.names} is not a sublanguage of {A.language.names}")
    return Pattern(A.group, sublanguage, A.universe,
                   {n: A.rel(n) for n in sublanguage.names}, check=False)


def restrict(A: Pattern, subset: Iterable) -> Pattern:
    S = frozenset(subset)
    if not S <= A.universe:
        extra = A.group.sorted(S - A.universe)[:3]
        raise PatternDomainError(f"points {extra} are outside the universe")
    return Pattern(A.group, A.language, S,
                   {n: (t for t in ts if all(x in S for x in t)) for n, ts in A._rels},
                   check=False)


def expand(A: Pattern, extra: Language, relations: Mapping[str, Iterable]) -> Pattern:
    """Add new symbols (and their tuples) to ``A``."""
    if set(extra.names) & set(A.language.names):
        raise ValueError("expansion symbols must be new")
    rels = A.relations
    rels.update(relations)
    return Pattern(A.group, A.language.union(extra), A.universe, rels)


def is_expansion(Astar: Pattern, A: Pattern) -> bool:
    if not A.language.issubset(Astar.language):
        raise SublanguageError("the base language must be contained in the expanded one")
    return reduct(Astar, A.language) == A


def occurs_at(A0: Pattern, A: Pattern, g) -> bool:
    """Does the translated copy g*A0 sit inside A as an induced substructure?"""
    if not A0.language.issubset(A.language):
        raise SublanguageError("occurrence needs language(A0) inside language(A)")
    G = A.group
    moved = frozenset(G._mul(g, x) for x in A0.universe)
    if not moved <= A.universe:
        return False
    return restrict(reduct(A, A0.language), moved) == translate(g, A0)


def equality_type(t: tuple) -> frozenset:
    return frozenset((i, j) for i in range(len(t)) for j in range(i + 1, len(t)) if t[i] == t[j])


# ---------------------------------------------------------------------------
# serialization


def to_json(A: Pattern, *, with_group: bool = True) -> dict:
    G = A.group
    out = {}
    if with_group:
        out["group"] = G.name
    out["language"] = A.language.to_json()
    out["universe"] = [G.to_json(x) for x in A.sorted_universe()]
    out["relations"] = {n: [[G.to_json(x) for x in t] for t in A.sorted_tuples(n)]
                        for n in A.language.names}
    return out


def from_json(data: dict, group: GroupModel | None = None) -> Pattern:
    if "group" in data:
        G = parse_group(data["group"])
        if group is not None and group != G:
            raise ValueError(f"pattern is over {G.name}, expected {group.name}")
    elif group is not None:
        G = group
    else:
        raise ValueError("pattern JSON has no 'group' field and no group was supplied")
    language = Language(tuple(Symbol(s["name"], int(s["arity"])) for s in data["language"]))
    universe = [G.from_json(x) for x in data["universe"]]
    rels = {n: [tuple(G.from_json(x) for x in t) for t in ts]
            for n, ts in data.get("relations", {}).items()}
    return Pattern(G, language, universe, rels)


def canonical_json(A: Pattern) -> str:
    return json.dumps(to_json(A), sort_keys=True, separators=(",", ":"))


def pattern_hash(A: Pattern) -> str:
    """sha256 of the sorted JSON form; the key used by table rules."""
    return hashlib.sha256(canonical_json(A).encode()).hexdigest()
