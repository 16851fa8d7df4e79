"""Expansion problems as pairs of three-valued window checks.

A finite window cannot always decide membership (connectedness, infinitude,
totality of a bijection) so every check answers ACCEPT, REJECT or
UNDETERMINED. REJECT is only returned when no extension of the window could
repair the defect.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .patterns import Language, Pattern, reduct


class Verdict(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNDETERMINED = "undetermined"

    def __and__(self, other: "Verdict") -> "Verdict":
        if Verdict.REJECT in (self, other):
            return Verdict.REJECT
        if Verdict.UNDETERMINED in (self, other):
            return Verdict.UNDETERMINED
        return Verdict.ACCEPT


A, R, U = Verdict.ACCEPT, Verdict.REJECT, Verdict.UNDETERMINED


@dataclass(frozen=True)
class ProblemSpec:
    """Base class K (language, check) and expanded class K* (language, check)."""

    name: str
    base_language: Language
    star_language: Language
    base_check: Callable[[Pattern], Verdict]
    star_only_check: Callable[[Pattern], Verdict]

    def __post_init__(self):
        if not self.base_language.issubset(self.star_language):
            raise ValueError("base language must be contained in the expansion language")

    @property
    def decoration_language(self) -> Language:
        base = set(self.base_language.symbols)
        return Language(tuple(s for s in self.star_language.symbols if s not in base))

    def check_base(self, A: Pattern) -> Verdict:
        return self.base_check(reduct(A, self.base_language))

    def check_star(self, A: Pattern) -> Verdict:
        return self.check_base(A) & self.star_only_check(A)


# ---------------------------------------------------------------------------
# small helpers


def _is_strict_order(pairs: frozenset) -> bool:
    if any(a == b for a, b in pairs):
        return False
    succ: dict = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    for a, b in pairs:
        if (b, a) in pairs:
            return False
        for c in succ.get(b, ()):
            if (a, c) not in pairs:
                return False
    return True


def _components(vertices, edges) -> list:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def _has_cycle(vertices, edges) -> bool:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    seen = set()
    for a, b in edges:
        key = frozenset((a, b))
        if a == b or key in seen:
            return True
        seen.add(key)
        ra, rb = find(a), find(b)
        if ra == rb:
            return True
        parent[ra] = rb
    return False


# ---------------------------------------------------------------------------
# the catalogue


def bijection() -> ProblemSpec:
    """Unary A, B; Phi is a bijection from A onto B."""

    def star(P: Pattern) -> Verdict:
        Aset, Bset, phi = P.rel("A"), P.rel("B"), P.rel("Phi")
        img: dict = {}
        pre: dict = {}
        for x, y in phi:
            if (x,) not in Aset or (y,) not in Bset:
                return R
            if img.setdefault(x, y) != y or pre.setdefault(y, x) != x:
                return R
        total = all(a in img for (a,) in Aset) and all(b in pre for (b,) in Bset)
        return A if total else U

    return ProblemSpec("bijection", Language.of(A=1, B=1), Language.of(A=1, B=1, Phi=2),
                       lambda P: A, star)


def ramsey() -> ProblemSpec:
    """R, S partition the pairs; T is an infinite homogeneous set."""

    def base(P: Pattern) -> Verdict:
        Rr, Ss = P.rel("R"), P.rel("S")
        pts = list(P.universe)
        for x, y in list(Rr) + list(Ss):
            if x == y:
                return R
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                inR = (x, y) in Rr
                inS = (x, y) in Ss
                if inR != ((y, x) in Rr) or inS != ((y, x) in Ss) or inR == inS:
                    return R
        return A

    def star(P: Pattern) -> Verdict:
        T = sorted((x for (x,) in P.rel("T")), key=P.group.sort_key)
        Rr = P.rel("R")
        colours = {(x, y) in Rr for i, x in enumerate(T) for y in T[i + 1:]}
        if len(colours) > 1:
            return R
        # infinitude is never visible in a window
        return U

    return ProblemSpec("ramsey", Language.of(R=2, S=2), Language.of(R=2, S=2, T=1), base, star)


def linearization() -> ProblemSpec:
    """P a strict partial order; L a strict linear order containing P."""

    def base(P: Pattern) -> Verdict:
        return A if _is_strict_order(P.rel("P")) else R

    def star(P: Pattern) -> Verdict:
        L = P.rel("L")
        if not _is_strict_order(L) or not P.rel("P") <= L:
            return R
        pts = list(P.universe)
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                if (x, y) not in L and (y, x) not in L:
                    return R
        return A

    return ProblemSpec("linearization", Language.of(P=2), Language.of(P=2, L=2), base, star)


def colouring(d: int, marks: bool = True) -> ProblemSpec:
    """Symmetric graph E of max degree <= d (optionally with vertex marks M); colours C0..Cd."""
    base_lang = Language.of(E=2, M=1) if marks else Language.of(E=2)
    colour_names = [f"C{i}" for i in range(d + 1)]
    star_lang = base_lang.union(Language.of(**{c: 1 for c in colour_names}))

    def base(P: Pattern) -> Verdict:
        E = P.rel("E")
        deg: dict = {}
        for x, y in E:
            if x == y or (y, x) not in E:
                return R
            deg[x] = deg.get(x, 0) + 1
        if any(v > d for v in deg.values()):
            return R
        # connectedness of the whole graph is not decidable on a window
        return U if len(_components(P.universe, E)) > 1 else A

    def star(P: Pattern) -> Verdict:
        colour = {}
        for c in colour_names:
            for (x,) in P.rel(c):
                if x in colour:
                    return R
                colour[x] = c
        if len(colour) != len(P.universe):
            return R
        for x, y in P.rel("E"):
            if colour[x] == colour[y]:
                return R
        return A

    return ProblemSpec(f"colouring-{d}", base_lang, star_lang, base, star)


def spanning_tree() -> ProblemSpec:
    """Symmetric connected graph E; T a spanning subtree."""

    def base(P: Pattern) -> Verdict:
        E = P.rel("E")
        if any(x == y or (y, x) not in E for x, y in E):
            return R
        return A if len(_components(P.universe, E)) == 1 else U

    def star(P: Pattern) -> Verdict:
        E, T = P.rel("E"), P.rel("T")
        if not T <= E or any((y, x) not in T for x, y in T):
            return R
        undirected = {frozenset(e) for e in T}
        if _has_cycle(P.universe, [tuple(e) for e in undirected]):
            return R
        ncomp_t = len(_components(P.universe, [tuple(e) for e in undirected]))
        ncomp_e = len(_components(P.universe, E))
        return A if ncomp_t == ncomp_e == 1 else U

    return ProblemSpec("spanning-tree", Language.of(E=2), Language.of(E=2, T=2), base, star)


def zline() -> ProblemSpec:
    """L a linear order without endpoints; Z a subset ordered like the integers."""

    def base(P: Pattern) -> Verdict:
        L = P.rel("L")
        if not _is_strict_order(L):
            return R
        pts = list(P.universe)
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                if (x, y) not in L and (y, x) not in L:
                    return R
        return A

    def star(P: Pattern) -> Verdict:
        # a finite marked set is consistent with a Z-copy; the obstruction is asymptotic
        return U

    return ProblemSpec("zline", Language.of(L=2), Language.of(L=2, Z=1), base, star)


def trivial(base_problem: ProblemSpec) -> ProblemSpec:
    """The problem with K* = K: nothing to add."""
    return ProblemSpec(f"trivial-{base_problem.name}", base_problem.base_language,
                       base_problem.base_language, base_problem.base_check, lambda P: A)


CATALOGUE = {
    "bijection": bijection,
    "ramsey": ramsey,
    "linearization": linearization,
    "colouring": colouring,
    "spanning-tree": spanning_tree,
    "zline": zline,
}
