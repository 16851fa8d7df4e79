"""Linear extensions: merging piecewise linearizations, and directed trees.

Orders are returned as Python lists, least element first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..patterns import Pattern


class InconsistentPieceError(ValueError):
    """A piece's order contradicts the partial order."""


class NotATreeError(ValueError):
    """The underlying undirected graph has a cycle."""


@dataclass
class MergeResult:
    order: list
    stages: list  # the order after each piece

    def position(self) -> dict:
        return {x: i for i, x in enumerate(self.order)}


def _strict_pairs(P) -> set:
    pairs = P.rel("P") if isinstance(P, Pattern) else P
    return {(a, b) for a, b in pairs if a != b}


def merge_linearizations(P, pieces, universe=None) -> MergeResult:
    """Merge orders L_n on sets Y_n into one linear order extending P.

    ``P`` is a Pattern with binary P (or a set of pairs, then pass ``universe``).
    ``pieces`` is a list of (Y_n, L_n) with L_n a list ordering Y_n.
    A new point x is placed after the initial segment I_x, the down-closure
    (in the current order) of its P-predecessors. New points with the same
    cut keep the order they have in the current piece.
    """
    pairs = _strict_pairs(P)
    if universe is None:
        universe = P.universe
    universe = set(universe)
    below: dict = {}
    for a, b in pairs:
        below.setdefault(b, set()).add(a)

    covered = set()
    for n, (Y, L) in enumerate(pieces):
        Y = set(Y)
        if set(L) != Y or len(L) != len(Y):
            raise InconsistentPieceError(f"piece {n}: order does not list its set exactly once")
        pos = {x: i for i, x in enumerate(L)}
        for a, b in pairs:
            if a in pos and b in pos and pos[a] > pos[b]:
                raise InconsistentPieceError(f"piece {n} puts {b!r} before {a!r} against P")
        covered |= Y
    if covered != universe:
        raise InconsistentPieceError(f"pieces miss {len(universe - covered)} points of the universe")

    order: list = []
    stages = []
    for Y, L in pieces:
        where = {x: i for i, x in enumerate(order)}
        fresh = [x for x in L if x not in where]
        # cut c_x: I_x = order[:c_x]
        cut = {x: 1 + max((where[z] for z in below.get(x, ()) if z in where), default=-1)
               for x in fresh}
        buckets: dict = {}
        for x in fresh:  # L order inside each bucket
            buckets.setdefault(cut[x], []).append(x)
        merged = []
        for i in range(len(order) + 1):
            merged.extend(buckets.get(i, ()))
            if i < len(order):
                merged.append(order[i])
        order = merged
        stages.append(list(order))
    return MergeResult(order, stages)


def tree_potential(T: Pattern) -> tuple[dict, list]:
    """Potential p with d(x, y) = p(y) - p(x), and the list of components."""
    edges = T.rel("T")
    adj: dict = {v: [] for v in T.universe}
    seen_pairs = set()
    for a, b in edges:
        if a == b:
            raise NotATreeError(f"loop at {a!r}")
        key = frozenset((a, b))
        if key in seen_pairs:
            raise NotATreeError(f"double edge between {a!r} and {b!r}")
        seen_pairs.add(key)
        adj[a].append((b, 1))
        adj[b].append((a, -1))
    key_fn = T.group.sort_key
    pot: dict = {}
    comps = []
    for root in T.group.sorted(T.universe):
        if root in pot:
            continue
        pot[root] = 0
        comp = [root]
        nedges = 0
        q = deque([root])
        while q:
            u = q.popleft()
            for v, w in adj[u]:
                nedges += 1
                if v not in pot:
                    pot[v] = pot[u] + w
                    comp.append(v)
                    q.append(v)
        if nedges // 2 != len(comp) - 1:
            raise NotATreeError(f"component of {root!r} contains a cycle")
        comps.append(sorted(comp, key=key_fn))
    return pot, comps


def tree_distance(T: Pattern, x, y) -> int:
    pot, _ = tree_potential(T)
    return pot[y] - pot[x]


def tree_linearization(T: Pattern, tiebreak=None) -> list:
    """One order per component: x < y iff d(x, y) > 0, or d = 0 and tiebreak(x) < tiebreak(y)."""
    pot, comps = tree_potential(T)
    key = tiebreak or T.group.sort_key
    return [sorted(c, key=lambda v: (pot[v], key(v))) for c in comps]
