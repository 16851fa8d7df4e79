"""Greedy equivariant partial bijection between two subsets of a group.

Stage n pairs every still-unused x in A with x*gamma_n whenever that point is
still unused in B. Points are finite sets inside a padded window, so each
stage is an exact finite computation. Left translation of (A, B, centre)
commutes with the construction, because gamma_n acts on the right.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..groups import GroupModel
from ..patterns import Language, Pattern, expand


class TruncationError(ValueError):
    """The padding is too small for the requested stage cap."""


@dataclass
class BijectionTrace:
    group: GroupModel
    centre: object
    radius: int
    padding: int
    gammas: list
    stages: list  # X_0, X_1, ... as frozensets
    phi: dict = field(default_factory=dict)
    interior: frozenset = frozenset()
    window: frozenset = frozenset()

    @property
    def domain(self) -> frozenset:
        return frozenset(self.phi)

    @property
    def range(self) -> frozenset:
        return frozenset(self.phi.values())

    def side(self, A, B) -> str:
        """Which half of the dichotomy holds on the interior: 'dom', 'ran', 'both' or 'none'."""
        dom_ok = (frozenset(A) & self.interior) <= self.domain
        ran_ok = (frozenset(B) & self.interior) <= self.range
        return {(True, True): "both", (True, False): "dom",
                (False, True): "ran", (False, False): "none"}[(dom_ok, ran_ok)]


def default_stage_cap(G: GroupModel, radius: int) -> int:
    """|B(2r)|: every pair of interior points differs by one of these gammas."""
    return G.ball_size(2 * radius)


def greedy_bijection(G: GroupModel, A, B, centre=None, radius: int = 8,
                     padding: int | None = None, stage_cap: int | None = None) -> BijectionTrace:
    if centre is None:
        centre = G.identity
    if padding is None:
        padding = 2 * radius
    if stage_cap is None:
        stage_cap = default_stage_cap(G, radius)
    gammas = G.enumerate(stage_cap)
    need = max((G.length(g) for g in gammas), default=0)
    if padding < need:
        raise TruncationError(f"padding {padding} < length {need} of the last gamma for "
                              f"stage cap {stage_cap}")
    mul = G._mul
    window = frozenset(mul(centre, d) for d in G.ball(radius + padding))
    inner = frozenset(mul(centre, d) for d in G.ball(radius))
    A = frozenset(A)
    B = frozenset(B)
    if not A <= window or not B <= window:
        raise ValueError("A and B must lie inside the padded window")

    free_a = set(A)
    free_b = set(B)
    stages = []
    phi = {}
    for g in gammas:
        if not free_a or not free_b:
            break
        X = frozenset(x for x in free_a if mul(x, g) in free_b)
        for x in X:
            y = mul(x, g)
            phi[x] = y
            free_b.discard(y)
        free_a -= X
        stages.append(X)
    return BijectionTrace(G, centre, radius, padding, gammas[:len(stages)], stages, phi,
                          inner, window)


PHI = Language.of(Phi=2)


def bijection_pattern(P: Pattern, centre=None, radius: int = 8, padding=None,
                      stage_cap=None) -> tuple[Pattern, BijectionTrace]:
    """Run on a pattern with unary A and B; returns the expansion by Phi."""
    A = [x for (x,) in P.rel("A")]
    B = [x for (x,) in P.rel("B")]
    trace = greedy_bijection(P.group, A, B, centre, radius, padding, stage_cap)
    return expand(P, PHI, {"Phi": list(trace.phi.items())}), trace
