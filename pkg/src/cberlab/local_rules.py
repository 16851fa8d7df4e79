"""Finite-radius equivariant decoration rules.

A rule body never sees absolute coordinates: it is handed the view at x,
that is the radius-r neighbourhood of x translated back to the identity.
Equivariance is then automatic. Rules receive coordinates relative to x,
not isomorphism classes, so a rule may treat the +1 and -1 neighbours of
an integer differently.

Points whose r-ball leaves the window are reported as undetermined and never
guessed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

from .groups import GroupModel
from .patterns import Pattern, pattern_hash, translate


class UndeterminedError(ValueError):
    """The requested ball is not contained in the window."""


@dataclass(frozen=True)
class LocalRule:
    """``body(view)`` decorates the identity of a pattern on B(radius)."""

    radius: int
    body: Callable[[Pattern], Any]
    name: str = "rule"
    problem: Any = None


@dataclass(frozen=True)
class RawRule:
    """A rule that also sees the absolute position; used to exhibit non-equivariance."""

    radius: int
    body: Callable[[Pattern, Any], Any]
    name: str = "raw-rule"
    problem: Any = None


@dataclass
class DecoratedWindow:
    base: Pattern
    radius: int
    decorations: dict = field(default_factory=dict)
    interior: frozenset = frozenset()
    undetermined: frozenset = frozenset()


class ViewIndex:
    """Per-point incidence lists so that views cost O(ball) instead of O(pattern)."""

    def __init__(self, A: Pattern):
        self.A = A
        self.G = A.group
        self.incident: dict = {}
        for name, tuples in A._rels:
            for t in tuples:
                for x in set(t):
                    self.incident.setdefault(x, []).append((name, t))

    def ball_at(self, x, r: int) -> list:
        mul = self.G._mul
        return [mul(x, d) for d in self.G.ball(r).elements]

    def covered(self, x, r: int) -> bool:
        U = self.A.universe
        return all(y in U for y in self.ball_at(x, r))

    def restricted(self, x, r: int) -> Pattern:
        pts = self.ball_at(x, r)
        S = set(pts)
        if not S <= self.A.universe:
            raise UndeterminedError(f"B({r}) at {x!r} leaves the window")
        rels: dict = {n: set() for n in self.A.language.names}
        for y in pts:
            for name, t in self.incident.get(y, ()):
                if all(z in S for z in t):
                    rels[name].add(t)
        return Pattern(self.G, self.A.language, S, rels, check=False)

    def view(self, x, r: int) -> Pattern:
        return translate(self.G._inv(x), self.restricted(x, r))


def interior(universe, group: GroupModel, r: int) -> frozenset:
    """Points x of the window with x*B(r) inside the window."""
    U = frozenset(universe)
    ball = group.ball(r).elements
    mul = group._mul
    return frozenset(x for x in U if all(mul(x, d) in U for d in ball))


def view(A: Pattern, x, r: int) -> Pattern:
    return ViewIndex(A).view(x, r)


def apply_rule(rule, A: Pattern) -> DecoratedWindow:
    G = A.group
    idx = ViewIndex(A)
    inner = interior(A.universe, G, rule.radius)
    decorations = {}
    for x in G.sorted(inner):
        if isinstance(rule, RawRule):
            decorations[x] = rule.body(idx.restricted(x, rule.radius), x)
        else:
            decorations[x] = rule.body(idx.view(x, rule.radius))
    return DecoratedWindow(A, rule.radius, decorations, inner, frozenset(A.universe - inner))


@dataclass
class EquivarianceReport:
    samples: int
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_equivariance(rule, samples) -> EquivarianceReport:
    """For each (A, g): decoration of g*A at g*x must equal decoration of A at x."""
    checked = 0
    violations = []
    for k, (A, g) in enumerate(samples):
        G = A.group
        before = apply_rule(rule, A)
        after = apply_rule(rule, translate(g, A))
        for x in G.sorted(before.interior):
            gx = G._mul(g, x)
            if gx not in after.interior:
                continue
            checked += 1
            if after.decorations[gx] != before.decorations[x]:
                violations.append((k, x, before.decorations[x], after.decorations[gx]))
    return EquivarianceReport(len(samples), checked, violations)


def structure_to_map(A: Pattern, x, r: int) -> Pattern:
    """Pull the structure back to the ball at the identity.

    R(g1, ..., gn) holds in the output iff R(g1^-1 x, ..., gn^-1 x) holds in A.
    The output lives on B(r) and needs B(r)*x inside the window.
    """
    G = A.group
    ball = G.ball(r).elements
    inv, mul = G._inv, G._mul
    pull = {g: mul(inv(g), x) for g in ball}
    if not all(y in A.universe for y in pull.values()):
        raise UndeterminedError(f"B({r})*{x!r} leaves the window")
    back = {y: g for g, y in pull.items()}
    rels = {}
    for name, tuples in A._rels:
        rels[name] = [tuple(back[y] for y in t) for t in tuples if all(y in back for y in t)]
    return Pattern(G, A.language, ball, rels, check=False)


@dataclass(frozen=True)
class TableRule:
    """Lookup-table rule keyed by the canonical hash of the view."""

    radius: int
    table: dict
    default: Any = None
    name: str = "table-rule"
    problem: Any = None

    @property
    def body(self) -> Callable[[Pattern], Any]:
        return lambda P: self.table.get(pattern_hash(P), self.default)

    def to_json(self) -> str:
        return json.dumps({"kind": "table", "radius": self.radius, "name": self.name,
                           "default": self.default, "table": self.table},
                          sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "TableRule":
        data = json.loads(text)
        if data.get("kind", "table") != "table":
            raise ValueError("not a table rule")
        return cls(int(data["radius"]), dict(data["table"]), data.get("default"),
                   data.get("name", "table-rule"))


def tabulate(rule: LocalRule, views) -> TableRule:
    """Freeze a code rule into a table over the given views."""
    table = {pattern_hash(v): rule.body(v) for v in views}
    return TableRule(rule.radius, table, None, rule.name + "-table", rule.problem)
