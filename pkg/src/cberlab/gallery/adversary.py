"""Adversaries that defeat finite-radius rules for three expansion problems on Z.

Each adversary builds a finite base pattern on which the rule's own outputs
are jointly inconsistent with the expanded class. The witness stores the
pattern(s), the points that matter and the decorations the rule produced
there. :func:`replay` re-runs ``apply_rule`` and re-derives the
inconsistency from scratch, so a witness never has to be trusted.

Decoration conventions (all on Z):

* linearization: the set of offsets d with x L x+d;
* ramsey: True iff x is marked (x in T);
* zline: True iff x is selected (x in Z).

The gadgets work because a rule of radius r cannot see pairs at distance
more than 2r: gluing two copies of a block far apart leaves every view
inside a block unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from ..groups import Z
from ..local_rules import LocalRule, TableRule, apply_rule
from ..patterns import Language, Pattern, from_json, restrict, to_json
from ..rng import make_rng

DEFEATED = "DEFEATED"
NO_DEFEAT_FOUND = "NO-DEFEAT-FOUND"
MAX_RADIUS = 3

P_LANG = Language.of(P=2)
RS_LANG = Language.of(R=2, S=2)
L_LANG = Language.of(L=2)


# ---------------------------------------------------------------------------
# the three naive rules


def coordinate_order_rule(radius: int = 1) -> LocalRule:
    """Linearize by the integer coordinate, ignoring P."""
    return LocalRule(radius, lambda view: frozenset(range(1, radius + 1)), "coordinate-order",
                     "linearization")


def all_red_ball_rule(radius: int = 1) -> LocalRule:
    """Mark x iff every pair in its r-ball is coloured R."""

    def body(view: Pattern) -> bool:
        R = view.rel("R")
        return all((a, b) in R for a, b in combinations(view.universe, 2))

    return LocalRule(radius, body, "all-red-ball", "ramsey")


def increasing_block(radius: int) -> Pattern:
    pts = list(range(-radius, radius + 1))
    return Pattern(Z, L_LANG, pts, {"L": [(a, b) for a in pts for b in pts if a < b]})


def fixed_pattern_rule(radius: int = 1, target: Pattern | None = None) -> LocalRule:
    """Select x iff its r-view equals a fixed order pattern (increasing by default)."""
    target = increasing_block(radius) if target is None else target
    return LocalRule(radius, lambda view: view == target, "fixed-pattern", "zline")


NAIVE_RULES = {
    "linearization": coordinate_order_rule,
    "ramsey": all_red_ball_rule,
    "zline": fixed_pattern_rule,
}
BUILTIN_RULES = {
    "coordinate-order": coordinate_order_rule,
    "all-red-ball": all_red_ball_rule,
    "fixed-pattern": fixed_pattern_rule,
}


def load_rule(data: dict):
    """``{"kind": "builtin", "name": ..., "radius": r}`` or a table rule."""
    kind = data.get("kind", "table")
    if kind == "builtin":
        try:
            return BUILTIN_RULES[data["name"]](int(data.get("radius", 1)))
        except KeyError:
            raise ValueError(f"unknown builtin rule {data.get('name')!r}; "
                             f"choose from {sorted(BUILTIN_RULES)}") from None
    return TableRule.from_json(json.dumps(data))


# ---------------------------------------------------------------------------
# witnesses


@dataclass
class DefeatWitness:
    problem: str
    kind: str
    patterns: list  # one pattern, or a chain of stages for zline
    points: list  # per pattern, the points whose decorations matter
    decorations: list  # per pattern, point -> decoration
    claim: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "problem": self.problem,
            "kind": self.kind,
            "patterns": [to_json(P) for P in self.patterns],
            "points": self.points,
            "decorations": [{str(x): _dec_json(d) for x, d in decs.items()} for decs in self.decorations],
            "claim": self.claim,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DefeatWitness":
        return cls(data["problem"], data["kind"], [from_json(p) for p in data["patterns"]],
                   [list(p) for p in data["points"]],
                   [{int(x): d for x, d in decs.items()} for decs in data["decorations"]],
                   data.get("claim", {}))


def _dec_json(d):
    if isinstance(d, (set, frozenset, tuple, list)):
        return sorted(d)
    return d


def _same_decoration(a, b) -> bool:
    return _dec_json(a) == _dec_json(b)


@dataclass
class AdversaryResult:
    status: str
    problem: str
    rule: str
    witness: DefeatWitness | None = None
    searched: int = 0
    note: str = ""

    @property
    def defeated(self) -> bool:
        return self.status == DEFEATED

    def to_json(self) -> dict:
        out = {"status": self.status, "problem": self.problem, "rule": self.rule,
               "searched": self.searched, "note": self.note}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


# ---------------------------------------------------------------------------
# linearization


def _rule_edges(decs: dict, pts) -> set:
    """x L x+d for every recorded point x and offset d in its decoration."""
    return {(x, x + d) for x in pts for d in set(_dec_json(decs[x]))}


def defeat_linearization(rule) -> AdversaryResult:
    r = rule.radius
    F = list(range(-r, r + 2))
    A0 = Pattern(Z, P_LANG, F, {"P": []})
    dec = apply_rule(rule, A0).decorations
    lt01 = 1 in set(_dec_json(dec[0]))
    lt10 = -1 in set(_dec_json(dec[1]))
    name = getattr(rule, "name", "rule")
    if lt01 and lt10:
        w = DefeatWitness("linearization", "not-antisymmetric", [A0], [[0, 1]],
                          [{0: dec[0], 1: dec[1]}], {"cycle": [0, 1, 0]})
        return AdversaryResult(DEFEATED, "linearization", name, w, 1)
    if not (lt01 or lt10):
        w = DefeatWitness("linearization", "not-total", [A0], [[0, 1]],
                          [{0: dec[0], 1: dec[1]}], {"pair": [0, 1]})
        return AdversaryResult(DEFEATED, "linearization", name, w, 1)
    g0, g1 = (0, 1) if lt01 else (1, 0)
    gamma = len(F)
    # P-incomparable g0, g1 in each copy; crossing edges g1 -> gamma g0 and gamma g1 -> g0
    edges = [(g1, gamma + g0), (gamma + g1, g0)]
    A1 = Pattern(Z, P_LANG, F + [gamma + x for x in F], {"P": edges})
    dec1 = apply_rule(rule, A1).decorations
    pts = [g0, gamma + g0]
    cycle = [g0, g1, gamma + g0, gamma + g1, g0]
    w = DefeatWitness("linearization", "order-cycle", [A1], [pts], [{x: dec1[x] for x in pts}],
                      {"cycle": cycle, "gamma": gamma})
    return AdversaryResult(DEFEATED, "linearization", name, w, 2)


def _check_linearization(w: DefeatWitness, decs: dict) -> bool:
    A = w.patterns[0]
    pts = w.points[0]
    if w.kind == "not-total":
        a, b = w.claim["pair"]
        return (a, b) not in _rule_edges(decs, [a]) and (b, a) not in _rule_edges(decs, [b])
    edges = _rule_edges(decs, pts) | set(A.rel("P"))
    cycle = w.claim["cycle"]
    return len(cycle) >= 3 and cycle[0] == cycle[-1] and all(e in edges for e in zip(cycle, cycle[1:]))


# ---------------------------------------------------------------------------
# ramsey


def _colouring_pattern(points: list, red_pairs) -> Pattern:
    red = {frozenset(p) for p in red_pairs}
    R, S = [], []
    for a, b in combinations(points, 2):
        (R if frozenset((a, b)) in red else S).extend([(a, b), (b, a)])
    return Pattern(Z, RS_LANG, points, {"R": R, "S": S})


def defeat_ramsey(rule, budget: int = 200, seed: int = 0) -> AdversaryResult:
    r = rule.radius
    size = 2 * r + 2
    F = list(range(size))
    all_pairs = list(combinations(F, 2))
    candidates = [all_pairs, []]
    rng = make_rng(seed, 0)
    for _ in range(budget - 2):
        coin = rng.random(len(all_pairs)) < 0.5
        candidates.append([p for p, c in zip(all_pairs, coin) if c])
    name = getattr(rule, "name", "rule")
    for k, red in enumerate(candidates):
        A0 = _colouring_pattern(F, red)
        dec = apply_rule(rule, A0).decorations
        marked = [x for x in sorted(dec) if dec[x] is True]
        if len(marked) < 2:
            continue
        g0, g1 = marked[:2]
        inside_red = frozenset((g0, g1)) in {frozenset(p) for p in red}
        gamma = size
        glued = list(red) + [(a + gamma, b + gamma) for a, b in red]
        if not inside_red:  # cross pairs take the other colour
            glued += [(a, b + gamma) for a in F for b in F]
        A1 = _colouring_pattern(F + [gamma + x for x in F], glued)
        dec1 = apply_rule(rule, A1).decorations
        pts = [g0, g1, gamma + g0]
        w = DefeatWitness("ramsey", "mark-conflict", [A1], [pts], [{x: dec1[x] for x in pts}],
                          {"gamma": gamma})
        return AdversaryResult(DEFEATED, "ramsey", name, w, k + 1)
    return AdversaryResult(NO_DEFEAT_FOUND, "ramsey", name, None, len(candidates),
                           "the rule marked fewer than two points on every searched block")


def _check_ramsey(w: DefeatWitness, decs: dict) -> bool:
    A = w.patterns[0]
    pts = w.points[0]
    if not all(decs[x] is True for x in pts):
        return False
    R = A.rel("R")
    colours = {(a, b) in R for a, b in combinations(pts, 2)}
    return len(colours) == 2


# ---------------------------------------------------------------------------
# zline


def _order_block(radius: int, ranks: tuple) -> Pattern:
    pts = list(range(-radius, radius + 1))
    return Pattern(Z, L_LANG, pts, {"L": [(a, b) for a in pts for b in pts
                                          if ranks[a + radius] < ranks[b + radius]]})


def _stage(ranks: tuple, radius: int, block_ranks: list) -> tuple:
    """Blocks laid side by side on Z; L orders blocks by rank, then inside each block."""
    w = 2 * radius + 1
    key = {}
    for k, br in enumerate(block_ranks):
        for i in range(w):
            key[k * w + i] = (br, ranks[i])
    pts = sorted(key)
    L = [(a, b) for a in pts for b in pts if key[a] < key[b]]
    return Pattern(Z, L_LANG, pts, {"L": L}), key


def defeat_zline(rule, stages: int = 3, budget: int = 5040) -> AdversaryResult:
    r = rule.radius
    name = getattr(rule, "name", "rule")
    w = 2 * r + 1
    orders = [tuple(range(w)), tuple(reversed(range(w)))]
    orders += [p for p in permutations(range(w)) if p not in orders]
    searched = 0
    for ranks in orders[:budget]:
        searched += 1
        block = _order_block(r, ranks)
        if apply_rule(rule, block).decorations.get(0) is not True:
            continue
        x, y = r, w + r
        block_ranks = [Fraction(0), Fraction(1)]
        patterns, points, decs, counts = [], [], [], []
        for s in range(stages + 1):
            if s:
                block_ranks.append(Fraction(1, 2 ** s))  # squeezed between x and the last insert
            P, key = _stage(ranks, r, block_ranks)
            d = apply_rule(rule, P).decorations
            between = sorted(z for z in d if d[z] is True and key[x] < key[z] < key[y])
            patterns.append(P)
            points.append([x, y] + between)
            decs.append({z: d[z] for z in [x, y] + between})
            counts.append(len(between))
        wit = DefeatWitness("zline", "unbounded-between", patterns, points, decs,
                            {"x": x, "y": y, "counts": counts, "block_order": list(ranks)})
        return AdversaryResult(DEFEATED, "zline", name, wit, searched)
    return AdversaryResult(NO_DEFEAT_FOUND, "zline", name, None, searched,
                           "the rule selected the centre of no searched block")


def _check_zline(w: DefeatWitness, all_decs: list) -> bool:
    x, y = w.claim["x"], w.claim["y"]
    counts = []
    for k, (P, decs) in enumerate(zip(w.patterns, all_decs)):
        if k and restrict(P, w.patterns[k - 1].universe) != w.patterns[k - 1]:
            return False  # each stage must extend the previous one
        L = P.rel("L")
        if decs.get(x) is not True or decs.get(y) is not True or (x, y) not in L:
            return False
        counts.append(sum(1 for z, v in decs.items() if v is True and (x, z) in L and (z, y) in L))
    return len(counts) >= 3 and all(a < b for a, b in zip(counts, counts[1:]))


# ---------------------------------------------------------------------------


def adversary(problem: str, rule, **kw) -> AdversaryResult:
    if rule.radius > MAX_RADIUS:
        raise ValueError(f"rule radius {rule.radius} exceeds the search budget limit {MAX_RADIUS}")
    if problem == "linearization":
        return defeat_linearization(rule)
    if problem == "ramsey":
        return defeat_ramsey(rule, **kw)
    if problem == "zline":
        return defeat_zline(rule, **kw)
    raise ValueError(f"unknown problem {problem!r}; expected linearization, ramsey or zline")


def replay(w: DefeatWitness, rule) -> bool:
    """Re-run the rule on every stored pattern and re-derive the inconsistency."""
    fresh = []
    for P, pts, recorded in zip(w.patterns, w.points, w.decorations):
        out = apply_rule(rule, P)
        for x in pts:
            if x not in out.interior or not _same_decoration(out.decorations[x], recorded[x]):
                return False
        fresh.append({x: out.decorations[x] for x in pts})
    if w.problem == "linearization":
        return _check_linearization(w, fresh[0])
    if w.problem == "ramsey":
        return _check_ramsey(w, fresh[0])
    if w.problem == "zline":
        return _check_zline(w, fresh)
    return False
