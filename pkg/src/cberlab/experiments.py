"""The registered experiments, one per acceptance criterion.

Each experiment takes its parameters and a job seed and returns checks.
Where a check compares against an oracle, the oracle is a separate
computation (array recursion, union-find, subset brute force, exact
eigenvector) rather than a second call into the code under test.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .expansions import equivariant_colouring, greedy_bijection, spanning_forest_arrays
from .expansions.forest import edge_stages
from .gallery import (adversary, conjugation_check, flip_head, max_homogeneous,
                      max_homogeneous_bruteforce, order_check, replay, sample_max_homogeneous,
                      sample_pair_colouring, successor_check)
from .gallery.adversary import NAIVE_RULES, DefeatWitness
from .gallery.dyadic import DyadicPoint
from .gallery.ramsey import PairColouring
from .groups import Z, parse_group
from .harness import Check, Outcome, register
from .ire_lp import (Certificate, LinearizationFamily, RamseyFamily, TrivialFamily, base_point,
                     build_lp, density_farkas, lift_farkas, max_marked_density, solve,
                     uniform_order_point, verify)
from .patterns import Language, Pattern, translate
from .rng import make_rng
from .walks import (IidMarks, ResidueClass, TransportConfig, WalkConfig, freq_estimate,
                    mass_transport_check, parse_target, quotient_frequency, sample_walk,
                    successor_transport, visit_profile)

# ---------------------------------------------------------------------------
# bijection


def _shift(mask: np.ndarray, g: int) -> np.ndarray:
    """out[i] = mask[i + g], False outside the array."""
    out = np.zeros_like(mask)
    if g >= 0:
        out[:len(mask) - g] = mask[g:]
    else:
        out[-g:] = mask[:len(mask) + g]
    return out


def _recheck_trace(tr, a: np.ndarray, b: np.ndarray, R: int, cap: list) -> list:
    """Problems found when re-deriving every X_n on index arrays of [-R, R]."""
    problems = []
    size = 2 * R + 1
    used_a = np.zeros(size, dtype=bool)
    used_b = np.zeros(size, dtype=bool)
    dom_count = np.zeros(size, dtype=np.int64)
    ran_count = np.zeros(size, dtype=np.int64)
    if tr.gammas != cap[:len(tr.gammas)]:
        problems.append("gamma sequence differs from the enumeration")
    for n, g in enumerate(cap):
        expected = a & ~used_a & _shift(b & ~used_b, g)
        got = np.zeros(size, dtype=bool)
        if n < len(tr.stages):
            got[np.fromiter(tr.stages[n], dtype=np.int64, count=len(tr.stages[n])) + R] = True
        if not np.array_equal(expected, got):
            problems.append(f"X_{n} differs from the recursion")
            break
        img = _shift(got, -g)
        dom_count += got
        ran_count += img
        used_a |= got
        used_b |= img
    if dom_count.max(initial=0) > 1:
        problems.append("the X_n are not pairwise disjoint")
    if ran_count.max(initial=0) > 1:
        problems.append("the X_n * gamma_n are not pairwise disjoint")
    phi_ok = all(tr.phi.get(x) == x + g for X, g in zip(tr.stages, tr.gammas) for x in X)
    if not phi_ok or len(tr.phi) != int(dom_count.sum()):
        problems.append("phi is not x -> x * gamma_n on the stages")
    inner = slice(R - tr.radius, R + tr.radius + 1)
    dom_side = not np.any(a[inner] & ~used_a[inner])
    ran_side = not np.any(b[inner] & ~used_b[inner])
    if not (dom_side or ran_side):
        problems.append("neither dom(phi) nor ran(phi) covers its set on the interior")
    return problems


@register("bijection-recursion", "greedy bijection: stagewise sets X_n and the dom/ran dichotomy",
          {"trials": 1000, "radius": 64})
def bijection_recursion(params: dict, seed: int) -> Outcome:
    """Greedy bijection on Z: recursion, disjointness and dichotomy against an array re-derivation."""
    r = params["radius"]
    pad = 2 * r
    R = r + pad
    cap = Z.enumerate(Z.ball_size(2 * r))
    pts = np.arange(-R, R + 1)
    failures, first = 0, None
    sides = {"dom": 0, "ran": 0, "both": 0}
    for t in range(params["trials"]):
        rng = make_rng(seed, t)
        pa, pb = rng.uniform(0.05, 0.95, size=2)
        a = rng.random(len(pts)) < pa
        b = rng.random(len(pts)) < pb
        A, B = pts[a].tolist(), pts[b].tolist()
        tr = greedy_bijection(Z, A, B, 0, r)
        problems = _recheck_trace(tr, a, b, R, cap)
        if problems:
            failures += 1
            first = first or {"A": A, "B": B, "radius": r, "problems": problems}
        else:
            sides[tr.side(A, B)] += 1
    return Outcome([Check("recursion, disjointness and dichotomy", failures == 0,
                          {"trials": params["trials"], "failures": failures}, "0 failures", first)],
                   data={"dichotomy_sides": sides})


@register("bijection-equivariance", "greedy bijection: translating (A, B) translates phi",
          {"samples": 200, "groups": ["Z", "Z^2", "F2"], "radii": [12, 3, 2], "shift_radius": 3})
def bijection_equivariance(params: dict, seed: int) -> Outcome:
    """phi for (gA, gB) equals g * phi for (A, B) on the common interior."""
    groups = [parse_group(name) for name in params["groups"]]
    mismatches, first = 0, None
    for i in range(params["samples"]):
        rng = make_rng(seed, i)
        G, r = groups[i % len(groups)], params["radii"][i % len(groups)]
        W = list(G.ball(3 * r))
        A = [x for x, keep in zip(W, rng.random(len(W)) < 0.5) if keep]
        B = [x for x, keep in zip(W, rng.random(len(W)) < 0.5) if keep]
        shifts = list(G.ball(params["shift_radius"]))
        g = shifts[int(rng.integers(len(shifts)))]
        base = greedy_bijection(G, A, B, G.identity, r)
        moved = greedy_bijection(G, G.translate_set(g, A), G.translate_set(g, B), g, r)
        want = {G.mul(g, x): G.mul(g, y) for x, y in base.phi.items()}
        inner = moved.interior
        got = {x: y for x, y in moved.phi.items() if x in inner}
        want = {x: y for x, y in want.items() if x in inner}
        if got != want:
            mismatches += 1
            first = first or {"group": G.name, "radius": r, "shift": G.to_json(g),
                              "A": [G.to_json(x) for x in A], "B": [G.to_json(x) for x in B]}
    return Outcome([Check("phi(gA, gB) = g phi(A, B) on the interior", mismatches == 0,
                          {"samples": params["samples"], "mismatches": mismatches},
                          "0 mismatches", first)])


# ---------------------------------------------------------------------------
# colouring

MARKED_GRAPH = Language.of(E=2, M=1)


def random_cayley_subgraph(G, radius: int, d: int, rng, p_edge=0.8, p_mark=0.3) -> Pattern:
    """Random subgraph of the Cayley graph on a ball, max degree d, random vertex marks."""
    pts = list(G.ball(radius))
    inside = set(pts)
    deg = dict.fromkeys(pts, 0)
    edges = []
    seen = set()
    for v in pts:
        for s in G.generators:
            w = G.mul(v, s)
            if w not in inside or (w, v) in seen:
                continue
            seen.add((v, w))
            if rng.random() < p_edge and deg[v] < d and deg[w] < d:
                edges.append((v, w))
                deg[v] += 1
                deg[w] += 1
    edges += [(b, a) for a, b in edges]
    marks = [(v,) for v, m in zip(pts, rng.random(len(pts)) < p_mark) if m]
    return Pattern(G, MARKED_GRAPH, pts, {"E": edges, "M": marks})


def _properness(P: Pattern, colours: dict) -> bool:
    return all(colours[x] != colours[y] for x, y in P.rel("E") if x in colours and y in colours)


@register("colouring", "equivariant (d+1)-colouring: witness levels, properness, bad line",
          {"samples": 500, "radius": 6, "degrees": [2, 3, 4], "groups": ["Z", "Z^2", "F2"],
           "line_radius": 60})
def colouring(params: dict, seed: int) -> Outcome:
    """Properness, colour budget and translation equivariance; the unmarked line stays uncoloured."""
    groups = [parse_group(name) for name in params["groups"]]
    degrees = params["degrees"]
    bad = {"improper": 0, "too many colours": 0, "not equivariant": 0}
    first: dict = {}
    coloured = total = 0
    for i in range(params["samples"]):
        rng = make_rng(seed, i)
        G = groups[i % len(groups)]
        d = degrees[(i // len(groups)) % len(degrees)]
        P = random_cayley_subgraph(G, params["radius"], d, rng)
        s = equivariant_colouring(P, d)
        shifts = list(G.ball(2))
        g = shifts[int(rng.integers(len(shifts)))]
        moved = equivariant_colouring(translate(g, P), d)
        flags = {"improper": not _properness(P, s.colours),
                 "too many colours": not set(s.colours.values()) <= set(range(d + 1)),
                 "not equivariant": moved.colours != {G.mul(g, v): c for v, c in s.colours.items()}}
        for k, v in flags.items():
            if v:
                bad[k] += 1
                first.setdefault(k, {"group": G.name, "d": d, "sample": i, "shift": G.to_json(g)})
        coloured += len(s.colours)
        total += len(P.universe)
    R = params["line_radius"]
    edges = [(x, x + 1) for x in range(-R, R)]
    line = Pattern(Z, MARKED_GRAPH, range(-R, R + 1), {"E": edges + [(b, a) for a, b in edges]})
    line_state = equivariant_colouring(line, 2)
    checks = [Check(f"{k} samples", v == 0, v, 0, first.get(k)) for k, v in bad.items()]
    checks.append(Check("some vertices coloured", coloured > 0,
                        {"coloured": coloured, "vertices": total}, "> 0"))
    checks.append(Check("unmarked Z-line coloured vertices", not line_state.colours,
                        len(line_state.colours), 0, {"line_radius": R}))
    return Outcome(checks)


# ---------------------------------------------------------------------------
# spanning forests


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def random_exhaustion(n: int, stages: int, rng) -> np.ndarray:
    """labels[t, v]; each stage merges classes of the previous one, the last stage is one class."""
    k = max(1, n // 4)
    labels = np.empty((stages, n), dtype=np.int64)
    labels[0] = rng.integers(0, k, size=n)
    for t in range(1, stages):
        k_next = 1 if t == stages - 1 else max(1, k // 3)
        labels[t] = rng.integers(0, k_next, size=k)[labels[t - 1]]
        k = k_next
    return labels


def random_connected_graph(n: int, extra: int, rng) -> np.ndarray:
    """A random recursive tree plus extra random edges, in random order."""
    parents = (rng.random(n - 1) * np.arange(1, n)).astype(np.int64)
    tree = np.stack([parents, np.arange(1, n)], axis=1)
    more = rng.integers(0, n, size=(extra, 2))
    edges = np.vstack([tree, more])
    return edges[rng.permutation(len(edges))]


def _forest_problems(n: int, edges: np.ndarray, labels: np.ndarray, res) -> list:
    problems = []
    T = labels.shape[0]
    first_stage = edge_stages(edges, labels)  # stage at which each input edge becomes usable
    chosen = res.edges
    # recorded stages must be the first stage where the endpoints share a class
    pos = {}
    for i, (a, b) in enumerate(edges.tolist()):
        pos.setdefault((a, b), i)
    want = np.array([first_stage[pos[(a, b)]] for a, b in chosen.tolist()], dtype=np.int64)
    if not np.array_equal(want, res.edge_stage):
        problems.append("recorded stages disagree with the exhaustion")
    uf = UnionFind(n)
    for a, b in chosen[np.argsort(res.edge_stage, kind="stable")].tolist():
        if not uf.union(a, b):
            problems.append(f"cycle closed by edge {(a, b)}")
            break
    for t in range(T):
        lab = labels[t]
        mine = chosen[res.edge_stage <= t]
        if np.any(lab[mine[:, 0]] != lab[mine[:, 1]]):
            problems.append(f"stage {t} uses an edge between two classes")
        inside = edges[(lab[edges[:, 0]] == lab[edges[:, 1]]) & (edges[:, 0] != edges[:, 1])]
        g = coo_matrix((np.ones(len(inside)), (inside[:, 0], inside[:, 1])), shape=(n, n))
        comps = connected_components(g, directed=False)[0]
        if len(mine) != n - comps:
            problems.append(f"stage {t} forest has {len(mine)} edges, spanning needs {n - comps}")
    if len(chosen) != n - len(np.unique(labels[-1])):
        problems.append("final forest is not a spanning tree of every final class")
    return problems


@register("spanning-forest", "spanning forests along a hyperfinite exhaustion",
          {"graphs": 100, "vertices": 10_000, "extra_edges": 10_000, "stages": 10})
def spanning_forest_experiment(params: dict, seed: int) -> Outcome:
    """Acyclic, spanning at every stage, stage-monotone; checked by union-find and component counts."""
    n = params["vertices"]
    bad, first = 0, None
    for i in range(params["graphs"]):
        rng = make_rng(seed, i)
        edges = random_connected_graph(n, params["extra_edges"], rng)
        labels = random_exhaustion(n, params["stages"], rng)
        res = spanning_forest_arrays(n, edges, labels)
        problems = _forest_problems(n, edges, labels, res)
        if res.failures:
            problems.append(f"per-class failures {res.failures}")
        if problems:
            bad += 1
            first = first or {"graph": i, "seed": seed, "problems": problems}
    return Outcome([Check("graphs with a forest defect", bad == 0,
                          {"graphs": params["graphs"], "bad": bad}, 0, first)])


# ---------------------------------------------------------------------------
# walks


@register("frequencies", "visit frequency of a set along a symmetric random walk",
          {"group": "Z", "target": "3Z", "steps": 200_000, "walks": 20, "tolerance": 0.01,
           "parity_target": "evens", "lazy": 0.5})
def frequencies(params: dict, seed: int) -> Outcome:
    """Monte Carlo frequency of a residue class against the exact quotient-chain value."""
    G = parse_group(params["group"])
    target = parse_target(params["target"])
    cfg = WalkConfig(G, params["steps"], seed=seed)
    est = freq_estimate(target, cfg, params["walks"])
    exact = quotient_frequency(target, cfg) if isinstance(target, ResidueClass) else Fraction(1)
    tol = params["tolerance"]
    lazy_cfg = WalkConfig(G, params["steps"], seed=seed, lazy=params["lazy"])
    parity_target = parse_target(params["parity_target"])
    lazy = freq_estimate(parity_target, lazy_cfg, params["walks"])
    parity_exact = quotient_frequency(parity_target, lazy_cfg)
    inst = {"group": G.name, "steps": params["steps"], "walks": params["walks"]}
    return Outcome([
        Check(f"|estimate - {exact}| for {target.name}", abs(est.estimate - float(exact)) < tol,
              abs(est.estimate - float(exact)), tol, {**inst, **est.to_json()}),
        Check(f"{target.name} estimate within 3 SE of {exact}", est.within(float(exact)),
              {"estimate": est.estimate, "se": est.se}, "3 SE", {**inst, **est.to_json()}),
        Check(f"|estimate - {parity_exact}| for lazy {parity_target.name}",
              abs(lazy.estimate - float(parity_exact)) < tol,
              abs(lazy.estimate - float(parity_exact)), tol, {**inst, **lazy.to_json()}),
    ], data={"estimate": est.to_json(), "lazy": lazy.to_json(), "exact": str(exact)})


@register("visit-profiles", "top-k visit sums F^n_k and class averages alpha^n_0",
          {"steps": 200_000, "modulus": 5, "splits": 100_000, "identity_points": 50})
def visit_profiles(params: dict, seed: int) -> Outcome:
    """Subadditivity of F^n_k at random split points and the alpha/F difference identity."""
    m = params["modulus"]
    path = sample_walk(WalkConfig(Z, params["steps"], seed=seed))
    vp = visit_profile(lambda pts: np.asarray(pts) % m, path, m, params["splits"], seed,
                       params["identity_points"])
    return Outcome([
        Check("subadditivity violations", vp.subadditivity_violations == 0,
              {"violations": vp.subadditivity_violations, "checks": vp.subadditivity_checks}, 0,
              {"steps": params["steps"], "modulus": m}),
        Check("alpha vs F difference identity", vp.identity_failures == 0 and vp.identity_checks > 0,
              {"failures": vp.identity_failures, "checks": vp.identity_checks}, 0,
              {"steps": params["steps"], "modulus": m}),
    ], data={"F": vp.F, "alpha": vp.alpha})


@register("mass-transport", "mass transport: expected mass out equals expected mass in",
          {"samples": 1_000_000, "p": 0.5, "half_width": 64, "tolerance": 0.01})
def mass_transport(params: dict, seed: int) -> Outcome:
    """Successor transport under iid marks on Z against the closed form p."""
    rep = mass_transport_check(IidMarks(params["p"]), successor_transport,
                               TransportConfig(params["samples"], params["half_width"], seed))
    p, tol = params["p"], params["tolerance"]
    inst = rep.to_json()
    return Outcome([
        Check("|LHS - RHS| within 3 SE", rep.verdict == "PASS",
              {"difference": rep.difference, "se": rep.se}, "3 SE", inst),
        Check("|LHS - p|", abs(rep.lhs - p) <= tol, abs(rep.lhs - p), tol, inst),
        Check("|RHS - p|", abs(rep.rhs - p) <= tol, abs(rep.rhs - p), tol, inst),
        Check("shift-consistency pre-test", not rep.warnings, rep.warnings, "no warnings", inst),
    ], data=inst)


# ---------------------------------------------------------------------------
# ramsey and the LP curve


def exact_expected_max_homogeneous(n: int) -> Fraction:
    """Average of the subset-DP answer over all 2^C(n,2) colourings (p = 1/2)."""
    pairs = list(combinations(range(n), 2))
    total = 0
    for bits in range(1 << len(pairs)):
        red = [pr for i, pr in enumerate(pairs) if bits >> i & 1]
        total += max_homogeneous_bruteforce(PairColouring.from_pairs(n, red))
    return Fraction(total, 1 << len(pairs))


@register("ramsey", "homogeneous sets of random pair colourings and the density LP curve",
          {"colourings": 100, "max_brute_n": 18, "clique_n": 64, "clique_samples": 200,
           "band": [7.0, 11.0], "windows": 5})
def ramsey(params: dict, seed: int) -> Outcome:
    """Exact clique solver vs brute force, the n=64 growth band, and delta*(n) for small windows."""
    mism, first = 0, None
    for i in range(params["colourings"]):
        n = 1 + i % params["max_brute_n"]
        c = sample_pair_colouring(n, Fraction(1, 2), seed, i)
        if max_homogeneous(c) != max_homogeneous_bruteforce(c):
            mism += 1
            first = first or c.to_json()
    s = sample_max_homogeneous(params["clique_n"], Fraction(1, 2), params["clique_samples"], seed)
    lo, hi = params["band"]
    N = params["windows"]
    curve = {n: max_marked_density(n).delta for n in range(1, N + 1)}
    top = exact_expected_max_homogeneous(N) / N
    vals = [curve[n] for n in range(1, N + 1)]
    rows = [[n, str(curve[n]), float(curve[n])] for n in range(1, N + 1)]
    return Outcome([
        Check("exact vs brute force mismatches", mism == 0,
              {"colourings": params["colourings"], "mismatches": mism}, 0, first),
        Check(f"mean largest homogeneous set, n={params['clique_n']}", lo <= s.mean <= hi,
              s.mean, [lo, hi], s.to_json()),
        Check("delta* nonincreasing", all(a >= b for a, b in zip(vals, vals[1:])),
              [str(v) for v in vals], "nonincreasing", {"curve": [str(v) for v in vals]}),
        Check("delta*(1) = delta*(2) = 1", vals[:2] == [1, 1][:len(vals[:2])],
              [str(v) for v in vals[:2]], ["1", "1"]),
        Check(f"delta*({N}) <= E[max homogeneous]/{N}", curve[N] <= top,
              {"delta_star": str(curve[N]), "bound": str(top)}, "<="),
    ], tables={"delta-curve": (["n", "delta_star", "delta_float"], rows)},
        data={"clique": s.to_json(), "bound": str(top)})


@register("lp-soundness", "exact certificates for window LPs (density, Farkas lifts, linearization)",
          {"windows": 5, "threshold": "9/10", "linearization_windows": 6, "trivial_windows": 4})
def lp_soundness(params: dict, seed: int) -> Outcome:
    """Every certificate re-verifies exactly; tampering is caught; linearization stays feasible."""
    emitted, failed = [], []

    def record(label, lp, cert):
        emitted.append(label)
        if not verify(lp, cert):
            failed.append(label)

    curve = {}
    for n in range(1, params["windows"] + 1):
        res = max_marked_density(n)
        curve[n] = res
        record(f"density optimum n={n}", res.lp, res.certificate)
    thr = Fraction(params["threshold"])
    tamper_caught = True
    for n, res in curve.items():
        if res.delta >= thr:
            continue
        lp, cert = density_farkas(res, thr)
        record(f"Farkas n={n} threshold {thr}", lp, cert)
        big = build_lp(RamseyFamily(nonempty=True), n + 1, min_density=thr)
        lifted = lift_farkas(RamseyFamily(), lp, cert, big)
        record(f"lifted Farkas n={n + 1} threshold {thr}", big, lifted)
        tamper_caught &= not verify(big, Certificate("infeasible", y=[-v for v in lifted.y]))
    lin_kinds = {}
    for n in range(1, params["linearization_windows"] + 1):
        lp = build_lp(LinearizationFamily(), n)
        cert = solve(lp)
        lin_kinds[n] = cert.kind
        record(f"linearization n={n}", lp, cert)
        record(f"uniform order point n={n}", lp, uniform_order_point(lp))
    for n in range(1, params["trivial_windows"] + 1):
        fam = TrivialFamily(RamseyFamily())
        lp = build_lp(fam, n)
        record(f"trivial decoration point n={n}", lp, base_point(lp, fam))
    return Outcome([
        Check("certificates re-verified exactly", not failed,
              {"emitted": len(emitted), "failed": failed}, "all verify", {"failed": failed}),
        Check("tampered Farkas vectors rejected", tamper_caught, tamper_caught, True),
        Check("linearization LP feasible", all(k == "feasible" for k in lin_kinds.values()),
              lin_kinds, "feasible for every n"),
    ], data={"certificates": emitted})


# ---------------------------------------------------------------------------
# dyadic order and adversaries


@register("dyadic", "the dyadic order L on F0 and its successor map f",
          {"successor_length": 16, "order_length": 8, "conjugation_length": 12})
def dyadic(params: dict, seed: int) -> Outcome:
    """Successor exactness, transitivity/totality of L, and flip_head as an order-reversing involution."""
    succ = successor_check(params["successor_length"])
    order = order_check(params["order_length"])
    conj = conjugation_check(params["conjugation_length"])
    L = params["successor_length"]
    invol = 0
    for w in range(1 << L):
        x = DyadicPoint(tuple(w >> i & 1 for i in range(L)), "t")
        invol += flip_head(flip_head(x)) != x
    return Outcome([
        Check("successor counterexamples", succ.ok, succ.to_json(), 0, succ.to_json()["examples"]),
        Check("transitivity violations", order.transitivity_violations == 0,
              {"violations": order.transitivity_violations, "triples": order.triples}, 0,
              {"length": order.length}),
        Check("totality violations", order.totality_violations == 0,
              order.totality_violations, 0, {"length": order.length}),
        Check("order reversal under flip_head", order.reversal_violations == 0,
              {"violations": order.reversal_violations, "pairs": order.reversal_pairs}, 0,
              {"length": order.length}),
        Check("flip_head involution failures", invol == 0, {"failures": invol, "words": 1 << L}, 0),
        Check("flip_head conjugates f to the predecessor", conj.ok, conj.to_json(), 0,
              conj.to_json()["examples"]),
    ])


@register("adversaries", "gadget adversaries against the naive local rules",
          {"radii": [1, 2, 3], "problems": ["linearization", "ramsey", "zline"]})
def adversaries(params: dict, seed: int) -> Outcome:
    """Each naive rule is defeated and its witness replays, also after a JSON round trip."""
    checks = []
    for problem in params["problems"]:
        make = NAIVE_RULES[problem]
        results = []
        for r in params["radii"]:
            rule = make(r)
            res = adversary(problem, rule)
            again = None
            if res.defeated:
                again = DefeatWitness.from_json(json.loads(json.dumps(res.witness.to_json())))
            ok = res.defeated and replay(res.witness, rule) and replay(again, rule)
            results.append({"radius": r, "status": res.status, "replayed": bool(ok),
                            "kind": res.witness.kind if res.witness else None})
        checks.append(Check(f"{problem}: {make(1).name} defeated and replayed",
                            all(x["replayed"] for x in results), results, "every radius",
                            {"problem": problem, "results": results}))
    return Outcome(checks)
