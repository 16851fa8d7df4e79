"""Equivariant (d+1)-colouring of bounded-degree graphs on a group.

Each vertex v looks for the least radius k at which its k-view differs from
the k-view of every graph neighbour. The pair (k, code of the view) is v's
witness index; adjacent vertices never share an index. Vertices are then
coloured greedily in index order with the least colour unused by
already-coloured neighbours.

Only information inside the window is used. A vertex whose index or whose
smaller-index neighbours cannot be settled inside the window stays
uncoloured. On a graph with a translation symmetry mapping a vertex to a
neighbour (the unmarked Z-line, say) no witness exists at any radius, so
nothing gets coloured.

Graphs are symmetric relations E; an optional unary relation M marks vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..groups import GroupModel
from ..patterns import Language, Pattern, expand


@dataclass
class ColouringState:
    d: int
    colours: dict = field(default_factory=dict)
    index: dict = field(default_factory=dict)  # vertex -> (k, code)
    support_radius: dict = field(default_factory=dict)
    uncoloured: frozenset = frozenset()

    @property
    def level(self) -> dict:
        return {v: k for v, (k, _) in self.index.items()}

    @property
    def classes(self) -> dict:
        """Y_n classes: witness index -> vertices."""
        out: dict = {}
        for v, idx in self.index.items():
            out.setdefault(idx, set()).add(v)
        return out


class _Graph:
    def __init__(self, P: Pattern):
        self.G: GroupModel = P.group
        self.U = P.universe
        self.adj: dict = {v: set() for v in P.universe}
        for x, y in P.rel("E"):
            self.adj[x].add(y)
            self.adj[y].add(x)
        self.marked = {x for (x,) in P.rel("M")} if "M" in P.language else set()
        self._pos = [g for g in self.G.generators if self._positive(g)]
        self._views: dict = {}

    def _positive(self, g) -> bool:
        if self.G.kind == "Z":
            return g > 0
        if self.G.kind == "Zd":
            return sum(g) > 0
        return g[0] > 0

    def view_code(self, v, k: int):
        """Bit code of the k-view at v, or None if v*B(k) leaves the window."""
        key = (v, k)
        if key in self._views:
            return self._views[key]
        G, mul = self.G, self.G._mul
        ball = G.ball(k)
        inball = ball.element_set
        bits = []
        code = None
        for dl in ball.elements:
            x = mul(v, dl)
            if x not in self.U:
                break
            bits.append(x in self.marked)
            for s in self._pos:
                ds = mul(dl, s)
                if ds in inball:
                    y = mul(v, ds)
                    if y not in self.U:
                        break
                    bits.append(y in self.adj[x])
            else:
                continue
            break
        else:
            code = tuple(bits)
        self._views[key] = code
        return code


def equivariant_colouring(P: Pattern, d: int, max_radius: int | None = None) -> ColouringState:
    g = _Graph(P)
    for v, nb in g.adj.items():
        if len(nb) > d:
            raise ValueError(f"vertex {v!r} has degree {len(nb)} > {d}")
    if max_radius is None:
        max_radius = 64

    # witness search; cache[v] = (index or None, searched_up_to, complete)
    search: dict = {}

    def witness(v, kmax):
        """Index of v if found with k <= kmax; None if none up to kmax; 'U' if undecidable."""
        for k in range(0, kmax + 1):
            cv = g.view_code(v, k)
            if cv is None:
                return "U"
            codes = [g.view_code(w, k) for w in g.adj[v]]
            # one equal neighbour view settles level k, whatever the cut-off neighbours hold;
            # deciding this before looking at None keeps the answer free of set order
            if cv in codes:
                continue
            if None in codes:
                return "U"
            return (k, cv)
        return None

    index: dict = {}
    for v in g.U:
        r = witness(v, max_radius)
        if isinstance(r, tuple):
            index[v] = r
        search[v] = r

    colours: dict = {}
    support: dict = {}
    undetermined: set = set()
    # resolve in index order so that smaller neighbours are settled first
    order = sorted(index, key=lambda v: (index[v], g.G.sort_key(v)))
    for v in order:
        iv = index[v]
        used = set()
        ok = True
        rad = iv[0] + 1
        for w in g.adj[v]:
            iw = index.get(w)
            if iw is None:
                # w smaller than v only if its witness exists at radius <= k(v)
                r = witness(w, iv[0])
                if r == "U":
                    ok = False
                    break
                if r is not None:
                    iw = r
            if iw is not None and iw < iv:
                if w not in colours:
                    ok = False
                    break
                used.add(colours[w])
                rad = max(rad, 1 + support[w])
            else:
                rad = max(rad, 2 + iv[0])
        if not ok:
            undetermined.add(v)
            continue
        c = 0
        while c in used:
            c += 1
        colours[v] = c
        support[v] = rad
    return ColouringState(d, colours, index, support, frozenset(g.U - set(colours)))


def colouring_pattern(P: Pattern, d: int) -> tuple[Pattern, ColouringState]:
    state = equivariant_colouring(P, d)
    lang = Language.of(**{f"C{i}": 1 for i in range(d + 1)})
    rels = {f"C{i}": [(v,) for v, c in state.colours.items() if c == i] for i in range(d + 1)}
    return expand(P, lang, rels), state
