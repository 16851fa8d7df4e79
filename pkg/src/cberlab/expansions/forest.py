"""Spanning forests along a hyperfinite exhaustion.

Stage t keeps the forest of stage t-1 and adds edges of G that lie inside a
class of E_t, in a fixed edge order, whenever they join two different trees.
Running Kruskal once with edge weights (first stage at which the edge lies
inside a class, edge order) gives exactly the same forest. SciPy's minimum
spanning tree does that with distinct integer weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, minimum_spanning_tree

from ..patterns import Language, Pattern, expand


@dataclass
class ForestResult:
    edges: np.ndarray  # (m, 2) vertex indices, chosen edges
    edge_stage: np.ndarray  # stage at which each chosen edge entered
    failures: list = field(default_factory=list)  # (final class label, #components)

    def stage_edges(self, t: int) -> np.ndarray:
        return self.edges[self.edge_stage <= t]

    @property
    def ok(self) -> bool:
        return not self.failures


def edge_stages(edges: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """First stage at which both endpoints share a class; T+1 (sentinel) if never."""
    labels = np.asarray(labels)
    T = labels.shape[0]
    same = labels[:, edges[:, 0]] == labels[:, edges[:, 1]]
    return np.where(same.any(axis=0), same.argmax(axis=0), T)


def check_exhaustion(labels: np.ndarray) -> None:
    """Each stage must coarsen the previous one."""
    for t in range(1, labels.shape[0]):
        prev, cur = labels[t - 1], labels[t]
        # every previous class maps into a single current class
        first = {}
        for a, b in zip(prev.tolist(), cur.tolist()):
            if first.setdefault(a, b) != b:
                raise ValueError(f"stage {t} does not coarsen stage {t - 1} (class {a})")


def spanning_forest_arrays(n: int, edges: np.ndarray, labels: np.ndarray,
                           validate: bool = True) -> ForestResult:
    """``edges`` are undirected pairs of vertex indices in the fixed edge order;
    ``labels[t, v]`` is the class of v in E_t."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    labels = np.asarray(labels)
    if validate:
        check_exhaustion(labels)
    T = labels.shape[0]
    stage = edge_stages(edges, labels)
    # self-loops and repeated pairs can never join two trees; keep first copies only
    lo, hi = np.minimum(edges[:, 0], edges[:, 1]), np.maximum(edges[:, 0], edges[:, 1])
    _, first = np.unique(lo * n + hi, return_index=True)
    keep = np.zeros(len(edges), dtype=bool)
    keep[first] = True
    keep &= lo != hi
    usable = (stage < T) & keep
    m = len(edges)
    # weight rank: stage-major, then the given edge order
    order = np.lexsort((np.arange(m), stage))
    rank = np.empty(m, dtype=np.int64)
    rank[order] = np.arange(1, m + 1)
    u, v, w = edges[usable, 0], edges[usable, 1], rank[usable]
    mat = coo_matrix((w.astype(np.float64), (u, v)), shape=(n, n)).tocsr()
    mst = minimum_spanning_tree(mat).tocoo()
    # map chosen weights back to edges
    chosen_rank = np.rint(mst.data).astype(np.int64)
    chosen = np.sort(order[chosen_rank - 1])
    out_edges = edges[chosen]
    out_stage = stage[chosen]
    # classes of the final stage that G does not connect
    failures = []
    inside = edges[usable]
    g = coo_matrix((np.ones(len(inside)), (inside[:, 0], inside[:, 1])), shape=(n, n))
    ncomp, comp = connected_components(g, directed=False)
    final = labels[-1]
    per_class: dict = {}
    for lab, c in zip(final.tolist(), comp.tolist()):
        per_class.setdefault(lab, set()).add(c)
    for lab in sorted(per_class):
        if len(per_class[lab]) > 1:
            failures.append((lab, len(per_class[lab])))
    return ForestResult(out_edges, out_stage, failures)


def spanning_forest(P: Pattern, exhaustion: list) -> tuple[Pattern, ForestResult]:
    """``exhaustion`` is a list of partitions (each a list of vertex sets), finest first."""
    verts = P.sorted_universe()
    pos = {v: i for i, v in enumerate(verts)}
    labels = np.empty((len(exhaustion), len(verts)), dtype=np.int64)
    for t, partition in enumerate(exhaustion):
        seen = np.zeros(len(verts), dtype=bool)
        for c, block in enumerate(partition):
            for v in block:
                labels[t, pos[v]] = c
                seen[pos[v]] = True
        if not seen.all():
            raise ValueError(f"stage {t} does not cover every vertex")
    key = P.group.sort_key
    und = sorted({tuple(sorted((x, y), key=key)) for x, y in P.rel("E") if x != y},
                 key=lambda e: (key(e[0]), key(e[1])))
    edges = np.array([[pos[a], pos[b]] for a, b in und], dtype=np.int64).reshape(-1, 2)
    res = spanning_forest_arrays(len(verts), edges, labels)
    tree = [(verts[a], verts[b]) for a, b in res.edges.tolist()]
    tree += [(b, a) for a, b in tree]
    return expand(P, Language.of(T=2), {"T": tree}), res
