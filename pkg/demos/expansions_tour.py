"""
Expansion algorithms on small windows
=====================================

Four constructions, each run on a finite window of a group: a greedy
partial bijection, a (d+1)-colouring, a spanning forest grown along an
exhaustion, and the order on a directed tree.
"""

import numpy as np

from cberlab.expansions import (equivariant_colouring, greedy_bijection, spanning_forest_arrays,
                                tree_linearization)
from cberlab.groups import Z
from cberlab.patterns import Language, Pattern, translate

# Evens and odds of Z. Stage 0 tries gamma = 0, which matches nothing;
# stage 1 tries gamma = -1 and pairs every even x with x - 1.
W = range(-30, 31)  # the padded window for radius 10: centre +- 3*10
evens = [x for x in W if x % 2 == 0]
odds = [x for x in W if x % 2]
tr = greedy_bijection(Z, evens, odds, centre=0, radius=10)
print("gammas tried:", tr.gammas[:3], " stage sizes:", [len(X) for X in tr.stages[:3]])
print("phi on a few interior evens:", {x: tr.phi[x] for x in (-4, 0, 6)})
print("dichotomy side on the interior:", tr.side(evens, odds))

# A marked line: marks from the Thue-Morse sequence make every vertex
# distinguishable from its neighbours at some radius.
ML = Language.of(E=2, M=1)
n = 60
edges = [(x, x + 1) for x in range(n - 1)]
marks = [(x,) for x in range(n) if bin(x).count("1") % 2]
line = Pattern(Z, ML, range(n), {"E": edges + [(b, a) for a, b in edges], "M": marks})
state = equivariant_colouring(line, d=2)
print("coloured", len(state.colours), "of", n, "vertices; colours used:", sorted(set(state.colours.values())))

# Translating the input translates the output exactly.
moved = equivariant_colouring(translate(7, line), d=2)
print("translation by 7 commutes:", moved.colours == {x + 7: c for x, c in state.colours.items()})

# Without marks there is nothing to break the symmetry: no vertex is coloured.
bare = Pattern(Z, ML, range(n), {"E": edges + [(b, a) for a, b in edges]})
print("unmarked line, coloured vertices:", len(equivariant_colouring(bare, d=2).colours))

# Spanning forest on a 6x6 grid of Z^2 with a three-stage exhaustion:
# 2x2 blocks, then 6x2 strips, then everything.
grid = [(x, y) for x in range(6) for y in range(6)]
idx = {p: i for i, p in enumerate(grid)}
gedges = np.array([[idx[p], idx[q]] for p in grid for q in ((p[0] + 1, p[1]), (p[0], p[1] + 1))
                   if q in idx])
labels = np.array([[p[0] // 2 * 3 + p[1] // 2 for p in grid],
                   [p[1] // 2 for p in grid],
                   [0 for _ in grid]])
res = spanning_forest_arrays(len(grid), gedges, labels)
print("forest size after each stage:", [len(res.stage_edges(t)) for t in range(3)], "(a spanning tree of 36 points has 35)")

# A directed tree: edge a -> b means a comes first.
T = Pattern(Z, Language.of(T=2), range(6), {"T": [(0, 1), (1, 2), (3, 1), (1, 4), (5, 4)]})
print("tree order:", tree_linearization(T))
