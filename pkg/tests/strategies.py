"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from cberlab.groups import GroupModel, Z, Z2, F2
from cberlab.patterns import Language, Pattern

GROUPS = [Z, Z2, GroupModel("Zd", 3), F2, GroupModel("F", 3)]


@st.composite
def elements(draw, G, max_len=4):
    ball = G.ball(max_len).elements
    return ball[draw(st.integers(0, len(ball) - 1))]


@st.composite
def group_and_elements(draw, n=3, max_len=4):
    G = draw(st.sampled_from(GROUPS))
    return G, [draw(elements(G, max_len)) for _ in range(n)]


LANG = Language.of(E=2, M=1)


@st.composite
def patterns(draw, G=None, radius=2, language=LANG):
    if G is None:
        G = draw(st.sampled_from(GROUPS[:4]))
    ball = list(G.ball(radius).elements)
    universe = draw(st.lists(st.sampled_from(ball), min_size=0, max_size=len(ball), unique=True))
    rels = {}
    for sym in language.symbols:
        if not universe:
            rels[sym.name] = []
            continue
        tup = st.tuples(*[st.sampled_from(universe)] * sym.arity)
        rels[sym.name] = draw(st.lists(tup, max_size=8))
    return Pattern(G, language, universe, rels)
