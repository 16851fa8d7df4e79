from cberlab.groups import Z
from cberlab.patterns import Language, Pattern, expand
from cberlab.problems import (Verdict, bijection, colouring, linearization, ramsey,
                              spanning_tree, trivial, zline)

A, R, U = Verdict.ACCEPT, Verdict.REJECT, Verdict.UNDETERMINED


def test_verdict_meet():
    assert (A & A) is A
    assert (A & U) is U
    assert (U & R) is R


def test_bijection_checks():
    P = bijection()
    base = Pattern(Z, P.base_language, [0, 1, 2], {"A": [(0,), (1,)], "B": [(1,), (2,)]})
    full = expand(base, P.decoration_language, {"Phi": [(0, 1), (1, 2)]})
    assert P.check_star(full) is A
    partial = expand(base, P.decoration_language, {"Phi": [(0, 1)]})
    assert P.check_star(partial) is U
    bad = expand(base, P.decoration_language, {"Phi": [(0, 1), (1, 1)]})
    assert P.check_star(bad) is R


def test_ramsey_checks():
    P = ramsey()
    pairs = [(0, 1), (1, 0)]
    spairs = [(0, 2), (2, 0), (1, 2), (2, 1)]
    base = Pattern(Z, P.base_language, [0, 1, 2], {"R": pairs, "S": spairs})
    assert P.check_base(base) is A
    assert P.check_base(Pattern(Z, P.base_language, [0, 1], {"R": [(0, 1)]})) is R
    homog = expand(base, Language.of(T=1), {"T": [(0,), (1,)]})
    assert P.check_star(homog) is U
    mixed = expand(base, Language.of(T=1), {"T": [(0,), (1,), (2,)]})
    assert P.check_star(mixed) is R


def test_linearization_checks():
    P = linearization()
    base = Pattern(Z, P.base_language, [0, 1, 2], {"P": [(0, 2)]})
    good = expand(base, Language.of(L=2), {"L": [(0, 1), (1, 2), (0, 2)]})
    bad = expand(base, Language.of(L=2), {"L": [(2, 1), (1, 0), (2, 0)]})
    assert P.check_star(good) is A
    assert P.check_star(bad) is R


def test_colouring_tree_zline_checks():
    C = colouring(2, marks=False)
    path = Pattern(Z, C.base_language, [0, 1, 2], {"E": [(0, 1), (1, 0), (1, 2), (2, 1)]})
    assert C.check_base(path) is A
    col = expand(path, C.decoration_language, {"C0": [(0,), (2,)], "C1": [(1,)]})
    assert C.check_star(col) is A
    T = spanning_tree()
    tree = expand(path, Language.of(T=2), {"T": path.rel("E")})
    assert T.check_star(tree) is A
    L = zline()
    order = Pattern(Z, L.base_language, [0, 1], {"L": [(0, 1)]})
    assert L.check_base(order) is A
    assert trivial(L).check_star(order) is A
