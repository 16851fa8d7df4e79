from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from cberlab.ire_lp import (
    Certificate, LinearizationFamily, LpProblem, LpSizeError, RamseyFamily,
    TrivialFamily, base_point, build_lp, check, dense_simplex, density_farkas, lift_farkas,
    max_marked_density, solve, uniform_order_point, verify,
)


def brute_expected_max_homogeneous(n):
    """Exact E[largest homogeneous set] over all 2^C(n,2) equally likely colourings."""
    pairs = list(combinations(range(n), 2))
    total = 0
    for bits in range(1 << len(pairs)):
        colour = {p: bits >> i & 1 for i, p in enumerate(pairs)}
        best = min(n, 1)
        for k in range(n, 1, -1):
            if any(len({colour[q] for q in combinations(S, 2)}) == 1 for S in combinations(range(n), k)):
                best = k
                break
        total += best
    return Fraction(total, 1 << len(pairs))


def lp_from(A, b, c=None):
    return LpProblem(sp.csc_matrix(np.array(A, dtype=np.int64)), b, c)


# -- the solver ------------------------------------------------------------

def test_one_variable_feasible():
    cert = solve(lp_from([[1]], [1]))
    assert cert.kind == "feasible" and cert.x == {0: 1}


def test_one_variable_farkas():
    lp = lp_from([[1]], [-1])
    cert = solve(lp)
    assert cert.kind == "infeasible"
    assert verify(lp, cert)
    assert cert.y[0] < 0


def test_optimal_with_dual():
    # max x0 + 2 x1, x0 + x1 + s = 4, x1 + t = 3
    lp = lp_from([[1, 1, 1, 0], [0, 1, 0, 1]], [4, 3], [1, 2, 0, 0])
    cert = solve(lp)
    assert cert.kind == "optimal" and cert.value == 7
    assert verify(lp, cert)


def test_unbounded():
    lp = lp_from([[1, -1]], [0], [1, 0])
    assert dense_simplex(lp).kind == "unbounded"


def test_tampered_certificates_fail():
    lp = lp_from([[1, 1]], [1], [1, 0])
    good = solve(lp)
    assert verify(lp, good)
    bad = Certificate("optimal", x=good.x, y=[Fraction(1, 2)], value=good.value)
    assert "A^T y >= c" in check(lp, bad)
    assert not verify(lp, Certificate("feasible", x={0: Fraction(1, 2)}))
    assert not verify(lp, Certificate("infeasible", y=[Fraction(1)]))


def test_redundant_rows():
    lp = lp_from([[1, 1], [2, 2], [1, 1]], [1, 2, 1], [1, 0])
    cert = dense_simplex(lp)
    assert cert.kind == "optimal" and cert.value == 1 and verify(lp, cert)


@st.composite
def transportation(draw):
    k = draw(st.integers(1, 4))
    l = draw(st.integers(1, 4))
    supply = draw(st.lists(st.integers(0, 9), min_size=k, max_size=k))
    demand = draw(st.lists(st.integers(0, 9), min_size=l, max_size=l))
    shift = draw(st.integers(-2, 2))  # nonzero shift makes totals disagree
    demand[0] = max(0, demand[0] + sum(supply) - sum(demand) + shift)
    cost = draw(st.lists(st.integers(-5, 5), min_size=k * l, max_size=k * l))
    A = np.zeros((k + l, k * l), dtype=np.int64)
    for i in range(k):
        for j in range(l):
            A[i, i * l + j] = 1
            A[k + j, i * l + j] = 1
    return A, supply + demand, cost


@given(transportation(), st.sampled_from(["dense", "auto"]))
@settings(max_examples=80)
def test_transportation_against_float_reference(data, method):
    A, b, cost = data
    lp = LpProblem(sp.csc_matrix(A), b, cost)
    cert = solve(lp, method)
    ref = linprog(-np.array(cost, float), A_eq=A, b_eq=np.array(b, float), bounds=(0, None), method="highs")
    assert verify(lp, cert)
    assert cert.feasible == (ref.status == 0)
    if ref.status == 0:
        assert float(cert.value) == pytest.approx(-ref.fun, abs=1e-7)


@given(st.integers(1, 4), st.integers(1, 6), st.data())
@settings(max_examples=80)
def test_random_lps_against_float_reference(m, N, data):
    A = np.array(data.draw(st.lists(st.integers(-3, 3), min_size=m * N, max_size=m * N))).reshape(m, N)
    b = data.draw(st.lists(st.integers(-4, 4), min_size=m, max_size=m))
    # an optional identity block makes some instances feasible by construction
    A = np.hstack([A, np.eye(m, dtype=np.int64) * data.draw(st.sampled_from([0, 1]))])
    lp = LpProblem(sp.csc_matrix(A), b)
    cert = solve(lp, "dense")
    ref = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=np.array(b, float), bounds=(0, None), method="highs")
    assert verify(lp, cert)
    assert cert.feasible == (ref.status == 0)


def test_guided_and_dense_agree():
    lp = build_lp(RamseyFamily(), 3, objective="density")
    assert solve(lp, "dense").value == solve(lp, "guided").value == Fraction(3, 4)


# -- window LPs ------------------------------------------------------------

def test_size_guard():
    with pytest.raises(LpSizeError) as err:
        build_lp(RamseyFamily(), 7)
    assert err.value.count > 2_000_000


def test_ramsey_count_matches_enumeration():
    for fam in (RamseyFamily(), RamseyFamily(nonempty=True), RamseyFamily(homogeneous=False)):
        for n in range(1, 5):
            assert len(fam.variables(n)[0]) == fam.count(n)


def test_ramsey_variables_are_homogeneous():
    base, dec = RamseyFamily().variables(4)
    for c, T in zip(base.tolist(), dec.tolist()):
        pts = [i for i in range(4) if T >> i & 1]
        idx = {p: i for i, p in enumerate(combinations(range(4), 2))}
        assert len({c >> idx[q] & 1 for q in combinations(pts, 2)}) <= 1


@pytest.mark.parametrize("n", range(1, 7))
def test_linearization_of_empty_order_feasible(n):
    lp = build_lp(LinearizationFamily(), n)
    assert solve(lp).kind == "feasible"
    assert verify(lp, uniform_order_point(lp))


@pytest.mark.parametrize("p", [Fraction(1, 2), Fraction(1, 3)])
@pytest.mark.parametrize("n", range(1, 5))
def test_trivial_decoration_feasible(n, p):
    fam = TrivialFamily(RamseyFamily(p))
    lp = build_lp(fam, n)
    assert verify(lp, base_point(lp, fam))
    assert solve(lp).feasible


def _order_column(lp, ranks):
    _, dec = lp.meta["codes"]
    code = sum(r * len(ranks) ** i for i, r in enumerate(ranks))
    return int(np.searchsorted(dec, code))


def test_point_mass_on_order_of_z_is_consistent():
    lp = build_lp(LinearizationFamily(), 4)
    assert verify(lp, Certificate("feasible", x={_order_column(lp, [0, 1, 2, 3]): Fraction(1)}))


def test_non_consistent_point_rejected():
    # ranks 0,2,1: the left pair is increasing, the right pair decreasing
    lp = build_lp(LinearizationFamily(), 3)
    assert not verify(lp, Certificate("feasible", x={_order_column(lp, [0, 2, 1]): Fraction(1)}))


# -- the density curve -----------------------------------------------------

@pytest.fixture(scope="module")
def curve():
    return {n: max_marked_density(n) for n in range(1, 6)}


def test_density_small_windows(curve):
    assert curve[1].delta == 1
    assert curve[2].delta == 1


def test_density_nonincreasing(curve):
    vals = [curve[n].delta for n in range(1, 6)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_density_certificates_verify(curve):
    for r in curve.values():
        assert r.certificate.kind == "optimal" and verify(r.lp, r.certificate)


def test_density_below_clique_bound(curve):
    for n in range(1, 6):
        assert curve[n].delta <= brute_expected_max_homogeneous(n) / n


def test_density_frozen_values(curve):
    # LP optimum vs brute-force E[max homogeneous]/n: equal for every n <= 5
    assert [curve[n].delta for n in range(1, 6)] == [1, 1, Fraction(3, 4), Fraction(11, 16),
                                                     Fraction(1597, 2560)]
    assert brute_expected_max_homogeneous(5) / 5 == Fraction(1597, 2560)


def test_marginal_of_optimum_is_feasible_one_size_down(curve):
    big, small = curve[4], curve[3]
    base, dec = big.lp.meta["codes"]
    fam = RamseyFamily()
    lb, ld = fam.restrict_base(base, 4, 0), fam.restrict_dec(dec, 4, 0)
    sb, sd = small.lp.meta["codes"]
    col = {(int(b), int(d)): j for j, (b, d) in enumerate(zip(sb, sd))}
    x: dict = {}
    for j, v in big.certificate.x.items():
        k = col[(int(lb[j]), int(ld[j]))]
        x[k] = x.get(k, 0) + v
    assert verify(small.lp, Certificate("feasible", x=x))


def test_density_farkas_and_lift(curve):
    lp3, cert3 = density_farkas(curve[3], Fraction(4, 5))
    assert verify(lp3, cert3)
    lp4 = build_lp(RamseyFamily(nonempty=True), 4, min_density=Fraction(4, 5))
    lifted = lift_farkas(RamseyFamily(), lp3, cert3, lp4)
    assert verify(lp4, lifted)
    assert solve(lp4).kind == "infeasible"


def test_attainable_threshold_has_no_farkas(curve):
    with pytest.raises(ValueError):
        density_farkas(curve[3], Fraction(3, 4))
    lp = build_lp(RamseyFamily(), 3, min_density=Fraction(3, 4))
    assert solve(lp).feasible


@pytest.mark.slow
def test_window_six_density_farkas(curve):
    lp5, cert5 = density_farkas(curve[5], Fraction(9, 10))
    lp6 = build_lp(RamseyFamily(nonempty=True), 6, min_density=Fraction(9, 10))
    lifted = lift_farkas(RamseyFamily(), lp5, cert5, lp6)
    assert verify(lp6, lifted)
    tampered = Certificate("infeasible", y=[-v for v in lifted.y])
    assert not verify(lp6, tampered)


def test_unknown_method():
    lp = lp_from([[1]], [1])
    with pytest.raises(ValueError):
        solve(lp, "nonsense")
