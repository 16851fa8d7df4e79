from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from cberlab.groups import F2, Z, Z2
from cberlab.walks import (
    IidMarks, NonnegativeMarks, Predicate, ResidueClass, TransportConfig, WalkConfig,
    WalkConfigError, WholeGroup, freq_estimate, increment_counts, mass_transport_check,
    parse_target, quotient_frequency, sample_walk, successor_transport, visit_profile,
    zero_transport,
)


def stationary_oracle(m, table, lazy=0.0):
    """Stationary law of the walk mod m via the Perron eigenvector (floating point)."""
    P = np.zeros((m, m))
    for i in range(m):
        P[i, i] += lazy
        for step, p in table.items():
            P[i, (i + step) % m] += (1 - lazy) * p
    w, v = np.linalg.eig(P.T)
    pi = np.real(v[:, np.argmin(abs(w - 1))])
    return pi / pi.sum()


# -- configuration ---------------------------------------------------------

@pytest.mark.parametrize("table", [
    ((1, 1.0),),                    # point mass, not symmetric
    ((1, 0.7), (-1, 0.3)),          # asymmetric
    ((1, 0.4), (-1, 0.4)),          # does not sum to 1
    ((2, 0.5), (-2, 0.5)),          # not a standard generator
])
def test_bad_step_tables(table):
    with pytest.raises(WalkConfigError):
        WalkConfig(Z, 10, step_table=table)


def test_non_generating_support_rejected():
    e1 = (1, 0)
    with pytest.raises(WalkConfigError):
        WalkConfig(Z2, 10, step_table=((e1, 0.5), ((-1, 0), 0.5)))


def test_determinism_bit_exact():
    cfg = WalkConfig(Z, 5000, seed=11)
    a, b = sample_walk(cfg, 3), sample_walk(cfg, 3)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, sample_walk(cfg, 4).points)


@pytest.mark.parametrize("G", [Z, Z2, F2])
def test_consecutive_ratios_in_support(G):
    cfg = WalkConfig(G, 400, seed=2, lazy=0.25)
    path = sample_walk(cfg)
    allowed = set(G.generators) | {G.identity}
    assert set(increment_counts(path)) <= allowed
    assert path.at(0) == G.identity


def test_two_sided_indices():
    cfg = WalkConfig(Z, 100, seed=5)
    path = sample_walk(cfg, two_sided=True)
    assert len(path) == 199
    assert path.at(0) == 0
    steps = {path.at(i + 1) - path.at(i) for i in range(-99, 99)}
    assert steps <= {-1, 1}


def test_increment_frequencies_chi_square():
    table = {(1, 0): 0.1, (-1, 0): 0.1, (0, 1): 0.4, (0, -1): 0.4}
    cfg = WalkConfig(Z2, 100_001, seed=9, step_table=tuple(table.items()))
    pts = sample_walk(cfg).points
    inc = [tuple(r) for r in np.diff(pts, axis=0).tolist()]
    keys = list(table)
    observed = np.array([sum(1 for t in inc if t == k) for k in keys])
    expected = np.array([table[k] for k in keys]) * len(inc)
    assert stats.chisquare(observed, expected).pvalue > 1e-3
    # each count within 3 sigma of its binomial mean
    sd = np.sqrt(expected * (1 - expected / len(inc)))
    assert np.all(abs(observed - expected) <= 3 * sd)


# -- frequencies -----------------------------------------------------------

def test_whole_group_frequency_is_one():
    est = freq_estimate(WholeGroup(), WalkConfig(F2, 500, seed=1), 4)
    assert est.estimate == 1.0 and est.se == 0.0


def test_parse_target():
    assert parse_target("3Z") == ResidueClass(3, 0)
    assert parse_target("2Z+1") == ResidueClass(2, 1)
    assert parse_target("evens") == ResidueClass(2, 0)
    assert isinstance(parse_target("Z"), WholeGroup)
    assert parse_target("2Z+1").name == "2Z+1"
    with pytest.raises(ValueError):
        parse_target("banana")


@pytest.mark.parametrize("m,lazy", [(3, 0.0), (4, 0.0), (5, 0.5), (2, 0.5)])
def test_quotient_frequency_matches_eigenvector(m, lazy):
    cfg = WalkConfig(Z, 10, lazy=lazy)
    pi = stationary_oracle(m, {1: 0.5, -1: 0.5}, lazy)
    for r in range(m):
        assert float(quotient_frequency(ResidueClass(m, r), cfg)) == pytest.approx(pi[r])


def test_quotient_frequency_exact_third():
    assert quotient_frequency(ResidueClass(3), WalkConfig(Z, 10)) == Fraction(1, 3)


def test_three_z_frequency():
    est = freq_estimate(ResidueClass(3), WalkConfig(Z, 200_000, seed=7), 20)
    assert abs(est.estimate - 1 / 3) < 0.01
    assert est.within(1 / 3)


def test_parity_lazy_frequency():
    est = freq_estimate(parse_target("evens"), WalkConfig(Z, 200_000, seed=7, lazy=0.5), 20)
    assert abs(est.estimate - 0.5) < 0.01


def test_shift_invariance_in_distribution():
    cfg = WalkConfig(Z, 50_000, seed=3)
    W = ResidueClass(3)
    a = freq_estimate(W, cfg, 10)
    b = freq_estimate(W.translate(1), cfg, 10)
    assert abs(a.estimate - b.estimate) <= 3 * np.hypot(a.se, b.se)


def test_free_group_predicate_frequency():
    # words of even length: the walk on F2 alternates parity, so exactly half the times
    cfg = WalkConfig(F2, 1000, seed=4)
    est = freq_estimate(Predicate(lambda w: len(w) % 2 == 0), cfg, 3)
    assert est.estimate == 0.5


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=20)
def test_estimate_bounds(seed):
    est = freq_estimate(ResidueClass(2, 1), WalkConfig(Z, 300, seed=seed), 3)
    assert 0 <= est.estimate <= 1 and est.se >= 0


# -- visit profiles --------------------------------------------------------

def test_single_class_profile():
    path = sample_walk(WalkConfig(Z, 1000, seed=1))
    vp = visit_profile(lambda pts: np.zeros(len(pts), dtype=int), path, 3)
    assert vp.alpha == {0: 1.0}
    assert vp.F == [0, 1000, 1000, 1000]


def test_parity_profile_and_subadditivity():
    cfg = WalkConfig(Z, 10_000, seed=1, lazy=0.5)
    path = sample_walk(cfg)
    vp = visit_profile(lambda pts: pts % 2, path, 4, splits=100_000)
    assert vp.subadditivity_violations == 0
    assert vp.subadditivity_checks == 4 * 100_000
    assert vp.identity_failures == 0 and vp.identity_checks > 0
    assert abs(vp.F[1] / vp.n - 0.5) < 0.03
    assert vp.F == sorted(vp.F)


@given(st.lists(st.integers(0, 4), min_size=2, max_size=60), st.integers(1, 5))
def test_profile_against_brute_force(labels, K):
    from cberlab.walks import WalkPath
    path = WalkPath(Z, np.array(labels))
    vp = visit_profile(lambda pts: pts, path, K, splits=50)
    counts = sorted((labels.count(c) for c in set(labels)), reverse=True)
    assert vp.F == [sum(counts[:k]) for k in range(K + 1)]
    assert vp.subadditivity_violations == 0
    assert vp.identity_failures == 0
    assert all(0 <= a <= 1 for a in vp.alpha.values())


def test_free_group_classes():
    path = sample_walk(WalkConfig(F2, 3000, seed=8))
    vp = visit_profile(lambda pts: np.array([len(w) % 3 for w in pts]), path, 3, splits=2000)
    assert vp.subadditivity_violations == 0 and vp.identity_failures == 0
    assert vp.F[3] == 3000


# -- mass transport --------------------------------------------------------

def test_zero_transport_passes():
    rep = mass_transport_check(IidMarks(), zero_transport, TransportConfig(samples=10_000))
    assert rep.lhs == rep.rhs == 0 and rep.verdict == "PASS"


def test_successor_transport_iid_half():
    rep = mass_transport_check(IidMarks(0.5), successor_transport, TransportConfig(samples=10 ** 6))
    closed_form = 0.5 * (1 - 0.5 ** 64)
    assert rep.verdict == "PASS"
    assert abs(rep.lhs - rep.rhs) <= 3 * rep.se
    assert abs(rep.lhs - closed_form) < 0.01 and abs(rep.rhs - closed_form) < 0.01
    assert not rep.warnings


@pytest.mark.parametrize("p", [0.2, 0.7])
def test_successor_transport_other_densities(p):
    rep = mass_transport_check(IidMarks(p), successor_transport,
                               TransportConfig(samples=200_000, seed=3, batch=50_000))
    assert rep.verdict == "PASS"
    assert abs(rep.lhs - p) <= 3 * rep.se_lhs + 1e-6


def test_non_invariant_sampler_fails_with_warning():
    rep = mass_transport_check(NonnegativeMarks(), successor_transport,
                               TransportConfig(samples=100_000))
    # origin marked with prob 1/2 and always has a right successor; nothing to its left
    assert rep.rhs == 0.0
    assert abs(rep.lhs - 0.5) < 0.01
    assert rep.verdict == "FAIL"
    assert rep.warnings


def test_transport_determinism():
    cfg = TransportConfig(samples=30_000, batch=7_000, seed=5)
    a = mass_transport_check(IidMarks(), successor_transport, cfg)
    b = mass_transport_check(IidMarks(), successor_transport, cfg)
    assert a.to_json() == b.to_json()
