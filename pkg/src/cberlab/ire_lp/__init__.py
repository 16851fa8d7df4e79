"""Window LPs for invariant random expansions on Z.

A distribution on decorated patterns over the window {0, ..., n-1} is a
necessary shadow of an invariant random expansion when

* its left and right (n-1)-marginals agree (shift consistency),
* its base marginal is the prescribed law, and
* it sums to 1.

``build_lp`` writes those conditions as an equality LP over one variable per
decorated pattern. ``max_marked_density`` maximizes P[0 is marked] for the
homogeneous-set decoration of iid pair colourings, which gives the exact
curve delta*(n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .exact import (
    Certificate, LpProblem, SolveError, check, dense_simplex, solve, solve_on_support, verify,
)
from .families import (
    LinearizationFamily, RamseyFamily, TrivialFamily, WindowFamily, pair_index, pair_mask,
)

MAX_VARIABLES = 2_000_000


class LpSizeError(ValueError):
    """Too many decorated patterns to enumerate."""

    def __init__(self, count: int, limit: int = MAX_VARIABLES):
        super().__init__(f"{count} decorated patterns exceed the limit of {limit}")
        self.count = count


def build_lp(family: WindowFamily, n: int, *, objective: str | None = None,
             min_density=None, limit: int = MAX_VARIABLES) -> LpProblem:
    """LP over decorated patterns on a window of size n.

    Rows: ``("base", code)`` reduct marginals, ``("shift", code)`` consistency
    of the two (n-1)-marginals, ``("norm",)`` total mass, and with
    ``min_density`` a ``("density",)`` row ``P[0 marked] - slack = min_density``.
    The slack column, if any, is last. ``objective="density"`` maximizes
    P[0 marked].
    """
    if n < 1:
        raise ValueError("window size must be positive")
    count = family.count(n)
    if count > limit:
        raise LpSizeError(count, limit)
    base, dec = family.variables(n)
    N = len(base)
    law = family.base_law(n)
    base_codes = np.array(sorted(law), dtype=np.int64)
    ri, ci, data = [], [], []
    labels: list = [("base", int(c)) for c in base_codes]
    b: list = [law[int(c)] for c in base_codes]

    pos = np.searchsorted(base_codes, base)
    known = (pos < len(base_codes)) & (base_codes[np.minimum(pos, len(base_codes) - 1)] == base)
    cols = np.arange(N)
    ri.append(pos[known])
    ci.append(cols[known])
    data.append(np.ones(int(known.sum()), dtype=np.int64))
    nrows = len(labels)

    if n >= 2:
        D = family.dec_size(n - 1)
        left = family.restrict_base(base, n, 0) * D + family.restrict_dec(dec, n, 0)
        right = family.restrict_base(base, n, 1) * D + family.restrict_dec(dec, n, 1)
        moving = left != right
        codes, inverse = np.unique(np.concatenate([left[moving], right[moving]]), return_inverse=True)
        k = int(moving.sum())
        ri.append(nrows + inverse)
        ci.append(np.concatenate([cols[moving], cols[moving]]))
        data.append(np.concatenate([np.ones(k, dtype=np.int64), -np.ones(k, dtype=np.int64)]))
        labels += [("shift", int(c)) for c in codes]
        b += [Fraction(0)] * len(codes)
        nrows += len(codes)

    ri.append(np.full(N, nrows))
    ci.append(cols)
    data.append(np.ones(N, dtype=np.int64))
    labels.append(("norm",))
    b.append(Fraction(1))
    nrows += 1

    ncols = N
    if min_density is not None:
        marked = family.marked_origin(dec)
        sel = np.flatnonzero(marked)
        ri += [np.full(len(sel), nrows), np.array([nrows])]
        ci += [sel, np.array([N])]
        data += [np.ones(len(sel), dtype=np.int64), np.array([-1], dtype=np.int64)]
        labels.append(("density",))
        b.append(Fraction(min_density))
        nrows += 1
        ncols += 1

    A = sp.csc_matrix((np.concatenate(data), (np.concatenate(ri), np.concatenate(ci))),
                      shape=(nrows, ncols), dtype=np.int64)
    c = None
    if objective == "density":
        c = [Fraction(int(v)) for v in family.marked_origin(dec)] + [Fraction(0)] * (ncols - N)
    elif objective is not None:
        raise ValueError(f"unknown objective {objective!r}")
    meta = {"n": n, **family.describe(), "variables": N}
    if min_density is not None:
        meta["min_density"] = str(Fraction(min_density))
    lp = LpProblem(A, b, c, labels, name=f"{family.name}-n{n}", meta=meta)
    lp.meta["codes"] = (base, dec)
    return lp


def point_from_law(lp: LpProblem, weights) -> Certificate:
    """Feasibility certificate from per-column weights (Fractions, aligned with columns)."""
    return Certificate("feasible", x={j: Fraction(w) for j, w in enumerate(weights) if w != 0},
                       method="construction")


def uniform_order_point(lp: LpProblem) -> Certificate:
    """Uniform random linear order on the window: exchangeable, hence shift-consistent."""
    N = lp.meta["variables"]
    return point_from_law(lp, [Fraction(1, N)] * N)


def base_point(lp: LpProblem, family: TrivialFamily) -> Certificate:
    base, _ = lp.meta["codes"]
    law = family.base_law(lp.meta["n"])
    return point_from_law(lp, [law[int(c)] for c in base])


@dataclass
class DensityResult:
    n: int
    p: Fraction
    delta: Fraction
    certificate: Certificate
    lp: LpProblem

    def to_json(self) -> dict:
        return {"n": self.n, "p": str(self.p), "delta_star": str(self.delta),
                "certificate_kind": self.certificate.kind, "method": self.certificate.method}


def max_marked_density(n: int, p=Fraction(1, 2), method: str = "auto") -> DensityResult:
    """delta*(n): the largest P[0 in T] over shift-consistent homogeneous-marked laws."""
    lp = build_lp(RamseyFamily(p), n, objective="density")
    cert = solve(lp, method)
    if cert.kind != "optimal":
        raise SolveError(f"density LP returned {cert.kind}")
    return DensityResult(n, Fraction(p), cert.value, cert, lp)


def density_farkas(result: DensityResult, threshold) -> tuple:
    """Farkas vector for 'P[0 in T] >= threshold' from an optimal dual, when threshold > delta*.

    Returns (lp, certificate) with the certificate verified against the new LP.
    """
    threshold = Fraction(threshold)
    if threshold <= result.delta:
        raise ValueError("threshold is attainable; there is nothing to refute")
    lp = build_lp(RamseyFamily(result.p), result.n, min_density=threshold)
    y = [-v for v in result.certificate.y] + [Fraction(1)]
    cert = Certificate("infeasible", y=y, method="dual-of-density-optimum")
    reason = check(lp, cert)
    if reason:
        raise SolveError(reason)
    return lp, cert


def lift_farkas(family: WindowFamily, small: LpProblem, cert: Certificate,
                big: LpProblem) -> Certificate:
    """Carry a Farkas vector from window n to window n+1 along the left marginal.

    Every column of the bigger LP restricts to a column of the smaller one,
    and every constraint of the smaller LP is a combination of constraints of
    the bigger one, so the combined vector refutes the bigger LP too.
    """
    n = small.meta["n"]
    if big.meta["n"] != n + 1:
        raise ValueError("lift goes from window n to window n+1")
    lookup = {lab: v for lab, v in zip(small.row_labels, cert.y)}
    y = []
    shift_codes = np.array([lab[1] for lab in big.row_labels if lab[0] == "shift"], dtype=np.int64)
    base_codes = np.array([lab[1] for lab in big.row_labels if lab[0] == "base"], dtype=np.int64)
    base_small = family.restrict_base(base_codes, n + 1, 0)
    shift_small = np.zeros(0, dtype=np.int64)
    if len(shift_codes) and n >= 2:
        D_big, D_small = family.dec_size(n), family.dec_size(n - 1)
        sb, sd = shift_codes // D_big, shift_codes % D_big
        shift_small = family.restrict_base(sb, n, 0) * D_small + family.restrict_dec(sd, n, 0)
    bi = si = 0
    for lab in big.row_labels:
        if lab[0] == "base":
            y.append(lookup.get(("base", int(base_small[bi])), Fraction(0)))
            bi += 1
        elif lab[0] == "shift":
            y.append(lookup.get(("shift", int(shift_small[si])), Fraction(0)) if n >= 2 else Fraction(0))
            si += 1
        else:
            y.append(lookup.get(lab, Fraction(0)))
    lifted = Certificate("infeasible", y=y, method=f"lifted-from-n{n}")
    reason = check(big, lifted)
    if reason:
        raise SolveError(f"lifted certificate failed: {reason}")
    return lifted


__all__ = [
    "Certificate", "DensityResult", "LinearizationFamily", "LpProblem", "LpSizeError",
    "MAX_VARIABLES", "RamseyFamily", "SolveError", "TrivialFamily", "WindowFamily",
    "base_point", "build_lp", "check", "dense_simplex", "density_farkas", "lift_farkas",
    "max_marked_density", "pair_index", "pair_mask", "point_from_law", "solve",
    "solve_on_support", "uniform_order_point", "verify",
]
