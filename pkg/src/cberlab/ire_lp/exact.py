"""Exact rational linear programming with re-verifiable certificates.

Problems have the standard equality form

    maximize c.x  subject to  A x = b,  x >= 0

with an integer sparse matrix ``A`` and rational ``b`` and ``c``. Small
problems are solved by a dense two-phase simplex in ``Fraction`` arithmetic
using Bland's rule, so termination is guaranteed. Larger problems go through
HiGHS in floating point, but only as a hint: the float solution's support is
re-solved exactly and the duals are rationalized. The certificate is then
checked in exact arithmetic before it is returned. A float answer never
reaches a verdict.

Certificates:

* ``feasible``: a point x with A x = b, x >= 0.
* ``optimal``: such a point plus a dual y with A^T y >= c and b.y = c.x.
* ``infeasible``: a Farkas vector y with A^T y <= 0 and b.y > 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

DENSE_LIMIT = 60_000  # rows * (cols + rows) handled by the dense exact simplex


class SolveError(RuntimeError):
    """No certificate could be produced or verified."""


@dataclass
class LpProblem:
    A: sp.csc_matrix  # integer coefficients
    b: list  # Fractions
    c: list | None = None  # Fractions; None means a pure feasibility problem
    row_labels: list = field(default_factory=list)
    name: str = "lp"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.A = sp.csc_matrix(self.A, dtype=np.int64)
        self.b = [Fraction(v) for v in self.b]
        if self.c is not None:
            self.c = [Fraction(v) for v in self.c]
            if len(self.c) != self.A.shape[1]:
                raise ValueError("objective length does not match the column count")
        if len(self.b) != self.A.shape[0]:
            raise ValueError("right-hand side length does not match the row count")
        if not self.row_labels:
            self.row_labels = list(range(self.A.shape[0]))

    @property
    def shape(self) -> tuple:
        return self.A.shape


@dataclass
class Certificate:
    kind: str  # "feasible" | "optimal" | "infeasible" | "unbounded"
    x: dict | None = None  # column -> Fraction, support only
    y: list | None = None  # one Fraction per row
    value: Fraction | None = None
    method: str = ""

    @property
    def feasible(self) -> bool:
        return self.kind in ("feasible", "optimal", "unbounded")

    def to_json(self, lp: LpProblem | None = None) -> dict:
        out = {"kind": self.kind, "method": self.method}
        if self.value is not None:
            out["value"] = str(self.value)
        if self.x is not None:
            out["x"] = {str(j): str(v) for j, v in sorted(self.x.items())}
        if self.y is not None:
            labels = lp.row_labels if lp is not None else range(len(self.y))
            out["y"] = [[_label_json(lab), str(v)] for lab, v in zip(labels, self.y) if v != 0]
        return out

    @classmethod
    def from_json(cls, data: dict, lp: LpProblem) -> "Certificate":
        """Inverse of ``to_json``; dual entries are matched to rows by label."""
        x = y = None
        if "x" in data:
            x = {int(j): Fraction(v) for j, v in data["x"].items()}
        if "y" in data:
            row = {_label_key(lab): i for i, lab in enumerate(lp.row_labels)}
            y = [Fraction(0)] * lp.shape[0]
            for lab, v in data["y"]:
                key = _label_key(lab)
                if key not in row:
                    raise ValueError(f"certificate row {lab!r} is not a row of the LP")
                y[row[key]] = Fraction(v)
        value = Fraction(data["value"]) if "value" in data else None
        return cls(data["kind"], x, y, value, data.get("method", ""))


def _label_json(label):
    return list(label) if isinstance(label, tuple) else label


def _label_key(label) -> str:
    return json.dumps(_label_json(label), default=int)


# ---------------------------------------------------------------------------
# exact verification


def _integer_scaled(vec: list) -> tuple:
    den = lcm(*(v.denominator for v in vec)) if vec else 1
    return [int(v * den) for v in vec], den


def _column_dots(A: sp.csc_matrix, y: list) -> list:
    """Exact A^T y as Fractions."""
    Y, den = _integer_scaled(y)
    bound = max((abs(v) for v in Y), default=0)
    nnz = np.diff(A.indptr)
    amax = int(abs(A.data).max()) if A.nnz else 0
    if bound * amax * (int(nnz.max()) if len(nnz) else 0) < 2 ** 62:
        dots = A.T.tocsr() @ np.array(Y, dtype=np.int64)
        return [Fraction(int(v), den) for v in dots]
    Yo = np.array(Y, dtype=object)
    prod = A.data.astype(object) * Yo[A.indices]
    out = []
    for j in range(A.shape[1]):
        s = sum(prod[A.indptr[j]:A.indptr[j + 1]].tolist(), 0)
        out.append(Fraction(s, den))
    return out


def _residual_ok(lp: LpProblem, x: dict) -> bool:
    if any(v < 0 for v in x.values()):
        return False
    Ax = [Fraction(0)] * lp.shape[0]
    A = lp.A
    for j, v in x.items():
        for p in range(A.indptr[j], A.indptr[j + 1]):
            Ax[A.indices[p]] += int(A.data[p]) * v
    return Ax == lp.b


def check(lp: LpProblem, cert: Certificate) -> str | None:
    """Reason the certificate fails, or None if it verifies."""
    if cert.kind in ("feasible", "optimal", "unbounded"):
        if cert.x is None or not _residual_ok(lp, cert.x):
            return "primal point violates A x = b, x >= 0"
        if cert.kind == "optimal":
            if lp.c is None or cert.y is None:
                return "optimality needs an objective and a dual vector"
            value = sum((lp.c[j] * v for j, v in cert.x.items()), Fraction(0))
            if value != cert.value:
                return "stated value differs from c.x"
            dots = _column_dots(lp.A, cert.y)
            if any(d < cj for d, cj in zip(dots, lp.c)):
                return "dual vector violates A^T y >= c"
            if sum((bi * yi for bi, yi in zip(lp.b, cert.y)), Fraction(0)) != value:
                return "duality gap is nonzero"
        return None
    if cert.kind == "infeasible":
        if cert.y is None or len(cert.y) != lp.shape[0]:
            return "Farkas vector missing or of the wrong length"
        if any(d > 0 for d in _column_dots(lp.A, cert.y)):
            return "Farkas vector violates A^T y <= 0"
        if sum((bi * yi for bi, yi in zip(lp.b, cert.y)), Fraction(0)) <= 0:
            return "Farkas vector has b.y <= 0"
        return None
    return f"unknown certificate kind {cert.kind!r}"


def verify(lp: LpProblem, cert: Certificate) -> bool:
    return check(lp, cert) is None


# ---------------------------------------------------------------------------
# dense two-phase simplex, Bland's rule


def dense_simplex(lp: LpProblem) -> Certificate:
    m, N = lp.shape
    dense = lp.A.toarray()
    sign = [1 if bi >= 0 else -1 for bi in lp.b]
    T = []
    for i in range(m):
        row = [Fraction(int(sign[i] * dense[i, j])) for j in range(N)]
        row += [Fraction(int(i == k)) for k in range(m)]
        row.append(sign[i] * lp.b[i])
        T.append(row)
    basis = [N + i for i in range(m)]

    def duals(cost):
        # y' = c_B B^-1, read off the artificial block which holds B^-1
        return [sum((cost[basis[k]] * T[k][N + i] for k in range(m)), Fraction(0)) for i in range(m)]

    def pivot(r, j):
        pv = T[r][j]
        T[r] = [v / pv for v in T[r]]
        for i in range(m):
            if i != r and T[i][j] != 0:
                f = T[i][j]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        basis[r] = j

    def run(cost, allowed) -> bool:
        """Minimize cost over the tableau; False if unbounded."""
        while True:
            enter = None
            in_basis = set(basis)
            for j in allowed:
                if j in in_basis:
                    continue
                red = cost[j] - sum((cost[basis[k]] * T[k][j] for k in range(m)), Fraction(0))
                if red < 0:
                    enter = j
                    break
            if enter is None:
                return True
            best = None
            for i in range(m):
                if T[i][enter] > 0:
                    ratio = T[i][-1] / T[i][enter]
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            pivot(best[1], enter)

    phase1 = [Fraction(0)] * N + [Fraction(1)] * m
    run(phase1, range(N + m))
    infeas = sum((T[i][-1] for i in range(m) if basis[i] >= N), Fraction(0))
    if infeas > 0:
        yp = duals(phase1)
        return Certificate("infeasible", y=[sign[i] * yp[i] for i in range(m)], method="dense-simplex")
    # drive zero-level artificials out of the basis
    for r in range(m):
        if basis[r] >= N:
            j = next((j for j in range(N) if T[r][j] != 0 and j not in basis), None)
            if j is not None:
                pivot(r, j)

    def point():
        return {basis[i]: T[i][-1] for i in range(m) if basis[i] < N and T[i][-1] != 0}

    if lp.c is None:
        return Certificate("feasible", x=point(), method="dense-simplex")
    phase2 = [-cj for cj in lp.c] + [Fraction(0)] * m
    if not run(phase2, range(N)):
        return Certificate("unbounded", x=point(), method="dense-simplex")
    x = point()
    yp = duals(phase2)
    y = [-sign[i] * yp[i] for i in range(m)]
    value = sum((lp.c[j] * v for j, v in x.items()), Fraction(0))
    return Certificate("optimal", x=x, y=y, value=value, method="dense-simplex")


# ---------------------------------------------------------------------------
# sparse exact elimination on a column support


def solve_on_support(A: sp.csc_matrix, support, rhs: list) -> list | None:
    """Solve A[:, support] z = rhs exactly; free variables are set to 0."""
    m = A.shape[0]
    rows: list = [dict() for _ in range(m)]
    for k, j in enumerate(support):
        for p in range(A.indptr[j], A.indptr[j + 1]):
            rows[A.indices[p]][k] = Fraction(int(A.data[p]))
    b = [Fraction(v) for v in rhs]
    colrows: dict = {}
    for i, r in enumerate(rows):
        for k in r:
            colrows.setdefault(k, set()).add(i)
    active = set(range(m))
    pivots = []
    unsolved = set(range(len(support)))
    while unsolved:
        k = min(unsolved, key=lambda k: (len(colrows.get(k, ())), k))
        unsolved.discard(k)
        cand = colrows.get(k, set())
        if not cand:
            continue
        i = min(cand, key=lambda i: (len(rows[i]), i))
        piv = rows[i]
        pv = piv[k]
        active.discard(i)
        for kk in piv:
            colrows[kk].discard(i)
        for i2 in list(colrows[k]):
            r2 = rows[i2]
            f = r2[k] / pv
            for kk, v in piv.items():
                nv = r2.get(kk, 0) - f * v
                if nv == 0:
                    if kk in r2:
                        del r2[kk]
                        colrows[kk].discard(i2)
                else:
                    if kk not in r2:
                        colrows[kk].add(i2)
                    r2[kk] = nv
            b[i2] -= f * b[i]
        pivots.append((i, k))
    if any(b[i] != 0 for i in active):
        return None
    z = [Fraction(0)] * len(support)
    for i, k in reversed(pivots):
        r = rows[i]
        z[k] = (b[i] - sum((v * z[kk] for kk, v in r.items() if kk != k), Fraction(0))) / r[k]
    return z


# ---------------------------------------------------------------------------
# float-guided exact path

DENOMINATORS = (10 ** 4, 10 ** 6, 10 ** 8, 10 ** 10, 10 ** 12)


def _rationalize(vec, limit: int) -> list:
    return [Fraction(0) if abs(v) < 1e-11 else Fraction(float(v)).limit_denominator(limit) for v in vec]


def _exact_primal(lp: LpProblem, xf: np.ndarray) -> dict | None:
    for tol in (1e-9, 1e-7, 1e-11):
        support = np.flatnonzero(xf > tol).tolist()
        z = solve_on_support(lp.A, support, lp.b)
        if z is None or any(v < 0 for v in z):
            continue
        x = {j: v for j, v in zip(support, z) if v != 0}
        if _residual_ok(lp, x):
            return x
    return None


def _guided(lp: LpProblem) -> Certificate | None:
    m, N = lp.shape
    bf = np.array([float(v) for v in lp.b])
    cf = np.zeros(N) if lp.c is None else -np.array([float(v) for v in lp.c])
    res = linprog(cf, A_eq=lp.A, b_eq=bf, bounds=(0, None), method="highs")
    if res.status == 0:
        x = _exact_primal(lp, res.x)
        if x is None:
            return None
        if lp.c is None:
            return Certificate("feasible", x=x, method="highs-guided")
        value = sum((lp.c[j] * v for j, v in x.items()), Fraction(0))
        yf = -np.asarray(res.eqlin.marginals)
        for limit in DENOMINATORS:
            cert = Certificate("optimal", x=x, y=_rationalize(yf, limit), value=value,
                               method="highs-guided")
            if verify(lp, cert):
                return cert
        return None
    if res.status == 2:
        return _guided_farkas(lp)
    return None


def _guided_farkas(lp: LpProblem) -> Certificate | None:
    """max b.y subject to A^T y <= 0, -1 <= y <= 1; a positive optimum is a Farkas vector."""
    bf = np.array([float(v) for v in lp.b])
    res = linprog(-bf, A_ub=lp.A.T.tocsr(), b_ub=np.zeros(lp.shape[1]), bounds=(-1, 1), method="highs")
    if res.status != 0 or -res.fun <= 0:
        return None
    for limit in DENOMINATORS:
        cert = Certificate("infeasible", y=_rationalize(res.x, limit), method="highs-guided")
        if verify(lp, cert):
            return cert
    return None


def solve(lp: LpProblem, method: str = "auto") -> Certificate:
    """Exact verdict with a certificate that has already been re-verified."""
    if method not in ("auto", "dense", "guided"):
        raise ValueError(f"unknown method {method!r}")
    m, N = lp.shape
    small = m * (N + m) <= DENSE_LIMIT
    cert = None
    if method == "dense" or (method == "auto" and small):
        cert = dense_simplex(lp)
    else:
        cert = _guided(lp)
        if cert is None and small:
            cert = dense_simplex(lp)
    if cert is None:
        raise SolveError(f"could not certify {lp.name} ({m} rows, {N} columns)")
    reason = check(lp, cert)
    if reason is not None:
        raise SolveError(f"certificate for {lp.name} failed verification: {reason}")
    return cert
