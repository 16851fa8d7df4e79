"""Random walks on groups, visit frequencies, visit profiles and mass transport.

Randomness comes from numpy's counter-based Philox generator. Walk j of a
run with seed s uses ``SeedSequence([s, j])``, so every walk can be
replayed on its own and results do not depend on scheduling. All PASS/FAIL
verdicts use a 3 standard error band.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .groups import GroupModel, Word
from .rng import make_rng

SIGMA_BAND = 3.0


class WalkConfigError(ValueError):
    """Step distribution is not a symmetric generating probability table."""


@dataclass(frozen=True)
class WalkConfig:
    group: GroupModel
    steps: int
    seed: int = 0
    step_table: tuple | None = None  # ((generator, prob), ...); default uniform
    lazy: float = 0.0  # hold probability
    start: object = None

    def __post_init__(self):
        if self.steps < 1:
            raise WalkConfigError("steps must be positive")
        if not 0 <= self.lazy < 1:
            raise WalkConfigError("hold probability must lie in [0, 1)")
        table = self.table()
        G = self.group
        gens = set(G.generators)
        for g, p in table.items():
            if g not in gens:
                raise WalkConfigError(f"{g!r} is not a standard generator")
            if p < 0:
                raise WalkConfigError("negative probability")
        total = sum(table.values())
        if abs(total - 1) > 1e-12:
            raise WalkConfigError(f"probabilities sum to {total}, not 1")
        for g, p in table.items():
            if abs(table.get(G.inv(g), 0) - p) > 1e-12:
                raise WalkConfigError(f"mu({g!r}) != mu({G.inv(g)!r}): not symmetric")
        if any(table.get(g, 0) <= 0 for g in G.generators):
            raise WalkConfigError("support does not generate the group")
        if self.start is not None:
            G.check(self.start)

    def table(self) -> dict:
        if self.step_table is None:
            gens = self.group.generators
            return {g: 1 / len(gens) for g in gens}
        return dict(self.step_table)

    @property
    def origin(self):
        return self.group.identity if self.start is None else self.start


@dataclass
class WalkPath:
    group: GroupModel
    points: object  # ndarray for Z / Z^d, list of Words for F_k
    offset: int = 0  # index i lives at points[i + offset]

    def __len__(self) -> int:
        return len(self.points)

    def at(self, i: int):
        p = self.points[i + self.offset]
        if isinstance(p, np.ndarray):
            return tuple(int(c) for c in p)
        if isinstance(p, np.integer):
            return int(p)
        return p


def _increments(cfg: WalkConfig, rng: np.random.Generator, n: int) -> np.ndarray:
    """Indices into the generator list; -1 means hold."""
    G = cfg.group
    table = cfg.table()
    probs = np.array([table.get(g, 0.0) for g in G.generators], dtype=float)
    probs = probs * (1 - cfg.lazy)
    choice = rng.choice(len(probs) + 1, size=n, p=np.append(probs, cfg.lazy))
    choice[choice == len(probs)] = -1
    return choice


def _walk_from_increments(cfg: WalkConfig, inc: np.ndarray):
    G = cfg.group
    start = cfg.origin
    if G.kind in ("Z", "Zd"):
        d = 1 if G.kind == "Z" else G.rank
        vec = np.array([[g] if G.kind == "Z" else list(g) for g in G.generators], dtype=np.int64)
        vec = np.vstack([vec, np.zeros((1, d), dtype=np.int64)])
        steps = vec[inc]
        steps[0] = 0
        pos = np.cumsum(steps, axis=0) + np.array(start if G.kind == "Zd" else [start])
        return pos[:, 0] if G.kind == "Z" else pos
    letters = [g[0] for g in G.generators]
    word = list(start)
    out = []
    for k, i in enumerate(inc.tolist()):
        if k and i >= 0:
            a = letters[i]
            if word and word[-1] == -a:
                word.pop()
            else:
                word.append(a)
        out.append(Word(word))
    return out


def sample_walk(cfg: WalkConfig, walk_index: int = 0, two_sided: bool = False) -> WalkPath:
    """Z_0, ..., Z_{n-1}; with ``two_sided`` also Z_{-1}, ..., Z_{-(n-1)} from an independent walk."""
    rng = make_rng(cfg.seed, walk_index)
    fwd = _walk_from_increments(cfg, _increments(cfg, rng, cfg.steps))
    if not two_sided:
        return WalkPath(cfg.group, fwd)
    back = _walk_from_increments(cfg, _increments(cfg, rng, cfg.steps))
    if isinstance(fwd, np.ndarray):
        pts = np.concatenate([back[:0:-1], fwd])
    else:
        pts = back[:0:-1] + fwd
    return WalkPath(cfg.group, pts, offset=cfg.steps - 1)


def increment_counts(path: WalkPath) -> dict:
    """How often each step Z_i^-1 Z_{i+1} occurs (identity for holds)."""
    G = path.group
    out: dict = {}
    for i in range(len(path) - 1):
        a, b = path.at(i - path.offset), path.at(i + 1 - path.offset)
        s = G.mul(G.inv(a), b)
        out[s] = out.get(s, 0) + 1
    return out


# ---------------------------------------------------------------------------
# targets


class Target:
    """Membership predicate, vectorized over walk points."""

    name = "target"

    def contains(self, points) -> np.ndarray:
        raise NotImplementedError

    def translate(self, g) -> "Target":
        raise NotImplementedError


@dataclass(frozen=True)
class WholeGroup(Target):
    name: str = "Z"

    def contains(self, points) -> np.ndarray:
        return np.ones(len(points), dtype=bool)

    def translate(self, g) -> "Target":
        return self


@dataclass(frozen=True)
class ResidueClass(Target):
    """{x : coordinate x_coord = residue mod modulus}."""

    modulus: int
    residue: int = 0
    coord: int = 0

    @property
    def name(self) -> str:
        r = self.residue % self.modulus
        return f"{self.modulus}Z" + (f"+{r}" if r else "")

    def contains(self, points) -> np.ndarray:
        arr = np.asarray(points)
        c = arr if arr.ndim == 1 else arr[:, self.coord]
        return (c - self.residue) % self.modulus == 0

    def translate(self, g) -> "ResidueClass":
        shift = g if isinstance(g, int) else g[self.coord]
        return ResidueClass(self.modulus, self.residue + shift, self.coord)


@dataclass(frozen=True)
class Predicate(Target):
    fn: Callable
    name: str = "predicate"

    def contains(self, points) -> np.ndarray:
        return np.fromiter((bool(self.fn(p)) for p in points), dtype=bool, count=len(points))


_RES = re.compile(r"^(\d*)Z(?:\+(\d+))?$")


def parse_target(text: str) -> Target:
    """``"Z"``, ``"3Z"``, ``"2Z+1"``, ``"evens"``, ``"odds"``."""
    t = text.replace(" ", "")
    if t == "evens":
        return ResidueClass(2, 0)
    if t == "odds":
        return ResidueClass(2, 1)
    m = _RES.match(t)
    if not m:
        raise ValueError(f"unknown target {text!r}")
    if not m.group(1) or m.group(1) == "1":
        return WholeGroup()
    return ResidueClass(int(m.group(1)), int(m.group(2) or 0))


# ---------------------------------------------------------------------------
# frequencies


@dataclass
class FrequencyEstimate:
    estimate: float
    se: float
    walks: int
    steps: int
    per_walk: list = field(default_factory=list)

    def within(self, value: float, band: float = SIGMA_BAND) -> bool:
        return abs(self.estimate - value) <= band * self.se

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "se": self.se, "walks": self.walks, "steps": self.steps}


def freq_estimate(target: Target, cfg: WalkConfig, walks: int) -> FrequencyEstimate:
    fracs = []
    for j in range(walks):
        path = sample_walk(cfg, j)
        fracs.append(float(np.mean(target.contains(path.points))))
    arr = np.array(fracs)
    se = float(arr.std(ddof=1) / np.sqrt(walks)) if walks > 1 else 0.0
    return FrequencyEstimate(float(arr.mean()), se, walks, cfg.steps, fracs)


def quotient_frequency(target: ResidueClass, cfg: WalkConfig) -> Fraction:
    """Exact long-run frequency of a residue class from the induced chain on Z/m."""
    G, m = cfg.group, target.modulus
    table = cfg.table()
    move: dict = {}
    hold = Fraction(cfg.lazy).limit_denominator(10 ** 9)
    for g, p in table.items():
        shift = g if G.kind == "Z" else g[target.coord]
        pf = Fraction(p).limit_denominator(10 ** 9) * (1 - hold)
        move[shift % m] = move.get(shift % m, Fraction(0)) + pf
    move[0] = move.get(0, Fraction(0)) + hold
    # solve pi (P - I) = 0, sum pi = 1 exactly
    # row j: sum_i pi_i P(i -> j) - pi_j = 0; the last row is replaced by normalization
    rows = [[move.get((j - i) % m, Fraction(0)) - (i == j) for i in range(m)] + [Fraction(0)]
            for j in range(m - 1)]
    rows.append([Fraction(1)] * m + [Fraction(1)])
    pi = _solve_fractions(rows, m)
    return pi[target.residue % m]


def _solve_fractions(rows: list, n: int) -> list:
    a = [list(map(Fraction, r)) for r in rows]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# visit profiles


@dataclass
class VisitProfile:
    n: int
    alpha: dict  # class label -> alpha^n_0
    F: list  # F^n_k for k = 0..K
    subadditivity_checks: int = 0
    subadditivity_violations: int = 0
    identity_checks: int = 0
    identity_failures: int = 0


def _topk(counts: np.ndarray, K: int) -> np.ndarray:
    """Rows of counts -> cumulative top-k sums, k = 0..K."""
    counts = np.atleast_2d(counts)
    srt = -np.sort(-counts, axis=1)
    if srt.shape[1] < K:
        srt = np.hstack([srt, np.zeros((srt.shape[0], K - srt.shape[1]), dtype=srt.dtype)])
    return np.hstack([np.zeros((srt.shape[0], 1), dtype=srt.dtype), np.cumsum(srt[:, :K], axis=1)])


def visit_profile(classes: Callable, path: WalkPath, K: int, splits: int = 1000,
                  seed: int = 0, identity_points: int = 50) -> VisitProfile:
    """``classes(points)`` maps walk points to integer class labels."""
    labels_raw = np.asarray(classes(path.points))
    uniq, labels = np.unique(labels_raw, return_inverse=True)
    n, C = len(labels), len(uniq)
    prefix = np.zeros((n + 1, C), dtype=np.int64)
    np.add.at(prefix, (np.arange(1, n + 1), labels), 1)
    prefix = np.cumsum(prefix, axis=0)

    total = prefix[n]
    F = _topk(total, K)[0]
    alpha = {uniq[c].item(): float(total[c] / n) for c in range(C)}

    rng = make_rng(seed, 1)
    i = rng.integers(1, n, size=splits)
    j = rng.integers(1, n - i + 1)
    whole = _topk(prefix[i + j] - prefix[0], K)
    left = _topk(prefix[i], K)
    right = _topk(prefix[i + j] - prefix[i], K)
    violations = int(np.sum(whole[:, 1:] > left[:, 1:] + right[:, 1:]))

    # alpha-vs-F: each class count equals F_k - F_{k-1} for its rank k
    pts = np.unique(np.linspace(1, n, identity_points).astype(int))
    failures = checks = 0
    for m in pts.tolist():
        cnt = prefix[m]
        Fm = _topk(cnt, C)[0]
        order = np.argsort(-cnt, kind="stable")
        for rank, c in enumerate(order.tolist(), start=1):
            checks += 1
            if cnt[c] != Fm[rank] - Fm[rank - 1]:
                failures += 1
    return VisitProfile(n, alpha, F.tolist(), splits * K, violations, checks, failures)


# ---------------------------------------------------------------------------
# mass transport


class MarkSampler:
    """Random marks on the window [-h, h] of Z; row index h is the origin."""

    name = "sampler"

    def sample(self, rng: np.random.Generator, batch: int, half_width: int) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class IidMarks(MarkSampler):
    p: float = 0.5
    name: str = "iid"

    def sample(self, rng, batch, half_width):
        return rng.random((batch, 2 * half_width + 1)) < self.p


@dataclass(frozen=True)
class NonnegativeMarks(MarkSampler):
    """Deliberately not shift-invariant: iid marks on positions >= 0 only."""

    p: float = 0.5
    name: str = "nonnegative-only"

    def sample(self, rng, batch, half_width):
        m = rng.random((batch, 2 * half_width + 1)) < self.p
        m[:, :half_width] = False
        return m


def successor_transport(marks: np.ndarray, origin: int):
    """A marked x sends mass 1 to the next marked point to its right.

    Returns per-sample (mass sent by the origin, mass received by the origin).
    """
    here = marks[:, origin]
    sent = here & marks[:, origin + 1:].any(axis=1)
    received = here & marks[:, :origin].any(axis=1)
    return sent.astype(float), received.astype(float)


def zero_transport(marks: np.ndarray, origin: int):
    z = np.zeros(marks.shape[0])
    return z, z


@dataclass(frozen=True)
class TransportConfig:
    samples: int = 10 ** 6
    half_width: int = 64
    seed: int = 0
    batch: int = 100_000


@dataclass
class MassTransportReport:
    lhs: float
    rhs: float
    se_lhs: float
    se_rhs: float
    se: float
    verdict: str
    warnings: list = field(default_factory=list)
    samples: int = 0

    @property
    def difference(self) -> float:
        return self.lhs - self.rhs

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "se_lhs": self.se_lhs, "se_rhs": self.se_rhs,
                "se": self.se, "verdict": self.verdict, "warnings": self.warnings,
                "samples": self.samples}


def mass_transport_check(sampler: MarkSampler, transport: Callable,
                         cfg: TransportConfig = TransportConfig()) -> MassTransportReport:
    h = cfg.half_width
    s1 = np.zeros(2)
    s2 = np.zeros(2)
    pos_freq = np.zeros(3)
    done = 0
    b = 0
    while done < cfg.samples:
        size = min(cfg.batch, cfg.samples - done)
        marks = sampler.sample(make_rng(cfg.seed, b), size, h)
        out, inn = transport(marks, h)
        for k, v in enumerate((out, inn)):
            s1[k] += v.sum()
            s2[k] += (v * v).sum()
        pos_freq += marks[:, h - 1:h + 2].sum(axis=0)
        done += size
        b += 1
    N = cfg.samples
    mean = s1 / N
    var = np.maximum(s2 / N - mean ** 2, 0.0) * N / max(N - 1, 1)
    se_each = np.sqrt(var / N)
    se = float(np.sqrt((se_each ** 2).sum()))
    warnings = []
    f = pos_freq / N
    tol = 4 * np.sqrt(2 * max(f.max() * (1 - f.max()), 1e-12) / N) + 1e-12
    if abs(f[0] - f[1]) > tol or abs(f[1] - f[2]) > tol:
        warnings.append(f"sampler failed the shift-consistency pre-test: mark frequencies "
                        f"at -1, 0, 1 are {f.round(4).tolist()}")
    diff = abs(mean[0] - mean[1])
    verdict = "PASS" if diff <= SIGMA_BAND * se else "FAIL"
    return MassTransportReport(float(mean[0]), float(mean[1]), float(se_each[0]),
                               float(se_each[1]), se, verdict, warnings, N)
