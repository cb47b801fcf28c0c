"""Outlier-robust change detection with a capped square-error loss.

The fit of one observation to a mean ``mu`` is measured as

    F(x, mu) = -min{ (x - mu)^2, K },

squared error capped at ``K`` so that a point outlier can cost at most ``K``
no matter how wild it is.  Two piecewise-quadratic functions are maintained:

* the null cost ``N_n(mu0) = sum_{t<=n} F(x_t, mu0)``, kept exactly with all
  breakpoints (adjacent pieces with identical coefficients are merged), and
* the change cost ``Q_n(mu)``, updated as the pointwise maximum

      Q_n(mu) = max{ max_{mu0} N_n(mu0),  Q_{n-1}(mu) + F(x_n, mu) },

  whose floor is the best constant fit so far.

The reported statistic is ``(max_mu Q_n - max_mu0 N_n) / 2``: half the
capped-loss likelihood ratio, in the same half-log-LR units as the Gaussian
detectors (for ``K`` above every squared deviation in play it coincides with
the unknown-mean detector's statistic).  Each envelope piece carries the step
whose best-constant floor it descends from, which doubles as the changepoint
estimate.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .detectors import StepOutcome, _finite_array

NEG_INF = float("-inf")
_SNAP = 1e-12


def biweight_fit(x: float, mu: float, cap: float) -> float:
    """Fit contribution -min{(x - mu)^2, cap} of a single observation."""
    if not cap > 0.0:
        raise ValueError("cap must be positive")
    d = x - mu
    return -min(d * d, cap)


@dataclass
class RobustConfig:
    cap: float
    threshold: float
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if not self.cap > 0.0:
            raise ValueError("cap must be positive")
        if not self.threshold > 0.0:
            raise ValueError("threshold must be positive")
        if not self.sigma > 0.0:
            raise ValueError("sigma must be positive")


@dataclass
class Piece:
    """One quadratic ``a mu^2 + b mu + c`` valid from ``left`` to the next
    piece's boundary."""

    left: float
    a: float
    b: float
    c: float
    tag: int = 0

    def value(self, mu: float) -> float:
        return (self.a * mu + self.b) * mu + self.c


class PiecewisePolyFunction:
    """Piecewise quadratic over (-inf, inf) with strictly increasing
    boundaries; the first piece always starts at -inf."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: list[Piece]):
        if not pieces:
            raise ValueError("need at least one piece")
        if pieces[0].left != NEG_INF:
            raise ValueError("first piece must start at -inf")
        for prev, cur in zip(pieces, pieces[1:]):
            if not cur.left > prev.left:
                raise ValueError("piece boundaries must be strictly increasing")
        self.pieces = pieces

    @classmethod
    def constant(cls, c: float, tag: int = 0) -> "PiecewisePolyFunction":
        return cls([Piece(NEG_INF, 0.0, 0.0, c, tag)])

    @property
    def piece_count(self) -> int:
        return len(self.pieces)

    def value(self, mu: float) -> float:
        lefts = [p.left for p in self.pieces]
        return self.pieces[bisect_right(lefts, mu) - 1].value(mu)

    def add(self, other: "PiecewisePolyFunction") -> "PiecewisePolyFunction":
        """Pointwise sum.  Tags of ``self`` are preserved."""
        lefts = sorted({p.left for p in self.pieces} | {p.left for p in other.pieces})
        sl = [p.left for p in self.pieces]
        ol = [p.left for p in other.pieces]
        pieces = []
        for left in lefts:
            pa = self.pieces[bisect_right(sl, left) - 1]
            pb = other.pieces[bisect_right(ol, left) - 1]
            pieces.append(Piece(left, pa.a + pb.a, pa.b + pb.b, pa.c + pb.c, pa.tag))
        return PiecewisePolyFunction(_merge_identical(pieces))


def _merge_identical(pieces: list[Piece]) -> list[Piece]:
    """Drop pieces whose coefficients exactly repeat their left neighbour."""
    out = [pieces[0]]
    for p in pieces[1:]:
        q = out[-1]
        if p.a == q.a and p.b == q.b and p.c == q.c:
            continue
        out.append(p)
    return out


def _quad_roots(a: float, b: float, c: float) -> list[float]:
    """Real roots of a x^2 + b x + c, ascending (empty if none/degenerate)."""
    if a == 0.0:
        if b == 0.0:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    if disc == 0.0:
        return [-b / (2.0 * a)]
    root = math.sqrt(disc)
    q = -(b + math.copysign(root, b)) / 2.0
    if q == 0.0:
        r = [-b / (2.0 * a) - root / (2.0 * abs(a)), -b / (2.0 * a) + root / (2.0 * abs(a))]
    else:
        r = [q / a, c / q]
    r.sort()
    return r


def _interior_point(left: float, right: float) -> float:
    if left == NEG_INF and right == math.inf:
        return 0.0
    if left == NEG_INF:
        return right - 1.0
    if right == math.inf:
        return left + 1.0
    return 0.5 * (left + right)


def pointwise_max_fn(f: PiecewisePolyFunction, g: PiecewisePolyFunction) -> PiecewisePolyFunction:
    """Pointwise maximum of two piecewise quadratics.

    Boundaries are merged and each merged interval is split at the real roots
    of the difference quadratic; roots within 1e-12 of a boundary snap to it.
    Ties go to ``f`` (its piece and tag win).
    """
    lefts = sorted({p.left for p in f.pieces} | {p.left for p in g.pieces})
    fl = [p.left for p in f.pieces]
    gl = [p.left for p in g.pieces]
    pieces: list[Piece] = []
    for idx, left in enumerate(lefts):
        right = lefts[idx + 1] if idx + 1 < len(lefts) else math.inf
        pf = f.pieces[bisect_right(fl, left) - 1]
        pg = g.pieces[bisect_right(gl, left) - 1]
        roots = _quad_roots(pf.a - pg.a, pf.b - pg.b, pf.c - pg.c)
        cuts = [left]
        for r in roots:
            if r <= cuts[-1] + _SNAP:
                continue
            if right != math.inf and r >= right - _SNAP:
                continue
            if right == math.inf and not math.isfinite(r):
                continue
            cuts.append(r)
        for jdx, lo in enumerate(cuts):
            hi = cuts[jdx + 1] if jdx + 1 < len(cuts) else right
            mid = _interior_point(lo, hi)
            winner = pf if pf.value(mid) >= pg.value(mid) else pg
            pieces.append(Piece(lo, winner.a, winner.b, winner.c, winner.tag))
    return PiecewisePolyFunction(_merge_identical(pieces))


def _max_impl(fn: PiecewisePolyFunction) -> tuple[float, float, int]:
    """Global maximum over R: (value, argmax, tag of the argmax piece).

    Relies on the function being continuous: the supremum of a piece at its
    open right end equals the next piece's value at its left boundary, so
    scanning piece left-endpoints plus interior vertices covers every case.
    """
    pieces = fn.pieces
    best = NEG_INF
    best_arg = NEG_INF
    best_tag = 0
    for i, p in enumerate(pieces):
        right = pieces[i + 1].left if i + 1 < len(pieces) else math.inf
        if p.left == NEG_INF and (p.a > 0.0 or (p.a == 0.0 and p.b < 0.0)):
            raise ValueError("function is unbounded above as mu -> -inf")
        if right == math.inf and (p.a > 0.0 or (p.a == 0.0 and p.b > 0.0)):
            raise ValueError("function is unbounded above as mu -> +inf")
        if p.left != NEG_INF:
            v = p.value(p.left)
            if v > best:
                best, best_arg, best_tag = v, p.left, p.tag
        elif p.a == 0.0 and p.b == 0.0:
            # Constant head piece: report its (infinite) left boundary.
            if p.c > best:
                best, best_arg, best_tag = p.c, p.left, p.tag
        if p.a < 0.0:
            vertex = -p.b / (2.0 * p.a)
            if p.left <= vertex < right:
                v = p.value(vertex)
                if v > best:
                    best, best_arg, best_tag = v, vertex, p.tag
    return best, best_arg, best_tag


def piecewise_max(fn: PiecewisePolyFunction) -> tuple[float, float]:
    """Global maximum of a piecewise quadratic and its argmax."""
    value, argmax, _ = _max_impl(fn)
    return value, argmax


def _biweight_term(x: float, cap: float) -> PiecewisePolyFunction:
    """F(x, .) as a piecewise quadratic (uncapped when cap is infinite)."""
    if math.isinf(cap):
        return PiecewisePolyFunction([Piece(NEG_INF, -1.0, 2.0 * x, -x * x)])
    r = math.sqrt(cap)
    return PiecewisePolyFunction(
        [
            Piece(NEG_INF, 0.0, 0.0, -cap),
            Piece(x - r, -1.0, 2.0 * x, -x * x),
            Piece(x + r, 0.0, 0.0, -cap),
        ]
    )


class RFocus:
    """Robust change detector over the capped square-error fit.

    ``cap`` applies to observations after scaling by ``sigma``; passing
    ``cap=math.inf`` recovers the plain Gaussian (unknown-mean) recursion.
    """

    variant = "rfocus"

    def __init__(self, threshold: float, cap: float, sigma: float = 1.0):
        if math.isnan(threshold) or threshold < 0.0:
            raise ValueError("threshold must be >= 0")
        if not cap > 0.0:
            raise ValueError("cap must be positive")
        if not sigma > 0.0:
            raise ValueError("sigma must be positive")
        self.threshold = threshold
        self.cap = cap
        self.sigma = sigma
        self.n = 0
        self.null_cost = PiecewisePolyFunction.constant(0.0)
        self.change_cost = PiecewisePolyFunction.constant(0.0, tag=0)

    @property
    def piece_count(self) -> int:
        return self.change_cost.piece_count

    @property
    def null_piece_count(self) -> int:
        return self.null_cost.piece_count

    def step(self, x: float) -> StepOutcome:
        if not math.isfinite(x):
            raise ValueError(f"observation must be finite, got {x!r}")
        z = x / self.sigma
        self.n += 1
        term = _biweight_term(z, self.cap)
        self.null_cost = self.null_cost.add(term)
        null_max, _, _ = _max_impl(self.null_cost)
        shifted = self.change_cost.add(term)
        floor = PiecewisePolyFunction.constant(null_max, tag=self.n)
        self.change_cost = pointwise_max_fn(shifted, floor)
        q_max, _, tag = _max_impl(self.change_cost)
        stat = 0.5 * (q_max - null_max)
        tau_hat = tag if (stat > 0.0 and tag < self.n) else None
        return StepOutcome(self.n, stat, tau_hat, stat >= self.threshold)

    def run(self, data) -> np.ndarray:
        """Statistic trace (Python loop; the piecewise state has no kernel)."""
        if self.n:
            raise RuntimeError("batch entry points require a freshly constructed detector")
        x = _finite_array(data)
        return np.array([self.step(v).statistic for v in x])

    def first_crossing(self, data, threshold: float | None = None) -> int | None:
        if self.n:
            raise RuntimeError("batch entry points require a freshly constructed detector")
        lam = self.threshold if threshold is None else threshold
        for v in _finite_array(data):
            out = self.step(v)
            if out.statistic >= lam:
                return out.t
        return None
