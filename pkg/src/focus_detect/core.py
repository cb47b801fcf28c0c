"""Functional-pruning engine for streaming change-in-mean statistics.

The central object is :class:`HalfCurve`, which maintains the piecewise
quadratic

    Q_n(mu) = max{ 0, Q_{n-1}(mu) + mu * (x_n - mu / 2) },    Q_0(mu) = 0,

over candidate post-change means ``mu`` for one change direction (up-changes
on the raw stream; down-changes are handled by a second curve fed the
sign-flipped stream).  Each quadratic in the envelope corresponds to a
candidate changepoint ``tau`` and is summarised by the triple
``(tau, s, l)``: the iteration that introduced it, the cumulative data sum
at that iteration, and the left endpoint of the ``mu``-interval on which it
attains the envelope.  At time ``n``, the quadratic introduced at ``tau``
evaluates to

    mu * ((S_n - s) - (n - tau) * mu / 2),

so retained triples never need updating; advancing the curve is a single
append plus a prune of dominated triples from the top of the list.  The
surviving ``tau`` are vertices of the greatest convex minorant of the
cumulative-sum walk ``(t, S_t)``, which keeps the list short (on average
logarithmic in ``n``) on data without a persistent trend.

Two flavours are supported:

* ``clamp_at_zero=True`` -- the pre-change mean is known (taken as 0 after
  normalisation), borders are clamped at 0 and the curve lives on
  ``mu >= 0``.
* ``clamp_at_zero=False`` -- the pre-change mean is unknown; borders are the
  raw intersection points and the curve lives on all of R, with the first
  triple holding a ``-inf`` border sentinel.

All arithmetic is 64-bit floating point.  The running sum ``S_n`` is never
re-centred, so extremely long streams (beyond ~2**50 observations) would
eventually lose precision; that is an accepted limitation.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

import numpy as np

NEG_INF = float("-inf")


@dataclass
class QuadraticRecord:
    """Compact summary of one candidate changepoint's quadratic.

    ``tau`` is the iteration at which the quadratic was introduced, ``s``
    the cumulative sum of the consumed stream at that iteration, and ``l``
    the left endpoint of the interval on which the quadratic is optimal.
    """

    tau: int
    s: float
    l: float


@dataclass
class MaxResult:
    """Maximum of a half-curve together with the maximising changepoint."""

    value: float
    tau_hat: int


class HalfCurve:
    """Piecewise-quadratic envelope for one change direction.

    The curve is a single-writer state machine: exactly one logical thread
    should mutate it via :meth:`advance`.  The insert/removal/check counters
    instrument the amortised-cost guarantee of the update (total pruning
    checks never exceed ``2n``).
    """

    __slots__ = (
        "records",
        "n",
        "big_s",
        "sign",
        "clamp_at_zero",
        "total_inserts",
        "total_removals",
        "total_prune_checks",
    )

    def __init__(self, clamp_at_zero: bool = True, sign: int = 1) -> None:
        first_border = 0.0 if clamp_at_zero else NEG_INF
        self.records: list[QuadraticRecord] = [QuadraticRecord(0, 0.0, first_border)]
        self.n = 0
        self.big_s = 0.0
        self.sign = sign
        self.clamp_at_zero = clamp_at_zero
        self.total_inserts = 0
        self.total_removals = 0
        self.total_prune_checks = 0

    def __len__(self) -> int:
        return len(self.records)

    def candidate_count(self) -> int:
        """Number of stored candidate changepoints (triples with tau >= 1)."""
        return sum(1 for r in self.records if r.tau >= 1)

    def advance(self, x: float) -> "HalfCurve":
        """Consume one observation and restore the envelope invariants.

        Appends the new zero-line triple ``(n, S_n, l)`` and removes every
        triple whose quadratic has dropped below zero at its own border.  A
        tie (exact zero) prunes.  Retained triples are unchanged.
        """
        if not math.isfinite(x):
            raise ValueError(f"observation must be finite, got {x!r}")
        self.n += 1
        self.big_s += x
        n, sn = self.n, self.big_s
        recs = self.records
        i = len(recs) - 1
        checks = 0
        while i >= 0:
            checks += 1
            r = recs[i]
            if 2.0 * (sn - r.s) - (n - r.tau) * r.l <= 0.0:
                i -= 1
            else:
                break
        removed = len(recs) - (i + 1)
        if removed:
            del recs[i + 1 :]
        if i < 0:
            # Everything pruned: the new quadratic owns the whole domain.
            border = 0.0 if self.clamp_at_zero else NEG_INF
        else:
            r = recs[i]
            border = 2.0 * (sn - r.s) / (n - r.tau)
            if self.clamp_at_zero and border < 0.0:
                border = 0.0
        recs.append(QuadraticRecord(n, sn, border))
        self.total_inserts += 1
        self.total_removals += removed
        self.total_prune_checks += checks
        return self

    def maximize_known(self) -> MaxResult:
        """Maximum of the envelope for the known-pre-change-mean curve.

        Returns ``max over stored tau < n of (S_n - s)^2 / (2 (n - tau))``,
        which equals ``max{0, max_mu Q_n(mu)}``: every retained quadratic is
        positive somewhere on its own interval, so its unconstrained peak is
        attained inside the envelope.  The just-added triple (``tau == n``)
        is the zero-line and contributes 0.
        """
        if self.n < 1:
            raise ValueError("curve has not consumed any observation")
        n, sn = self.n, self.big_s
        best = 0.0
        best_tau = n
        for r in self.records:
            if r.tau >= n:
                continue
            d = sn - r.s
            v = d * d / (2.0 * (n - r.tau))
            if v > best:
                best = v
                best_tau = r.tau
        return MaxResult(best, best_tau)

    def maximize_unknown(self) -> MaxResult:
        """Generalised likelihood-ratio maximum for the unknown-mean curve.

        For each stored candidate ``1 <= tau < n`` evaluates

            s^2 / tau + (S_n - s)^2 / (n - tau) - S_n^2 / n,

        the (nonnegative) improvement of the best two-segment mean fit over
        the best constant fit, and returns the maximum.  Candidates at
        ``tau = 0`` and ``tau = n`` are skipped: the statistic is defined
        over interior changepoints only.
        """
        if self.clamp_at_zero:
            raise ValueError("maximize_unknown requires clamp_at_zero=False")
        if self.n < 2:
            raise ValueError("unknown-mean maximisation needs n >= 2")
        n, sn = self.n, self.big_s
        pooled = sn * sn / n
        best = 0.0
        best_tau = n
        for r in self.records:
            tau = r.tau
            if tau < 1 or tau >= n:
                continue
            v = r.s * r.s / tau + (sn - r.s) ** 2 / (n - tau) - pooled
            if v > best:
                best = v
                best_tau = tau
        return MaxResult(best, best_tau)

    def evaluate(self, mu: float) -> float:
        """Evaluate the quadratic owning ``mu`` (per the stored borders).

        For the clamped curve this is the envelope value Q_n(mu) on its
        whole domain [0, inf).  For the unclamped curve the borders order
        candidates for up-changes, so ownership matches the envelope of the
        stored quadratics on mu >= 0; down-changes live on the mirrored
        curve.
        """
        recs = self.records
        if not recs:
            return 0.0
        if mu < recs[0].l:
            raise ValueError(f"mu={mu} is outside the curve domain")
        borders = [r.l for r in recs]
        idx = bisect_right(borders, mu) - 1
        r = recs[idx]
        return mu * ((self.big_s - r.s) - (self.n - r.tau) * mu / 2.0)


def convex_minorant_vertices(data: Sequence[float]) -> list[int]:
    """Vertex times of the greatest convex minorant of the cumulative-sum walk.

    Runs a standalone lower-convex-hull scan over the points ``(t, S_t)``
    for ``t = 0..n`` and returns the vertex times including both endpoints.
    Interior collinear points are not vertices (strict-inequality hull).
    This is the independent geometric oracle for the candidate sets stored
    by :class:`HalfCurve`.
    """
    x = np.asarray(data, dtype=float)
    if x.size == 0:
        raise ValueError("data must be non-empty")
    if not np.all(np.isfinite(x)):
        raise ValueError("data must be finite")
    walk = np.concatenate(([0.0], np.cumsum(x)))
    hull_t: list[int] = []
    hull_s: list[float] = []
    for t in range(walk.size):
        st = walk[t]
        while len(hull_t) >= 2:
            t1, s1 = hull_t[-2], hull_s[-2]
            t2, s2 = hull_t[-1], hull_s[-1]
            # Pop unless the middle point makes a strict left turn.
            if (t2 - t1) * (st - s1) - (s2 - s1) * (t - t1) <= 0.0:
                hull_t.pop()
                hull_s.pop()
            else:
                break
        hull_t.append(t)
        hull_s.append(st)
    return hull_t
