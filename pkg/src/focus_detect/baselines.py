"""Comparator statistics and the brute-force oracles used in testing.

All comparators consume an already standardised stream (pre-change mean 0,
unit scale) and expose the same ``step(x) -> StepOutcome`` contract as the
main detectors.  Statistic units differ by design and match each method's
classical definition:

* :class:`Cusum`       C(n)  = |S(0, n)| / sqrt(n)
* :class:`Mosum`       M_w(n) = |S(n - w, n)| / sqrt(w)
* :class:`Mmosum`      M^m_k(n) = |S(n - floor(k n), n)| / sqrt(n k)
* :class:`Page`        q_n = max{0, q_{n-1} + mu1 (x_n - mu1 / 2)}  (half-log-LR)
* :class:`PageGrid`    max of the 2P Page recursions at grid means ±m_p
* :class:`Lorden`      best half-log-LR over all starts since Page's last reset

where ``S(s, n)`` is the partial sum of observations ``s+1 .. n``.

The two oracles are deliberately naive re-computations used to pin down the
fast detectors in tests:

* :func:`page_cusum_oracle` -- O(n^2) window scan giving P(n) = max_w M_w(n);
  ``focus0`` equals ``P(n)^2 / 2`` at every step.
* :func:`yu_oracle` -- O(n) per step two-segment likelihood-ratio scan over
  every changepoint; ``focus`` equals it at every step.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from . import _kernels
from .detectors import Grid, StepOutcome, _finite_array


class Cusum:
    """Full-history CUSUM statistic |S(0, n)| / sqrt(n)."""

    def __init__(self, threshold: float = math.inf):
        self.threshold = threshold
        self.n = 0
        self.total = 0.0

    def step(self, x: float) -> StepOutcome:
        self.n += 1
        self.total += x
        stat = abs(self.total) / math.sqrt(self.n)
        return StepOutcome(self.n, stat, None, stat >= self.threshold)

    def run(self, data) -> np.ndarray:
        x = _finite_array(data)
        if self.n:
            raise RuntimeError("batch entry points require a fresh state")
        s = np.cumsum(x)
        return np.abs(s) / np.sqrt(np.arange(1, x.size + 1))

    def first_crossing(self, data, threshold: float | None = None) -> int | None:
        lam = self.threshold if threshold is None else threshold
        stats = self.run(data)
        hits = np.nonzero(stats >= lam)[0]
        return int(hits[0]) + 1 if hits.size else None


class Mosum:
    """Moving-sum statistic over a fixed window ``w``.

    The statistic is defined as 0 until the window has filled.
    """

    def __init__(self, w: int, threshold: float = math.inf):
        if w < 1:
            raise ValueError("window must be >= 1")
        self.w = int(w)
        self.threshold = threshold
        self.n = 0
        self._buf: deque[float] = deque(maxlen=self.w)
        self._win_sum = 0.0

    def step(self, x: float) -> StepOutcome:
        self.n += 1
        if len(self._buf) == self.w:
            self._win_sum -= self._buf[0]
        self._buf.append(x)
        self._win_sum += x
        if self.n < self.w:
            stat = 0.0
        else:
            stat = abs(self._win_sum) / math.sqrt(self.w)
        tau_hat = max(self.n - self.w, 0) if stat > 0.0 else None
        return StepOutcome(self.n, stat, tau_hat, stat >= self.threshold)

    def run(self, data) -> np.ndarray:
        if self.n:
            raise RuntimeError("batch entry points require a fresh state")
        x = _finite_array(data)
        s = np.concatenate(([0.0], np.cumsum(x)))
        out = np.zeros(x.size)
        if x.size >= self.w:
            out[self.w - 1 :] = np.abs(s[self.w :] - s[: -self.w]) / math.sqrt(self.w)
        return out

    def first_crossing(self, data, threshold: float | None = None) -> int | None:
        lam = self.threshold if threshold is None else threshold
        stats = self.run(data)
        hits = np.nonzero(stats >= lam)[0]
        return int(hits[0]) + 1 if hits.size else None


class MosumGrid:
    """Maximum of MOSUM statistics over a set of window sizes."""

    def __init__(self, windows, threshold: float = math.inf):
        windows = sorted(int(w) for w in windows)
        if not windows or windows[0] < 1:
            raise ValueError("windows must be positive integers")
        self.windows = windows
        self.threshold = threshold
        self._members = [Mosum(w) for w in windows]
        self.n = 0

    def step(self, x: float) -> StepOutcome:
        self.n += 1
        best = 0.0
        best_w = self.windows[0]
        for det in self._members:
            out = det.step(x)
            if out.statistic > best:
                best = out.statistic
                best_w = det.w
        tau_hat = max(self.n - best_w, 0) if best > 0.0 else None
        return StepOutcome(self.n, best, tau_hat, best >= self.threshold)

    def run(self, data) -> np.ndarray:
        if self.n:
            raise RuntimeError("batch entry points require a fresh state")
        traces = [Mosum(w).run(data) for w in self.windows]
        return np.max(traces, axis=0)

    def first_crossing(self, data, threshold: float | None = None) -> int | None:
        lam = self.threshold if threshold is None else threshold
        stats = self.run(data)
        hits = np.nonzero(stats >= lam)[0]
        return int(hits[0]) + 1 if hits.size else None


class Mmosum:
    """Moving-sum statistic whose window is a fixed proportion of history."""

    def __init__(self, k: float, threshold: float = math.inf):
        if not 0.0 < k < 1.0:
            raise ValueError("proportion k must lie in (0, 1)")
        self.k = float(k)
        self.threshold = threshold
        self.n = 0
        self._prefix = [0.0]

    def step(self, x: float) -> StepOutcome:
        self.n += 1
        self._prefix.append(self._prefix[-1] + x)
        w = int(self.k * self.n)
        if w < 1:
            stat = 0.0
            tau_hat = None
        else:
            stat = abs(self._prefix[self.n] - self._prefix[self.n - w]) / math.sqrt(self.n * self.k)
            tau_hat = self.n - w if stat > 0.0 else None
        return StepOutcome(self.n, stat, tau_hat, stat >= self.threshold)


class Page:
    """Sequential-Page recursion for an assumed post-change mean ``mu1``.

    ``last_reset`` is the most recent time the recursion touched 0 (used by
    Lorden's procedure and as the changepoint estimate).
    """

    def __init__(self, mu1: float, threshold: float = math.inf):
        if mu1 == 0.0 or not math.isfinite(mu1):
            raise ValueError("mu1 must be nonzero and finite")
        self.mu1 = mu1
        self.threshold = threshold
        self.q = 0.0
        self.n = 0
        self.last_reset = 0

    def step(self, x: float) -> StepOutcome:
        self.n += 1
        self.q = max(0.0, self.q + self.mu1 * (x - self.mu1 / 2.0))
        if self.q == 0.0:
            self.last_reset = self.n
        tau_hat = self.last_reset if self.q > 0.0 else None
        return StepOutcome(self.n, self.q, tau_hat, self.q >= self.threshold)

    def run(self, data) -> np.ndarray:
        if self.n:
            raise RuntimeError("batch entry points require a fresh state")
        return _kernels.page_trace(_finite_array(data), self.mu1)


class PageGrid:
    """Max over sequential-Page recursions at the mirrored grid means."""

    def __init__(self, grid: Grid, threshold: float = math.inf):
        if len(grid) == 0:
            raise ValueError("grid must be non-empty")
        self.grid = grid
        self.threshold = threshold
        self.n = 0
        self._members = [Page(m) for m in grid.points] + [Page(-m) for m in grid.points]

    def step(self, x: float) -> StepOutcome:
        self.n += 1
        best = 0.0
        best_reset = None
        for page in self._members:
            out = page.step(x)
            if out.statistic > best:
                best = out.statistic
                best_reset = page.last_reset
        return StepOutcome(self.n, best, best_reset, best >= self.threshold)

    def run(self, data) -> np.ndarray:
        if self.n:
            raise RuntimeError("batch entry points require a fresh state")
        return _kernels.page_grid_trace(_finite_array(data), self.grid.points)

    def first_crossing(self, data, threshold: float | None = None) -> int | None:
        if self.n:
            raise RuntimeError("batch entry points require a fresh state")
        lam = self.threshold if threshold is None else threshold
        t = _kernels.page_grid_first_cross(_finite_array(data), self.grid.points, lam)
        return int(t) if t else None


class Lorden:
    """Page recursion at a minimum change size plus exhaustive tests since
    the last reset.

    Runs :class:`Page` at ``mu_star`` to track reset times, and reports the
    best half-log-LR ``(S_n - S_s)^2 / (2 (n - s))`` over every start ``s``
    since the last reset, restricted to windows with nonnegative sample mean
    (up-changes).  ``evaluations_last_step`` records the per-step cost, which
    equals the number of observations retained since the reset.

    ``max_buffer`` optionally caps the retained window; when the cap is hit
    the oldest observations are dropped, the maximisation silently truncates,
    and ``truncated`` is set.
    """

    def __init__(self, mu_star: float, threshold: float = math.inf, max_buffer: int | None = None):
        if not mu_star > 0.0:
            raise ValueError("mu_star must be positive")
        if max_buffer is not None and max_buffer < 1:
            raise ValueError("max_buffer must be positive")
        self.mu_star = mu_star
        self.threshold = threshold
        self.max_buffer = max_buffer
        self._page = Page(mu_star)
        self._buf: deque[float] = deque() if max_buffer is None else deque(maxlen=max_buffer)
        self.n = 0
        self.last_reset = 0
        self.truncated = False
        self.evaluations_last_step = 0

    def step(self, x: float) -> StepOutcome:
        self.n += 1
        if self.max_buffer is not None and len(self._buf) == self.max_buffer:
            self.truncated = True
        self._buf.append(x)
        best = 0.0
        best_s = None
        acc = 0.0
        evals = 0
        window = list(self._buf)
        for back in range(len(window)):
            acc += window[-1 - back]
            evals += 1
            if acc > 0.0:
                length = back + 1
                v = acc * acc / (2.0 * length)
                if v > best:
                    best = v
                    best_s = self.n - length
        self.evaluations_last_step = evals
        page_out = self._page.step(x)
        if page_out.statistic == 0.0:
            self.last_reset = self.n
            self._buf.clear()
        return StepOutcome(self.n, best, best_s, best >= self.threshold)


def page_cusum_oracle(data) -> np.ndarray:
    """P(n) = max over window sizes w = 1..n of |S(n-w, n)| / sqrt(w).

    O(n^2) direct scan, one value per step.  Test oracle: ``focus0``'s
    statistic equals ``P(n)^2 / 2`` exactly.
    """
    x = _finite_array(data)
    s = np.concatenate(([0.0], np.cumsum(x)))
    out = np.empty(x.size)
    for t in range(1, x.size + 1):
        w = np.arange(1, t + 1)
        out[t - 1] = np.max(np.abs(s[t] - s[t - w]) / np.sqrt(w))
    return out


def yu_oracle(data) -> np.ndarray:
    """Half the two-segment likelihood ratio, maximised over all changepoints.

    For each step n >= 2 scans every tau in 1..n-1 and evaluates

        s_tau^2 / tau + (S_n - s_tau)^2 / (n - tau) - S_n^2 / n,

    returning half the maximum (0 for n = 1).  O(n) per step; the test
    oracle for ``focus``.
    """
    x = _finite_array(data)
    if x.size < 2:
        raise ValueError("oracle needs at least two observations")
    return _kernels.yu_trace(x)


def _yu_oracle_numpy(data) -> np.ndarray:
    """Vectorised re-statement of :func:`yu_oracle` (cross-check path)."""
    x = _finite_array(data)
    s = np.concatenate(([0.0], np.cumsum(x)))
    out = np.zeros(x.size)
    for t in range(2, x.size + 1):
        tau = np.arange(1, t)
        st = s[1:t]
        lr = st * st / tau + (s[t] - st) ** 2 / (t - tau) - s[t] * s[t] / t
        out[t - 1] = 0.5 * max(lr.max(), 0.0)
    return out
