"""Thresholded online detectors built on the functional-pruning engine.

Four variants share one stepping contract (:class:`StepOutcome` per
observation, statistic in half-log-likelihood-ratio units, detection when
``statistic >= threshold``):

* :class:`Focus0` -- pre-change mean known.  Observations are normalised as
  ``(x - pre_change_mean) / sigma`` and two clamped half-curves track up- and
  down-changes.  The statistic equals ``max_w M_w(n)^2 / 2``, the best
  moving-sum statistic over *all* window sizes.
* :class:`Focus` -- pre-change mean unknown.  Unclamped half-curves; the
  statistic is half the generalised likelihood ratio maximised over every
  changepoint and both directions.  Defined as 0 for n < 2.
* :class:`Focus0Approx` / :class:`FocusApprox` -- bounded-work variants
  driven by a geometric grid of candidate means: either maximise only the
  quadratics whose interval covers a grid point (exact envelope, cheap
  maximisation) or prune the stored list to at most P quadratics (bounded
  state).  Both dominate running sequential-Page on the same grid.

Batch entry points (:meth:`run`, :meth:`first_crossing`) call the compiled
kernels and require a freshly constructed detector.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import HalfCurve, MaxResult

DEFAULT_GRID_BOUNDS = (0.1, 10.0)

_VARIANTS = ("focus0", "focus", "focus0-approx", "focus-approx")


@dataclass
class Grid:
    """Geometric grid of candidate post-change means (positive half).

    ``points`` are mirrored to ``-points`` wherever a down-change is
    considered.
    """

    points: np.ndarray
    ratio: float
    bounds: tuple[float, float]

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 1:
            raise ValueError("grid needs at least one point")
        if not np.all(pts > 0.0):
            raise ValueError("grid points must be positive")
        if np.any(np.diff(pts) <= 0.0):
            raise ValueError("grid points must be strictly increasing")
        if pts.size >= 2:
            ratios = pts[1:] / pts[:-1]
            if not np.allclose(ratios, ratios[0], rtol=1e-9):
                raise ValueError("grid must be geometric (constant ratio)")
        self.points = pts

    def __len__(self) -> int:
        return self.points.size


def build_geometric_grid(m_min: float, m_max: float, p: int) -> Grid:
    """P-point geometric grid with exact endpoints ``m_min`` and ``m_max``."""
    if not (0.0 < m_min < m_max):
        raise ValueError("grid bounds must satisfy 0 < m_min < m_max")
    if p < 2:
        raise ValueError("grid needs p >= 2 points")
    ratio = (m_max / m_min) ** (1.0 / (p - 1))
    points = m_min * ratio ** np.arange(p, dtype=float)
    points[0] = m_min
    points[-1] = m_max
    return Grid(points=points, ratio=ratio, bounds=(m_min, m_max))


def default_grid(p: int = 10) -> Grid:
    """Default grid used by the approximate variants and Page-Pp baselines."""
    return build_geometric_grid(*DEFAULT_GRID_BOUNDS, p)


@dataclass
class StepOutcome:
    """Per-observation detector output.

    ``tau_hat`` is the estimated changepoint (last pre-change index) of the
    maximising quadratic, or ``None`` when the statistic is owned by the
    zero-line (no evidence of change yet).
    """

    t: int
    statistic: float
    tau_hat: int | None
    detected: bool


@dataclass
class DetectorConfig:
    threshold: float
    pre_change_mean: float = 0.0
    sigma: float = 1.0
    variant: str = "focus0"
    grid: Grid | None = None
    max_quadratics: int | None = None

    def __post_init__(self) -> None:
        if math.isnan(self.threshold) or self.threshold < 0.0:
            raise ValueError("threshold must be >= 0")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be positive and finite")
        if not math.isfinite(self.pre_change_mean):
            raise ValueError("pre_change_mean must be finite")
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant.endswith("-approx") and self.grid is None and self.max_quadratics is None:
            raise ValueError("approximate variants require a grid or max_quadratics")
        if self.max_quadratics is not None and self.max_quadratics < 1:
            raise ValueError("max_quadratics must be a positive integer")


def make_detector(config: DetectorConfig):
    """Instantiate the detector described by ``config``."""
    if config.variant == "focus0":
        return Focus0(config.threshold, config.pre_change_mean, config.sigma)
    if config.variant == "focus":
        return Focus(config.threshold, config.sigma)
    if config.variant == "focus0-approx":
        return Focus0Approx(
            config.threshold,
            grid=config.grid,
            max_quadratics=config.max_quadratics,
            pre_change_mean=config.pre_change_mean,
            sigma=config.sigma,
        )
    return FocusApprox(
        config.threshold,
        grid=config.grid,
        max_quadratics=config.max_quadratics,
        sigma=config.sigma,
    )


def _finite_array(data) -> np.ndarray:
    x = np.ascontiguousarray(data, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("expected a 1-D stream")
    if not np.all(np.isfinite(x)):
        raise ValueError("stream contains non-finite values")
    return x


class Focus0:
    """Known-pre-change-mean detector over all change sizes at once."""

    variant = "focus0"

    def __init__(self, threshold: float = math.inf, pre_change_mean: float = 0.0, sigma: float = 1.0):
        if math.isnan(threshold) or threshold < 0.0:
            raise ValueError("threshold must be >= 0")
        if not sigma > 0.0:
            raise ValueError("sigma must be positive")
        self.threshold = threshold
        self.pre_change_mean = pre_change_mean
        self.sigma = sigma
        self.up = HalfCurve(clamp_at_zero=True, sign=1)
        self.down = HalfCurve(clamp_at_zero=True, sign=-1)

    @property
    def n(self) -> int:
        return self.up.n

    def _normalize(self, x):
        return (x - self.pre_change_mean) / self.sigma

    def step(self, x: float) -> StepOutcome:
        if not math.isfinite(x):
            raise ValueError(f"observation must be finite, got {x!r}")
        z = self._normalize(x)
        self.up.advance(z)
        self.down.advance(-z)
        up = self.up.maximize_known()
        down = self.down.maximize_known()
        best = up if up.value >= down.value else down
        n = self.up.n
        tau_hat = best.tau_hat if best.tau_hat < n else None
        return StepOutcome(n, best.value, tau_hat, best.value >= self.threshold)

    def _require_fresh(self) -> None:
        if self.up.n:
            raise RuntimeError("batch entry points require a freshly constructed detector")

    def run(self, data) -> np.ndarray:
        """Statistic trace over ``data`` (stateless batch path)."""
        self._require_fresh()
        z = self._normalize(_finite_array(data))
        stats, _ = _kernels.focus0_trace(z)
        return stats

    def first_crossing(self, data, threshold: float | None = None) -> int | None:
        """First 1-based time the statistic reaches the threshold, else None."""
        self._require_fresh()
        lam = self.threshold if threshold is None else threshold
        z = self._normalize(_finite_array(data))
        t = _kernels.focus0_first_cross(z, lam)
        return int(t) if t else None


class Focus:
    """Unknown-pre-change-mean detector (generalised likelihood ratio)."""

    variant = "focus"

    def __init__(self, threshold: float = math.inf, sigma: float = 1.0):
        if math.isnan(threshold) or threshold < 0.0:
            raise ValueError("threshold must be >= 0")
        if not sigma > 0.0:
            raise ValueError("sigma must be positive")
        self.threshold = threshold
        self.sigma = sigma
        self.up = HalfCurve(clamp_at_zero=False, sign=1)
        self.down = HalfCurve(clamp_at_zero=False, sign=-1)

    @property
    def n(self) -> int:
        return self.up.n

    def step(self, x: float) -> StepOutcome:
        if not math.isfinite(x):
            raise ValueError(f"observation must be finite, got {x!r}")
        z = x / self.sigma
        self.up.advance(z)
        self.down.advance(-z)
        n = self.up.n
        if n < 2:
            return StepOutcome(n, 0.0, None, 0.0 >= self.threshold)
        up = self.up.maximize_unknown()
        down = self.down.maximize_unknown()
        best = up if up.value >= down.value else down
        stat = 0.5 * best.value
        tau_hat = best.tau_hat if best.tau_hat < n else None
        return StepOutcome(n, stat, tau_hat, stat >= self.threshold)

    def _require_fresh(self) -> None:
        if self.up.n:
            raise RuntimeError("batch entry points require a freshly constructed detector")

    def run(self, data) -> np.ndarray:
        self._require_fresh()
        z = _finite_array(data) / self.sigma
        stats, _ = _kernels.focus_trace(z)
        return stats

    def first_crossing(self, data, threshold: float | None = None) -> int | None:
        self._require_fresh()
        lam = self.threshold if threshold is None else threshold
        z = _finite_array(data) / self.sigma
        t = _kernels.focus_first_cross(z, lam)
        return int(t) if t else None


def _covering(records, pts_sorted) -> list[int]:
    """Indices of records whose optimality interval contains a grid point."""
    out = []
    m = len(pts_sorted)
    last = len(records) - 1
    for i, rec in enumerate(records):
        right = records[i + 1].l if i < last else math.inf
        j = bisect_left(pts_sorted, rec.l)
        if j < m and pts_sorted[j] < right:
            out.append(i)
    return out


def _prune_to_p(curve: HalfCurve, pts_sorted, p: int) -> None:
    """Drop records until at most ``p`` remain, removing the first record
    whose interval holds no grid point (its span merges into the left
    neighbour)."""
    recs = curve.records
    while len(recs) > p:
        covered = set(_covering(recs, pts_sorted))
        victim = None
        for i in range(len(recs)):
            if i not in covered:
                victim = i
                break
        if victim is None:
            # Cannot happen when p >= number of grid points (pigeonhole);
            # fall back to the oldest record.
            victim = 0
        del recs[victim]


class Focus0Approx:
    """Bounded-work approximations of :class:`Focus0`.

    ``max_quadratics`` selects prune-to-P mode (at most P stored quadratics
    per side); otherwise the supplied grid selects maximise-on-grid mode
    (exact envelope, maximisation restricted to quadratics covering a grid
    point).  In both modes the statistic is at least the best sequential-Page
    statistic over the same grid.
    """

    variant = "focus0-approx"
    clamped = True

    def __init__(
        self,
        threshold: float = math.inf,
        grid: Grid | None = None,
        max_quadratics: int | None = None,
        pre_change_mean: float = 0.0,
        sigma: float = 1.0,
    ):
        if math.isnan(threshold) or threshold < 0.0:
            raise ValueError("threshold must be >= 0")
        if not sigma > 0.0:
            raise ValueError("sigma must be positive")
        if max_quadratics is not None:
            if max_quadratics < 1:
                raise ValueError("max_quadratics must be positive")
            self.mode = "prune"
            self.grid = grid if grid is not None else default_grid(max_quadratics)
            if len(self.grid) > max_quadratics:
                raise ValueError("prune-to-P mode needs at most P grid points")
            self.max_quadratics = max_quadratics
        elif grid is not None:
            self.mode = "max-on-grid"
            self.grid = grid
            self.max_quadratics = None
        else:
            raise ValueError("approximate variant requires a grid or max_quadratics")
        self.threshold = threshold
        self.pre_change_mean = pre_change_mean
        self.sigma = sigma
        self.up = HalfCurve(clamp_at_zero=self.clamped, sign=1)
        self.down = HalfCurve(clamp_at_zero=self.clamped, sign=-1)
        self._pts = self._side_points()

    def _side_points(self) -> list[float]:
        # Each side works in flipped space, so the positive points suffice
        # for the clamped curves; the unclamped curves span all of R and see
        # the mirrored grid as well.
        pts = self.grid.points
        if self.clamped:
            return list(pts)
        return list(np.concatenate((-pts[::-1], pts)))

    @property
    def n(self) -> int:
        return self.up.n

    def _normalize(self, x: float) -> float:
        return (x - self.pre_change_mean) / self.sigma

    def _side_max(self, curve: HalfCurve) -> MaxResult:
        n, sn = curve.n, curve.big_s
        if self.mode == "max-on-grid":
            indices = _covering(curve.records, self._pts)
        else:
            indices = range(len(curve.records))
        best = 0.0
        best_tau = n
        for i in indices:
            rec = curve.records[i]
            if rec.tau >= n:
                continue
            d = sn - rec.s
            v = d * d / (2.0 * (n - rec.tau))
            if v > best:
                best = v
                best_tau = rec.tau
        return MaxResult(best, best_tau)

    def step(self, x: float) -> StepOutcome:
        if not math.isfinite(x):
            raise ValueError(f"observation must be finite, got {x!r}")
        z = self._normalize(x)
        self.up.advance(z)
        self.down.advance(-z)
        if self.mode == "prune":
            _prune_to_p(self.up, self._pts, self.max_quadratics)
            _prune_to_p(self.down, self._pts, self.max_quadratics)
        up = self._side_max(self.up)
        down = self._side_max(self.down)
        best = up if up.value >= down.value else down
        n = self.up.n
        tau_hat = best.tau_hat if best.tau_hat < n else None
        return StepOutcome(n, best.value, tau_hat, best.value >= self.threshold)

    def run(self, data) -> np.ndarray:
        """Statistic trace (Python loop; approximations have no kernel)."""
        if self.up.n:
            raise RuntimeError("batch entry points require a freshly constructed detector")
        x = _finite_array(data)
        return np.array([self.step(v).statistic for v in x])

    def first_crossing(self, data, threshold: float | None = None) -> int | None:
        if self.up.n:
            raise RuntimeError("batch entry points require a freshly constructed detector")
        lam = self.threshold if threshold is None else threshold
        x = _finite_array(data)
        for v in x:
            out = self.step(v)
            if out.statistic >= lam:
                return out.t
        return None


class FocusApprox(Focus0Approx):
    """Bounded-work approximations of :class:`Focus` (unknown mean)."""

    variant = "focus-approx"
    clamped = False

    def __init__(
        self,
        threshold: float = math.inf,
        grid: Grid | None = None,
        max_quadratics: int | None = None,
        sigma: float = 1.0,
    ):
        super().__init__(
            threshold,
            grid=grid,
            max_quadratics=max_quadratics,
            pre_change_mean=0.0,
            sigma=sigma,
        )

    def _normalize(self, x: float) -> float:
        return x / self.sigma

    def _side_max(self, curve: HalfCurve) -> MaxResult:
        n, sn = curve.n, curve.big_s
        if self.mode == "max-on-grid":
            indices = _covering(curve.records, self._pts)
        else:
            indices = range(len(curve.records))
        pooled = sn * sn / n
        best = 0.0
        best_tau = n
        for i in indices:
            rec = curve.records[i]
            tau = rec.tau
            if tau < 1 or tau >= n:
                continue
            v = rec.s * rec.s / tau + (sn - rec.s) ** 2 / (n - tau) - pooled
            if v > best:
                best = v
                best_tau = tau
        return MaxResult(best, best_tau)

    def step(self, x: float) -> StepOutcome:
        if not math.isfinite(x):
            raise ValueError(f"observation must be finite, got {x!r}")
        z = self._normalize(x)
        self.up.advance(z)
        self.down.advance(-z)
        if self.mode == "prune":
            _prune_to_p(self.up, self._pts, self.max_quadratics)
            _prune_to_p(self.down, self._pts, self.max_quadratics)
        n = self.up.n
        if n < 2:
            return StepOutcome(n, 0.0, None, 0.0 >= self.threshold)
        up = self._side_max(self.up)
        down = self._side_max(self.down)
        best = up if up.value >= down.value else down
        stat = 0.5 * best.value
        tau_hat = best.tau_hat if best.tau_hat < n else None
        return StepOutcome(n, stat, tau_hat, stat >= self.threshold)
