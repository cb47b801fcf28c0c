"""Change detection across several streams by combining per-stream statistics.

Each of the ``d`` streams gets its own independent detector (unknown-mean by
default).  At every step the per-stream statistics are combined two ways:

* ``max`` -- sensitive to a large change in one or a few streams;
* ``sum`` -- sensitive to smaller changes affecting many streams.

The maximising changepoint estimates of different streams are *not* forced
to coincide: the sum adds statistics that may point at different times.
Per-stream statistics are nonnegative, so ``sum >= max`` always.  The sum is
accumulated over the sorted statistics, which makes both combined statistics
exactly invariant to permuting the streams.  Thresholds for the two
combiners are calibrated separately by simulation under the null (see
:mod:`focus_detect.harness`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .detectors import DetectorConfig, make_detector


@dataclass
class MultiConfig:
    d: int
    detector: DetectorConfig = field(
        default_factory=lambda: DetectorConfig(threshold=math.inf, variant="focus")
    )
    lambda_max: float = math.inf
    lambda_sum: float = math.inf
    combiner: str = "both"

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("need at least one stream")
        if self.combiner not in ("max", "sum", "both"):
            raise ValueError("combiner must be 'max', 'sum' or 'both'")
        if not self.lambda_max > 0.0 or not self.lambda_sum > 0.0:
            raise ValueError("combiner thresholds must be positive")


@dataclass
class MultiStepOutcome:
    t: int
    stat_max: float
    stat_sum: float
    detected: bool
    detected_by: tuple[str, ...]
    tau_hat: int | None
    stream_hat: int | None


def _sorted_sum(values) -> float:
    # Fixed summation order => exact permutation invariance.
    return float(np.sum(np.sort(values)))


class MultiStream:
    """d independent detectors plus max/sum combiners."""

    def __init__(self, config: MultiConfig, detector_factory: Callable[[], object] | None = None):
        self.config = config
        factory = detector_factory if detector_factory is not None else (
            lambda: make_detector(config.detector)
        )
        self.detectors = [factory() for _ in range(config.d)]
        self.n = 0

    def step(self, x_vector: Sequence[float]) -> MultiStepOutcome:
        x = np.asarray(x_vector, dtype=float)
        if x.shape != (self.config.d,):
            raise ValueError(f"expected {self.config.d} values, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("stream vector contains non-finite values")
        self.n += 1
        outcomes = [det.step(v) for det, v in zip(self.detectors, x)]
        stats = np.array([o.statistic for o in outcomes])
        stat_max = float(stats.max())
        stat_sum = _sorted_sum(stats)
        hit_by = []
        cfg = self.config
        if cfg.combiner in ("max", "both") and stat_max >= cfg.lambda_max:
            hit_by.append("max")
        if cfg.combiner in ("sum", "both") and stat_sum >= cfg.lambda_sum:
            hit_by.append("sum")
        stream_hat = int(np.argmax(stats))
        tau_hat = outcomes[stream_hat].tau_hat
        return MultiStepOutcome(
            t=self.n,
            stat_max=stat_max,
            stat_sum=stat_sum,
            detected=bool(hit_by),
            detected_by=tuple(hit_by),
            tau_hat=tau_hat,
            stream_hat=stream_hat if tau_hat is not None else None,
        )

    def run(self, streams) -> tuple[np.ndarray, np.ndarray]:
        """Combined (max, sum) statistic traces for a (d, n) array.

        Stateless batch path over the per-stream batch kernels; requires a
        fresh instance.
        """
        if self.n:
            raise RuntimeError("batch entry points require a fresh state")
        x = np.asarray(streams, dtype=float)
        if x.ndim != 2 or x.shape[0] != self.config.d:
            raise ValueError(f"expected a ({self.config.d}, n) array")
        traces = np.stack([self._fresh_detector().run(row) for row in x])
        stat_max = traces.max(axis=0)
        stat_sum = np.sort(traces, axis=0).sum(axis=0)
        return stat_max, stat_sum

    def _fresh_detector(self):
        return make_detector(self.config.detector)

    def first_crossing(self, streams, combiner: str, threshold: float | None = None) -> int | None:
        """First 1-based time the chosen combined statistic reaches its
        threshold."""
        if combiner not in ("max", "sum"):
            raise ValueError("combiner must be 'max' or 'sum'")
        stat_max, stat_sum = self.run(streams)
        trace = stat_max if combiner == "max" else stat_sum
        if threshold is None:
            threshold = self.config.lambda_max if combiner == "max" else self.config.lambda_sum
        hits = np.nonzero(trace >= threshold)[0]
        return int(hits[0]) + 1 if hits.size else None
