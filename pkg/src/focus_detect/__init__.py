"""Streaming change-in-mean detection via functional-pruning CUSUM statistics.

The package provides:

* :mod:`focus_detect.core` -- the piecewise-quadratic envelope engine and its
  independent convex-minorant oracle;
* :mod:`focus_detect.detectors` -- FOCuS0 (known pre-change mean), FOCuS
  (unknown mean) and their bounded-work grid approximations;
* :mod:`focus_detect.robust` -- R-FOCuS, the capped-loss variant for streams
  with point outliers;
* :mod:`focus_detect.baselines` -- CUSUM/MOSUM/mMOSUM/sequential-Page/Lorden
  comparators and the brute-force oracles used in testing;
* :mod:`focus_detect.multistream` -- max/sum combination of per-stream
  detectors;
* :mod:`focus_detect.harness` -- reproducible simulation studies (run
  lengths, threshold calibration, detection delays, stored-quadratic counts,
  timing, windowed precision/recall);
* :mod:`focus_detect.cli` -- the ``focus-detect`` command line tool.
"""

from .baselines import (
    Cusum,
    Lorden,
    Mmosum,
    Mosum,
    MosumGrid,
    Page,
    PageGrid,
    page_cusum_oracle,
    yu_oracle,
)
from .cli import AutoTuneConfig, DetectionRecord, autotune, stream_detect
from .core import HalfCurve, MaxResult, QuadraticRecord, convex_minorant_vertices
from .detectors import (
    DetectorConfig,
    Focus,
    Focus0,
    Focus0Approx,
    FocusApprox,
    Grid,
    StepOutcome,
    build_geometric_grid,
    default_grid,
    make_detector,
)
from .harness import (
    RunSummary,
    StreamSpec,
    average_run_length,
    calibrate_threshold,
    detection_delay,
    evaluate_windowed,
    generate_stream,
    quadratic_count_profile,
    timing_profile,
)
from .multistream import MultiConfig, MultiStepOutcome, MultiStream
from .robust import (
    PiecewisePolyFunction,
    RFocus,
    RobustConfig,
    biweight_fit,
    piecewise_max,
    pointwise_max_fn,
)

__version__ = "0.1.0"

__all__ = [
    "AutoTuneConfig",
    "Cusum",
    "DetectionRecord",
    "DetectorConfig",
    "Focus",
    "Focus0",
    "Focus0Approx",
    "FocusApprox",
    "Grid",
    "HalfCurve",
    "Lorden",
    "MaxResult",
    "Mmosum",
    "Mosum",
    "MosumGrid",
    "MultiConfig",
    "MultiStepOutcome",
    "MultiStream",
    "Page",
    "PageGrid",
    "PiecewisePolyFunction",
    "QuadraticRecord",
    "RFocus",
    "RobustConfig",
    "RunSummary",
    "StepOutcome",
    "StreamSpec",
    "autotune",
    "average_run_length",
    "biweight_fit",
    "build_geometric_grid",
    "calibrate_threshold",
    "convex_minorant_vertices",
    "default_grid",
    "detection_delay",
    "evaluate_windowed",
    "generate_stream",
    "make_detector",
    "page_cusum_oracle",
    "piecewise_max",
    "pointwise_max_fn",
    "quadratic_count_profile",
    "stream_detect",
    "timing_profile",
    "yu_oracle",
]
