"""Command-line front end: stream detection over CSV/stdin, self-tuning from
a probation prefix, restart-on-detection with threshold inflation, and bench
subcommands driving the simulation harness.

Detections are emitted as newline-delimited JSON objects
``{"t": int, "tau_hat": int, "stat": float, "threshold": float}``, flushed
immediately so the command composes in pipelines.  Every flag can be
defaulted through an environment variable with the ``FOCUS_`` prefix
(``FOCUS_METHOD``, ``FOCUS_THRESHOLD``, ``FOCUS_MEAN0``, ``FOCUS_SIGMA``,
``FOCUS_GRID``, ``FOCUS_MAX_QUADRATICS``, ``FOCUS_PROBATION_FRAC``,
``FOCUS_KAPPA``, ``FOCUS_COLUMN``, ``FOCUS_OUTPUT``); explicit flags win.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from . import harness
from .baselines import Cusum, Lorden, Mmosum, Mosum, MosumGrid, Page, PageGrid, yu_oracle
from .detectors import (
    Focus,
    Focus0,
    Focus0Approx,
    FocusApprox,
    Grid,
    StepOutcome,
    build_geometric_grid,
    default_grid,
)
from .robust import RFocus

METHODS = (
    "focus0",
    "focus",
    "rfocus",
    "cusum",
    "mosum",
    "mmosum",
    "page",
    "page-grid",
    "lorden",
)

BENCH_STUDIES = ("arl", "delay", "counts", "timing", "nab")

ENV_PREFIX = "FOCUS_"

DEFAULT_BUFFER_SIZE = 4096


# ---------------------------------------------------------------------------
# Auto-tuning from a probation prefix


@dataclass
class AutoTuneConfig:
    """Parameters derived from a label-free probation prefix.

    ``cap`` is the squared-z-score ceiling for the robust loss (infinite when
    the probation shows no outliers, meaning plain Gaussian loss); ``lam`` is
    kappa times the largest statistic observed while replaying the probation
    data; ``center``/``sigma`` are the robust location/scale used to
    normalise the stream.
    """

    probation_frac: float = 0.15
    kappa: float = 1.5
    cap: float = math.inf
    sigma: float = 1.0
    lam: float = math.inf
    center: float = 0.0
    probation_length: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.probation_frac < 1.0:
            raise ValueError("probation_frac must lie in (0, 1)")
        if not self.kappa > 0.0:
            raise ValueError("kappa must be positive")


def autotune(probation, probation_frac: float = 0.15, kappa: float = 1.5) -> AutoTuneConfig:
    """Derive scale, outlier cap and threshold from probation data.

    Scale is MAD-based (falling back to the standard deviation when the MAD
    degenerates).  Observations outside the Tukey fences (quartiles plus or
    minus 1.5 IQR) are outliers: if any are present the cap becomes the
    largest in-fence squared z-score, otherwise it stays infinite.  The
    threshold is ``kappa`` times the peak of the detector's own statistic
    replayed over the normalised probation data.
    """
    x = np.asarray(probation, dtype=float)
    if x.size < 20:
        raise ValueError("probation period too short (need at least 20 observations)")
    if not np.all(np.isfinite(x)):
        raise ValueError("probation data contains non-finite values")
    center = float(np.median(x))
    mad = float(np.median(np.abs(x - center)))
    sigma = 1.4826 * mad
    if sigma == 0.0:
        sigma = float(np.std(x))
    if sigma == 0.0:
        raise ValueError("probation data has zero variance")
    q1, q3 = np.quantile(x, [0.25, 0.75])
    iqr = q3 - q1
    inside = (x >= q1 - 1.5 * iqr) & (x <= q3 + 1.5 * iqr)
    if bool(np.all(inside)):
        cap = math.inf
    else:
        cap = float(np.max(((x[inside] - center) / sigma) ** 2))
        if cap <= 0.0:
            # Degenerate probation: everything in-fence sits at the median.
            cap = 1.0
    z = (x - center) / sigma
    detector = RFocus(math.inf, cap) if math.isfinite(cap) else Focus(math.inf)
    trace = detector.run(z)
    lam = kappa * float(np.max(trace))
    return AutoTuneConfig(
        probation_frac=probation_frac,
        kappa=kappa,
        cap=cap,
        sigma=sigma,
        lam=lam,
        center=center,
        probation_length=int(x.size),
    )


# ---------------------------------------------------------------------------
# Streaming detection with restart and threshold inflation


@dataclass
class DetectionRecord:
    t: int
    tau_hat: int
    statistic: float
    threshold_used: float


def _threshold_inflation(cur_cp: int, prev_cp: int) -> float:
    """log(tau_s) / log(tau_s - tau_{s-1}), clamped to be an inflation.

    Arguments are floored at 2 so the ratio stays finite for early or
    adjacent detections, and the factor never deflates the threshold.
    """
    num = math.log(max(cur_cp, 2))
    den = math.log(max(cur_cp - prev_cp, 2))
    return max(num / den, 1.0)


class _NormalizedDetector:
    """Feed a detector (x - center) / sigma instead of raw values."""

    def __init__(self, inner, center: float, sigma: float):
        self.inner = inner
        self.center = center
        self.sigma = sigma

    def step(self, x: float) -> StepOutcome:
        return self.inner.step((x - self.center) / self.sigma)


def stream_detect(
    values: Iterable[float],
    detector_factory: Callable[[], object],
    threshold: float,
    buffer_size: int = DEFAULT_BUFFER_SIZE,
    start_origin: int = 0,
    warn: Callable[[str], None] | None = None,
) -> Iterator[DetectionRecord]:
    """Run a detector over a stream, restarting at each estimated changepoint.

    On detection the record is emitted, the detector is rebuilt, buffered
    observations after the estimated changepoint are replayed into the fresh
    detector (detections are suppressed during replay), and the threshold is
    multiplied by ``log(tau_s) / log(tau_s - tau_{s-1})`` for subsequent
    detections.  ``start_origin`` is the global index the detector starts
    after (the probation length when auto-tuned) and seeds ``tau_0`` for the
    inflation ratio.  If the changepoint estimate predates the replay buffer,
    the stream restarts at the detection time instead and a warning is
    issued.  Resident state is the detector plus the ring buffer: memory is
    bounded regardless of stream length.
    """
    if buffer_size < 1:
        raise ValueError("buffer_size must be positive")
    lam = float(threshold)
    detector = detector_factory()
    base = start_origin
    prev_cp = start_origin
    buf: deque[tuple[int, float]] = deque(maxlen=buffer_size)
    pending: deque[tuple[int, float]] = deque()
    t = start_origin
    source = iter(values)
    while True:
        if pending:
            gt, x = pending.popleft()
            live = False
        else:
            try:
                x = next(source)
            except StopIteration:
                return
            t += 1
            gt = t
            live = True
            buf.append((gt, x))
        out = detector.step(x)
        if not live or out.statistic < lam:
            continue
        tau_global = base + out.tau_hat if out.tau_hat is not None else gt
        yield DetectionRecord(t=gt, tau_hat=tau_global, statistic=out.statistic, threshold_used=lam)
        lam *= _threshold_inflation(tau_global, prev_cp)
        prev_cp = tau_global
        detector = detector_factory()
        pending.clear()
        replay = [(g, v) for g, v in buf if g > tau_global]
        if tau_global >= gt or (replay and replay[0][0] != tau_global + 1):
            # Estimate predates the buffer (or is the detection itself):
            # restart at the detection time.
            if tau_global < gt and warn is not None:
                warn(
                    f"changepoint estimate {tau_global} predates the replay buffer; "
                    f"restarting at detection time {gt}"
                )
            base = gt
        elif replay:
            base = tau_global
            pending.extend(replay)
        else:
            base = gt


# ---------------------------------------------------------------------------
# Input parsing


def _looks_numeric(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_stream(
    lines: Iterable[str],
    column: str | None = None,
    on_error: str = "abort",
    warn: Callable[[str], None] | None = None,
) -> Iterator[float]:
    """Yield numeric values from text lines.

    Accepts one value per line or CSV rows with a ``column`` selector (index
    or header name).  A non-numeric first row is treated as a header and
    skipped.  Unparsable or non-finite values abort with the line number, or
    are skipped with a warning when ``on_error='skip'``.
    """
    if on_error not in ("abort", "skip"):
        raise ValueError("on_error must be 'abort' or 'skip'")
    col_idx: int | None = None
    col_name: str | None = None
    if column is not None:
        try:
            col_idx = int(column)
        except ValueError:
            col_name = column
    first = True
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")] if "," in line else [line]
        if first:
            first = False
            probe = fields[col_idx] if col_idx is not None and col_idx < len(fields) else fields[0]
            if not _looks_numeric(probe):
                if col_name is not None:
                    if col_name not in fields:
                        raise ValueError(f"line {lineno}: column {col_name!r} not found in header")
                    col_idx = fields.index(col_name)
                continue
            if col_name is not None:
                raise ValueError(
                    f"column {col_name!r} requested but the input has no header row"
                )
        idx = col_idx if col_idx is not None else 0
        if idx >= len(fields):
            msg = f"line {lineno}: column index {idx} out of range"
            if on_error == "abort":
                raise ValueError(msg)
            if warn is not None:
                warn(msg)
            continue
        token = fields[idx]
        try:
            value = float(token)
            if not math.isfinite(value):
                raise ValueError
        except ValueError:
            msg = f"line {lineno}: cannot parse value {token!r}"
            if on_error == "abort":
                raise ValueError(msg) from None
            if warn is not None:
                warn(msg)
            continue
        yield value


# ---------------------------------------------------------------------------
# Detector construction


def _parse_grid(text: str | None, fallback_points: int = 10) -> Grid:
    if text is None:
        return default_grid(fallback_points)
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("--grid expects 'min,max,p'")
    return build_geometric_grid(float(parts[0]), float(parts[1]), int(parts[2]))


def _detector_factory(args, tuned: AutoTuneConfig | None) -> Callable[[], object]:
    """Factory for threshold-free detectors fed normalised observations."""
    method = args.method
    center = tuned.center if tuned else args.mean0
    sigma = tuned.sigma if tuned else args.sigma

    def wrap(builder):
        return lambda: _NormalizedDetector(builder(), center, sigma)

    if method == "focus0":
        if args.max_quadratics is not None:
            grid = _parse_grid(args.grid, args.max_quadratics)
            return wrap(lambda: Focus0Approx(math.inf, grid=grid, max_quadratics=args.max_quadratics))
        if args.grid is not None:
            grid = _parse_grid(args.grid)
            return wrap(lambda: Focus0Approx(math.inf, grid=grid))
        return wrap(lambda: Focus0(math.inf))
    if method == "focus":
        if args.max_quadratics is not None:
            grid = _parse_grid(args.grid, args.max_quadratics)
            return wrap(lambda: FocusApprox(math.inf, grid=grid, max_quadratics=args.max_quadratics))
        if args.grid is not None:
            grid = _parse_grid(args.grid)
            return wrap(lambda: FocusApprox(math.inf, grid=grid))
        return wrap(lambda: Focus(math.inf))
    if method == "rfocus":
        cap = tuned.cap if tuned else args.cap
        if cap is None:
            raise ValueError("rfocus needs --cap or --autotune")
        if math.isinf(cap):
            return wrap(lambda: Focus(math.inf))
        return wrap(lambda: RFocus(math.inf, cap))
    if method == "cusum":
        return wrap(lambda: Cusum(math.inf))
    if method == "mosum":
        if args.window is None:
            raise ValueError("mosum needs --window")
        return wrap(lambda: Mosum(args.window, math.inf))
    if method == "mmosum":
        if args.kprop is None:
            raise ValueError("mmosum needs --kprop")
        return wrap(lambda: Mmosum(args.kprop, math.inf))
    if method == "page":
        if args.mu1 is None:
            raise ValueError("page needs --mu1")
        return wrap(lambda: Page(args.mu1, math.inf))
    if method == "page-grid":
        grid = _parse_grid(args.grid)
        return wrap(lambda: PageGrid(grid, math.inf))
    if method == "lorden":
        if args.mu_star is None:
            raise ValueError("lorden needs --mu-star")
        return wrap(lambda: Lorden(args.mu_star, math.inf))
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# detect subcommand


def _open_input(path: str | None):
    if path in (None, "-"):
        return sys.stdin, False
    return open(path, "r"), True


def _count_values(path: str, column: str | None, on_error: str) -> int:
    with open(path, "r") as fh:
        return sum(1 for _ in parse_stream(fh, column, on_error, warn=lambda _m: None))


def _cmd_detect(args) -> int:
    warn = lambda msg: print(f"warning: {msg}", file=sys.stderr)
    tuned: AutoTuneConfig | None = None
    fh, is_file = _open_input(args.input)
    try:
        values = parse_stream(fh, args.column, args.on_error, warn)
        start_origin = 0
        if args.autotune:
            if args.probation_count is not None:
                probation_n = args.probation_count
            elif is_file:
                total = _count_values(args.input, args.column, args.on_error)
                probation_n = int(args.probation_frac * total)
            else:
                raise ValueError("--autotune on stdin requires --probation-count")
            probation = list(itertools.islice(values, probation_n))
            if len(probation) < probation_n:
                raise ValueError("input shorter than the probation period")
            tuned = autotune(probation, args.probation_frac, args.kappa)
            threshold = tuned.lam
            start_origin = probation_n
        else:
            if args.threshold is None:
                raise ValueError("--threshold is required without --autotune")
            threshold = args.threshold
        factory = _detector_factory(args, tuned)
        sink = sys.stdout if args.output in (None, "-") else open(args.output, "w")
        try:
            for rec in stream_detect(
                values,
                factory,
                threshold,
                buffer_size=args.buffer_size,
                start_origin=start_origin,
                warn=warn,
            ):
                sink.write(
                    json.dumps(
                        {
                            "t": rec.t,
                            "tau_hat": rec.tau_hat,
                            "stat": rec.statistic,
                            "threshold": rec.threshold_used,
                        }
                    )
                    + "\n"
                )
                sink.flush()
        finally:
            if sink is not sys.stdout:
                sink.close()
    finally:
        if is_file:
            fh.close()
    return 0


# ---------------------------------------------------------------------------
# bench subcommand


def _bench_runner(name: str, args):
    """(label, factory) pairs understood by the bench studies."""
    if name == "focus0":
        return lambda: Focus0(math.inf)
    if name == "focus":
        return lambda: Focus(math.inf)
    if name == "rfocus":
        cap = args.cap if args.cap is not None else 9.0
        return lambda: RFocus(math.inf, cap)
    if name == "focus0-10p":
        return lambda: Focus0Approx(math.inf, grid=default_grid(10))
    if name == "page-10p":
        return lambda: PageGrid(default_grid(10), math.inf)
    if name == "page-20p":
        return lambda: PageGrid(default_grid(20), math.inf)
    if name == "page":
        return lambda: Page(args.mu1 if args.mu1 is not None else 1.0, math.inf)
    if name == "page-grid":
        grid = _parse_grid(args.grid)
        return lambda: PageGrid(grid, math.inf)
    if name == "mosum":
        return lambda: Mosum(args.window if args.window is not None else 50, math.inf)
    if name == "mosum-grid":
        windows = harness.mosum_windows_for_grid(default_grid(20).points)
        return lambda: MosumGrid(windows, math.inf)
    if name == "cusum":
        return lambda: Cusum(math.inf)
    raise ValueError(f"unknown bench method {name!r}")


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _bench_arl(args, out_dir: Path) -> None:
    factory = _bench_runner(args.method, args)
    thresholds = _floats(args.thresholds)
    rows = []
    for lam in thresholds:
        summary = harness.average_run_length(
            factory, lam, args.reps, args.horizon, base_seed=args.seed
        )
        rows.append(
            {
                "method": args.method,
                "n": args.horizon,
                "threshold": lam,
                "arl": summary.mean,
                "se": summary.se,
                "censored": summary.censored,
            }
        )
    harness.write_arl_csv(out_dir / "arl.csv", rows)
    harness.write_metadata(
        out_dir / "arl_metadata.json",
        {"study": "arl", "method": args.method, "replicates": args.reps, "seed": args.seed},
    )


def _bench_delay(args, out_dir: Path) -> None:
    factory = _bench_runner(args.method, args)
    if args.threshold is not None:
        lam = args.threshold
    else:
        lam = harness.calibrate_threshold(
            factory,
            args.target_arl,
            replicates=args.reps,
            horizon=args.horizon,
            base_seed=args.seed,
        )
    deltas = _floats(args.deltas)
    n = args.tau_star + args.post_horizon
    grid = [
        harness.StreamSpec(n=n, tau_star=args.tau_star, delta=d, seed=args.seed + 1)
        for d in deltas
    ]
    summaries = harness.detection_delay(factory, lam, grid, args.reps)
    rows = [
        {
            "method": args.method,
            "delta": d,
            "threshold": lam,
            "delay": s.mean,
            "se": s.se,
            "false_alarms": s.false_alarms,
        }
        for d, s in summaries.items()
    ]
    harness.write_delay_csv(out_dir / "delay.csv", rows)
    harness.write_metadata(
        out_dir / "delay_metadata.json",
        {
            "study": "delay",
            "method": args.method,
            "threshold": lam,
            "tau_star": args.tau_star,
            "replicates": args.reps,
            "seed": args.seed,
        },
    )


def _bench_counts(args, out_dir: Path) -> None:
    rows = harness.quadratic_count_profile(
        _ints(args.n), args.reps, with_change=args.change, base_seed=args.seed
    )
    harness.write_csv(
        out_dir / "counts.csv",
        (
            "variant",
            "n",
            "change",
            "mean_per_side",
            "se",
            "mean_records_per_side",
            "harmonic_mean_ref",
            "single_change_bound",
            "replicates",
        ),
        rows,
    )
    harness.write_metadata(out_dir / "counts_metadata.json", {"study": "counts", "seed": args.seed})


def _bench_timing(args, out_dir: Path) -> None:
    runners = {}
    for name in args.methods.split(","):
        name = name.strip()
        if name == "yu-oracle":
            runners[name] = yu_oracle
        else:
            factory = _bench_runner(name, args)
            runners[name] = lambda data, _f=factory: _f().run(data)
    rows = harness.timing_profile(runners, _ints(args.n), repeats=args.repeats, base_seed=args.seed)
    harness.write_csv(out_dir / "timing.csv", ("method", "n", "seconds"), rows)
    harness.write_metadata(out_dir / "timing_metadata.json", {"study": "timing", "seed": args.seed})


def _bench_nab(args, out_dir: Path) -> None:
    """Windowed precision/recall of the self-tuned detector on a labelled CSV."""
    truth = _floats(args.truth)
    with open(args.data, "r") as fh:
        values = list(parse_stream(fh, args.column, "abort"))
    n = len(values)
    probation_n = int(args.probation_frac * n)
    tuned = autotune(values[:probation_n], args.probation_frac, args.kappa)
    ns = argparse.Namespace(
        method=args.method,
        mean0=0.0,
        sigma=1.0,
        grid=None,
        max_quadratics=None,
        cap=None,
        window=None,
        kprop=None,
        mu1=None,
        mu_star=None,
    )
    factory = _detector_factory(ns, tuned)
    records = list(
        stream_detect(
            iter(values[probation_n:]),
            factory,
            tuned.lam,
            start_origin=probation_n,
        )
    )
    detections = [r.t for r in records]
    precision, recall = harness.evaluate_windowed(
        truth, detections, n, window_frac=args.window_frac, probation=probation_n
    )
    payload = {
        "precision": precision,
        "recall": recall,
        "n": n,
        "probation": probation_n,
        "cap": tuned.cap,
        "sigma": tuned.sigma,
        "threshold": tuned.lam,
        "detections": [
            {"t": r.t, "tau_hat": r.tau_hat, "stat": r.statistic, "threshold": r.threshold_used}
            for r in records
        ],
    }
    (out_dir / "score.json").write_text(json.dumps(payload, indent=2) + "\n")
    harness.write_metadata(out_dir / "nab_metadata.json", {"study": "nab", "data": str(args.data)})


def _cmd_bench(args) -> int:
    out_dir = Path(args.out)
    if not out_dir.is_dir():
        print(f"error: output directory {out_dir} does not exist", file=sys.stderr)
        return 1
    if args.study == "arl":
        _bench_arl(args, out_dir)
    elif args.study == "delay":
        _bench_delay(args, out_dir)
    elif args.study == "counts":
        _bench_counts(args, out_dir)
    elif args.study == "timing":
        _bench_timing(args, out_dir)
    else:
        _bench_nab(args, out_dir)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing


def _env(name: str, cast, fallback=None):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw in (None, ""):
        return fallback
    return cast(raw)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="focus-detect",
        description="Streaming change-in-mean detection and benchmark studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    det = sub.add_parser("detect", help="detect changes in a CSV/stdin stream")
    det.add_argument("input", nargs="?", default=None, help="input file ('-' or absent: stdin)")
    det.add_argument(
        "--method",
        choices=METHODS,
        default=_env("METHOD", str, "focus"),
    )
    det.add_argument("--threshold", type=float, default=_env("THRESHOLD", float))
    det.add_argument("--mean0", type=float, default=_env("MEAN0", float, 0.0))
    det.add_argument("--sigma", type=float, default=_env("SIGMA", float, 1.0))
    det.add_argument("--grid", default=_env("GRID", str), help="geometric grid as 'min,max,p'")
    det.add_argument(
        "--max-quadratics", type=int, default=_env("MAX_QUADRATICS", int), metavar="P"
    )
    det.add_argument("--cap", type=float, default=None, help="outlier cap K for rfocus")
    det.add_argument("--mu1", type=float, default=None, help="assumed post-change mean for page")
    det.add_argument("--mu-star", type=float, default=None, help="minimum change size for lorden")
    det.add_argument("--window", type=int, default=None, help="window size for mosum")
    det.add_argument("--kprop", type=float, default=None, help="window proportion for mmosum")
    det.add_argument("--autotune", action="store_true")
    det.add_argument(
        "--probation-frac", type=float, default=_env("PROBATION_FRAC", float, 0.15)
    )
    det.add_argument("--probation-count", type=int, default=None)
    det.add_argument("--kappa", type=float, default=_env("KAPPA", float, 1.5))
    det.add_argument("--column", default=_env("COLUMN", str))
    det.add_argument("--output", default=_env("OUTPUT", str))
    det.add_argument("--buffer-size", type=int, default=DEFAULT_BUFFER_SIZE)
    det.add_argument("--on-error", choices=("abort", "skip"), default="abort")
    det.set_defaults(func=_cmd_detect)

    ben = sub.add_parser("bench", help="run a simulation study and write CSV/JSON outputs")
    ben.add_argument("study", choices=BENCH_STUDIES)
    ben.add_argument("--out", required=True, help="existing output directory")
    ben.add_argument("--method", default="focus0")
    ben.add_argument("--methods", default="focus0,focus", help="timing study method list")
    ben.add_argument("--thresholds", default="10", help="comma list for the arl study")
    ben.add_argument("--threshold", type=float, default=None)
    ben.add_argument("--target-arl", type=float, default=harness.DESK_ARL_TARGET)
    ben.add_argument("--deltas", default="0.25,0.5,1,2")
    ben.add_argument("--tau-star", type=int, default=harness.DESK_PRECHANGE)
    ben.add_argument("--post-horizon", type=int, default=20_000)
    ben.add_argument("--horizon", type=int, default=harness.DESK_HORIZON)
    ben.add_argument("--reps", type=int, default=harness.DESK_REPLICATES)
    ben.add_argument("--n", default="1024", help="comma list of stream lengths")
    ben.add_argument("--repeats", type=int, default=3)
    ben.add_argument("--change", action="store_true")
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--cap", type=float, default=None)
    ben.add_argument("--mu1", type=float, default=None)
    ben.add_argument("--window", type=int, default=None)
    ben.add_argument("--grid", default=None)
    ben.add_argument("--data", default=None, help="labelled CSV for the nab study")
    ben.add_argument("--column", default=None)
    ben.add_argument("--truth", default="", help="comma list of true anomaly times")
    ben.add_argument("--window-frac", type=float, default=0.05)
    ben.add_argument("--probation-frac", type=float, default=0.15)
    ben.add_argument("--kappa", type=float, default=1.5)
    ben.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    try:
        parser = _build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
