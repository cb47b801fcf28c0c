"""JIT-compiled batch kernels for the streaming detectors.

These mirror the per-step logic of :mod:`focus_detect.core` and
:mod:`focus_detect.baselines` over whole arrays so that calibration and
throughput work runs at native speed.  The object paths stay the reference
implementation; equality between the two is enforced by tests.

Curve state is held in parallel arrays ``(taus, sums, borders)`` with an
explicit length ``k``; capacities are ``n + 2`` so even adversarial
(trending) streams cannot overflow.  Every function is pure: fresh state per
call, nothing shared.

If numba is not installed the kernels degrade to pure Python with identical
semantics (and far lower throughput).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


NEG_INF = float("-inf")


@njit(cache=True)
def _advance(taus, sums, borders, k, n, sn, clamp):
    """One curve update: prune dominated triples, append the new one."""
    i = k - 1
    while i >= 0 and 2.0 * (sn - sums[i]) - (n - taus[i]) * borders[i] <= 0.0:
        i -= 1
    if i < 0:
        border = 0.0 if clamp else NEG_INF
    else:
        border = 2.0 * (sn - sums[i]) / (n - taus[i])
        if clamp and border < 0.0:
            border = 0.0
    k = i + 1
    taus[k] = n
    sums[k] = sn
    borders[k] = border
    return k + 1


@njit(cache=True)
def _max_known(taus, sums, k, n, sn):
    best = 0.0
    best_tau = n
    for j in range(k):
        tau = taus[j]
        if tau < n:
            d = sn - sums[j]
            v = d * d / (2.0 * (n - tau))
            if v > best:
                best = v
                best_tau = tau
    return best, best_tau


@njit(cache=True)
def _max_unknown(taus, sums, k, n, sn):
    pooled = sn * sn / n
    best = 0.0
    best_tau = n
    for j in range(k):
        tau = taus[j]
        if 1 <= tau < n:
            s = sums[j]
            v = s * s / tau + (sn - s) ** 2 / (n - tau) - pooled
            if v > best:
                best = v
                best_tau = tau
    return best, best_tau


@njit(cache=True)
def focus0_trace(x):
    """Known-mean statistic (half-log-LR) and changepoint estimate per step."""
    n_obs = x.shape[0]
    cap = n_obs + 2
    ut = np.zeros(cap, np.int64)
    us = np.zeros(cap, np.float64)
    ub = np.zeros(cap, np.float64)
    dt = np.zeros(cap, np.int64)
    ds = np.zeros(cap, np.float64)
    db = np.zeros(cap, np.float64)
    ku = kd = 1
    su = sd = 0.0
    stats = np.empty(n_obs, np.float64)
    tau_hats = np.empty(n_obs, np.int64)
    for t in range(n_obs):
        n = t + 1
        su += x[t]
        sd -= x[t]
        ku = _advance(ut, us, ub, ku, n, su, True)
        kd = _advance(dt, ds, db, kd, n, sd, True)
        vu, tu = _max_known(ut, us, ku, n, su)
        vd, td = _max_known(dt, ds, kd, n, sd)
        if vu >= vd:
            stats[t] = vu
            tau_hats[t] = tu
        else:
            stats[t] = vd
            tau_hats[t] = td
    return stats, tau_hats


@njit(cache=True)
def focus0_first_cross(x, lam):
    """First 1-based time the known-mean statistic reaches ``lam`` (0 if never)."""
    n_obs = x.shape[0]
    cap = n_obs + 2
    ut = np.zeros(cap, np.int64)
    us = np.zeros(cap, np.float64)
    ub = np.zeros(cap, np.float64)
    dt = np.zeros(cap, np.int64)
    ds = np.zeros(cap, np.float64)
    db = np.zeros(cap, np.float64)
    ku = kd = 1
    su = sd = 0.0
    for t in range(n_obs):
        n = t + 1
        su += x[t]
        sd -= x[t]
        ku = _advance(ut, us, ub, ku, n, su, True)
        kd = _advance(dt, ds, db, kd, n, sd, True)
        vu, _ = _max_known(ut, us, ku, n, su)
        vd, _ = _max_known(dt, ds, kd, n, sd)
        v = vu if vu >= vd else vd
        if v >= lam:
            return n
    return 0


@njit(cache=True)
def focus_trace(x):
    """Unknown-mean statistic (half-log-LR) and changepoint estimate per step."""
    n_obs = x.shape[0]
    cap = n_obs + 2
    ut = np.zeros(cap, np.int64)
    us = np.zeros(cap, np.float64)
    ub = np.zeros(cap, np.float64)
    dt = np.zeros(cap, np.int64)
    ds = np.zeros(cap, np.float64)
    db = np.zeros(cap, np.float64)
    ub[0] = NEG_INF
    db[0] = NEG_INF
    ku = kd = 1
    su = sd = 0.0
    stats = np.empty(n_obs, np.float64)
    tau_hats = np.empty(n_obs, np.int64)
    for t in range(n_obs):
        n = t + 1
        su += x[t]
        sd -= x[t]
        ku = _advance(ut, us, ub, ku, n, su, False)
        kd = _advance(dt, ds, db, kd, n, sd, False)
        if n < 2:
            stats[t] = 0.0
            tau_hats[t] = n
            continue
        vu, tu = _max_unknown(ut, us, ku, n, su)
        vd, td = _max_unknown(dt, ds, kd, n, sd)
        if vu >= vd:
            stats[t] = 0.5 * vu
            tau_hats[t] = tu
        else:
            stats[t] = 0.5 * vd
            tau_hats[t] = td
    return stats, tau_hats


@njit(cache=True)
def focus_first_cross(x, lam):
    """First 1-based time the unknown-mean statistic reaches ``lam`` (0 if never)."""
    n_obs = x.shape[0]
    cap = n_obs + 2
    ut = np.zeros(cap, np.int64)
    us = np.zeros(cap, np.float64)
    ub = np.zeros(cap, np.float64)
    dt = np.zeros(cap, np.int64)
    ds = np.zeros(cap, np.float64)
    db = np.zeros(cap, np.float64)
    ub[0] = NEG_INF
    db[0] = NEG_INF
    ku = kd = 1
    su = sd = 0.0
    for t in range(n_obs):
        n = t + 1
        su += x[t]
        sd -= x[t]
        ku = _advance(ut, us, ub, ku, n, su, False)
        kd = _advance(dt, ds, db, kd, n, sd, False)
        if n < 2:
            continue
        vu, _ = _max_unknown(ut, us, ku, n, su)
        vd, _ = _max_unknown(dt, ds, kd, n, sd)
        v = vu if vu >= vd else vd
        if 0.5 * v >= lam:
            return n
    return 0


@njit(cache=True)
def candidate_counts(x, clamp):
    """Per-side storage counts after consuming ``x``.

    Returns (candidates up, candidates down, records up, records down):
    candidates are stored triples with tau >= 1 (the changepoint set whose
    expectation the harmonic sum describes); records additionally include
    the tau = 0 triple when it is still stored.
    """
    n_obs = x.shape[0]
    cap = n_obs + 2
    ut = np.zeros(cap, np.int64)
    us = np.zeros(cap, np.float64)
    ub = np.zeros(cap, np.float64)
    dt = np.zeros(cap, np.int64)
    ds = np.zeros(cap, np.float64)
    db = np.zeros(cap, np.float64)
    if not clamp:
        ub[0] = NEG_INF
        db[0] = NEG_INF
    ku = kd = 1
    su = sd = 0.0
    for t in range(n_obs):
        n = t + 1
        su += x[t]
        sd -= x[t]
        ku = _advance(ut, us, ub, ku, n, su, clamp)
        kd = _advance(dt, ds, db, kd, n, sd, clamp)
    cu = 0
    for j in range(ku):
        if ut[j] >= 1:
            cu += 1
    cd = 0
    for j in range(kd):
        if dt[j] >= 1:
            cd += 1
    return cu, cd, ku, kd


@njit(cache=True)
def page_trace(x, mu1):
    """Sequential-Page recursion q <- max{0, q + mu1 (x - mu1/2)} per step."""
    n_obs = x.shape[0]
    out = np.empty(n_obs, np.float64)
    q = 0.0
    for t in range(n_obs):
        q = max(0.0, q + mu1 * (x[t] - mu1 / 2.0))
        out[t] = q
    return out


@njit(cache=True)
def page_grid_trace(x, pts):
    """Max over the 2P sequential-Page recursions at grid means ±pts."""
    n_obs = x.shape[0]
    p = pts.shape[0]
    qup = np.zeros(p, np.float64)
    qdn = np.zeros(p, np.float64)
    out = np.empty(n_obs, np.float64)
    for t in range(n_obs):
        xt = x[t]
        m = 0.0
        for j in range(p):
            mu = pts[j]
            qup[j] = max(0.0, qup[j] + mu * (xt - mu / 2.0))
            qdn[j] = max(0.0, qdn[j] + mu * (-xt - mu / 2.0))
            if qup[j] > m:
                m = qup[j]
            if qdn[j] > m:
                m = qdn[j]
        out[t] = m
    return out


@njit(cache=True)
def page_grid_first_cross(x, pts, lam):
    n_obs = x.shape[0]
    p = pts.shape[0]
    qup = np.zeros(p, np.float64)
    qdn = np.zeros(p, np.float64)
    for t in range(n_obs):
        xt = x[t]
        m = 0.0
        for j in range(p):
            mu = pts[j]
            qup[j] = max(0.0, qup[j] + mu * (xt - mu / 2.0))
            qdn[j] = max(0.0, qdn[j] + mu * (-xt - mu / 2.0))
            if qup[j] > m:
                m = qup[j]
            if qdn[j] > m:
                m = qdn[j]
        if m >= lam:
            return t + 1
    return 0


@njit(cache=True)
def yu_trace(x):
    """Exhaustive two-segment likelihood-ratio scan, half-LR per step.

    O(n) per step over prefix sums; the brute-force mirror of the
    unknown-mean detector used for testing and timing comparisons.
    """
    n = x.shape[0]
    s = np.empty(n + 1, np.float64)
    s[0] = 0.0
    for i in range(n):
        s[i + 1] = s[i] + x[i]
    out = np.zeros(n, np.float64)
    for t in range(2, n + 1):
        st = s[t]
        pooled = st * st / t
        best = 0.0
        for tau in range(1, t):
            v = s[tau] * s[tau] / tau + (st - s[tau]) ** 2 / (t - tau) - pooled
            if v > best:
                best = v
        out[t - 1] = 0.5 * best
    return out


_WARMED = False


def warmup() -> None:
    """Compile (or load from cache) every kernel on tiny inputs."""
    global _WARMED
    if _WARMED:
        return
    z = np.array([0.5, -0.25, 1.0])
    pts = np.array([0.5, 1.0])
    focus0_trace(z)
    focus0_first_cross(z, np.inf)
    focus_trace(z)
    focus_first_cross(z, np.inf)
    candidate_counts(z, True)
    candidate_counts(z, False)
    page_trace(z, 1.0)
    page_grid_trace(z, pts)
    page_grid_first_cross(z, pts, np.inf)
    yu_trace(z)
    _WARMED = True
