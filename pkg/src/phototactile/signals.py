"""Uniformly sampled series and the characterization metrics computed on them."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy import signal as sps

from .errors import DataError, DomainError, ParameterError

SAMPLE_PERIOD_S = 1e-3
FILTER_POINTS = 9


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Samples taken every ``dt`` seconds starting at ``t0``.

    ``samples`` is stored as a read-only float array.
    """

    samples: np.ndarray
    dt: float = SAMPLE_PERIOD_S
    t0: float = 0.0
    unit: str = "V"

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float).ravel()
        if arr.size == 0:
            raise DataError("a time series needs at least one sample")
        if not self.dt > 0:
            raise ParameterError("dt must be positive", field="dt")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    def with_samples(self, samples, **changes) -> "TimeSeries":
        return replace(self, samples=samples, **changes)


def moving_average(ts: TimeSeries, k: int = FILTER_POINTS) -> TimeSeries:
    """Centered k-point moving average with the same length as the input.

    Near the ends the window shrinks symmetrically, so sample ``i`` averages
    ``min(k // 2, i, n - 1 - i)`` neighbours on each side.
    """
    n = len(ts)
    if k < 1 or k % 2 == 0 or k > n:
        raise ParameterError(f"window must be odd and in [1, {n}], got {k}", field="k")
    x = ts.samples
    idx = np.arange(n)
    half = np.minimum(np.minimum(k // 2, idx), n - 1 - idx)
    csum = np.concatenate(([0.0], np.cumsum(x)))
    out = (csum[idx + half + 1] - csum[idx - half]) / (2 * half + 1)
    # cumulative sums drift slightly; keep the result inside the input bounds
    out = np.clip(out, x.min(), x.max())
    return ts.with_samples(out)


def invert_output(ts: TimeSeries, baseline: float | None = None) -> TimeSeries:
    """Module output: ``baseline - v``, rising with contact force."""
    if ts.unit != "V":
        raise DataError(f"expected a voltage series, got unit {ts.unit!r}")
    base = ts.samples[0] if baseline is None else float(baseline)
    return ts.with_samples(base - ts.samples)


def _overlap_sums(x: np.ndarray, start: np.ndarray, stop: np.ndarray):
    c1 = np.concatenate(([0.0], np.cumsum(x)))
    c2 = np.concatenate(([0.0], np.cumsum(x * x)))
    return c1[stop] - c1[start], c2[stop] - c2[start]


def phase_lag(reference: TimeSeries, signal: TimeSeries) -> float:
    """Delay (s) of ``signal`` behind ``reference``.

    For every lag up to half the shorter length the two series are compared
    over their overlapping samples with the Pearson coefficient (normalized
    cross-correlation); the best lag wins and ties go to the smallest
    absolute lag.
    """
    if not np.isclose(reference.dt, signal.dt, rtol=1e-12, atol=0):
        raise DataError("series must share the same sample period")
    r = reference.samples - reference.samples.mean()
    s = signal.samples - signal.samples.mean()
    if not (np.any(r != 0) and np.any(s != 0)):
        raise DataError("cross-correlation undefined for a constant series")
    nr, ns = r.size, s.size
    limit = min(nr, ns) // 2
    lags = np.arange(-limit, limit + 1)
    # pairs (r[n], s[n + k]) for n in [n0, n1)
    n0 = np.maximum(0, -lags)
    n1 = np.minimum(nr, ns - lags)
    m = n1 - n0
    sxy_full = sps.correlate(s, r, mode="full")
    sxy = sxy_full[lags + nr - 1]
    sx, sxx = _overlap_sums(r, n0, n1)
    sy, syy = _overlap_sums(s, n0 + lags, n1 + lags)
    cov = sxy - sx * sy / m
    var = (sxx - sx**2 / m) * (syy - sy**2 / m)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.where(var > 0, cov / np.sqrt(np.where(var > 0, var, 1.0)), -np.inf)
    if not np.isfinite(corr.max()):
        raise DataError("cross-correlation undefined for a constant series")
    best = np.flatnonzero(corr == corr.max())
    k = lags[best[np.argmin(np.abs(lags[best]))]]
    return float(k * reference.dt + (signal.t0 - reference.t0))


def _branch(force: np.ndarray, output: np.ndarray):
    order = np.argsort(force, kind="stable")
    f, o = force[order], output[order]
    f, first = np.unique(f, return_index=True)
    return f, o[first]


def hysteresis_metric(force: TimeSeries, output: TimeSeries, split: int,
                      grid_points: int = 200) -> float:
    """Largest loading/unloading output gap at equal force, over full-scale output.

    Samples ``[0, split]`` form the loading branch and ``[split, end]`` the
    unloading branch.
    """
    f, o = force.samples, output.samples
    if f.size != o.size:
        raise DataError("force and output must be aligned")
    if not 0 < split < f.size - 1:
        raise DataError("split index must leave samples on both branches")
    fl, ol = _branch(f[: split + 1], o[: split + 1])
    fu, ou = _branch(f[split:], o[split:])
    lo, hi = max(fl[0], fu[0]), min(fl[-1], fu[-1])
    if not hi > lo:
        raise DataError("loading and unloading force ranges do not overlap")
    full_scale = o.max() - o.min()
    if full_scale == 0:
        return 0.0
    grid = np.linspace(lo, hi, grid_points)
    gap = np.abs(np.interp(grid, fl, ol) - np.interp(grid, fu, ou))
    return float(gap.max() / full_scale)


def sensitivity(force: TimeSeries, output: TimeSeries, split: int | None = None) -> float:
    """Least-squares slope of output against force (V/N) over the loading phase.

    ``split`` is the last loading sample; by default the whole series is used.
    """
    f, o = force.samples, output.samples
    if f.size != o.size:
        raise DataError("force and output must be aligned")
    if split is not None:
        f, o = f[: split + 1], o[: split + 1]
    fc = f - f.mean()
    sxx = np.dot(fc, fc)
    if sxx == 0:
        raise DataError("force has zero variance")
    return float(np.dot(fc, o - o.mean()) / sxx)


def dynamic_range(full_scale: float, noise_rms: float) -> float:
    """``20 log10(full_scale / noise_rms)`` in dB."""
    if not (full_scale > 0 and noise_rms > 0):
        raise DomainError("full scale and noise RMS must be positive")
    return float(20.0 * np.log10(full_scale / noise_rms))


def repeatability(peaks: Sequence[float]) -> float:
    """Coefficient of variation of per-cycle peaks (population std / mean)."""
    p = np.asarray(peaks, dtype=float)
    if p.size < 2:
        raise DataError("need at least two cycles")
    mean = p.mean()
    if not mean > 0:
        raise DataError("mean peak must be positive")
    return float(p.std() / mean)
