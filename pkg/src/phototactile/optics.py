"""Photoreflector distance-to-voltage models.

The raw photoreflector voltage rises with the distance to the reflecting
silicone surface. Two monotone models are supported: the straight-line fit
over the 1-2 mm operating band (:class:`LinearOptics`) and a measured sweep
interpolated with a shape-preserving cubic (:class:`LookupOptics`).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._roots import bisect_increasing
from .errors import InsufficientDataError, ParameterError, RangeError, RangeWarning

SLOPE_DEFAULT = 1.9374
OFFSET_DEFAULT = -1.8875
SWEEP_HEADER = ("distance_mm", "voltage_v")

_POLICIES = ("error", "clamp")


def _check_policy(policy: str):
    if policy not in _POLICIES:
        raise ParameterError(f"out_of_range must be one of {_POLICIES}", field="out_of_range")


@dataclass(frozen=True)
class LinearOptics:
    """``V = a * x + b`` valid on ``[x_min, x_max]`` mm."""

    a: float = SLOPE_DEFAULT
    b: float = OFFSET_DEFAULT
    x_min: float = 1.0
    x_max: float = 2.0
    out_of_range: str = "error"

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError("slope a must be positive", field="a")
        if not self.x_min < self.x_max:
            raise ParameterError("x_min must be smaller than x_max", field="x_min")
        _check_policy(self.out_of_range)

    @property
    def span(self) -> tuple[float, float]:
        return self.x_min, self.x_max


@dataclass(frozen=True)
class LookupOptics:
    """Measured sweep with strictly increasing distances and voltages."""

    distances: tuple[float, ...]
    voltages: tuple[float, ...]
    out_of_range: str = "error"
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        x = np.asarray(self.distances, dtype=float)
        v = np.asarray(self.voltages, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise ParameterError("need at least two (distance, voltage) pairs", field="distances")
        if np.any(np.diff(x) <= 0):
            raise ParameterError("distances must be strictly increasing", field="distances")
        if np.any(np.diff(v) <= 0):
            raise ParameterError("voltages must be strictly increasing", field="voltages")
        _check_policy(self.out_of_range)
        object.__setattr__(self, "distances", tuple(float(a) for a in x))
        object.__setattr__(self, "voltages", tuple(float(a) for a in v))
        object.__setattr__(self, "_interp", PchipInterpolator(x, v, extrapolate=False))

    @property
    def span(self) -> tuple[float, float]:
        return self.distances[0], self.distances[-1]

    @classmethod
    def from_csv(cls, path, out_of_range: str = "error") -> "LookupOptics":
        x, v = read_sweep_csv(path)
        return cls(tuple(x), tuple(v), out_of_range=out_of_range)


OpticalModel = Union[LinearOptics, LookupOptics]


@dataclass(frozen=True)
class PigmentMix:
    """White/black pigment proportions of the silicone skin.

    Reflectance is interpolated linearly between the black floor ``rho_black``
    and 1 for pure white.
    """

    white_fraction: float = 0.75
    rho_black: float = 0.25

    def __post_init__(self):
        if not 0 <= self.white_fraction <= 1:
            raise ParameterError("white_fraction must lie in [0, 1]", field="white_fraction")
        if not 0 < self.rho_black < 1:
            raise ParameterError("rho_black must lie in (0, 1)", field="rho_black")

    @property
    def reflectance(self) -> float:
        return reflectance(self.white_fraction, self.rho_black)


def reflectance(white_fraction: float, rho_black: float) -> float:
    return rho_black + white_fraction * (1.0 - rho_black)


def _as_output(x: np.ndarray):
    return x.item() if x.ndim == 0 else x


def _raw_voltage(x: np.ndarray, model: OpticalModel) -> np.ndarray:
    if isinstance(model, LinearOptics):
        return model.a * x + model.b
    return model._interp(x)


def voltage_image(model: OpticalModel) -> tuple[float, float]:
    """Voltage range ``(v_min, v_max)`` covered by the model's valid span."""
    lo, hi = model.span
    return float(_raw_voltage(np.asarray(lo), model)), float(_raw_voltage(np.asarray(hi), model))


def voltage_at_gap(x, model: OpticalModel):
    """Photoreflector voltage (V) at gap ``x`` (mm).

    Gaps outside the model span raise :class:`RangeError`, or are clamped
    with a :class:`RangeWarning` under the ``"clamp"`` policy.
    """
    x = np.asarray(x, dtype=float)
    lo, hi = model.span
    outside = (x < lo) | (x > hi) | np.isnan(x)
    if np.any(outside):
        if model.out_of_range == "error":
            bad = float(np.atleast_1d(x)[np.argmax(np.atleast_1d(outside))])
            raise RangeError(f"gap {bad:.6g} mm outside optical span [{lo}, {hi}] mm")
        warnings.warn("gap outside optical span was clamped", RangeWarning, stacklevel=2)
        x = np.clip(x, lo, hi)
    return _as_output(np.asarray(_raw_voltage(x, model), dtype=float))


def gap_at_voltage(v, model: OpticalModel):
    """Exact inverse of :func:`voltage_at_gap` (mm)."""
    v = np.asarray(v, dtype=float)
    vmin, vmax = voltage_image(model)
    # tolerate round-off at the image ends
    eps = 1e-12 * max(1.0, abs(vmin), abs(vmax))
    outside = (v < vmin - eps) | (v > vmax + eps) | np.isnan(v)
    if np.any(outside):
        if model.out_of_range == "error":
            bad = float(np.atleast_1d(v)[np.argmax(np.atleast_1d(outside))])
            raise RangeError(f"voltage {bad:.6g} V outside optical image [{vmin:.6g}, {vmax:.6g}] V")
        warnings.warn("voltage outside optical image was clamped", RangeWarning, stacklevel=2)
    v = np.clip(v, vmin, vmax)
    if isinstance(model, LinearOptics):
        return _as_output((v - model.b) / model.a)
    lo, hi = model.span
    x = bisect_increasing(lambda s: model._interp(s), v, lo, hi, xtol=1e-13 * max(1.0, hi))
    return _as_output(x)


def scale_by_pigment(base: LinearOptics, mix: PigmentMix,
                     ref_white_fraction: float = 0.75) -> LinearOptics:
    """Rescale a linear model fitted on ``ref_white_fraction`` to another pigment mix.

    The slope scales with relative reflectance; the voltage at ``x_max`` (far
    end of the band, weakest reflection) is kept fixed.
    """
    if not isinstance(base, LinearOptics):
        raise ParameterError("pigment scaling needs a linear optical model", field="variant")
    ref = reflectance(ref_white_fraction, mix.rho_black)
    if not ref > 0:
        raise ParameterError("reference reflectance must be positive", field="ref_white_fraction")
    a = base.a * mix.reflectance / ref
    v_far = base.a * base.x_max + base.b
    return LinearOptics(a=a, b=v_far - a * base.x_max, x_min=base.x_min, x_max=base.x_max,
                        out_of_range=base.out_of_range)


class LinearFit(NamedTuple):
    a: float
    b: float
    r2: float


def fit_linear(distances: Sequence[float], voltages: Sequence[float],
               x_range: tuple[float, float] = (1.0, 2.0)) -> LinearFit:
    """Ordinary least-squares line through the samples inside ``x_range``."""
    x = np.asarray(distances, dtype=float)
    v = np.asarray(voltages, dtype=float)
    if x.shape != v.shape:
        raise InsufficientDataError("distances and voltages differ in length")
    keep = (x >= x_range[0]) & (x <= x_range[1])
    x, v = x[keep], v[keep]
    if np.unique(x).size < 2:
        raise InsufficientDataError("need at least two distinct distances inside the fit range")
    xm, vm = x.mean(), v.mean()
    sxx = np.sum((x - xm) ** 2)
    a = np.sum((x - xm) * (v - vm)) / sxx
    b = vm - a * xm
    ss_tot = np.sum((v - vm) ** 2)
    ss_res = np.sum((v - (a * x + b)) ** 2)
    r2 = 1.0 if ss_tot == 0 else float(np.clip(1.0 - ss_res / ss_tot, 0.0, 1.0))
    return LinearFit(float(a), float(b), r2)


def read_sweep_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Load a ``distance_mm,voltage_v`` sweep; distances must strictly increase."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != SWEEP_HEADER:
            raise ParameterError(f"{path}: expected header {','.join(SWEEP_HEADER)}", field="header")
        rows = [(float(r[0]), float(r[1])) for r in reader if r]
    if not rows:
        raise InsufficientDataError(f"{path}: no samples")
    x, v = np.array(rows).T
    if np.any(np.diff(x) <= 0):
        raise ParameterError(f"{path}: distances must be strictly increasing", field="distance_mm")
    return x, v


def write_sweep_csv(path, distances, voltages) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(SWEEP_HEADER) + "\n")
        for x, v in zip(distances, voltages):
            fh.write(f"{x:.9g},{v:.9g}\n")
