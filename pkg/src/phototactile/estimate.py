"""Contact-force estimation from photoreflector readings."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._roots import bisect_increasing
from .calibrate import CalibrationCurve
from .errors import RangeError
from .mechanics import MaterialParams, SensorGeometry, axial_force, gap_profile
from .optics import OpticalModel, gap_at_voltage, voltage_at_gap, voltage_image

GAP_TOL_MM = 1e-9
OUTPUT_TOL_V = 1e-9


class ForceEstimate(NamedTuple):
    force_n: float
    indent_mm: float
    underrange: bool


def _max_indent(geom: SensorGeometry) -> float:
    # indentation at which the gap would close, capped just below full height
    lam_t = 1.0 + geom.gap0_mm / (geom.kappa * 0.5 * geom.width_mm)
    closing = geom.height_mm * (1.0 - lam_t**-2)
    return min(closing, geom.height_mm * (1.0 - 1e-12))


def estimate_forces(voltages, geom: SensorGeometry, mat: MaterialParams,
                    model: OpticalModel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised quasi-static inversion: voltage -> gap -> indentation -> force.

    Returns ``(forces, indents, underrange)``. Readings above the rest voltage
    (a gap wider than at rest) give 0 N and are flagged as underrange.
    """
    v = np.atleast_1d(np.asarray(voltages, dtype=float))
    v_rest = voltage_at_gap(min(geom.gap0_mm, model.span[1]), model)
    underrange = v > v_rest if geom.gap0_mm <= model.span[1] else np.zeros(v.shape, bool)
    active = ~underrange
    indents = np.zeros_like(v)
    if np.any(active):
        vmin, vmax = voltage_image(model)
        if np.any(v[active] < vmin) or np.any(v[active] > vmax) or np.any(np.isnan(v[active])):
            bad = v[active][(v[active] < vmin) | (v[active] > vmax) | np.isnan(v[active])][0]
            raise RangeError(f"voltage {bad:.6g} V outside optical image [{vmin:.6g}, {vmax:.6g}] V")
        gaps = np.atleast_1d(gap_at_voltage(v[active], model))
        over = gaps > geom.gap0_mm
        underrange[np.flatnonzero(active)[over]] = True
        gaps = np.minimum(gaps, geom.gap0_mm)
        hi = _max_indent(geom)
        # gap decreases with indentation; bisect on the negated gap
        xtol = GAP_TOL_MM / (geom.kappa * geom.width_mm)
        found = bisect_increasing(lambda d: -gap_profile(d, geom), -gaps, 0.0, hi, xtol=xtol)
        # a gap at (or clipped to) its rest width means no indentation at all
        indents[active] = np.where(gaps >= geom.gap0_mm, 0.0, found)
        indents[underrange] = 0.0
    forces = np.asarray(axial_force(indents, 0.0, geom, mat), dtype=float)
    forces = np.atleast_1d(forces)
    forces[underrange] = 0.0
    return forces, indents, underrange


def force_from_voltage(v: float, geom: SensorGeometry, mat: MaterialParams,
                       model: OpticalModel) -> ForceEstimate:
    """Contact force (N) for one raw photoreflector voltage, ignoring rate effects."""
    forces, indents, under = estimate_forces([v], geom, mat, model)
    return ForceEstimate(float(forces[0]), float(indents[0]), bool(under[0]))


def force_from_curve(v_output, curve: CalibrationCurve):
    """Invert a monotone calibration curve: module output (V) -> force (N)."""
    out = np.asarray(v_output, dtype=float)
    f_lo, f_hi = curve.domain
    y_lo, y_hi = float(curve(f_lo)), float(curve(f_hi))
    sign = 1.0 if y_hi >= y_lo else -1.0
    lo_img, hi_img = min(y_lo, y_hi), max(y_lo, y_hi)
    eps = OUTPUT_TOL_V
    if np.any((out < lo_img - eps) | (out > hi_img + eps) | np.isnan(out)):
        raise RangeError(f"output outside calibration image [{lo_img:.6g}, {hi_img:.6g}] V")
    slope = max(abs(np.polynomial.polynomial.polyval(
        np.linspace(f_lo, f_hi, 101), np.polynomial.polynomial.polyder(curve.coefficients))).max(),
        1e-300)
    f = bisect_increasing(lambda x: sign * curve(x), sign * np.clip(out, lo_img, hi_img),
                          f_lo, f_hi, xtol=OUTPUT_TOL_V / slope)
    return f.item() if f.ndim == 0 else f
