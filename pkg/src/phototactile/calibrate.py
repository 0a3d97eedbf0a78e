"""Calibration curves and pigment selection."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DataError, InsufficientDataError, MonotonicityWarning, ParameterError
from .optics import LinearFit, fit_linear

MONOTONE_GRID = 100


@dataclass(frozen=True)
class CalibrationCurve:
    """Polynomial output(force) with ascending coefficients (V per N^k).

    ``monotone`` records whether the curve was strictly monotone on ``domain``
    when it was fitted.
    """

    coefficients: tuple[float, ...]
    domain: tuple[float, float]
    residual_rms: float
    monotone: bool = True

    def __post_init__(self):
        if len(self.coefficients) < 2:
            raise ParameterError("calibration degree must be >= 1", field="coefficients")
        if not self.domain[0] < self.domain[1]:
            raise ParameterError("calibration domain is degenerate", field="domain")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, force):
        return P.polyval(force, self.coefficients)

    def to_dict(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "domain": list(self.domain),
            "residual_rms": self.residual_rms,
            "monotone": self.monotone,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CalibrationCurve":
        return cls(
            coefficients=tuple(float(c) for c in data["coefficients"]),
            domain=(float(data["domain"][0]), float(data["domain"][1])),
            residual_rms=float(data["residual_rms"]),
            monotone=bool(data.get("monotone", True)),
        )


def _is_strictly_monotone(coefficients, domain) -> bool:
    grid = np.linspace(domain[0], domain[1], MONOTONE_GRID)
    steps = np.diff(P.polyval(grid, coefficients))
    return bool(np.all(steps > 0) or np.all(steps < 0))


def fit_force_voltage(forces: Sequence[float], outputs: Sequence[float],
                      degree: int = 1) -> CalibrationCurve:
    """Least-squares polynomial fit of module output against force."""
    f = np.asarray(forces, dtype=float)
    v = np.asarray(outputs, dtype=float)
    if f.shape != v.shape:
        raise DataError("forces and outputs differ in length")
    if degree < 1:
        raise ParameterError("degree must be >= 1", field="degree")
    if np.unique(f).size < degree + 1:
        raise InsufficientDataError(
            f"degree {degree} needs at least {degree + 1} distinct forces")
    coef = P.polyfit(f, v, degree)
    resid = v - P.polyval(f, coef)
    domain = (float(f.min()), float(f.max()))
    monotone = _is_strictly_monotone(coef, domain)
    if not monotone:
        warnings.warn("calibration curve is not monotone over its domain",
                      MonotonicityWarning, stacklevel=2)
    return CalibrationCurve(
        coefficients=tuple(float(c) for c in coef),
        domain=domain,
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        monotone=monotone,
    )


class PigmentSelection(NamedTuple):
    index: int
    scores: list[LinearFit]
    qualified: bool


def pigment_select(sweeps: Sequence[tuple[Sequence[float], Sequence[float]]],
                   x_range: tuple[float, float] = (1.0, 2.0),
                   min_r2: float = 0.99) -> PigmentSelection:
    """Pick the steepest sweep whose linear fit reaches ``min_r2``.

    Each sweep is a ``(distances, voltages)`` pair. When no sweep qualifies the
    most linear one is returned with ``qualified=False``. Ties go to the lower
    index. Manufacturability is not scored.
    """
    if len(sweeps) == 0:
        raise DataError("no sweeps to choose from")
    scores = [fit_linear(x, v, x_range) for x, v in sweeps]
    candidates = [i for i, s in enumerate(scores) if s.r2 >= min_r2]
    if candidates:
        best = max(candidates, key=lambda i: (scores[i].a, -i))
        return PigmentSelection(best, scores, True)
    best = max(range(len(scores)), key=lambda i: (scores[i].r2, -i))
    return PigmentSelection(best, scores, False)
