"""Reduced-order compression model of the silicone body.

The body is treated as a homogeneous incompressible Mooney-Rivlin block under
uniform uniaxial compression. The top face is pushed down by the probe, the
side faces bulge outward, and the side facing the photoreflector closes the
optical gap.

Units: lengths in mm, stresses in MPa (= N/mm^2), forces in N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError, ParameterError, SaturationError

#: Mooney-Rivlin constants of the Ecoflex body (MPa).
C10_DEFAULT = -3.335e-5
C01_DEFAULT = 1.218e-2


@dataclass(frozen=True)
class MaterialParams:
    """Hyperelastic constants and rate/contact extensions of the silicone body.

    Attributes
    ----------
    c10, c01 : float
        Mooney-Rivlin constants (MPa).
    damping_c : float
        Viscous force coefficient (N s/mm), applied to the loading rate only.
    deadzone_delta0 : float
        Probe travel (mm) the skin in front of the module trails behind the
        probe. Zero disables it.
    """

    c10: float = C10_DEFAULT
    c01: float = C01_DEFAULT
    damping_c: float = 0.0
    deadzone_delta0: float = 0.0

    def __post_init__(self):
        if not self.shear_modulus > 0:
            raise ParameterError("2*(c10 + c01) must be positive", field="c10")
        if not self.damping_c >= 0:
            raise ParameterError("damping_c must be >= 0", field="damping_c")
        if not self.deadzone_delta0 >= 0:
            raise ParameterError("deadzone_delta0 must be >= 0", field="deadzone_delta0")

    @property
    def shear_modulus(self) -> float:
        """Small-strain shear modulus 2*(c10 + c01) in MPa."""
        return 2.0 * (self.c10 + self.c01)


@dataclass(frozen=True)
class SensorGeometry:
    """Body dimensions and optical coupling of the prototype (mm)."""

    height_mm: float = 20.0
    width_mm: float = 22.0
    depth_mm: float = 22.0
    gap0_mm: float = 2.0
    kappa: float = 0.3

    def __post_init__(self):
        for name in ("height_mm", "width_mm", "depth_mm", "gap0_mm"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive", field=name)
        if not 0 < self.kappa <= 1:
            raise ParameterError("kappa must lie in (0, 1]", field="kappa")

    @property
    def cross_section(self) -> float:
        """Undeformed load-bearing area (mm^2)."""
        return self.width_mm * self.depth_mm


@dataclass(frozen=True)
class DeformationState:
    """Kinematics of the compressed body at one indentation.

    Fields may be scalars or equally shaped arrays.
    ``stretch * transverse_stretch**2 == 1`` holds by construction.
    """

    indent_mm: float | np.ndarray
    stretch: float | np.ndarray
    transverse_stretch: float | np.ndarray
    gap_mm: float | np.ndarray


def _as_output(x: np.ndarray):
    return x.item() if x.ndim == 0 else x


def _check_stretch(stretch) -> np.ndarray:
    lam = np.asarray(stretch, dtype=float)
    if np.any(~(lam > 0)):
        raise DomainError("stretch must be positive")
    return lam


def _check_indent(indent_mm, geom: SensorGeometry) -> np.ndarray:
    d = np.asarray(indent_mm, dtype=float)
    if np.any(~(d >= 0)):
        raise DomainError("indentation must be non-negative")
    if np.any(d >= geom.height_mm):
        raise GeometryError(
            f"indentation must be smaller than the body height ({geom.height_mm} mm)")
    return d


def strain_energy(stretch, mat: MaterialParams):
    """Mooney-Rivlin strain-energy density (MPa) under incompressible uniaxial stretch.

    W = c10 (I1 - 3) + c01 (I2 - 3) with I1 = l^2 + 2/l and I2 = l^-2 + 2 l.
    The invariants are evaluated in factored form to avoid cancellation near l = 1.
    """
    lam = _check_stretch(stretch)
    sq = (lam - 1.0) ** 2
    i1_excess = sq * (lam + 2.0) / lam
    i2_excess = sq * (2.0 * lam + 1.0) / lam**2
    return _as_output(mat.c10 * i1_excess + mat.c01 * i2_excess)


def nominal_stress(stretch, mat: MaterialParams):
    """First Piola-Kirchhoff stress (MPa), negative in compression.

    Closed-form derivative of :func:`strain_energy` with respect to stretch.
    """
    lam = _check_stretch(stretch)
    return _as_output(2.0 * (lam - lam**-2) * (mat.c10 + mat.c01 / lam))


def axial_force(indent_mm, rate_mm_s, geom: SensorGeometry, mat: MaterialParams):
    """Magnitude of the compressive reaction force (N).

    Parameters
    ----------
    indent_mm : float or array
        Probe indentation, ``0 <= indent < height``.
    rate_mm_s : float or array
        Indentation rate; only loading (positive) rates add a viscous term.
    """
    d = _check_indent(indent_mm, geom)
    lam = (geom.height_mm - d) / geom.height_mm
    elastic = np.abs(2.0 * (lam - lam**-2) * (mat.c10 + mat.c01 / lam)) * geom.cross_section
    viscous = mat.damping_c * np.maximum(np.asarray(rate_mm_s, dtype=float), 0.0)
    return _as_output(np.asarray(elastic + viscous))


def gap_profile(indent_mm, geom: SensorGeometry) -> np.ndarray:
    """Optical gap (mm) without validity checks; may go non-positive."""
    lam = (geom.height_mm - np.asarray(indent_mm, dtype=float)) / geom.height_mm
    bulge = 0.5 * geom.width_mm * (lam**-0.5 - 1.0)
    return geom.gap0_mm - geom.kappa * bulge


def lateral_gap(indent_mm, geom: SensorGeometry) -> DeformationState:
    """Deformation state and remaining optical gap at an indentation.

    Raises
    ------
    SaturationError
        If the bulging side reaches the photoreflector (gap <= 0).
    """
    d = _check_indent(indent_mm, geom)
    lam = (geom.height_mm - d) / geom.height_mm
    lam_t = lam**-0.5
    gap = geom.gap0_mm - geom.kappa * 0.5 * geom.width_mm * (lam_t - 1.0)
    if np.any(gap <= 0):
        first = float(np.atleast_1d(d)[np.argmax(np.atleast_1d(gap) <= 0)])
        raise SaturationError(f"optical gap closed at indentation {first:.6g} mm")
    return DeformationState(
        indent_mm=_as_output(d),
        stretch=_as_output(lam),
        transverse_stretch=_as_output(lam_t),
        gap_mm=_as_output(gap),
    )
