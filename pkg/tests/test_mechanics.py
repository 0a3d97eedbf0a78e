"""Hyperelastic body model.

Reference values below were produced by an independent 40-digit evaluation
of the Mooney-Rivlin invariants (mpmath) and frozen here.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from phototactile.errors import DomainError, GeometryError, ParameterError, SaturationError
from phototactile.mechanics import (MaterialParams, SensorGeometry, axial_force, gap_profile,
                                    lateral_gap, nominal_stress, strain_energy)

MAT = MaterialParams()
GEOM = SensorGeometry()

# frozen oracle values
W_085 = 1.02161552465e-3
W_110 = 3.21175838843e-4
P_085 = -1.52705683971e-2
P_110 = 6.03972541698e-3
F_3MM = 7.3909551042
F_15MM = 3.09884450355
GAP_3MM_K1 = 1.06882481997
GAP_3MM_K03 = 1.72064744599


def naive_energy(lam, c10=MAT.c10, c01=MAT.c01):
    i1 = lam**2 + 2.0 / lam
    i2 = lam**-2 + 2.0 * lam
    return c10 * (i1 - 3.0) + c01 * (i2 - 3.0)


class TestStrainEnergy:
    def test_reference_state_is_zero(self):
        assert strain_energy(1.0, MAT) == 0.0

    @pytest.mark.parametrize("lam, expected", [(0.85, W_085), (1.1, W_110)])
    def test_oracle_values(self, lam, expected):
        assert strain_energy(lam, MAT) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("lam", [0.85, 1.1])
    def test_matches_integrated_stress(self, lam):
        integral, _ = quad(lambda x: nominal_stress(x, MAT), 1.0, lam, epsabs=1e-15)
        assert strain_energy(lam, MAT) == pytest.approx(integral, rel=1e-9)

    def test_agrees_with_direct_invariants_away_from_one(self):
        lam = np.linspace(0.7, 1.3, 61)
        lam = lam[np.abs(lam - 1) > 0.05]
        np.testing.assert_allclose(strain_energy(lam, MAT), naive_energy(lam), rtol=1e-10)

    def test_array_shape_kept(self):
        assert strain_energy(np.ones((2, 3)), MAT).shape == (2, 3)

    @pytest.mark.parametrize("lam", [0.0, -0.5, np.nan])
    def test_rejects_non_positive(self, lam):
        with pytest.raises(DomainError):
            strain_energy(lam, MAT)


class TestNominalStress:
    def test_stress_free_reference(self):
        assert nominal_stress(1.0, MAT) == 0.0

    @pytest.mark.parametrize("lam, expected", [(0.85, P_085), (1.1, P_110)])
    def test_oracle_values(self, lam, expected):
        assert nominal_stress(lam, MAT) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("lam", [0.85, 1.1])
    def test_finite_difference_of_energy(self, lam):
        h = 1e-6
        fd = (strain_energy(lam + h, MAT) - strain_energy(lam - h, MAT)) / (2 * h)
        assert nominal_stress(lam, MAT) == pytest.approx(fd, rel=1e-6)

    def test_consistent_with_energy_on_loaded_grid(self):
        lam = np.linspace(0.7, 1.3, 601)
        lam = lam[lam != 1.0]
        h = 1e-6
        fd = (strain_energy(lam + h, MAT) - strain_energy(lam - h, MAT)) / (2 * h)
        p = nominal_stress(lam, MAT)
        assert np.max(np.abs(p - fd) / np.abs(p)) < 1e-5

    def test_sign_convention(self):
        assert nominal_stress(0.9, MAT) < 0 < nominal_stress(1.05, MAT)


class TestAxialForce:
    def test_no_indent_no_force(self):
        assert axial_force(0.0, 0.0, GEOM, MAT) == 0.0

    @pytest.mark.parametrize("d, expected", [(3.0, F_3MM), (1.5, F_15MM)])
    def test_oracle_values(self, d, expected):
        assert axial_force(d, 0.0, GEOM, MAT) == pytest.approx(expected, rel=1e-9)

    def test_rounded_reference_values(self):
        assert round(axial_force(3.0, 0.0, GEOM, MAT), 2) == 7.39
        assert round(axial_force(1.5, 0.0, GEOM, MAT), 2) == 3.10

    def test_monotone_on_grid(self):
        d = np.arange(0, 61) * 0.05
        f = axial_force(d, 0.0, GEOM, MAT)
        assert np.all(np.diff(f) > 0)

    @given(st.floats(0, 19.9), st.floats(0, 50))
    def test_rate_superposition(self, d, r):
        mat = MaterialParams(damping_c=0.37)
        total = axial_force(d, r, GEOM, mat)
        extra = total - axial_force(d, 0.0, GEOM, mat)
        # exact up to the rounding of the final sum
        assert abs(extra - 0.37 * r) <= 2 * np.spacing(total)

    def test_unloading_rate_adds_nothing(self):
        mat = MaterialParams(damping_c=0.5)
        assert axial_force(2.0, -3.0, GEOM, mat) == axial_force(2.0, 0.0, GEOM, mat)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            axial_force(-0.1, 0.0, GEOM, MAT)
        with pytest.raises(GeometryError):
            axial_force(20.0, 0.0, GEOM, MAT)


class TestLateralGap:
    def test_identity_at_rest(self):
        s = lateral_gap(0.0, GEOM)
        assert s.gap_mm == GEOM.gap0_mm
        assert s.stretch == 1.0 and s.transverse_stretch == 1.0

    @pytest.mark.parametrize("kappa, expected", [(1.0, GAP_3MM_K1), (0.3, GAP_3MM_K03)])
    def test_oracle_values(self, kappa, expected):
        s = lateral_gap(3.0, SensorGeometry(kappa=kappa))
        assert s.gap_mm == pytest.approx(expected, rel=1e-10)

    @given(st.floats(0, 5.0))
    def test_incompressible(self, d):
        s = lateral_gap(d, GEOM)
        assert s.stretch * s.transverse_stretch**2 == pytest.approx(1.0, rel=4e-16, abs=4e-16)

    def test_gap_strictly_decreasing(self):
        d = np.arange(0, 61) * 0.05
        assert np.all(np.diff(lateral_gap(d, GEOM).gap_mm) < 0)

    def test_saturation(self):
        geom = SensorGeometry(kappa=1.0)
        with pytest.raises(SaturationError):
            lateral_gap(8.0, geom)
        assert gap_profile(8.0, geom) < 0

    def test_array_and_scalar_agree(self):
        d = np.array([0.5, 1.0, 2.5])
        arr = lateral_gap(d, GEOM).gap_mm
        assert [lateral_gap(x, GEOM).gap_mm for x in d] == pytest.approx(arr, rel=0, abs=0)


class TestParameters:
    def test_defaults(self):
        assert (MAT.c10, MAT.c01) == (-3.335e-5, 1.218e-2)
        assert GEOM.cross_section == 484.0

    @pytest.mark.parametrize("kwargs", [{"kappa": 0.0}, {"kappa": 1.5}, {"height_mm": 0},
                                        {"gap0_mm": -1}])
    def test_bad_geometry(self, kwargs):
        with pytest.raises(ParameterError):
            SensorGeometry(**kwargs)

    @pytest.mark.parametrize("kwargs", [{"c10": -1.0}, {"damping_c": -0.1},
                                        {"deadzone_delta0": -0.01}])
    def test_bad_material(self, kwargs):
        with pytest.raises(ParameterError):
            MaterialParams(**kwargs)
