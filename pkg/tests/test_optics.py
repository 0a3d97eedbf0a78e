import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phototactile.errors import InsufficientDataError, ParameterError, RangeError, RangeWarning
from phototactile.optics import (LinearOptics, LookupOptics, PigmentMix, fit_linear,
                                 gap_at_voltage, read_sweep_csv, reflectance, scale_by_pigment,
                                 voltage_at_gap, voltage_image, write_sweep_csv)

EQ = LinearOptics()


class TestLinearOptics:
    @pytest.mark.parametrize("x, v", [(2.0, 1.9873), (1.0, 0.0499)])
    def test_published_line(self, x, v):
        assert voltage_at_gap(x, EQ) == pytest.approx(v, abs=1e-12)

    def test_root_lies_below_band(self):
        root = 1.8875 / 1.9374
        assert round(root, 4) == 0.9742
        assert EQ.a * root + EQ.b == pytest.approx(0.0, abs=1e-15)
        with pytest.raises(RangeError):
            voltage_at_gap(root, EQ)

    @pytest.mark.parametrize("v, x", [(1.9873, 2.0), (0.0499, 1.0),
                                      (1.4461, (1.4461 + 1.8875) / 1.9374)])
    def test_inverse(self, v, x):
        assert gap_at_voltage(v, EQ) == pytest.approx(x, abs=1e-12)

    def test_roundtrip_grid(self):
        x = np.linspace(1.0, 2.0, 100)
        np.testing.assert_allclose(gap_at_voltage(voltage_at_gap(x, EQ), EQ), x, atol=1e-9, rtol=0)

    def test_strictly_increasing(self):
        v = voltage_at_gap(np.linspace(1.0, 2.0, 500), EQ)
        assert np.all(np.diff(v) > 0)

    def test_out_of_range_error(self):
        with pytest.raises(RangeError):
            voltage_at_gap(2.5, EQ)
        with pytest.raises(RangeError):
            gap_at_voltage(3.0, EQ)

    def test_clamp_policy_warns(self):
        model = LinearOptics(out_of_range="clamp")
        with pytest.warns(RangeWarning):
            assert voltage_at_gap(2.5, model) == voltage_at_gap(2.0, model)
        with pytest.warns(RangeWarning):
            assert gap_at_voltage(-1.0, model) == pytest.approx(1.0)

    @pytest.mark.parametrize("kwargs", [{"a": 0.0}, {"a": -1.0}, {"x_min": 2.0},
                                        {"out_of_range": "wrap"}])
    def test_bad_parameters(self, kwargs):
        with pytest.raises(ParameterError):
            LinearOptics(**kwargs)


class TestLookupOptics:
    def table(self):
        x = np.linspace(0.5, 3.0, 11)
        return LookupOptics(tuple(x), tuple(np.sqrt(x)))

    def test_hits_table_points(self):
        model = self.table()
        x = np.array(model.distances)
        np.testing.assert_allclose(voltage_at_gap(x, model), model.voltages, rtol=1e-14)

    def test_roundtrip_grid(self):
        model = self.table()
        x = np.linspace(0.5, 3.0, 100)
        np.testing.assert_allclose(gap_at_voltage(voltage_at_gap(x, model), model), x,
                                   atol=1e-9, rtol=0)

    def test_monotone_between_nodes(self):
        model = self.table()
        v = voltage_at_gap(np.linspace(0.5, 3.0, 2000), model)
        assert np.all(np.diff(v) > 0)

    def test_rejects_non_monotone_table(self):
        with pytest.raises(ParameterError):
            LookupOptics((1.0, 2.0, 3.0), (0.1, 0.3, 0.2))

    def test_csv_roundtrip(self, tmp_path):
        path = tmp_path / "sweep.csv"
        x = np.linspace(1.0, 2.0, 5)
        write_sweep_csv(path, x, EQ.a * x + EQ.b)
        assert path.read_text().splitlines()[0] == "distance_mm,voltage_v"
        model = LookupOptics.from_csv(path)
        assert voltage_image(model) == pytest.approx(voltage_image(EQ), abs=1e-8)

    def test_csv_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,v\n1,2\n")
        with pytest.raises(ParameterError):
            read_sweep_csv(path)


class TestPigment:
    def test_reflectance_endpoints(self):
        assert reflectance(1.0, 0.25) == 1.0
        assert reflectance(0.0, 0.25) == 0.25
        assert PigmentMix().reflectance == pytest.approx(0.8125)

    def test_reference_mix_is_identity(self):
        model = scale_by_pigment(EQ, PigmentMix(0.75), 0.75)
        assert model.a == pytest.approx(1.9374, rel=1e-15)
        assert model.b == pytest.approx(-1.8875, rel=1e-14)

    @pytest.mark.parametrize("w, slope", [(1.0, 2.3845), (0.0, 0.5961)])
    def test_scaled_slopes(self, w, slope):
        assert scale_by_pigment(EQ, PigmentMix(w, 0.25)).a == pytest.approx(slope, abs=5e-5)

    @given(st.floats(0, 1), st.floats(1.0, 2.0), st.floats(1.0, 2.0))
    def test_differences_scale_by_reflectance(self, w, x1, x2):
        mix = PigmentMix(w, 0.25)
        model = scale_by_pigment(EQ, mix)
        ratio = mix.reflectance / PigmentMix(0.75, 0.25).reflectance
        got = voltage_at_gap(x2, model) - voltage_at_gap(x1, model)
        ref = voltage_at_gap(x2, EQ) - voltage_at_gap(x1, EQ)
        assert got == pytest.approx(ratio * ref, rel=1e-9, abs=1e-12)

    def test_ordering_white_is_steepest(self):
        slopes = [scale_by_pigment(EQ, PigmentMix(w)).a for w in (1.0, 0.75, 0.5, 0.25, 0.0)]
        assert slopes == sorted(slopes, reverse=True)

    def test_needs_linear_base(self):
        with pytest.raises(ParameterError):
            scale_by_pigment(LookupOptics((1.0, 2.0), (0.0, 1.0)), PigmentMix())


class TestFitLinear:
    def test_recovers_published_line(self):
        x = np.array([1.0, 1.25, 1.5, 1.75, 2.0])
        fit = fit_linear(x, EQ.a * x + EQ.b)
        assert abs(fit.a - 1.9374) <= 1e-9 and abs(fit.b + 1.8875) <= 1e-9
        assert fit.r2 == pytest.approx(1.0, abs=1e-12)

    def test_constant_distance(self):
        with pytest.raises(InsufficientDataError):
            fit_linear([1.5, 1.5, 1.5], [0.1, 0.2, 0.3])

    def test_symmetric_noise_keeps_slope(self):
        x = np.array([1.0, 1.25, 1.5, 1.75, 2.0])
        v = EQ.a * x + EQ.b
        v[0] += 0.01
        v[-1] += 0.01
        v[1] -= 0.01
        v[3] -= 0.01
        assert fit_linear(x, v).a == pytest.approx(1.9374, abs=1e-12)

    def test_ignores_samples_outside_range(self):
        x = np.array([0.5, 1.0, 1.5, 2.0, 2.5])
        v = EQ.a * x + EQ.b
        v[[0, -1]] = 100.0
        assert fit_linear(x, v).a == pytest.approx(1.9374, abs=1e-12)

    @given(st.floats(0.1, 10), st.floats(-5, 5))
    def test_recovers_any_line(self, a, b):
        x = np.linspace(1.0, 2.0, 21)
        fit = fit_linear(x, a * x + b)
        assert abs(fit.a - a) <= 1e-9 and abs(fit.b - b) <= 1e-9

    def test_warning_free_on_clean_data(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            fit_linear([1.0, 2.0], [0.0, 1.0])
