from dataclasses import replace

import numpy as np
import pytest

from phototactile.config import Config
from phototactile.errors import ParameterError
from phototactile.experiments import (full_scale_output, load_unload_hysteresis,
                                      pigment_sweeps, ramp_sensitivity, run_cycles, run_grasp,
                                      run_speeds, select_pigment)
from phototactile.mechanics import MaterialParams
from phototactile.optics import LookupOptics

CFG = Config()


def test_ramp_sensitivity_value():
    assert ramp_sensitivity(CFG) == pytest.approx(0.073427125525, rel=1e-6)


def test_full_scale_output():
    assert full_scale_output(CFG) == pytest.approx(0.541217638135, rel=1e-9)


def test_lag_at_slowest_speed_is_deadzone_over_speed():
    lags = run_speeds(CFG, speeds=(0.1,), cycles=1)
    assert lags[0.1] == pytest.approx(0.06 / 0.1, abs=0.01)


def test_lag_without_deadzone_is_small():
    lags = run_speeds(CFG, speeds=(1.0,), deadzone_mm=0.0, cycles=1)
    assert abs(lags[1.0]) <= 0.005


def test_damping_opens_hysteresis():
    damped = replace(CFG, material=MaterialParams(damping_c=0.5))
    assert load_unload_hysteresis(damped) > 1e-3
    assert load_unload_hysteresis(CFG) < 1e-6


def test_cycles_peaks():
    res = run_cycles(CFG, cycles=4)
    assert res.peaks.shape == (4,)
    np.testing.assert_allclose(res.peaks, 0.5412, atol=0.02)


def test_grasp_seed_override():
    a, _ = run_grasp(CFG, seed=3)
    b, _ = run_grasp(replace(CFG, seed=3))
    assert np.array_equal(a.voltage.samples, b.voltage.samples)


def test_pigment_choice_is_whitest_linear_mix():
    sweeps = pigment_sweeps(CFG)
    assert [s.white_fraction for s in sweeps] == [1.0, 0.75, 0.5, 0.25, 0.0]
    assert select_pigment(sweeps).index == 0


def test_pigment_sweeps_need_linear_optics():
    cfg = replace(CFG, base_optics=LookupOptics((1.0, 2.0), (0.0, 1.0)))
    with pytest.raises(ParameterError):
        pigment_sweeps(cfg)
