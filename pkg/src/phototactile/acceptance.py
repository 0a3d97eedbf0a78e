"""Exit criteria for the digital twin, runnable from the CLI and from pytest.

Every check returns a :class:`CriterionResult` carrying the measured values
so reports can show how close each one came to its limit.
"""

from __future__ import annotations

import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .calibrate import fit_force_voltage
from .config import Config
from .estimate import estimate_forces
from .experiments import (LAG_DEADZONE_MM, full_scale_output, load_unload_hysteresis,
                          run_cycles, run_grasp, run_ramp, run_speeds)
from .mechanics import axial_force, gap_profile, nominal_stress, strain_energy
from .optics import LinearOptics, fit_linear, voltage_at_gap
from .signals import dynamic_range, sensitivity

# Reference values of the reduced-order model with prototype defaults.
PEAK_FORCE_N = 7.39
SECANT_SENSITIVITY_V_N = 0.0732
# Least-squares slope over the 0-3 mm ramp, evaluated in closed form on a dense grid.
LS_SENSITIVITY_V_N = 0.0734271
FULL_SCALE_V = 0.5412
DYNAMIC_RANGE_DB = 31.50
LAG_BANDS_S = {0.1: (0.49, 0.92), 1.0: (0.043, 0.081), 10.0: (0.0035, 0.0065)}
GRASP_SEEDS = 100


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)

    def line(self) -> str:
        values = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.name}: {values}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    return str(v)


def _no_deadzone(cfg: Config) -> Config:
    return replace(cfg, material=replace(cfg.material, deadzone_delta0=0.0))


def peak_force(cfg: Config) -> CriterionResult:
    rec = run_ramp(_no_deadzone(cfg), noise_rms=0.0)
    f = float(rec.force.samples[-1])
    ok = 5.2 <= f <= 9.2 and abs(f - PEAK_FORCE_N) <= 1e-3 * PEAK_FORCE_N
    return CriterionResult(1, "peak force at 3 mm", ok, {"force_n": f})


def ramp_sensitivity(cfg: Config) -> CriterionResult:
    rec = run_ramp(_no_deadzone(cfg), noise_rms=0.0)
    slope = sensitivity(rec.force, rec.output)
    secant = float(rec.output.samples[-1] / rec.force.samples[-1])
    ok = (0.060 <= slope <= 0.085
          and abs(slope - LS_SENSITIVITY_V_N) <= 1e-3 * LS_SENSITIVITY_V_N
          and abs(secant - SECANT_SENSITIVITY_V_N) <= 1e-3 * SECANT_SENSITIVITY_V_N)
    return CriterionResult(2, "sensitivity", ok, {"ls_slope_v_per_n": slope,
                                                  "secant_v_per_n": secant})


def dynamic_range_check(cfg: Config) -> CriterionResult:
    fs = full_scale_output(_no_deadzone(cfg))
    db = dynamic_range(fs, cfg.noise_rms)
    db_nominal = dynamic_range(FULL_SCALE_V, cfg.noise_rms)
    ok = abs(db - DYNAMIC_RANGE_DB) <= 0.05 and abs(db_nominal - DYNAMIC_RANGE_DB) <= 0.05
    return CriterionResult(3, "dynamic range", ok, {"full_scale_v": fs, "db": db,
                                                    "db_at_0.5412": db_nominal})


def linear_band(cfg: Config) -> CriterionResult:
    d = np.linspace(0.0, 3.0, 3001)
    spans = {}
    ok = True
    for kappa in (0.3, 1.0):
        gap = gap_profile(d, replace(cfg.geometry, kappa=kappa))
        spans[f"kappa={kappa}"] = (float(gap.min()), float(gap.max()))
        ok &= bool(gap.min() >= 1.0 and gap.max() <= 2.0)
    return CriterionResult(4, "gap stays in 1-2 mm band", ok,
                           {k: f"[{lo:.5f}, {hi:.5f}]" for k, (lo, hi) in spans.items()})


def phase_lags(cfg: Config) -> CriterionResult:
    lags = run_speeds(cfg, deadzone_mm=LAG_DEADZONE_MM)
    ok = all(LAG_BANDS_S[v][0] <= lag <= LAG_BANDS_S[v][1] for v, lag in lags.items())
    return CriterionResult(5, "phase lag vs speed", ok,
                           {f"{v:g}mm/s": lag for v, lag in lags.items()})


def hysteresis(cfg: Config) -> CriterionResult:
    elastic = _no_deadzone(replace(cfg, material=replace(cfg.material, damping_c=0.0)))
    h = load_unload_hysteresis(elastic)
    return CriterionResult(6, "hysteresis (elastic)", h < 1e-6, {"metric": h})


def repeatability_check(cfg: Config) -> CriterionResult:
    res = run_cycles(_no_deadzone(cfg))
    ok = res.cv < 0.02 and res.drift < 0.01
    return CriterionResult(7, "100-cycle repeatability", ok, {"cv": res.cv, "drift": res.drift})


def energy_stress(cfg: Config) -> CriterionResult:
    lam = np.linspace(0.7, 1.3, 601)
    h = 1e-6
    fd = (strain_energy(lam + h, cfg.material) - strain_energy(lam - h, cfg.material)) / (2 * h)
    p = nominal_stress(lam, cfg.material)
    rel = np.abs(p - fd) / np.maximum(np.abs(p), 1e-9)
    err = float(rel.max())
    stress_free = np.abs(p) < 1e-9
    return CriterionResult(8, "energy-stress consistency", err < 1e-5, {
        "max_rel_err": err,
        "worst_stretch": float(lam[np.argmax(rel)]),
        "max_rel_err_loaded": float(rel[~stress_free].max()),
        "abs_err_stress_free": float(np.abs(p - fd)[stress_free].max(initial=0.0)),
    })


def estimator_roundtrip(cfg: Config) -> CriterionResult:
    c = _no_deadzone(cfg)
    d = np.linspace(0.2, 3.0, 15)
    true = np.asarray(axial_force(d, 0.0, c.geometry, c.material))
    v = np.asarray(voltage_at_gap(gap_profile(d, c.geometry), c.optics))
    est, _, _ = estimate_forces(v, c.geometry, c.material, c.optics)
    full = float(axial_force(3.0, 0.0, c.geometry, c.material))
    err = float(np.max(np.abs(est - true)) / full)
    return CriterionResult(9, "estimator roundtrip", err < 0.01, {"max_err_fs": err})


def calibration_recovery(cfg: Config) -> CriterionResult:
    eq = LinearOptics()
    x = np.array([1.0, 1.25, 1.5, 1.75, 2.0])
    fit = fit_linear(x, eq.a * x + eq.b)
    f = np.array([0.0, 2.5, 5.0, 7.5])
    curve = fit_force_voltage(f, 0.0732 * f + 0.01, degree=1)
    err_opt = max(abs(fit.a - 1.9374), abs(fit.b + 1.8875))
    err_cal = max(abs(curve.coefficients[0] - 0.01), abs(curve.coefficients[1] - 0.0732))
    ok = err_opt <= 1e-9 and err_cal <= 1e-9
    return CriterionResult(10, "calibration recovery", ok,
                           {"optics_err": err_opt, "curve_err": err_cal, "r2": fit.r2})


def grasp_detection(cfg: Config, seeds: int = GRASP_SEEDS) -> CriterionResult:
    bad = []
    for seed in range(seeds):
        _, events = run_grasp(cfg, seed=seed)
        if [e.kind for e in events] != ["grasp", "release"]:
            bad.append(seed)
    return CriterionResult(11, "grasp detection over seeds", not bad,
                           {"seeds": seeds, "failing_seeds": bad[:10]})


def _snapshot(path: Path) -> bytes | dict:
    if path.is_dir():
        return {p.name: p.read_bytes() for p in sorted(path.iterdir())}
    return path.read_bytes()


def determinism(cfg: Config) -> CriterionResult:
    """Run every file-writing subcommand twice and compare the outputs byte for byte."""
    from .cli import main

    identical = {}
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        cfg_path = tmp / "config.json"
        cfg_path.write_text(cfg.to_json())
        run0 = tmp / "simulate0.csv"
        runs = {
            "simulate": ["simulate", "--profile", "ramp"],
            "cycle": ["cycle", "--cycles", "3"],
            "grasp": ["grasp"],
            "sweep": ["sweep"],
            "estimate": ["estimate", "--in", str(run0)],
            "calibrate": ["calibrate", "--in", str(run0)],
        }
        for name, args in runs.items():
            outputs = []
            for k in range(2):
                out = tmp / f"{name}{k}.csv"
                status = main([*args, "--config", str(cfg_path), "--out", str(out)], quiet=True)
                outputs.append(_snapshot(out) if status == 0 else None)
            identical[name] = outputs[0] is not None and outputs[0] == outputs[1]
    return CriterionResult(12, "byte-identical reruns", all(identical.values()), identical)


CRITERIA: list[Callable[[Config], CriterionResult]] = [
    peak_force, ramp_sensitivity, dynamic_range_check, linear_band, phase_lags, hysteresis,
    repeatability_check, energy_stress, estimator_roundtrip, calibration_recovery,
    grasp_detection, determinism,
]


def run_all(cfg: Config) -> list[CriterionResult]:
    return [check(cfg) for check in CRITERIA]
