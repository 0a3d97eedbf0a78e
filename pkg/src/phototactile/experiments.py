"""Desk-scale versions of the characterization protocols.

Each runner takes a :class:`~phototactile.config.Config` and returns plain
values so the CLI, the acceptance checks and the demo scripts share them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .calibrate import pigment_select
from .config import Config
from .errors import ParameterError
from .optics import LinearOptics, PigmentMix, scale_by_pigment, voltage_at_gap
from .scenarios import (GraspEvent, SimRecord, cyclic, detect_grasp, make_profile, ramp,
                        simulate)
from .signals import (hysteresis_metric, moving_average, phase_lag, repeatability,
                      sensitivity)

MAX_INDENT_MM = 3.0
SPEEDS_MM_S = (0.1, 1.0, 10.0)
SPEED_CYCLES = 5
LAG_DEADZONE_MM = 0.06
REPEAT_CYCLES = 100
PIGMENT_WHITE_FRACTIONS = (1.0, 0.75, 0.5, 0.25, 0.0)


def run_ramp(cfg: Config, speed: float = 1.0, max_indent: float = MAX_INDENT_MM,
             noise_rms: float | None = None) -> SimRecord:
    noise = cfg.noise_rms if noise_rms is None else noise_rms
    return simulate(ramp(speed, max_indent), cfg.geometry, cfg.material, cfg.optics,
                    noise_rms=noise, seed=cfg.seed, config=cfg.to_dict())


def ramp_sensitivity(cfg: Config) -> float:
    """Noise-free least-squares output/force slope on a 3 mm, 1 mm/s ramp."""
    rec = run_ramp(cfg, noise_rms=0.0)
    return sensitivity(rec.force, rec.output)


def full_scale_output(cfg: Config, max_indent: float = MAX_INDENT_MM) -> float:
    """Noise-free output change between rest and ``max_indent``."""
    rec = run_ramp(cfg, max_indent=max_indent, noise_rms=0.0)
    return float(rec.output.samples[-1] - rec.output.samples[0])


@dataclass(frozen=True)
class CycleResult:
    record: SimRecord
    peaks: np.ndarray
    cv: float
    drift: float  # relative change of the last-10 mean peak against the first 10


def run_cycles(cfg: Config, cycles: int = REPEAT_CYCLES, speed: float = 1.0,
               max_indent: float = MAX_INDENT_MM, dwell_s: float = 1.0) -> CycleResult:
    """Repeated loading protocol; peaks are taken from the 9-point filtered output."""
    profile = cyclic(speed, max_indent, cycles, dwell_s)
    rec = simulate(profile, cfg.geometry, cfg.material, cfg.optics, noise_rms=cfg.noise_rms,
                   seed=cfg.seed, config=cfg.to_dict())
    filtered = moving_average(rec.output).samples
    period = 2.0 * (max_indent / speed + dwell_s)
    cycle_idx = np.minimum((rec.time.samples - rec.time.t0) // period, cycles - 1).astype(int)
    peaks = np.full(cycles, -np.inf)
    np.maximum.at(peaks, cycle_idx, filtered)
    n = min(10, cycles)
    first, last = peaks[:n].mean(), peaks[-n:].mean()
    return CycleResult(rec, peaks, repeatability(peaks), float(abs(last - first) / first))


def run_speeds(cfg: Config, speeds=SPEEDS_MM_S, deadzone_mm: float | None = LAG_DEADZONE_MM,
               cycles: int = SPEED_CYCLES, max_indent: float = MAX_INDENT_MM,
               dwell_s: float = 1.0) -> dict[float, float]:
    """Output-behind-force lag (s) for each indentation speed.

    The lag is measured cycle by cycle, since a multi-cycle record correlates
    equally well at whole-period shifts, and the median is reported.
    ``deadzone_mm`` overrides the configured dead zone; ``None`` keeps it.
    """
    mat = cfg.material if deadzone_mm is None else replace(cfg.material,
                                                           deadzone_delta0=deadzone_mm)
    lags = {}
    for speed in speeds:
        rec = simulate(cyclic(speed, max_indent, cycles, dwell_s), cfg.geometry, mat, cfg.optics,
                       noise_rms=cfg.noise_rms, seed=cfg.seed, config=cfg.to_dict())
        output = moving_average(rec.output)
        per_cycle = int(round(2.0 * (max_indent / speed + dwell_s) / rec.time.dt))
        cycle_lags = []
        for c in range(cycles):
            window = slice(c * per_cycle, (c + 1) * per_cycle + 1)
            cycle_lags.append(phase_lag(
                rec.force.with_samples(rec.force.samples[window]),
                output.with_samples(output.samples[window])))
        lags[speed] = float(np.median(cycle_lags))
    return lags


def load_unload_hysteresis(cfg: Config, speed: float = 1.0,
                           max_indent: float = MAX_INDENT_MM) -> float:
    """Noise-free hysteresis metric of one load/unload triangle."""
    rec = simulate(cyclic(speed, max_indent, 1, 0.0), cfg.geometry, cfg.material, cfg.optics,
                   noise_rms=0.0, seed=cfg.seed)
    split = int(np.argmax(rec.indent.samples))
    return hysteresis_metric(rec.force, rec.output, split)


def run_grasp(cfg: Config, seed: int | None = None) -> tuple[SimRecord, list[GraspEvent]]:
    """Grasp, hold and release trace followed by event detection."""
    det = cfg.detector
    rec = simulate(make_profile("hold"), cfg.geometry, cfg.material, cfg.optics,
                   noise_rms=cfg.noise_rms, seed=cfg.seed if seed is None else seed,
                   config=cfg.to_dict())
    events = detect_grasp(rec.output, det.on_threshold, det.off_threshold, det.min_hold_s)
    return rec, events


@dataclass(frozen=True)
class PigmentSweep:
    white_fraction: float
    distances: np.ndarray
    voltages: np.ndarray


def pigment_sweeps(cfg: Config, step_mm: float = 0.05,
                   white_fractions=PIGMENT_WHITE_FRACTIONS) -> list[PigmentSweep]:
    """Distance-voltage tables for each pigment mix over the linear band."""
    base = cfg.base_optics
    if not isinstance(base, LinearOptics):
        raise ParameterError("pigment sweeps need the linear optical model", field="optics.variant")
    n = int(round((base.x_max - base.x_min) / step_mm)) + 1
    x = np.linspace(base.x_min, base.x_max, n)
    out = []
    for w in white_fractions:
        model = scale_by_pigment(base, PigmentMix(w, cfg.pigment.rho_black),
                                 cfg.ref_white_fraction)
        out.append(PigmentSweep(w, x, np.asarray(voltage_at_gap(x, model))))
    return out


def select_pigment(sweeps: list[PigmentSweep], min_r2: float = 0.99):
    return pigment_select([(s.distances, s.voltages) for s in sweeps], min_r2=min_r2)
