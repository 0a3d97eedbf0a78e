"""Motion profiles, the forward simulator and grasp-event detection."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ParameterError, RangeError, SimulationError
from .mechanics import MaterialParams, SensorGeometry, axial_force, gap_profile
from .optics import OpticalModel, voltage_at_gap
from .signals import FILTER_POINTS, SAMPLE_PERIOD_S, TimeSeries, invert_output, moving_average

NOISE_RMS_DEFAULT = 0.0144
RECORD_HEADER = ("time_s", "indent_mm", "force_n", "voltage_v", "output_v")


@dataclass(frozen=True)
class MotionProfile:
    """Piecewise-linear indentation schedule ``(time s, indent mm)``."""

    times: tuple[float, ...]
    indents: tuple[float, ...]

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        d = np.asarray(self.indents, dtype=float)
        if t.ndim != 1 or t.shape != d.shape or t.size < 1:
            raise ParameterError("times and indents must be equal-length 1-D sequences",
                                 field="breakpoints")
        if np.any(np.diff(t) <= 0):
            raise ParameterError("breakpoint times must strictly increase", field="times")
        if np.any(d < 0):
            raise ParameterError("indentations must be non-negative", field="indents")
        if d[0] != 0:
            raise ParameterError("profile must start at zero indentation", field="indents")
        object.__setattr__(self, "times", tuple(float(x) for x in t))
        object.__setattr__(self, "indents", tuple(float(x) for x in d))

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        return list(zip(self.times, self.indents))

    @property
    def duration(self) -> float:
        return self.times[-1] - self.times[0]

    @property
    def peak_speed(self) -> float:
        """Largest absolute segment slope (mm/s); 0 for a motionless profile."""
        if len(self.times) < 2:
            return 0.0
        return float(np.max(np.abs(np.diff(self.indents) / np.diff(self.times))))

    def indent_at(self, t) -> np.ndarray:
        return np.interp(t, self.times, self.indents)

    def rate_at(self, t) -> np.ndarray:
        """Right-hand derivative of the indentation (mm/s)."""
        t = np.asarray(t, dtype=float)
        times = np.asarray(self.times)
        if times.size < 2:
            return np.zeros_like(t)
        slopes = np.diff(self.indents) / np.diff(times)
        seg = np.searchsorted(times, t, side="right") - 1
        inside = (seg >= 0) & (seg < slopes.size)
        return np.where(inside, slopes[np.clip(seg, 0, slopes.size - 1)], 0.0)


def ramp(speed: float, max_indent: float) -> MotionProfile:
    """Single loading ramp at constant speed."""
    _check_motion(speed, max_indent)
    return MotionProfile((0.0, max_indent / speed), (0.0, max_indent))


def cyclic(speed: float, max_indent: float, cycles: int, dwell_s: float = 1.0) -> MotionProfile:
    """Repeated load/unload triangles with a dwell at the top and at rest.

    One cycle is ramp up, dwell, ramp down, dwell. Zero dwell gives a
    triangle wave.
    """
    _check_motion(speed, max_indent)
    if int(cycles) != cycles or cycles < 1:
        raise ParameterError("cycles must be a positive integer", field="cycles")
    if not dwell_s >= 0:
        raise ParameterError("dwell must be >= 0", field="dwell_s")
    ramp_s = max_indent / speed
    times, indents = [0.0], [0.0]

    def add(dt, d):
        if dt > 0:
            times.append(times[-1] + dt)
            indents.append(d)

    for _ in range(int(cycles)):
        add(ramp_s, max_indent)
        add(dwell_s, max_indent)
        add(ramp_s, 0.0)
        add(dwell_s, 0.0)
    return MotionProfile(tuple(times), tuple(indents))


def hold(levels: Sequence[tuple[float, float]], speed: float = 2.0,
         lead_s: float = 1.0) -> MotionProfile:
    """Grasp-style trace: rest for ``lead_s``, then move at ``speed`` to each
    ``(indent_mm, hold_s)`` level and stay there for ``hold_s``."""
    if not speed > 0:
        raise ParameterError("speed must be positive", field="speed")
    if not lead_s >= 0:
        raise ParameterError("lead time must be >= 0", field="lead_s")
    times, indents = [0.0], [0.0]
    if lead_s > 0:
        times.append(lead_s)
        indents.append(0.0)
    for level, duration in levels:
        if not level >= 0 or not duration >= 0:
            raise ParameterError("hold levels and durations must be >= 0", field="levels")
        move = abs(level - indents[-1]) / speed
        if move > 0:
            times.append(times[-1] + move)
            indents.append(float(level))
        if duration > 0:
            times.append(times[-1] + duration)
            indents.append(float(level))
    return MotionProfile(tuple(times), tuple(indents))


GRASP_LEVELS = ((2.0, 3.0), (0.0, 2.0))


def make_profile(kind: str, speed: float = 1.0, max_indent: float = 3.0, cycles: int = 1,
                 dwell_s: float = 1.0, levels: Sequence[tuple[float, float]] = GRASP_LEVELS,
                 lead_s: float = 1.0) -> MotionProfile:
    """Build a ``"ramp"``, ``"cyclic"`` or ``"hold"`` profile by name."""
    if kind == "ramp":
        return ramp(speed, max_indent)
    if kind == "cyclic":
        return cyclic(speed, max_indent, cycles, dwell_s)
    if kind == "hold":
        return hold(levels, speed, lead_s)
    raise ParameterError(f"unknown profile kind {kind!r}", field="profile")


def _check_motion(speed, max_indent):
    if not speed > 0:
        raise ParameterError("speed must be positive", field="speed")
    if not max_indent > 0:
        raise ParameterError("max_indent must be positive", field="max_indent")


@dataclass(frozen=True, eq=False)
class SimRecord:
    """Aligned traces of one simulated run."""

    time: TimeSeries
    indent: TimeSeries
    force: TimeSeries
    voltage: TimeSeries
    output: TimeSeries
    config: dict = field(default_factory=dict)
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.time)

    def columns(self) -> np.ndarray:
        return np.column_stack([s.samples for s in
                                (self.time, self.indent, self.force, self.voltage, self.output)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(RECORD_HEADER) + "\n")
        np.savetxt(buf, self.columns(), fmt="%.9g", delimiter=",")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv())


def read_record_csv(path) -> dict[str, np.ndarray]:
    """Read any CSV with a header row into ``{column: array}``."""
    with open(path) as fh:
        header = [h.strip() for h in fh.readline().strip().split(",")]
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        data = np.empty((0, len(header)))
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: {data.shape[1]} columns but {len(header)} header names")
    return {name: data[:, i] for i, name in enumerate(header)}


def skin_indent(profile: MotionProfile, t, mat: MaterialParams) -> np.ndarray:
    """Indentation seen by the optical side of the body.

    The skin in front of the module trails the probe by ``deadzone_delta0`` of
    travel: at the profile's peak speed this is a fixed transport lag, so the
    first ``deadzone_delta0`` of a ramp produces no optical change.
    """
    speed = profile.peak_speed
    if mat.deadzone_delta0 == 0 or speed == 0:
        return profile.indent_at(t)
    lag = mat.deadzone_delta0 / speed
    return profile.indent_at(np.maximum(np.asarray(t) - lag, profile.times[0]))


def simulate(profile: MotionProfile, geom: SensorGeometry, mat: MaterialParams,
             model: OpticalModel, noise_rms: float = NOISE_RMS_DEFAULT, seed: int = 0,
             dt: float = SAMPLE_PERIOD_S, config: dict | None = None) -> SimRecord:
    """Run the forward chain indentation -> force / gap -> voltage -> output.

    Voltage noise is zero-mean Gaussian drawn from NumPy's PCG64 generator
    seeded with ``seed`` (``Generator.normal``), so equal inputs give
    bit-identical records.
    """
    if not noise_rms >= 0:
        raise ParameterError("noise_rms must be >= 0", field="noise_rms")
    n = int(np.floor(profile.duration / dt + 1e-9)) + 1
    t = profile.times[0] + dt * np.arange(n)
    indent = profile.indent_at(t)
    rate = profile.rate_at(t)
    if np.any(indent >= geom.height_mm):
        i = int(np.argmax(indent >= geom.height_mm))
        raise SimulationError(f"indentation reaches body height at t = {t[i]:.6g} s", t[i])
    force = np.asarray(axial_force(indent, rate, geom, mat), dtype=float)
    gap = gap_profile(skin_indent(profile, t, mat), geom)
    if np.any(gap <= 0):
        i = int(np.argmax(gap <= 0))
        raise SimulationError(f"optical gap closed at t = {t[i]:.6g} s", t[i])
    lo, hi = model.span
    bad = (gap < lo) | (gap > hi)
    if np.any(bad) and model.out_of_range == "error":
        i = int(np.argmax(bad))
        raise SimulationError(
            f"gap {gap[i]:.6g} mm outside optical span [{lo}, {hi}] at t = {t[i]:.6g} s", t[i])
    try:
        clean = np.asarray(voltage_at_gap(gap, model), dtype=float)
    except RangeError as exc:  # pragma: no cover - guarded above
        raise SimulationError(str(exc)) from exc
    voltage = clean
    if noise_rms > 0:
        rng = np.random.Generator(np.random.PCG64(seed))
        voltage = clean + rng.normal(0.0, noise_rms, n)
    series = dict(dt=dt, t0=float(t[0]))
    v_ts = TimeSeries(voltage, unit="V", **series)
    return SimRecord(
        time=TimeSeries(t, unit="s", **series),
        indent=TimeSeries(indent, unit="mm", **series),
        force=TimeSeries(force, unit="N", **series),
        voltage=v_ts,
        output=invert_output(v_ts, baseline=float(clean[0])),
        config=dict(config or {}),
        seed=seed,
    )


@dataclass(frozen=True)
class GraspEvent:
    kind: str  # "grasp" or "release"
    time: float
    output_level: float


def detect_grasp(output: TimeSeries, on_threshold: float = 0.1, off_threshold: float = 0.05,
                 min_hold: float = 0.1, window: int = FILTER_POINTS) -> list[GraspEvent]:
    """Schmitt-trigger grasp/release detection on the filtered module output.

    A grasp fires once the filtered output has stayed above ``on_threshold``
    for ``min_hold`` seconds; a release once it has stayed below
    ``off_threshold`` for ``min_hold``. Events alternate, starting with a grasp,
    and are stamped at the sample completing the hold.
    """
    if not on_threshold > off_threshold >= 0:
        raise ParameterError("thresholds must satisfy on > off >= 0", field="on_threshold")
    if not min_hold >= 0:
        raise ParameterError("min_hold must be >= 0", field="min_hold")
    k = min(window, len(output) if len(output) % 2 else len(output) - 1)
    y = moving_average(output, max(k, 1)).samples
    times = output.times
    hold_n = int(round(min_hold / output.dt))
    events: list[GraspEvent] = []
    grasped = False
    run = 0
    for i, value in enumerate(y):
        beyond = value < off_threshold if grasped else value > on_threshold
        run = run + 1 if beyond else 0
        # run counts samples spanning (run - 1) * dt seconds
        if beyond and (run - 1) >= hold_n:
            grasped = not grasped
            events.append(GraspEvent("grasp" if grasped else "release", float(times[i]),
                                     float(value)))
            run = 0
    return events
