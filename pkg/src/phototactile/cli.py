"""Command-line entry point: ``phototactile <command> [options]``.

Exit status: 0 success, 1 failed criterion or model error, 2 bad config or
arguments, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import experiments
from .calibrate import CalibrationCurve, fit_force_voltage
from .config import Config, load_config
from .errors import ConfigError, TactileError
from .estimate import estimate_forces, force_from_curve
from .optics import write_sweep_csv
from .scenarios import make_profile, read_record_csv, simulate

EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 1, 2, 3
ESTIMATE_HEADER = ("time_s", "voltage_v", "force_n", "underrange")


class _Reporter:
    def __init__(self, as_json: bool, quiet: bool):
        self.as_json = as_json
        self.quiet = quiet

    def emit(self, data: dict, text: str) -> None:
        if self.quiet:
            return
        print(json.dumps(data, indent=2, sort_keys=True) if self.as_json else text)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="default", help="config JSON path or 'default'")
    common.add_argument("--out", type=Path, help="output file (directory for sweep)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--echo-config", action="store_true", help="print effective config")

    p = argparse.ArgumentParser(prog="phototactile", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="run one motion profile")
    s.add_argument("--profile", choices=("ramp", "cyclic", "hold"), default="ramp")
    s.add_argument("--speed", type=float, default=1.0, help="mm/s")
    s.add_argument("--max-indent", type=float, default=experiments.MAX_INDENT_MM, help="mm")
    s.add_argument("--cycles", type=int, default=1)
    s.add_argument("--dwell", type=float, default=1.0, help="s")

    sub.add_parser("sweep", parents=[common], help="distance-voltage table per pigment mix")

    c = sub.add_parser("cycle", parents=[common], help="repeated-loading protocol")
    c.add_argument("--cycles", type=int, default=experiments.REPEAT_CYCLES)
    c.add_argument("--speed", type=float, default=1.0)

    sp = sub.add_parser("speeds", parents=[common], help="phase lag at several speeds")
    sp.add_argument("--speed", type=float, action="append",
                    help="mm/s, repeatable (default 0.1, 1, 10)")
    sp.add_argument("--deadzone", type=float, default=experiments.LAG_DEADZONE_MM,
                    help="skin dead zone in mm (default %(default)s)")

    sub.add_parser("grasp", parents=[common], help="grasp/hold/release event detection")

    cal = sub.add_parser("calibrate", parents=[common], help="fit output vs force curve")
    cal.add_argument("--in", dest="inp", type=Path, required=True,
                     help="CSV with force_n and output_v columns")
    cal.add_argument("--degree", type=int, default=1)

    e = sub.add_parser("estimate", parents=[common], help="voltage log to force estimates")
    e.add_argument("--in", dest="inp", type=Path, required=True,
                   help="CSV with voltage_v (or output_v with --curve) column")
    e.add_argument("--curve", type=Path, help="calibration JSON; uses the output_v column")

    sub.add_parser("verify", parents=[common], help="run all acceptance criteria")
    return p


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_simulate(args, cfg: Config, rep: _Reporter) -> int:
    profile = make_profile(args.profile, speed=args.speed, max_indent=args.max_indent,
                           cycles=args.cycles, dwell_s=args.dwell)
    rec = simulate(profile, cfg.geometry, cfg.material, cfg.optics, noise_rms=cfg.noise_rms,
                   seed=cfg.seed, config=cfg.to_dict())
    if args.out:
        rec.write_csv(args.out)
    summary = {"samples": len(rec), "final_force_n": float(rec.force.samples[-1]),
               "final_output_v": float(rec.output.samples[-1]),
               "peak_force_n": float(rec.force.samples.max()),
               "peak_output_v": float(rec.output.samples.max())}
    rep.emit(summary, "\n".join(f"{k}: {v:.6g}" for k, v in summary.items()))
    return 0


def cmd_sweep(args, cfg: Config, rep: _Reporter) -> int:
    sweeps = experiments.pigment_sweeps(cfg)
    choice = experiments.select_pigment(sweeps)
    rows = []
    for i, (sw, score) in enumerate(zip(sweeps, choice.scores)):
        name = f"white_{round(sw.white_fraction * 100):03d}.csv"
        if args.out:
            write_sweep_csv(args.out / name, sw.distances, sw.voltages)
        rows.append({"white_fraction": sw.white_fraction, "slope_v_per_mm": score.a,
                     "offset_v": score.b, "r2": score.r2, "file": name})
    data = {"mixes": rows, "chosen_index": choice.index, "qualified": choice.qualified}
    lines = [f"{r['white_fraction']:5.2f} white  slope {r['slope_v_per_mm']:.4f} V/mm  "
             f"r2 {r['r2']:.6f}" for r in rows]
    lines.append(f"chosen: {sweeps[choice.index].white_fraction:.2f} white"
                 + ("" if choice.qualified else " (no mix met the linearity threshold)"))
    rep.emit(data, "\n".join(lines))
    return 0


def cmd_cycle(args, cfg: Config, rep: _Reporter) -> int:
    res = experiments.run_cycles(cfg, cycles=args.cycles, speed=args.speed)
    if args.out:
        res.record.write_csv(args.out)
    data = {"cycles": args.cycles, "cv": res.cv, "drift": res.drift,
            "mean_peak_v": float(res.peaks.mean())}
    rep.emit(data, f"cycles {args.cycles}: peak CV {res.cv:.5f}, first/last-10 drift "
                   f"{res.drift:.5f}, mean peak {res.peaks.mean():.4f} V")
    return 0


def cmd_speeds(args, cfg: Config, rep: _Reporter) -> int:
    speeds = tuple(args.speed) if args.speed else experiments.SPEEDS_MM_S
    lags = experiments.run_speeds(cfg, speeds=speeds, deadzone_mm=args.deadzone)
    data = {"deadzone_mm": args.deadzone, "lags_s": {f"{v:g}": lag for v, lag in lags.items()}}
    rep.emit(data, "\n".join(f"{v:g} mm/s: lag {lag:.4f} s" for v, lag in lags.items()))
    return 0


def cmd_grasp(args, cfg: Config, rep: _Reporter) -> int:
    rec, events = experiments.run_grasp(cfg)
    if args.out:
        rec.write_csv(args.out)
    data = {"events": [{"kind": e.kind, "time_s": e.time, "output_v": e.output_level}
                       for e in events]}
    text = "\n".join(f"{e.time:8.3f} s  {e.kind:<7s} output {e.output_level:.4f} V"
                     for e in events) or "no events"
    rep.emit(data, text)
    return 0


def _column(table: dict, name: str, path: Path) -> np.ndarray:
    if name not in table:
        raise TactileError(f"{path}: missing column {name!r}")
    return table[name]


def cmd_calibrate(args, cfg: Config, rep: _Reporter) -> int:
    table = read_record_csv(args.inp)
    curve = fit_force_voltage(_column(table, "force_n", args.inp),
                              _column(table, "output_v", args.inp), degree=args.degree)
    if args.out:
        _write_text(args.out, json.dumps(curve.to_dict(), indent=2) + "\n")
    rep.emit(curve.to_dict(), "coefficients (ascending): "
             + ", ".join(f"{c:.6g}" for c in curve.coefficients)
             + f"\ndomain: [{curve.domain[0]:.6g}, {curve.domain[1]:.6g}] N"
             + f"\nresidual rms: {curve.residual_rms:.3g} V"
             + ("" if curve.monotone else "\nwarning: curve is not monotone"))
    return 0


def cmd_estimate(args, cfg: Config, rep: _Reporter) -> int:
    table = read_record_csv(args.inp)
    if args.curve:
        curve = CalibrationCurve.from_dict(json.loads(args.curve.read_text()))
        out = _column(table, "output_v", args.inp)
        lo, hi = curve.domain
        floor = min(curve(lo), curve(hi))
        under = out < floor
        forces = np.atleast_1d(force_from_curve(np.maximum(out, floor), curve))
        forces[under] = 0.0
        volts = table.get("voltage_v", np.full(out.shape, np.nan))
    else:
        volts = _column(table, "voltage_v", args.inp)
        forces, _, under = estimate_forces(volts, cfg.geometry, cfg.material, cfg.optics)
    times = table.get("time_s", np.arange(volts.size) * 1e-3)
    if args.out:
        rows = np.column_stack([times, volts, forces, under.astype(float)])
        lines = [",".join(ESTIMATE_HEADER)]
        lines += [f"{t:.9g},{v:.9g},{f:.9g},{int(u)}" for t, v, f, u in rows]
        _write_text(args.out, "\n".join(lines) + "\n")
    data = {"rows": int(forces.size), "max_force_n": float(forces.max()) if forces.size else 0.0,
            "underrange_rows": int(under.sum())}
    rep.emit(data, "\n".join(f"{k}: {v:.6g}" if isinstance(v, float) else f"{k}: {v}"
                             for k, v in data.items()))
    return 0


def cmd_verify(args, cfg: Config, rep: _Reporter) -> int:
    from .acceptance import run_all

    results = run_all(cfg)
    failed = [r for r in results if not r.passed]
    data = {"passed": not failed,
            "criteria": [{"number": r.number, "name": r.name, "passed": r.passed,
                          "measured": r.measured} for r in results]}
    text = "\n".join(r.line() for r in results)
    text += "\nall criteria passed" if not failed else \
        "\nfailed: " + ", ".join(str(r.number) for r in failed)
    rep.emit(json.loads(json.dumps(data, default=float)), text)
    return 0 if not failed else EXIT_FAIL


COMMANDS = {
    "simulate": cmd_simulate, "sweep": cmd_sweep, "cycle": cmd_cycle, "speeds": cmd_speeds,
    "grasp": cmd_grasp, "calibrate": cmd_calibrate, "estimate": cmd_estimate,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None, quiet: bool = False) -> int:
    args = _parser().parse_args(argv)
    rep = _Reporter(args.json, quiet)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("must be >= 0", field="seed")
            cfg = replace(cfg, seed=args.seed)
        if args.echo_config and not quiet:
            print(cfg.to_json())
        return COMMANDS[args.command](args, cfg, rep)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (TactileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
