"""Sensitivity, dynamic range, repeatability, hysteresis and speed lags.

Run: python demos/03_characterization.py   (a few seconds)
"""

from dataclasses import replace

from phototactile import Config, MaterialParams, dynamic_range
from phototactile.experiments import (full_scale_output, load_unload_hysteresis,
                                      ramp_sensitivity, run_cycles, run_speeds)

cfg = Config()

# %% static figures of merit
fs = full_scale_output(cfg)
print(f"sensitivity {ramp_sensitivity(cfg):.4f} V/N (least squares over the ramp)")
print(f"full scale {fs:.4f} V, dynamic range {dynamic_range(fs, cfg.noise_rms):.2f} dB")

# %% 100 load/unload cycles with noise, peaks read from the 9-point filtered output
res = run_cycles(cfg)
print(f"peak CV {res.cv:.4f}, first/last 10 drift {res.drift:.4f}")

# %% the elastic model has no hysteresis; a viscous term opens the loop
print(f"hysteresis elastic {load_unload_hysteresis(cfg):.1e}")
damped = replace(cfg, material=MaterialParams(damping_c=0.5))
print(f"hysteresis with damping {load_unload_hysteresis(damped):.3f}")

# %% a 0.06 mm skin dead zone explains the speed-dependent lag
for speed, lag in run_speeds(cfg).items():
    print(f"{speed:5.1f} mm/s: output lags force by {lag:.3f} s")
