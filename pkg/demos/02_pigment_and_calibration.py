"""Choose a skin pigment mix, then calibrate output against force.

Run: python demos/02_pigment_and_calibration.py
"""

import numpy as np

from phototactile import Config, fit_force_voltage, force_from_curve
from phototactile.experiments import pigment_sweeps, run_ramp, select_pigment

cfg = Config()

# %% distance sweeps for five white/black mixes over the 1-2 mm band
sweeps = pigment_sweeps(cfg)
choice = select_pigment(sweeps)
for s, score in zip(sweeps, choice.scores):
    print(f"{s.white_fraction:4.2f} white: {score.a:.4f} V/mm, r2 {score.r2:.6f}")
print("steepest linear mix:", sweeps[choice.index].white_fraction)

# pure white is the steepest here; the prototype settled on 75 % white after
# also weighing manufacturability, which the model does not score.

# %% noise-free ramp as a calibration run
rec = run_ramp(cfg, noise_rms=0.0)
for degree in (1, 3):
    curve = fit_force_voltage(rec.force.samples, rec.output.samples, degree=degree)
    print(f"degree {degree}: residual rms {curve.residual_rms:.2e} V, "
          f"0.5412 V -> {force_from_curve(min(0.5412, curve(curve.domain[1])), curve):.3f} N")

# the response is concave, about 0.091 V/N near contact and 0.073 V/N secant,
# so a straight line underestimates large forces
slope_start = np.polyfit(rec.force.samples[:100], rec.output.samples[:100], 1)[0]
print(f"initial slope {slope_start:.4f} V/N")
