"""Walk one indentation through the forward model and back.

Run: python demos/01_forward_chain.py
"""

import numpy as np

from phototactile import (Config, axial_force, estimate_forces, lateral_gap, nominal_stress,
                          voltage_at_gap)

cfg = Config()
geom, mat, optics = cfg.geometry, cfg.material, cfg.optics

# %% mechanics: a 3 mm push on the 20 mm tall body is a 15 % compression
d = 3.0
state = lateral_gap(d, geom)
print(f"stretch {state.stretch:.3f}, transverse stretch {state.transverse_stretch:.5f}")
print(f"nominal stress {nominal_stress(state.stretch, mat):.5f} MPa")
print(f"reaction force {axial_force(d, 0.0, geom, mat):.3f} N")

# %% the side bulges and closes part of the 2 mm optical gap
print(f"gap {state.gap_mm:.4f} mm (kappa {geom.kappa})")

# %% optics: closer skin reflects more light into the detector
v_rest = voltage_at_gap(geom.gap0_mm, optics)
v = voltage_at_gap(state.gap_mm, optics)
print(f"voltage {v_rest:.4f} V at rest -> {v:.4f} V, output {v_rest - v:.4f} V")

# %% invert a handful of readings back to force
depths = np.linspace(0.0, 3.0, 7)
volts = voltage_at_gap(lateral_gap(depths, geom).gap_mm, optics)
forces, indents, _ = estimate_forces(volts, geom, mat, optics)
for dd, vv, ff, ii in zip(depths, volts, forces, indents):
    print(f"  {dd:4.2f} mm  {vv:.4f} V  ->  {ii:.4f} mm  {ff:.3f} N")
