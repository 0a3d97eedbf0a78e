"""Grasp, hold and release, seen through the module output.

Run: python demos/04_grasp.py
"""

from phototactile import Config
from phototactile.experiments import run_grasp
from phototactile.signals import moving_average

cfg = Config()
rec, events = run_grasp(cfg)

# %% coarse view of the filtered output, one line per 0.5 s
smooth = moving_average(rec.output).samples
for i in range(0, len(rec), 500):
    bar = "#" * max(0, int(smooth[i] / 0.01))
    print(f"{rec.time.samples[i]:4.1f} s  {smooth[i]:6.3f} V  {bar}")

# %% detected events
for e in events:
    print(f"{e.kind:<7s} at {e.time:.3f} s (filtered output {e.output_level:.3f} V)")

# %% the two-threshold detector stays quiet on noise across seeds
counts = [len(run_grasp(cfg, seed=s)[1]) for s in range(20)]
print("events per seed:", sorted(set(counts)))
