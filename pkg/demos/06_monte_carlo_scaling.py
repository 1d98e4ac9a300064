"""Monte Carlo scaling: logical error rate vs physical rate and vs cycles.

A fault-tolerant distance-3 protocol turns one physical fault into zero
logical errors, so the leading contribution to the logical rate is
second order: p_L ~ p^2 on a log-log plot has slope 2.  This script runs
a reduced sweep (about 15 seconds), fits the slope, and writes the CSV
that the companion plots package consumes.

Environment knobs:
  STEANE_SE_SHOTS   shots per point (default 200000; the acceptance-grade
                    run uses the default shot rule of up to 1e6)
  STEANE_SE_THREADS worker threads (default: all cores)
"""

import os

from steane_se import montecarlo as mc
from steane_se.noise import NoiseParams

shots = int(os.environ.get("STEANE_SE_SHOTS", "200000"))

# --- logical rate vs physical rate -------------------------------------------
grid = [3e-4, 5.5e-4, 1e-3, 1.7e-3, 3e-3]
print(f"sweeping p in {grid} at {shots} shots/point, 2 cycles, seed 1 ...")
result = mc.sweep_physical_rate(grid, cycles=2, shot_rule=shots, seed=1)
print(f"{'p_phys':>8} {'shots':>9} {'failures':>8} {'p_L':>12} "
      f"{'Wilson 95% CI':>28}")
for pt in result.points:
    print(f"{pt.p_phys:>8} {pt.shots:>9} {pt.failures:>8} {pt.p_l:>12.3e} "
          f"[{pt.wilson_lo:.3e}, {pt.wilson_hi:.3e}]")

slope = mc.fit_loglog_slope(result.points)
print(f"\nlog-log slope: {slope:.3f}  (quadratic suppression -> 2.0)")

path = "sweep_p.csv"
with open(path, "w", encoding="utf-8") as fh:
    fh.write(result.to_csv())
print(f"wrote {path} ({len(result.points)} rows) - feed it to the plots "
      "package:")
print("  plot --kind rate-vs-p --in sweep_p.csv --out fig.png")

# --- logical rate vs number of cycles ----------------------------------------
noise = NoiseParams.from_p_phys(1e-3)
cycles = [1, 2, 4, 8]
print(f"\nsweeping cycles {cycles} at fixed p_phys = 1e-3 ...")
result = mc.sweep_cycles(cycles, fixed_noise=noise, shots=shots, seed=3)
for pt in result.points:
    per_cycle = pt.p_l / pt.n_cycles
    print(f"  {pt.n_cycles:>2} cycles: p_L = {pt.p_l:.3e}  "
          f"per cycle {per_cycle:.3e}")
print("the per-cycle rate approaches a constant: each extraction cycle")
print("contributes the same second-order failure budget")

path = "sweep_cycles.csv"
with open(path, "w", encoding="utf-8") as fh:
    fh.write(result.to_csv())
print(f"wrote {path}:")
print("  plot --kind rate-per-cycle --in sweep_cycles.csv --out fig.png")
