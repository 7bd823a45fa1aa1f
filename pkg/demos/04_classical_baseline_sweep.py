"""The classical-only baseline: a passive cavity's output tells you nothing.

For a cavity with no internal squeezing, every homodyne angle yields the same
estimation error J = 1, equal to the variance of the target with no
measurement at all, and the Kalman gain is identically zero.  This script
reproduces that flat curve and writes it as CSV.
"""

import numpy as np

from cke import builtin_scenario, emit, run_sweep

scenario = builtin_scenario("fig3")
print(f"scenario: {scenario.name}")
print(f"grid: [{scenario.grid.start}, {scenario.grid.stop}) step {scenario.grid.step}")

result = run_sweep(scenario)

costs = np.array([r.cost for r in result.rows])
gains = np.array([r.gain_norm for r in result.rows])
print(f"angles swept: {len(result.rows)}")
print(f"max |J - 1|:  {np.abs(costs - 1.0).max():.3e}")
print(f"max gain:     {gains.max():.3e}")
print("every angle is equally uninformative: the passive cavity's output")
print("field carries no information about the internal mode.")

path = emit(result, "csv", "classical_baseline.csv")
print(f"\nwrote {path}")
print("plot it with, e.g.:")
print("  python -c \"import pandas as pd, matplotlib.pyplot as plt; "
      "d = pd.read_csv('classical_baseline.csv'); "
      "plt.plot(d.theta_deg, d.cost); plt.ylim(0, 1.2); plt.show()\"")
