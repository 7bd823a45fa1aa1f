"""Grid search over squeezer controllers.

There is no closed-form recipe for the best coherent controller, so this is
plain exhaustive search: every (chi, kappa) squeezer is built, checked for
physicality, closed around the plant, and swept over detector angles.
"""

import numpy as np

from cke import build_cavity_plant, grid_search_controller

plant = build_cavity_plant(0.5, 0.5, 0.0)

print("== small grid around the reference design ==")
best = grid_search_controller(
    plant,
    chi_grid=[0.0, -0.25, -0.5, -0.75],
    kappa_grid=[2.5, 5.0, 10.0],
    theta_grid_deg=list(np.arange(0.0, 180.0, 15.0)) + [135.0],
)
print(f"evaluated {best.evaluated} candidates, skipped {len(best.skipped)}")
print(f"best: chi={best.chi.real:g}, kappa={best.kappa:g}, "
      f"theta={best.theta_deg:g} deg, J={best.cost:.6f}")

print("\n== without squeezing there is nothing to gain ==")
passive = grid_search_controller(
    plant, chi_grid=[0.0], kappa_grid=[0.5], theta_grid_deg=[0.0, 45.0, 90.0, 135.0]
)
print(f"passive cavity controller: J={passive.cost:.9f} (ties break to the "
      f"smallest angle: {passive.theta_deg:g} deg)")
