"""Coherent feedback beats classical-only estimation.

Routing the cavity output through a dynamic squeezer that feeds a field back
into the plant correlates the measured field with the internal mode.  The
optimal classical filter on the squeezer's output then achieves J < 1, with
the best angle at 135 degrees (the momentum-like quadrature, which is exactly
the quadrature the target variable selects).
"""

import dataclasses

from cke import build_squeezer_controller, builtin_scenario, emit, run_sweep

scenario = builtin_scenario("fig4")
result = run_sweep(scenario)

costs = {r.theta_deg: r.cost for r in result.rows}
best_theta = min(costs, key=costs.get)
print(f"angles swept: {len(result.rows)}")
print(f"best angle:   {best_theta} deg")
print(f"J(best):      {costs[best_theta]:.6f}  (classical-only gives 1.0)")
print(f"J(45):        {costs[45.0]:.6f}")
print(f"J(90):        {costs[90.0]:.6f}")

print("\nsample of the curve:")
for theta in range(0, 180, 20):
    bar = "#" * int(round((costs[float(theta)] - 0.9) * 400))
    print(f"  {theta:5.0f} deg  J={costs[float(theta)]:.6f}  {bar}")

worst_gap = max(abs(r.cost - r.oracle_cost) for r in result.rows)
print(f"\nindependent joint-covariance cross-check, worst gap: {worst_gap:.2e}")

path = emit(result, "csv", "coherent_feedback.csv")
print(f"wrote {path}")

print("\nwhy 135 degrees: the feedback squeezer damps the momentum-like")
print("quadrature fastest, so the noise it adds to that quadrature of the")
print("measured field is smallest exactly where the target lives.")
print("flipping the squeezing sign (chi = +0.5) squeezes the position-like")
print("quadrature instead and makes the estimator WORSE than classical:")

flipped = dataclasses.replace(
    builtin_scenario("fig4"), controller=build_squeezer_controller(5.0, 5.0, +0.5)
)
result_flipped = run_sweep(flipped)
j135 = {r.theta_deg: r.cost for r in result_flipped.rows}[135.0]
print(f"  chi=+0.5: J(135) = {j135:.6f}")
