"""
Sum-uncertainty limits
======================

Certify the lower limits of sum uncertainties by direct numerical search
over pure states, and look at the state that reaches the spin-1 Lx, Ly limit.
"""
import numpy as np

from lurwitness.operators import spin_set
from lurwitness.uncertainty import analytic_bound, bound_observables, minimize_sum_uncertainty, sum_uncertainty

# analytic value next to the numeric minimum for every registered limit
for kind, l in [("pauli3", None), ("pauli2", None), ("spin1_xy", None), ("spin3", 1), ("spin3", 2)]:
    exact = analytic_bound(kind, l).value
    found = minimize_sum_uncertainty(bound_observables(kind, l), restarts=16, seed=0)
    print(f"{bound_observables(kind, l).label:16s} analytic {exact:.6f}  numeric {found.value:.12f}")

# the Lx, Ly minimum: populations 5/16, 6/16, 5/16 on m = +1, 0, -1
best = minimize_sum_uncertainty(spin_set(1, "xy"), restarts=16, seed=1)
print("achiever populations:", np.round(np.abs(best.best_state.amplitudes) ** 2 * 16, 6), "/ 16")

# adding Lz back costs 5/8, so the three-component total overshoots l = 1 by 1/16
print("three-component total:", sum_uncertainty(best.best_state, spin_set(1, "xyz")))
