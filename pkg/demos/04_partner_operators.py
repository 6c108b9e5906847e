"""
Partner operators and maximal violation
=======================================

Pick any observables on A.  Their partners -A^T on B make every joint
property A_i + B_i sharp on the maximally entangled state, so the LUR total
drops to zero whatever the local choice was.
"""
import numpy as np

from lurwitness.lur import builtin_spec, evaluate, min_over_product_states
from lurwitness.operators import ObservableSet
from lurwitness.states import max_entangled, random_hermitian, random_separable_mixture

rng = np.random.default_rng(4)
obs = ObservableSet("random", tuple(random_hermitian(3, rng) for _ in range(3)))
spec = builtin_spec("max_entangled", obs_a=obs, restarts=16, seed=0)
print(f"numeric local limit U_A = {spec.bound_a.value:.6f}, bound U_A + U_B = {spec.bound:.6f}")

r = evaluate(max_entangled(3), spec)
print(f"maximally entangled state: total = {r.total:.2e}, C_LUR = {r.c_lur:.6f}, {r.verdict}")

# product states reach the bound but never cross it
print(f"min over product states: {min_over_product_states(spec, seed=1):.6f}")
margins = [evaluate(random_separable_mixture(3, 3, 4, rng), spec).margin for _ in range(500)]
print(f"smallest margin over 500 separable mixtures: {min(margins):.4f}")
