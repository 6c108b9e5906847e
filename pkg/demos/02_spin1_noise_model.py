"""
Two-setting entanglement test for spin 1
========================================

A spin-1 singlet diluted with noise that stays perfectly anticorrelated
along x.  Only Lx and Ly need to be measured on each side.
"""
import numpy as np

from lurwitness.lur import builtin_spec, evaluate
from lurwitness.states import noise_model_state

spec = builtin_spec("spin1_xy")
print("separable bound:", spec.bound)

for p in np.linspace(0, 1, 11):
    r = evaluate(noise_model_state(p), spec)
    print(f"p_s = {p:.1f}  var[Lx] = {r.per_setting_variances[0]:.4f}  "
          f"var[Ly] = {r.per_setting_variances[1]:.4f}  C_LUR = {r.c_lur:+.4f}  {r.verdict}")

# the violation starts where C_LUR crosses zero, p_s = 11/32
r = evaluate(noise_model_state(0.69), spec)
print(f"\nat p_s = 0.69: C_LUR = {r.c_lur:.6f}")
print(f"closed form (32 p - 11) / 21 = {(32 * 0.69 - 11) / 21:.6f}")
