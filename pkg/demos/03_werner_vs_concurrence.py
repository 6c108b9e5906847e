"""
Relative violation versus concurrence
=====================================

For Werner states the three-component Pauli relation reproduces the
concurrence once the state is entangled; dropping sigma_z lowers it.
"""
import numpy as np

from lurwitness.lur import werner_sweep

print(" p_s   C[pauli3]  C[pauli2]  concurrence")
for row in werner_sweep(np.linspace(0, 1, 13)):
    print(f"{row.p_s:5.3f}  {row.c_lur_pauli3:+9.5f}  {row.c_lur_pauli2:+9.5f}  {row.concurrence:9.5f}")

# both relations detect entanglement only above a threshold
print("pauli3 detects above p_s = 1/3, pauli2 above p_s = 1/2")
