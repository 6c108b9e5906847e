"""Wootters concurrence for two qubits."""
from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimMismatch
from .linalg import as_density, eig_hermitian, eigvals_hermitian

_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])).real
# eigenvalues of rho below this are rounding noise and dropped before sqrt
_RANK_CUTOFF = 1e-13


def concurrence(rho, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Wootters concurrence max(0, s1 - s2 - s3 - s4).

    The s_i are the square roots, in descending order, of the eigenvalues of
    rho (sy x sy) rho* (sy x sy).  With rho = V V^dagger (V the eigenvectors
    scaled by sqrt of the eigenvalues) they equal the singular values of
    tau = V^T (sy x sy) V.  Those are read off the Hermitian dilation
    [[0, tau], [tau^dagger, 0]] whose eigenvalues are +-s_i, which keeps the
    absolute error at rounding level instead of its square root.
    """
    rho = as_density(rho, tol)
    if rho.dim != 4:
        raise DimMismatch(f"concurrence is defined for 2x2 systems, got dim {rho.dim}")
    p, e = eig_hermitian(rho.matrix, tol.herm)
    p = np.where(p > _RANK_CUTOFF, p, 0.0)
    v = e * np.sqrt(p)
    tau = v.T @ _SYSY @ v
    dilation = np.block([[np.zeros((4, 4)), tau], [tau.conj().T, np.zeros((4, 4))]])
    s = eigvals_hermitian(dilation, tol.herm)[:4]
    s = np.clip(s, 0.0, None)
    return float(min(1.0, max(0.0, s[0] - s[1] - s[2] - s[3])))


def werner_concurrence(p_s: float) -> float:
    if not 0.0 <= p_s <= 1.0:
        raise ValueError(f"p_s must lie in [0, 1], got {p_s}")
    return max((3.0 * p_s - 1.0) / 2.0, 0.0)
