"""Dense complex matrix helpers and the Hermitian eigensolver.

Matrices are plain ``numpy`` complex arrays.  State validation lives in the
:class:`PureState` and :class:`DensityMatrix` records at the bottom of this
module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimMismatch, InvalidState, NonConvergence, NotHermitian

_MAX_SWEEPS = 60


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with ``a`` as the major (outer) index."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermiticity_error(m) -> float:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return np.inf
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def is_hermitian(m, tol: float = DEFAULT_TOLERANCES.herm) -> bool:
    return hermiticity_error(m) <= tol


def require_hermitian(m, tol: float = DEFAULT_TOLERANCES.herm, name: str = "matrix") -> np.ndarray:
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"{name} is not Hermitian (max |M - M^dagger| = {err:.3g} > {tol:g})")
    return m


def _jacobi_sweeps(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi.  ``a`` is overwritten; returns (diag, V)."""
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        return a.diagonal().real.copy(), v
    target = (4 * n * np.finfo(float).eps * scale) ** 2
    negligible = 1e-20 * scale
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    upper = np.triu_indices(n, 1)
    for _ in range(_MAX_SWEEPS):
        off = 2.0 * np.sum(np.abs(a[upper]) ** 2)
        if off <= target:
            return a.diagonal().real.copy(), v
        for p, q in pairs:
            apq = a[p, q]
            r = abs(apq)
            if r <= negligible:
                continue
            app, aqq = a[p, p].real, a[q, q].real
            phase = complex(apq) / r
            tau = (aqq - app) / (2.0 * r)
            t = 1.0 / (abs(tau) + math.hypot(1.0, tau))
            if tau < 0:
                t = -t
            c = 1.0 / math.hypot(1.0, t)
            s = t * c
            # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on columns p, q; A <- J^dagger A J
            sp = s * phase.conjugate()
            cp = c * phase.conjugate()
            col_p, col_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * col_p - sp * col_q
            a[:, q] = s * col_p + cp * col_q
            row_p, row_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c * row_p - sp.conjugate() * row_q
            a[q, :] = s * row_p + cp.conjugate() * row_q
            a[p, q] = a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
            col_p, col_q = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * col_p - sp * col_q
            v[:, q] = s * col_p + cp * col_q
    raise NonConvergence(f"Jacobi eigensolver did not converge in {_MAX_SWEEPS} sweeps")


def eig_hermitian(m, tol: float = DEFAULT_TOLERANCES.herm) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns
    -------
    w : ndarray
        Real eigenvalues sorted in descending order (stable with respect to
        the diagonal position after convergence).
    v : ndarray
        Unitary matrix whose columns are the matching eigenvectors.  Inside a
        degenerate cluster the columns only span the eigenspace.
    """
    m = require_hermitian(m, tol)
    if m.shape[0] != m.shape[1]:
        raise DimMismatch(f"eig_hermitian needs a square matrix, got {m.shape}")
    h = 0.5 * (m + m.conj().T)
    w, v = _jacobi_sweeps(h.copy())
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigvals_hermitian(m, tol: float = DEFAULT_TOLERANCES.herm) -> np.ndarray:
    return eig_hermitian(m, tol)[0]


def expectation(rho, a, tol: float = DEFAULT_TOLERANCES.imag) -> float:
    """``tr(rho a)`` for a Hermitian observable, returned as a real number."""
    rho_m = rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)
    a = as_matrix(a)
    if rho_m.shape != a.shape:
        raise DimMismatch(f"state has shape {rho_m.shape} but operator has shape {a.shape}")
    val = np.einsum("ij,ji->", rho_m, a)
    if abs(val.imag) > tol * max(1.0, abs(val.real)):
        raise NotHermitian(f"expectation value has imaginary part {val.imag:.3g}")
    return float(val.real)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector, optionally tagged with bipartite dims."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] | None = None
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.size == 0 or not np.all(np.isfinite(amp)):
            raise InvalidState("amplitudes must be a non-empty finite vector")
        err = abs(np.linalg.norm(amp) - 1.0)
        if err > self.tol.norm:
            raise InvalidState(f"state norm differs from 1 by {err:.3g} (> {self.tol.norm:g})")
        _check_dims(self.dims, amp.size)
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "dims", None if self.dims is None else tuple(int(d) for d in self.dims))

    @classmethod
    def normalized(cls, vec, dims=None, tol: Tolerances = DEFAULT_TOLERANCES) -> "PureState":
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(vec)
        if nrm == 0:
            raise InvalidState("cannot normalize the zero vector")
        return cls(vec / nrm, dims, tol)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims, self.tol)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Trace-one positive semidefinite Hermitian matrix.

    Validation runs on construction.  Pass ``check=False`` only for matrices
    that are positive by construction (convex mixtures of projectors built
    inside this package); hermiticity and trace are still enforced.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] | None = None
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise InvalidState(f"density matrix must be square, got {m.shape}")
        herr = hermiticity_error(m)
        if herr > self.tol.herm:
            raise InvalidState(f"density matrix is not Hermitian (deviation {herr:.3g} > {self.tol.herm:g})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > self.tol.trace:
            raise InvalidState(f"density matrix trace is {tr:.15g}, not 1 (tolerance {self.tol.trace:g})")
        if self.check:
            lmin = eigvals_hermitian(m, self.tol.herm)[-1]
            if lmin < -self.tol.psd:
                raise InvalidState(f"density matrix has eigenvalue {lmin:.3g} < -{self.tol.psd:g}")
        _check_dims(self.dims, m.shape[0])
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", None if self.dims is None else tuple(int(d) for d in self.dims))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _check_dims(dims, total: int) -> None:
    if dims is None:
        return
    if any(int(d) < 1 for d in dims) or int(np.prod(dims)) != total:
        raise InvalidState(f"subsystem dims {tuple(dims)} do not multiply to {total}")


def as_density(state, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Coerce a :class:`PureState`, :class:`DensityMatrix`, vector or matrix."""
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.to_density()
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return PureState(arr, tol=tol).to_density()
    return DensityMatrix(arr, tol=tol)
