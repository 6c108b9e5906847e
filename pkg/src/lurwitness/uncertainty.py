"""Variances, sum uncertainties, analytic bounds and their numerical certification.

The numeric bound of an observable set {A_i} is the minimum of
``sum_i <A_i^2> - <A_i>^2`` over pure states.  Because the variance of a
mixture is never below the average variance of its components, no mixed
state can do better, so searching pure states is enough.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import DEFAULT_OPTIMIZER, DEFAULT_TOLERANCES, Tolerances
from .errors import ConsistencyError, DimMismatch, InvalidSpin, NonConvergence
from .linalg import DensityMatrix, PureState, as_density, expectation, require_hermitian
from .operators import ObservableSet, pauli_set, spin_set, spin_value

ANALYTIC_KINDS = ("spin3", "pauli3", "pauli2", "spin1_xy")


@dataclass(frozen=True, eq=False)
class UncertaintyBound:
    """Certified lower limit U of a sum uncertainty.

    ``provenance`` is ``"analytic"`` or ``"numeric"``; numeric bounds carry
    the optimizer settings and the best state found.
    """

    value: float
    provenance: str
    label: str
    restarts: int | None = None
    tolerance: float | None = None
    best_state: PureState | None = field(default=None, repr=False)
    converged_restarts: int | None = None
    gradient_norm: float | None = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"uncertainty bound must be nonnegative, got {self.value}")
        if self.provenance not in ("analytic", "numeric"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.provenance == "numeric" and self.best_state is None:
            raise ValueError("numeric bounds must record the achieving state")


def variance(rho, a, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """delta A^2 = <A^2> - <A>^2 on a density matrix (or pure state)."""
    rho = as_density(rho, tol)
    a = require_hermitian(a, tol.herm, name="observable")
    if a.shape != rho.matrix.shape:
        raise DimMismatch(f"state has dim {rho.dim} but observable has shape {a.shape}")
    mean = expectation(rho, a, tol.imag)
    val = expectation(rho, a @ a, tol.imag) - mean * mean
    if val < 0:
        if val < -tol.variance_clamp:
            raise ConsistencyError(f"variance came out as {val:.3g}")
        val = 0.0
    return val


def sum_uncertainty(rho, obs: ObservableSet | Sequence, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    rho = as_density(rho, tol)
    return sum(variance(rho, a, tol) for a in obs)


def bound_observables(kind: str, l=None) -> ObservableSet:
    """The observable set a registered analytic bound refers to."""
    if kind == "spin3":
        if l is None:
            raise InvalidSpin("spin3 needs a spin value l")
        return spin_set(l, "xyz")
    if kind == "pauli3":
        return pauli_set("xyz")
    if kind == "pauli2":
        return pauli_set("xy")
    if kind == "spin1_xy":
        return spin_set(1, "xy")
    raise ValueError(f"unknown bound kind {kind!r}; expected one of {ANALYTIC_KINDS}")


def analytic_bound(kind: str, l=None) -> UncertaintyBound:
    """Closed-form sum-uncertainty limits.

    ``spin3``: dLx^2 + dLy^2 + dLz^2 >= l.  ``pauli3``: >= 2.
    ``pauli2`` (sigma_1, sigma_2 only): >= 1.  ``spin1_xy`` (Lx, Ly at l=1): >= 7/16.
    """
    label = bound_observables(kind, l).label
    if kind == "spin3":
        value = float(spin_value(l))
    else:
        value = {"pauli3": 2.0, "pauli2": 1.0, "spin1_xy": float(Fraction(7, 16))}[kind]
    return UncertaintyBound(value, "analytic", label)


# -- optimizer ---------------------------------------------------------------


def _objective(psi: np.ndarray, q_sum: np.ndarray, ops: np.ndarray) -> tuple[float, np.ndarray]:
    """Value and Wirtinger gradient of  <Q> - sum_i <K_i>^2  at a unit vector.

    ``q_sum`` is sum_i Q_i (normally sum_i K_i^2).  The returned complex vector
    G satisfies  df = 2 Re<G, dpsi>  and is orthogonal to psi, so the
    Euclidean gradient in the real (Re, Im) embedding is 2 (Re G, Im G).
    """
    means = np.einsum("i,kij,j->k", psi.conj(), ops, psi).real
    h_eff = q_sum - 2.0 * np.tensordot(means, ops, axes=1)
    h_psi = h_eff @ psi
    q_mean = float(np.vdot(psi, q_sum @ psi).real)
    value = q_mean - float(means @ means)
    grad = h_psi - np.vdot(psi, h_psi).real * psi
    return value, grad


def sum_uncertainty_pure(x: np.ndarray, operators: Sequence[np.ndarray]) -> float:
    """Sum uncertainty of the ray through ``x`` (real 2N vector or complex N vector).

    Scale invariant, so finite differences of this function in the real
    embedding give the Euclidean gradient checked by :func:`uncertainty_gradient`.
    """
    psi = _as_complex(x, operators[0].shape[0])
    nrm2 = float(np.vdot(psi, psi).real)
    total = 0.0
    for a in operators:
        a_psi = a @ psi
        mean = float(np.vdot(psi, a_psi).real) / nrm2
        total += float(np.vdot(a_psi, a_psi).real) / nrm2 - mean * mean
    return total


def uncertainty_gradient(x: np.ndarray, operators: Sequence[np.ndarray]) -> np.ndarray:
    """Analytic gradient of :func:`sum_uncertainty_pure` in the real embedding.

    ``x`` must have unit norm; the result has length 2N.
    """
    ops = np.asarray(operators, dtype=complex)
    psi = _as_complex(x, ops.shape[1])
    _, g = _objective(psi, np.einsum("kij,kjl->il", ops, ops), ops)
    return 2.0 * np.concatenate([g.real, g.imag])


def _as_complex(x, n: int) -> np.ndarray:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return x.astype(complex)
    if x.size != 2 * n:
        raise DimMismatch(f"real embedding must have length {2 * n}, got {x.size}")
    return x[:n] + 1j * x[n:]


def _gauge_fix(psi: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(psi)))
    return psi * (abs(psi[k]) / psi[k])


@dataclass
class DescentResult:
    psi: np.ndarray
    value: float
    grad_norm: float
    converged: bool
    iterations: int


def descend(psi0: np.ndarray, q_sum: np.ndarray, ops: np.ndarray, tol: float, max_iter: int) -> DescentResult:
    """Projected gradient descent on the unit sphere with Armijo backtracking.

    Trial steps use the Barzilai-Borwein length; the retraction is plain
    renormalization.  Converged means the Euclidean gradient norm fell to
    ``tol``, or the line search could no longer resolve a decrease above
    rounding while the gradient was already below ``sqrt(tol)``.
    """
    psi = _gauge_fix(psi0 / np.linalg.norm(psi0))
    f, g = _objective(psi, q_sum, ops)
    step = 0.1
    prev = None
    eps = np.finfo(float).eps
    for it in range(max_iter):
        gnorm = 2.0 * np.linalg.norm(g)
        if gnorm <= tol:
            return DescentResult(psi, f, gnorm, True, it)
        if prev is not None:
            # align the previous iterate's phase; the gauge pivot may have moved
            ph = np.vdot(prev[0], psi)
            ph = ph / abs(ph) if abs(ph) > 0 else 1.0
            s = psi - ph * prev[0]
            y = g - ph * prev[1]
            sy = abs(np.vdot(s, y).real)
            if sy > 0:
                step = float(np.clip(np.vdot(s, s).real / (2.0 * sy), 1e-8, 1e4))
        slack = 16 * eps * max(1.0, abs(f))
        t = step
        for _ in range(60):
            cand = psi - 2.0 * t * g
            cand = _gauge_fix(cand / np.linalg.norm(cand))
            f_new, g_new = _objective(cand, q_sum, ops)
            if f_new <= f - 1e-4 * t * gnorm**2 + slack:
                break
            t *= 0.5
        else:
            return DescentResult(psi, f, gnorm, gnorm <= np.sqrt(tol), it)
        prev = (psi, g)
        psi, f, g = cand, f_new, g_new
    gnorm = 2.0 * np.linalg.norm(g)
    return DescentResult(psi, f, gnorm, gnorm <= tol, max_iter)


def minimize_sum_uncertainty(
    obs: ObservableSet | Sequence,
    restarts: int = DEFAULT_OPTIMIZER.restarts,
    tol: float = DEFAULT_OPTIMIZER.tol,
    seed=None,
    max_iter: int = DEFAULT_OPTIMIZER.max_iter,
) -> UncertaintyBound:
    """Global minimum of the sum uncertainty over pure states, by multi-start descent.

    Each restart starts from a Haar-random state drawn from its own child of
    ``seed``, so the result does not depend on evaluation order.

    Raises
    ------
    NonConvergence
        If no restart reaches the gradient tolerance.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if not isinstance(obs, ObservableSet):
        obs = ObservableSet("custom", tuple(obs))
    ops = np.asarray(obs.operators)
    q_sum = np.sum(obs.squares, axis=0)
    n = obs.dim
    best: DescentResult | None = None
    n_conv = 0
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        psi0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        res = descend(psi0, q_sum, ops, tol, max_iter)
        if not res.converged:
            continue
        n_conv += 1
        if best is None or res.value < best.value:
            best = res
    if best is None:
        raise NonConvergence(f"none of {restarts} restarts met the gradient tolerance {tol:g} for {obs.label!r}")
    value = max(best.value, 0.0)
    return UncertaintyBound(
        value,
        "numeric",
        obs.label,
        restarts=restarts,
        tolerance=tol,
        best_state=PureState.normalized(best.psi),
        converged_restarts=n_conv,
        gradient_norm=best.grad_norm,
    )
