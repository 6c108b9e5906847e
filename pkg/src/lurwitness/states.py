"""State families: singlets, maximally entangled states, Werner states, the
spin-1 noise model, Haar-random pure states and random separable mixtures.

Bipartite states are stored with subsystem A as the major tensor index and
each factor in the descending-m basis of :mod:`lurwitness.operators`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InvalidState
from .linalg import DensityMatrix, PureState, as_density
from .operators import spin_dim


@dataclass(frozen=True)
class WernerParams:
    p_s: float

    def __post_init__(self):
        if not 0.0 <= self.p_s <= 1.0:
            raise ValueError(f"singlet fraction must lie in [0, 1], got {self.p_s}")


@dataclass(frozen=True)
class MixtureTerm:
    weight: float
    state: DensityMatrix

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError(f"mixture weight must be nonnegative, got {self.weight}")


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def singlet(l) -> PureState:
    """(1/sqrt(N)) sum_m (-1)^(l-m) |m> x |-m>, with |+l,-l> weighted +1/sqrt(N)."""
    n = spin_dim(l)
    psi = np.zeros(n * n, dtype=complex)
    for k in range(n):
        # m = l - k, so (-1)^(l-m) = (-1)^k; |-m> sits at index n-1-k
        psi[k * n + (n - 1 - k)] = (-1.0) ** k
    return PureState(psi / np.sqrt(n), dims=(n, n))


def max_entangled(n: int) -> PureState:
    if n < 2:
        raise ValueError("max_entangled needs N >= 2")
    psi = np.eye(n, dtype=complex).reshape(-1) / np.sqrt(n)
    return PureState(psi, dims=(n, n))


def mix(terms: Sequence[MixtureTerm], tol: Tolerances = DEFAULT_TOLERANCES, check: bool = True) -> DensityMatrix:
    """Convex combination of density matrices; weights must sum to one."""
    if not terms:
        raise ValueError("empty mixture")
    total = sum(t.weight for t in terms)
    if abs(total - 1.0) > tol.weights:
        raise InvalidState(f"mixture weights sum to {total!r}, not 1")
    dims = terms[0].state.dims
    rho = sum(t.weight * t.state.matrix for t in terms)
    return DensityMatrix(rho, dims, tol, check=check)


def werner(p) -> DensityMatrix:
    """p_s |singlet><singlet| + (1 - p_s) 1/4 for two qubits."""
    p_s = p.p_s if isinstance(p, WernerParams) else WernerParams(float(p)).p_s
    s = singlet(0.5).amplitudes
    rho = p_s * np.outer(s, s.conj()) + (1.0 - p_s) * np.eye(4) / 4
    return DensityMatrix(rho, dims=(2, 2))


def lx_eigenbasis_spin1() -> np.ndarray:
    """Columns are the L_x eigenvectors (m_x = +1, 0, -1) of spin 1 in the L_z basis.

    Closed form, so the rotation is exact rather than numerical.
    """
    r = 1 / np.sqrt(2)
    return np.array(
        [
            [0.5, r, 0.5],
            [r, 0.0, -r],
            [0.5, -r, 0.5],
        ],
        dtype=complex,
    )


def noise_model_state(p_s: float) -> DensityMatrix:
    """Spin-1 singlet mixed with x-anticorrelated product noise.

    p_s |singlet><singlet| + (1 - p_s)/3 (|+1,-1> + |0,0> + |-1,+1>)_x
    where the product kets are L_x eigenstates.  The state is assembled in the
    L_x basis and rotated into the stored L_z basis.
    """
    p_s = WernerParams(float(p_s)).p_s
    u = lx_eigenbasis_spin1()
    uu = np.kron(u, u)
    singlet_x = uu.conj().T @ singlet(1).amplitudes
    rho_x = p_s * np.outer(singlet_x, singlet_x.conj())
    for k in range(3):
        idx = k * 3 + (2 - k)
        rho_x[idx, idx] += (1.0 - p_s) / 3
    rho = uu @ rho_x @ uu.conj().T
    return DensityMatrix(rho, dims=(3, 3))


def random_pure(n: int, seed=None) -> PureState:
    """Haar-random pure state by normalizing a complex Gaussian vector.

    The global phase is fixed so the first nonzero amplitude is real and
    positive; for ``n = 1`` this gives the state ``[1]``.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    rng = _rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    z /= np.linalg.norm(z)
    k = np.flatnonzero(np.abs(z) > 0)[0]
    z *= abs(z[k]) / z[k]
    return PureState(z)


def random_product_pure(na: int, nb: int, seed=None) -> PureState:
    rng = _rng(seed)
    a = random_pure(na, rng).amplitudes
    b = random_pure(nb, rng).amplitudes
    return PureState.normalized(np.kron(a, b), dims=(na, nb))


def random_separable_mixture(na: int, nb: int, m: int, seed=None) -> DensityMatrix:
    """Dirichlet-uniform mixture of ``m`` Haar-random pure product states."""
    if m < 1:
        raise ValueError("need at least one mixture term")
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(m)) if m > 1 else np.ones(1)
    rho = np.zeros((na * nb, na * nb), dtype=complex)
    for w in weights:
        psi = random_product_pure(na, nb, rng).amplitudes
        rho += w * np.outer(psi, psi.conj())
    # positive by construction: skip the eigen-check, keep hermiticity/trace checks
    return DensityMatrix(rho, dims=(na, nb), check=False)


def random_density(n: int, seed=None, rank: int | None = None, dims=None) -> DensityMatrix:
    """Random mixed state G G^dagger / tr, with G an n x rank Ginibre matrix."""
    rng = _rng(seed)
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims=dims)


def random_hermitian(n: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (x + x.conj().T)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix."""
    rng = _rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def spin1_xy_minimum_state(phi: float = 0.0) -> PureState:
    """Spin-1 state with dLx^2 + dLy^2 = 7/16 (the minimum), in the descending-m basis.

    Amplitudes sqrt(5)/4 e^{i phi}, sqrt(6)/4, sqrt(5)/4 e^{-i phi} on |+1>, |0>, |-1>.
    """
    a = np.sqrt(5) / 4
    return PureState(np.array([a * np.exp(1j * phi), np.sqrt(6) / 4, a * np.exp(-1j * phi)]))


# -- state files ---------------------------------------------------------------
#
# {"dim": N, "kind": "density" | "pure", "data": [[re, im], ...] or [[[re, im], ...], ...]}
# plus an optional "dims": [NA, NB].  Row-major, descending-m basis per factor, A-major.


def state_to_dict(state) -> dict:
    if isinstance(state, PureState):
        data = [[float(z.real), float(z.imag)] for z in state.amplitudes]
        out = {"dim": state.dim, "kind": "pure", "data": data}
    else:
        rho = as_density(state)
        data = [[[float(z.real), float(z.imag)] for z in row] for row in rho.matrix]
        out = {"dim": rho.dim, "kind": "density", "data": data}
    if state.dims is not None:
        out["dims"] = list(state.dims)
    return out


def state_from_dict(obj: dict, tol: Tolerances = DEFAULT_TOLERANCES):
    """Parse and validate a state-file object into a PureState or DensityMatrix."""
    try:
        dim = int(obj["dim"])
        kind = obj["kind"]
        data = np.asarray(obj["data"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidState(f"malformed state file: {exc}") from exc
    dims = obj.get("dims")
    if kind == "pure":
        if data.shape != (dim, 2):
            raise InvalidState(f"pure state data must have shape ({dim}, 2), got {data.shape}")
        return PureState(data[:, 0] + 1j * data[:, 1], dims=dims, tol=tol)
    if kind == "density":
        if data.shape != (dim, dim, 2):
            raise InvalidState(f"density data must have shape ({dim}, {dim}, 2), got {data.shape}")
        return DensityMatrix(data[..., 0] + 1j * data[..., 1], dims=dims, tol=tol)
    raise InvalidState(f"state kind must be 'pure' or 'density', got {kind!r}")


def save_state(state, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(state), fh)
        fh.write("\n")


def load_state(path, tol: Tolerances = DEFAULT_TOLERANCES):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidState(f"state file is not valid JSON: {exc}") from exc
    return state_from_dict(obj, tol)


__all__ = [
    "WernerParams",
    "MixtureTerm",
    "singlet",
    "max_entangled",
    "mix",
    "werner",
    "noise_model_state",
    "random_pure",
    "random_product_pure",
    "random_separable_mixture",
    "random_density",
    "random_hermitian",
    "random_unitary",
    "spin1_xy_minimum_state",
    "state_to_dict",
    "state_from_dict",
    "save_state",
    "load_state",
    "as_density",
]
