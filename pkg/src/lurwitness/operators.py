"""Spin-l and Pauli observables, partner operators, and observable sets.

Basis convention, used everywhere in the package: the L_z eigenbasis ordered
by descending magnetic quantum number, |+l>, |l-1>, ..., |-l>.  Ladder
matrix elements follow the Condon-Shortley convention (real, nonnegative).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimMismatch, InvalidSpin, NotHermitian
from .linalg import as_matrix, eig_hermitian, hermiticity_error, require_hermitian


def spin_value(l) -> Fraction:
    """Validate a spin quantum number and return it as an exact fraction."""
    try:
        frac = Fraction(l).limit_denominator(1000)
    except (TypeError, ValueError) as exc:
        raise InvalidSpin(f"spin must be a positive half-integer, got {l!r}") from exc
    if abs(float(frac) - float(l)) > 1e-12 or frac <= 0 or (2 * frac).denominator != 1:
        raise InvalidSpin(f"spin must be a positive half-integer, got {l!r}")
    return frac


def spin_dim(l) -> int:
    return int(2 * spin_value(l)) + 1


def magnetic_numbers(l) -> np.ndarray:
    """m = l, l-1, ..., -l."""
    lf = float(spin_value(l))
    return lf - np.arange(spin_dim(l))


def spin_matrices(l) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (Lx, Ly, Lz) for spin ``l`` in units of hbar.

    >>> lx, ly, lz = spin_matrices(0.5)
    >>> np.real(np.diag(lz))
    array([ 0.5, -0.5])
    """
    lf = float(spin_value(l))
    m = magnetic_numbers(l)
    # <m+1|L+|m> = sqrt(l(l+1) - m(m+1)); row index k holds m[k], so L+ sits on the superdiagonal
    raise_elems = np.sqrt(lf * (lf + 1) - m[1:] * (m[1:] + 1))
    lplus = np.diag(raise_elems, k=1).astype(complex)
    lminus = lplus.T.copy()
    lx = 0.5 * (lplus + lminus)
    ly = -0.5j * (lplus - lminus)
    lz = np.diag(m).astype(complex)
    return lx, ly, lz


def pauli_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    return s1, s2, s3


def partner_operator(a, tol: float = DEFAULT_TOLERANCES.herm) -> np.ndarray:
    """B = -A^T, so that A x 1 + 1 x B annihilates sum_n |n, n>."""
    a = require_hermitian(a, tol, name="operator")
    return -a.T.copy()


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def distinct_eigenvalues(w: np.ndarray, tol: float) -> list[tuple[float, np.ndarray]]:
    """Group sorted eigenvalues into clusters; returns (value, indices) pairs.

    The cluster value is the mean, rounded to 12 decimals so that values such
    as 1 - 1e-16 print as 1.
    """
    groups: list[list[int]] = []
    for k, val in enumerate(w):
        if groups and abs(w[groups[-1][0]] - val) <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    out = []
    for g in groups:
        val = round(float(np.mean(w[g])), 12) + 0.0
        out.append((val, np.array(g)))
    return out


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues of one observable and the projector onto each."""

    values: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """A labelled, non-empty list of Hermitian operators of equal dimension.

    ``names`` labels individual operators (used as measurement-setting
    labels); it defaults to ``"0", "1", ...``.
    """

    label: str
    operators: tuple[np.ndarray, ...]
    names: tuple[str, ...] = ()
    tol: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    def __post_init__(self):
        ops = tuple(as_matrix(op) for op in self.operators)
        if not ops:
            raise ValueError("an observable set needs at least one operator")
        dim = ops[0].shape[0]
        for k, op in enumerate(ops):
            if op.shape != (dim, dim):
                raise DimMismatch(f"operator {k} has shape {op.shape}, expected {(dim, dim)}")
            err = hermiticity_error(op)
            if err > self.tol.herm:
                raise NotHermitian(f"operator {k} of {self.label!r} is not Hermitian (deviation {err:.3g})")
            op.setflags(write=False)
        names = tuple(self.names) or tuple(str(k) for k in range(len(ops)))
        if len(names) != len(ops) or len(set(names)) != len(names):
            raise ValueError("names must be unique and match the number of operators")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @cached_property
    def eigen(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        return tuple(eig_hermitian(op, self.tol.herm) for op in self.operators)

    @cached_property
    def spectra(self) -> tuple[Spectrum, ...]:
        out = []
        for w, v in self.eigen:
            values, projs = [], []
            for val, idx in distinct_eigenvalues(w, self.tol.spectrum_match):
                vecs = v[:, idx]
                values.append(val)
                projs.append(vecs @ vecs.conj().T)
            out.append(Spectrum(tuple(values), tuple(projs)))
        return tuple(out)

    @cached_property
    def squares(self) -> tuple[np.ndarray, ...]:
        return tuple(op @ op for op in self.operators)


def spin_set(l, axes: str = "xyz") -> ObservableSet:
    mats = dict(zip("xyz", spin_matrices(l)))
    lbl = f"L{axes}(l={spin_value(l)})"
    return ObservableSet(lbl, tuple(mats[a] for a in axes), tuple(f"L{a}" for a in axes))


def pauli_set(axes: str = "xyz") -> ObservableSet:
    mats = dict(zip("xyz", pauli_matrices()))
    return ObservableSet(f"sigma_{axes}", tuple(mats[a] for a in axes), tuple(f"sigma_{a}" for a in axes))
