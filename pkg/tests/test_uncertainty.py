import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lurwitness.errors import ConsistencyError, DimMismatch, InvalidSpin, NonConvergence, NotHermitian
from lurwitness.linalg import DensityMatrix, PureState, eigvals_hermitian, expectation
from lurwitness.operators import ObservableSet, pauli_matrices, pauli_set, spin_matrices, spin_set
from lurwitness.states import random_density, random_hermitian, random_pure, spin1_xy_minimum_state, werner
from lurwitness.uncertainty import (
    ANALYTIC_KINDS,
    UncertaintyBound,
    analytic_bound,
    minimize_sum_uncertainty,
    sum_uncertainty,
    sum_uncertainty_pure,
    uncertainty_gradient,
    variance,
)

SX, SY, SZ = pauli_matrices()
CERTIFY = [("pauli3", None, 2.0), ("pauli2", None, 1.0), ("spin1_xy", None, 7 / 16)] + [
    ("spin3", l, l) for l in (0.5, 1, 1.5, 2)
]


def test_variance_examples():
    assert variance(DensityMatrix(np.diag([1, 0])), SZ) == 0.0
    lz = spin_matrices(1)[2]
    assert variance(spin1_xy_minimum_state(0.3), lz) == pytest.approx(5 / 8, abs=1e-12)
    zz = np.kron(SZ, SZ)
    for p in (0.0, 0.25, 0.69, 1.0):
        assert variance(werner(p), zz) == pytest.approx(1 - p * p, abs=1e-12)


def test_variance_errors():
    with pytest.raises(DimMismatch):
        variance(werner(0.5), SZ)
    with pytest.raises(NotHermitian):
        variance(DensityMatrix(np.eye(2) / 2), [[0, 1], [0, 0]])


def test_variance_zero_iff_supported_on_one_eigenspace():
    op = np.diag([1.0, 1.0, -2.0])
    rho = DensityMatrix(np.array([[0.5, 0.2, 0], [0.2, 0.5, 0], [0, 0, 0]]))
    assert variance(rho, op) == pytest.approx(0.0, abs=1e-15)
    rho2 = DensityMatrix(np.diag([0.9, 0.0, 0.1]))
    assert variance(rho2, op) > 0.5


def test_variance_clamp_is_not_a_blanket_excuse():
    # a trace-one but indefinite matrix gives a clearly negative variance
    bad = DensityMatrix(np.diag([1.5, -0.5]), check=False)
    with pytest.raises(ConsistencyError):
        variance(bad, SZ)


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
@settings(max_examples=100, deadline=None)
def test_variance_is_bounded_by_spectral_width(seed, n):
    rng = np.random.default_rng(seed)
    rho, a = random_density(n, rng), random_hermitian(n, rng)
    w = eigvals_hermitian(a)
    v = variance(rho, a)
    assert 0.0 <= v <= (w[0] - w[-1]) ** 2 / 4 + 1e-12


@pytest.mark.parametrize("l", [0.5, 1, 1.5, 2, 3])
def test_casimir_derivation_identity(l):
    rng = np.random.default_rng(int(2 * l))
    ops = spin_matrices(l)
    n = ops[0].shape[0]
    lf = float(l)
    for _ in range(50):
        rho = random_density(n, rng, rank=int(rng.integers(1, n + 1)))
        mean = np.array([expectation(rho, op) for op in ops])
        assert sum_uncertainty(rho, ops) == pytest.approx(lf * (lf + 1) - mean @ mean, abs=1e-10)
        assert np.linalg.norm(mean) <= lf + 1e-12


def test_sum_uncertainty_examples():
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert sum_uncertainty(random_pure(2, rng), pauli_set()) == pytest.approx(2.0, abs=1e-12)
    psi = spin1_xy_minimum_state(1.1)
    assert sum_uncertainty(psi, spin_set(1, "xy")) == pytest.approx(7 / 16, abs=1e-12)
    assert sum_uncertainty(psi, spin_set(1, "xyz")) == pytest.approx(17 / 16, abs=1e-12)


def test_analytic_registry():
    assert analytic_bound("spin3", 1).value == 1
    assert analytic_bound("spin3", 1.5).value == 1.5
    assert analytic_bound("pauli3").value == 2
    assert analytic_bound("pauli2").value == 1
    assert analytic_bound("spin1_xy").value == 0.4375
    assert all(analytic_bound(k, 1).provenance == "analytic" for k in ANALYTIC_KINDS)
    with pytest.raises(InvalidSpin):
        analytic_bound("spin3")
    with pytest.raises(InvalidSpin):
        analytic_bound("spin3", 0.7)
    with pytest.raises(ValueError):
        analytic_bound("nope")


def test_uncertainty_bound_validation():
    with pytest.raises(ValueError):
        UncertaintyBound(-1.0, "analytic", "x")
    with pytest.raises(ValueError):
        UncertaintyBound(1.0, "numeric", "x")
    with pytest.raises(ValueError):
        UncertaintyBound(1.0, "guess", "x")


def _central_difference(x, ops, h=1e-5):
    g = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        g[k] = (sum_uncertainty_pure(x + e, ops) - sum_uncertainty_pure(x - e, ops)) / (2 * h)
    return g


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(31)
    for _ in range(30):
        n, k = int(rng.integers(2, 6)), int(rng.integers(1, 4))
        ops = [random_hermitian(n, rng) for _ in range(k)]
        psi = random_pure(n, rng).amplitudes
        x = np.concatenate([psi.real, psi.imag])
        g = uncertainty_gradient(x, ops)
        fd = _central_difference(x, ops)
        assert np.linalg.norm(g - fd) <= 1e-6 * max(1.0, np.linalg.norm(fd))


def test_gradient_vanishes_at_known_minimum():
    psi = spin1_xy_minimum_state(0.4).amplitudes
    g = uncertainty_gradient(np.concatenate([psi.real, psi.imag]), spin_matrices(1)[:2])
    assert np.linalg.norm(g) <= 1e-12


def test_minimizer_trivial_single_observable():
    res = minimize_sum_uncertainty(ObservableSet("Lz", (spin_matrices(1)[2],)), restarts=4, seed=0)
    assert res.value == pytest.approx(0.0, abs=1e-9)
    assert res.provenance == "numeric" and res.best_state is not None


@pytest.mark.parametrize("kind,l,expected", CERTIFY)
def test_certification_suite(kind, l, expected):
    from lurwitness.uncertainty import bound_observables

    res = minimize_sum_uncertainty(bound_observables(kind, l), seed=1)
    assert res.value == pytest.approx(expected, abs=1e-6)
    assert res.value == pytest.approx(analytic_bound(kind, l).value, abs=1e-6)
    assert sum_uncertainty(res.best_state, bound_observables(kind, l)) == pytest.approx(res.value, abs=1e-9)


def test_spin1_xy_achiever_has_the_known_populations():
    res = minimize_sum_uncertainty(spin_set(1, "xy"), restarts=16, seed=5)
    pops = np.abs(res.best_state.amplitudes) ** 2
    assert np.allclose(pops, [5 / 16, 6 / 16, 5 / 16], atol=1e-6)


def test_minimizer_is_below_random_states():
    rng = np.random.default_rng(8)
    for n, k in ((3, 2), (4, 3)):
        obs = ObservableSet("rand", tuple(random_hermitian(n, rng) for _ in range(k)))
        res = minimize_sum_uncertainty(obs, restarts=16, seed=2)
        samples = [sum_uncertainty(random_pure(n, rng), obs) for _ in range(1000)]
        assert res.value <= min(samples) + 1e-9


def test_minimizer_is_deterministic_per_seed():
    a = minimize_sum_uncertainty(pauli_set("xy"), restarts=8, seed=42)
    b = minimize_sum_uncertainty(pauli_set("xy"), restarts=8, seed=42)
    assert a.value == b.value
    assert np.array_equal(a.best_state.amplitudes, b.best_state.amplitudes)


def test_minimizer_reports_nonconvergence():
    with pytest.raises(NonConvergence):
        minimize_sum_uncertainty(spin_set(2), restarts=2, seed=0, max_iter=1)
    with pytest.raises(ValueError):
        minimize_sum_uncertainty(pauli_set(), restarts=0)
