import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lurwitness.errors import InvalidState
from lurwitness.linalg import DensityMatrix, PureState
from lurwitness.measures import concurrence
from lurwitness.operators import pauli_matrices, spin_matrices
from lurwitness.states import (
    MixtureTerm,
    WernerParams,
    load_state,
    max_entangled,
    mix,
    noise_model_state,
    random_density,
    random_hermitian,
    random_pure,
    random_separable_mixture,
    random_unitary,
    save_state,
    singlet,
    state_from_dict,
    state_to_dict,
    werner,
)
from lurwitness.uncertainty import variance

SPINS = [0.5, 1, 1.5, 2, 2.5, 3]


def _null_space_singlet(l):
    # independent oracle: common null vector of the three total-spin components
    n = int(2 * l) + 1
    eye = np.eye(n)
    stack = np.vstack([np.kron(op, eye) + np.kron(eye, op) for op in spin_matrices(l)])
    _, s, vh = np.linalg.svd(stack)
    assert s[-1] < 1e-10 and s[-2] > 1e-3  # one-dimensional null space
    return vh[-1].conj()


def test_qubit_singlet():
    expected = np.array([0, 1, -1, 0]) / np.sqrt(2)
    assert np.allclose(singlet(0.5).amplitudes, expected, atol=1e-15)


def test_spin_one_singlet():
    expected = np.zeros(9)
    expected[[2, 4, 6]] = [1, -1, 1]
    assert np.allclose(singlet(1).amplitudes, expected / np.sqrt(3), atol=1e-15)


@pytest.mark.parametrize("l", SPINS)
def test_singlet_annihilated_and_matches_null_space(l):
    psi = singlet(l).amplitudes
    n = int(2 * l) + 1
    eye = np.eye(n)
    for op in spin_matrices(l):
        assert np.abs((np.kron(op, eye) + np.kron(eye, op)) @ psi).max() <= 1e-10
    oracle = _null_space_singlet(l)
    assert abs(abs(np.vdot(oracle, psi)) - 1) <= 1e-10
    assert psi[n - 1].real > 0 and psi[n - 1].imag == 0  # |+l,-l> coefficient


def test_max_entangled_examples():
    assert np.allclose(max_entangled(2).amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))
    lz = spin_matrices(1)[2]
    joint = np.kron(lz, np.eye(3)) - np.kron(np.eye(3), lz)
    assert np.abs(joint @ max_entangled(3).amplitudes).max() == 0.0
    with pytest.raises(ValueError):
        max_entangled(1)


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.69, 1.0])
def test_werner_joint_variances(p):
    rho = werner(p)
    eye = np.eye(2)
    for s in pauli_matrices():
        j = np.kron(s, eye) + np.kron(eye, s)
        assert variance(rho, j) == pytest.approx(2 * (1 - p), abs=1e-12)


def test_werner_rejects_out_of_range():
    with pytest.raises(ValueError):
        werner(1.2)
    with pytest.raises(ValueError):
        WernerParams(-0.1)
    assert np.allclose(werner(WernerParams(0.3)).matrix, werner(0.3).matrix)


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_noise_model_component_variances(p):
    rho = noise_model_state(p)
    lx, ly, _ = spin_matrices(1)
    eye = np.eye(3)
    jx = np.kron(lx, eye) + np.kron(eye, lx)
    jy = np.kron(ly, eye) + np.kron(eye, ly)
    assert variance(rho, jx) == pytest.approx(0.0, abs=1e-12)
    assert variance(rho, jy) == pytest.approx(4 / 3 * (1 - p), abs=1e-12)


def test_noise_model_endpoint_is_singlet():
    psi = singlet(1).amplitudes
    assert np.allclose(noise_model_state(1.0).matrix, np.outer(psi, psi.conj()), atol=1e-14)


def test_random_pure_dimension_one():
    assert np.allclose(random_pure(1, 5).amplitudes, [1.0], atol=1e-15)


def test_random_pure_is_deterministic_per_seed():
    assert np.array_equal(random_pure(4, 123).amplitudes, random_pure(4, 123).amplitudes)
    assert not np.array_equal(random_pure(4, 123).amplitudes, random_pure(4, 124).amplitudes)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_random_pure_haar_second_moment(n):
    rng = np.random.default_rng(2024 + n)
    samples = np.array([np.abs(random_pure(n, rng).amplitudes) ** 2 for _ in range(100_000)])
    mean = samples.mean(axis=0)
    # |psi_k|^2 is Beta(1, n-1): variance (n-1) / (n^2 (n+1))
    sigma = np.sqrt((n - 1) / (n * n * (n + 1)) / len(samples))
    assert np.all(np.abs(mean - 1 / n) <= 3 * sigma)


def test_random_pure_haar_invariance_statistic():
    # the rotated ensemble has the same first-component moment
    rng = np.random.default_rng(9)
    u = random_unitary(3, rng)
    vals = np.array([abs((u @ random_pure(3, rng).amplitudes)[0]) ** 2 for _ in range(50_000)])
    sigma = np.sqrt(2 / 36 / len(vals))
    assert abs(vals.mean() - 1 / 3) <= 4 * sigma


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_random_separable_mixtures_are_valid_states(seed, m):
    rho = random_separable_mixture(3, 2, m, seed)
    DensityMatrix(rho.matrix, dims=(3, 2))  # full validation, including positivity


def test_single_term_mixture_is_a_product_state():
    rho = random_separable_mixture(2, 2, 1, 3).matrix
    assert np.isclose(np.trace(rho @ rho).real, 1.0)
    assert concurrence(rho) <= 1e-9


def test_random_separable_mixtures_have_zero_concurrence():
    rng = np.random.default_rng(77)
    worst = max(concurrence(random_separable_mixture(2, 2, int(rng.integers(1, 6)), rng)) for _ in range(500))
    assert worst <= 1e-9


def test_mixture_concavity_of_variance():
    rng = np.random.default_rng(12)
    for _ in range(200):
        n, m = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        w = rng.dirichlet(np.ones(m))
        parts = [random_density(n, rng) for _ in range(m)]
        s = random_hermitian(n, rng)
        rho = mix([MixtureTerm(wk, pk) for wk, pk in zip(w, parts)])
        avg = sum(wk * variance(pk, s) for wk, pk in zip(w, parts))
        assert variance(rho, s) >= avg - 1e-10


def test_mix_validation():
    a = DensityMatrix(np.diag([1.0, 0.0]))
    with pytest.raises(InvalidState):
        mix([MixtureTerm(0.5, a), MixtureTerm(0.4, a)])
    with pytest.raises(ValueError):
        MixtureTerm(-0.1, a)
    with pytest.raises(ValueError):
        mix([])


@pytest.mark.parametrize(
    "state",
    [singlet(1), werner(0.4), noise_model_state(0.69), max_entangled(3)],
    ids=["singlet1", "werner", "noise", "maxent3"],
)
def test_state_file_round_trip(tmp_path, state):
    path = tmp_path / "s.json"
    save_state(state, path)
    back = load_state(path)
    assert type(back) is type(state)
    if isinstance(state, PureState):
        assert np.array_equal(back.amplitudes, state.amplitudes)
    else:
        assert np.array_equal(back.matrix, state.matrix)
    assert back.dims == state.dims


def test_state_file_schema():
    d = state_to_dict(singlet(0.5))
    assert d["kind"] == "pure" and d["dim"] == 4 and d["data"][1] == [pytest.approx(2**-0.5), 0.0]
    json.dumps(d)
    with pytest.raises(InvalidState):
        state_from_dict({"dim": 2, "kind": "pure", "data": [[1, 0], [1, 0]]})
    with pytest.raises(InvalidState):
        state_from_dict({"dim": 2, "kind": "mixed", "data": []})
    with pytest.raises(InvalidState):
        state_from_dict({"kind": "pure"})
