import numpy as np
import pytest

from diracsim import EigenDecomposition, InvalidInput, eigh, expectation, kron, propagator
from diracsim.linalg import as_operator, as_state, require_hermitian


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a + a.conj().T


def test_as_operator_rejects_bad_shapes():
    with pytest.raises(InvalidInput):
        as_operator(np.zeros((2, 3)))
    with pytest.raises(InvalidInput):
        as_operator(np.zeros(4))
    with pytest.raises(InvalidInput):
        as_operator(np.array([[np.inf, 0], [0, 1]]))


def test_require_hermitian():
    require_hermitian(np.array([[1.0, 2j], [-2j, 3.0]]))
    with pytest.raises(InvalidInput):
        require_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_as_state_shape_and_dim():
    v = as_state([1.0, 1.0j], 2)
    assert v.dtype == complex
    with pytest.raises(InvalidInput):
        as_state([1.0, 0.0], 3)
    with pytest.raises(InvalidInput):
        as_state([[1.0, 0.0]])
    with pytest.raises(InvalidInput):
        as_state([np.nan, 0.0])


def test_eigh_reconstructs_and_orders(rng):
    for _ in range(25):
        h = random_hermitian(rng, int(rng.integers(2, 9)))
        dec = eigh(h)
        assert isinstance(dec, EigenDecomposition)
        assert np.all(np.diff(dec.eigenvalues) >= -1e-12)
        assert np.abs(dec.reconstruct() - h).max() <= 1e-10 * max(1.0, np.abs(h).max())
        # orthonormal columns
        v = dec.eigenvectors
        assert np.abs(v.conj().T @ v - np.eye(h.shape[0])).max() <= 1e-12


def test_eigh_dimension_cap():
    with pytest.raises(InvalidInput):
        eigh(np.eye(17))


def test_propagator_unitary_and_inverse(rng):
    h = random_hermitian(rng, 5)
    u = propagator(h, 0.37)
    assert np.abs(u @ u.conj().T - np.eye(5)).max() <= 1e-12
    u_back = propagator(h, -0.37)
    assert np.abs(u_back @ u - np.eye(5)).max() <= 1e-12
    assert np.abs(propagator(h, 0.0) - np.eye(5)).max() <= 1e-14


def test_propagator_matches_series_for_small_step(rng):
    h = random_hermitian(rng, 4)
    dt = 1e-6
    series = (
        np.eye(4)
        - 1j * dt * h
        - 0.5 * dt**2 * (h @ h)
        + 1j / 6 * dt**3 * (h @ h @ h)
    )
    assert np.abs(propagator(h, dt) - series).max() <= 1e-12


def test_kron_matches_numpy(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3))
    assert np.abs(kron(a, b) - np.kron(a, b)).max() == 0.0


def test_expectation_real_output(rng):
    h = random_hermitian(rng, 4)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi = psi / np.linalg.norm(psi)
    val = expectation(psi, h)
    assert isinstance(val, float)
    assert abs(val - np.real(psi.conj() @ h @ psi)) <= 1e-12


def test_expectation_rejects_imaginary_residue():
    psi = np.array([1.0, 1.0]) / np.sqrt(2.0)
    with pytest.raises(InvalidInput):
        expectation(psi, np.array([[0.0, 1.0j], [0.0, 0.0]]))
