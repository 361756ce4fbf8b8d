import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmaps.qcore import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DimensionError,
    NotHermitianError,
    NotPSDError,
    haar_unitary,
    herm_eig,
    kron,
    partial_trace,
    partial_transpose,
    psd_sqrt,
    random_density,
    unitary_from_hamiltonian,
    vn_entropy,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rand_matrix(rng, r, c):
    return rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))


def rand_herm(rng, d):
    g = rand_matrix(rng, d, d)
    return g + g.conj().T


def test_kron_examples():
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(kron(SIGMA_X, SIGMA_X), np.fliplr(np.eye(4)))
    assert kron(np.ones((2, 3)), np.ones((4, 5))).shape == (8, 15)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_kron_associative_and_bilinear(seed):
    rng = np.random.default_rng(seed)
    a, b, c = rand_matrix(rng, 2, 3), rand_matrix(rng, 3, 2), rand_matrix(rng, 2, 2)
    assert np.linalg.norm(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-12
    a2 = rand_matrix(rng, 2, 3)
    x, y = rng.normal(size=2)
    lhs = kron(x * a + y * a2, b)
    assert np.linalg.norm(lhs - (x * kron(a, b) + y * kron(a2, b))) < 1e-12


def test_partial_trace_examples():
    assert np.allclose(partial_trace(np.kron(SIGMA_Y, SIGMA_Z), 2, 2, "S"), 0)
    rng = np.random.default_rng(1)
    eta, tau = random_density(2, rng), random_density(3, rng)
    assert np.allclose(partial_trace(np.kron(eta, tau), 2, 3, "S"), eta)
    assert np.allclose(partial_trace(np.kron(eta, tau), 2, 3, "E"), tau)
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4), 2, 3)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_partial_trace_of_product(seed, ds, de):
    rng = np.random.default_rng(seed)
    a, b = rand_matrix(rng, ds, ds), rand_matrix(rng, de, de)
    out = partial_trace(kron(a, b), ds, de, "S")
    assert np.linalg.norm(out - a * np.trace(b)) < 1e-12 * max(1, np.linalg.norm(a) * np.linalg.norm(b))
    full = kron(a, b)
    assert abs(np.trace(out) - np.trace(full)) < 1e-10 * max(1, abs(np.trace(full)))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_partial_transpose_properties(seed, ds, de):
    rng = np.random.default_rng(seed)
    m = rand_herm(rng, ds * de)
    pt = partial_transpose(m, ds, de, "E")
    assert np.array_equal(partial_transpose(pt, ds, de, "E"), m)
    assert np.trace(pt) == np.trace(m)
    assert np.linalg.norm(pt - pt.conj().T) < 1e-12
    eta, tau = rand_herm(rng, ds), rand_herm(rng, de)
    assert np.allclose(partial_transpose(np.kron(eta, tau), ds, de, "E"), np.kron(eta, tau.T))


def test_herm_eig_examples():
    e = herm_eig(SIGMA_Z)
    assert np.allclose(e.eigenvalues, [1, -1])
    e = herm_eig(SIGMA_X)
    assert np.allclose(e.eigenvalues, [1, -1])
    v = e.eigenvectors
    assert np.allclose(np.abs(v[:, 0]), np.ones(2) / np.sqrt(2))
    assert np.isclose(v[0, 0] * np.conj(v[1, 0]), 0.5)
    assert np.isclose(v[0, 1] * np.conj(v[1, 1]), -0.5)
    with pytest.raises(NotHermitianError):
        herm_eig(np.array([[0, 1], [0, 0]]))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8))
def test_herm_eig_reconstruction(seed, d):
    m = rand_herm(np.random.default_rng(seed), d)
    e = herm_eig(m)
    assert np.all(np.diff(e.eigenvalues) <= 0)
    assert np.linalg.norm(m - e.reconstruct()) < 1e-10 * np.linalg.norm(m)
    v = e.eigenvectors
    assert np.linalg.norm(v.conj().T @ v - np.eye(d)) < 1e-12


def test_herm_eig_deterministic_on_degenerate_spectrum():
    a = herm_eig(np.eye(3))
    b = herm_eig(np.eye(3))
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def pauli_product_oracle(omega_t):
    """exp(-i wt sum s_j s_j) as the product of its three commuting factors."""
    u = np.eye(4, dtype=complex)
    for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        u = u @ (np.cos(omega_t) * np.eye(4) - 1j * np.sin(omega_t) * np.kron(s, s))
    return u


def test_unitary_from_hamiltonian_examples():
    assert np.allclose(unitary_from_hamiltonian(SIGMA_Z, 0.0), np.eye(2))
    w, t = 0.7, 1.3
    assert np.allclose(unitary_from_hamiltonian(w * SIGMA_Z, t), np.diag([np.exp(-1j * w * t), np.exp(1j * w * t)]))
    h = sum(np.kron(s, s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    for wt in np.linspace(-2, 2, 17):
        u = unitary_from_hamiltonian(h, wt)
        assert np.linalg.norm(u - pauli_product_oracle(wt)) < 1e-12
        assert np.linalg.norm(u.conj().T @ u - np.eye(4)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(-5, 5))
def test_unitary_inverse(seed, t):
    h = rand_herm(np.random.default_rng(seed), 4)
    u = unitary_from_hamiltonian(h, t) @ unitary_from_hamiltonian(h, -t)
    assert np.linalg.norm(u - np.eye(4)) < 1e-11


def test_psd_sqrt_examples():
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    # tiny negative noise is clamped, real negatives are rejected
    assert np.allclose(psd_sqrt(np.diag([1.0, -1e-12])), np.diag([1.0, 0.0]))
    with pytest.raises(NotPSDError):
        psd_sqrt(np.diag([1.0, -1e-6]))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 6))
def test_psd_sqrt_squares_back(seed, d):
    rng = np.random.default_rng(seed)
    g = rand_matrix(rng, d, d)
    m = g @ g.conj().T
    r = psd_sqrt(m)
    assert np.linalg.norm(r - r.conj().T) < 1e-12
    assert np.min(np.linalg.eigvalsh(r)) > -1e-10
    assert np.linalg.norm(r @ r - m) < 1e-10 * max(1, np.linalg.norm(m))


def test_vn_entropy_examples():
    assert abs(vn_entropy(np.diag([1.0, 0.0]))) < 1e-15
    assert np.isclose(vn_entropy(np.eye(2) / 2), 1.0)
    oracle = -(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75))
    assert np.isclose(vn_entropy(np.diag([0.25, 0.75])), oracle)
    assert np.isclose(oracle, 0.811278, atol=1e-6)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 6))
def test_vn_entropy_unitary_invariance(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(d, rng)
    u = haar_unitary(d, rng)
    assert abs(vn_entropy(rho) - vn_entropy(u @ rho @ u.conj().T)) < 1e-10
