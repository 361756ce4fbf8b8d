"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  Bipartite
operators are ordered system-first, i.e. an operator on S (x) E has the
composite index ``s * dim_e + e``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERM_TOL = 1e-10
PSD_CLAMP = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

KEEP_S = "S"
KEEP_E = "E"


class DimensionError(ValueError):
    """Raised when an operator does not match the declared subsystem dimensions."""


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (descending) and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def _check_square(m: np.ndarray, dim_s: int, dim_e: int) -> None:
    n = dim_s * dim_e
    if m.shape != (n, n):
        raise DimensionError(f"matrix of shape {m.shape} is not {n}x{n} for dims ({dim_s}, {dim_e})")


def _normalize_side(side: str) -> str:
    s = side.upper()
    if s not in (KEEP_S, KEEP_E):
        raise ValueError(f"subsystem selector must be 'S' or 'E', got {side!r}")
    return s


def partial_trace(m, dim_s: int, dim_e: int, keep: str = KEEP_S) -> np.ndarray:
    """Trace out one factor of a bipartite operator, keeping ``keep``."""
    m = as_matrix(m)
    _check_square(m, dim_s, dim_e)
    t = m.reshape(dim_s, dim_e, dim_s, dim_e)
    if _normalize_side(keep) == KEEP_S:
        return np.einsum("aebe->ab", t)
    return np.einsum("aeaf->ef", t)


def partial_transpose(m, dim_s: int, dim_e: int, side: str = KEEP_E) -> np.ndarray:
    """Transpose the indices of one tensor factor."""
    m = as_matrix(m)
    _check_square(m, dim_s, dim_e)
    t = m.reshape(dim_s, dim_e, dim_s, dim_e)
    if _normalize_side(side) == KEEP_E:
        t = t.transpose(0, 3, 2, 1)
    else:
        t = t.transpose(2, 1, 0, 3)
    return t.reshape(dim_s * dim_e, dim_s * dim_e)


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - dagger(m)))


def is_hermitian(m, tol: float = HERM_TOL) -> bool:
    m = as_matrix(m)
    return hermiticity_error(m) < tol * max(1.0, float(np.linalg.norm(m)))


def _require_hermitian(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix of shape {m.shape} is not square")
    err = hermiticity_error(m)
    if err >= HERM_TOL * max(1.0, float(np.linalg.norm(m))):
        raise NotHermitianError(f"matrix is not Hermitian (||M - M^dag||_F = {err:.3e})")


def _phase_normalize(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the vector's global phase so its first non-negligible entry is real positive."""
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v
    z = v[idx[0]]
    return v * (abs(z) / z)


def herm_eig(m, tie_tol: float = 1e-12) -> EigenDecomposition:
    """Hermitian eigendecomposition with descending, deterministically ordered output.

    Eigenvectors are phase normalized (first non-negligible component real
    positive).  Runs of eigenvalues closer than ``tie_tol`` are ordered by the
    lexicographic order of their eigenvectors' (real, imag) components.
    """
    m = as_matrix(m)
    _require_hermitian(m)
    h = 0.5 * (m + dagger(m))
    w, v = np.linalg.eigh(h)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    v = np.column_stack([_phase_normalize(v[:, k]) for k in range(v.shape[1])]) if v.size else v

    def key(k):
        col = v[:, k]
        return tuple(np.column_stack([np.round(col.real, 12), np.round(col.imag, 12)]).ravel())

    out = list(range(len(w)))
    i = 0
    while i < len(w):
        j = i + 1
        while j < len(w) and w[i] - w[j] < tie_tol:
            j += 1
        if j - i > 1:
            # descending lexicographic order keeps the ordering stable across runs
            out[i:j] = sorted(out[i:j], key=key, reverse=True)
        i = j
    return EigenDecomposition(eigenvalues=w[out], eigenvectors=v[:, out])


def eigvalsh_desc(m) -> np.ndarray:
    m = as_matrix(m)
    _require_hermitian(m)
    return np.linalg.eigvalsh(0.5 * (m + dagger(m)))[::-1]


def unitary_from_hamiltonian(h, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian ``h``, computed from the eigendecomposition of ``h``."""
    h = as_matrix(h)
    _require_hermitian(h)
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def psd_sqrt(m) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in [-1e-10, 0] are clamped to zero; anything lower raises.
    """
    m = as_matrix(m)
    _require_hermitian(m)
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    if w.size and w.min() < -PSD_CLAMP:
        raise NotPSDError(f"matrix has eigenvalue {w.min():.3e} below -{PSD_CLAMP:g}")
    w = np.clip(w, 0.0, None)
    r = (v * np.sqrt(w)) @ dagger(v)
    return 0.5 * (r + dagger(r))


def check_density(m, tol: float = HERM_TOL) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"density matrix must be square, got {m.shape}")
    if hermiticity_error(m) >= tol * max(1.0, float(np.linalg.norm(m))):
        raise NotHermitianError("density matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) >= tol:
        raise ValueError(f"density matrix has trace {tr.real:.12g}, expected 1")
    lo = np.linalg.eigvalsh(0.5 * (m + dagger(m)))[0]
    if lo <= -tol:
        raise NotPSDError(f"density matrix has negative eigenvalue {lo:.3e}")
    return m


def entropy_of_spectrum(p: np.ndarray) -> float:
    """Shannon entropy in bits with 0 log 0 := 0; tiny negatives are clamped."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def vn_entropy(m) -> float:
    """Von Neumann entropy in bits."""
    m = check_density(m)
    return entropy_of_spectrum(np.linalg.eigvalsh(0.5 * (m + dagger(m))))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """G G^dag / Tr(G G^dag) with a d x rank complex Gaussian G."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    r = g @ dagger(g)
    r = r / np.trace(r).real
    return 0.5 * (r + dagger(r))


def random_simplex(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the probability simplex (normalized exponentials)."""
    x = rng.exponential(size=n)
    return x / x.sum()
