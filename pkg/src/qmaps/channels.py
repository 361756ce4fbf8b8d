"""Reduced dynamical maps induced by joint unitary evolution.

A map Lambda on d x d operators is stored through its B (Choi) matrix

    B = sum_ij E_ij (x) Lambda(E_ij),

so a trace-preserving map has Tr B = d and the identity map has spectrum
{d, 0, ..., 0}.  The map is completely positive iff B is positive semidefinite.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import (
    HERM_TOL,
    KEEP_E,
    PAULIS,
    DimensionError,
    as_matrix,
    dagger,
    herm_eig,
    partial_trace,
    psd_sqrt,
    unitary_from_hamiltonian,
)
from .states import BipartiteState, ProjectorBasis, classically_correlated, example_operator

KRAUS_TOL = 1e-8


class NotUnitaryError(ValueError):
    pass


class CompletenessError(ValueError):
    pass


@dataclass(frozen=True)
class DynamicalMap:
    b_matrix: np.ndarray
    d: int

    def __post_init__(self):
        b = as_matrix(self.b_matrix)
        if b.shape != (self.d * self.d, self.d * self.d):
            raise DimensionError(f"B matrix of shape {b.shape} does not fit d = {self.d}")
        object.__setattr__(self, "b_matrix", b)

    def __call__(self, x) -> np.ndarray:
        return apply_map(self, x)

    @property
    def tensor(self) -> np.ndarray:
        """B reshaped so that tensor[i, r, j, s] = Lambda(E_ij)[r, s]."""
        d = self.d
        return self.b_matrix.reshape(d, d, d, d)

    def trace_preservation_error(self) -> float:
        """|| Tr_out B - 1 ||_F, zero for trace-preserving maps."""
        return float(np.linalg.norm(np.einsum("irjr->ij", self.tensor) - np.eye(self.d)))


@dataclass(frozen=True)
class MapEigensystem:
    lambdas: np.ndarray
    eigenmatrices: np.ndarray  # shape (d*d, d, d)

    def apply(self, x) -> np.ndarray:
        z = self.eigenmatrices
        return np.einsum("k,kab,bc,kdc->ad", self.lambdas, z, as_matrix(x), z.conj())


@dataclass(frozen=True)
class KrausSet:
    operators: np.ndarray  # shape (n, d, d)
    completeness_error: float

    @classmethod
    def from_operators(cls, ops) -> "KrausSet":
        ops = np.asarray(ops, dtype=complex)
        return cls(ops, completeness_error(ops))

    @property
    def d(self) -> int:
        return self.operators.shape[1]

    def apply(self, x) -> np.ndarray:
        c = self.operators
        return np.einsum("kab,bc,kdc->ad", c, as_matrix(x), c.conj())


@dataclass(frozen=True)
class AffineBlochMap:
    """Qubit map written as a -> linear @ a + shift on Bloch vectors."""

    linear: np.ndarray
    shift: np.ndarray

    def __call__(self, a) -> np.ndarray:
        return self.linear @ np.asarray(a, dtype=float) + self.shift


def completeness_error(ops) -> float:
    ops = np.asarray(ops, dtype=complex)
    d = ops.shape[1]
    return float(np.linalg.norm(np.einsum("kba,kbc->ac", ops.conj(), ops) - np.eye(d)))


def map_from_function(f, d: int) -> DynamicalMap:
    """Assemble B from the images of the matrix units E_ij."""
    b = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            b[i, :, j, :] = f(e)
    return DynamicalMap(b.reshape(d * d, d * d), d)


def map_from_transfer(m: np.ndarray, d: int) -> DynamicalMap:
    """DynamicalMap from its transfer matrix acting on row-major vectorized operators."""
    m = as_matrix(m)
    # Lambda(E_ij) is column i*d + j of the transfer matrix
    t = m.reshape(d, d, d, d)  # t[r, s, i, j]
    return DynamicalMap(t.transpose(2, 0, 3, 1).reshape(d * d, d * d), d)


def transfer_matrix(m: DynamicalMap) -> np.ndarray:
    d = m.d
    return m.tensor.transpose(1, 3, 0, 2).reshape(d * d, d * d)


def identity_map(d: int) -> DynamicalMap:
    return map_from_function(lambda x: x, d)


def check_unitary(u, n: int | None = None, tol: float = HERM_TOL) -> np.ndarray:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1] or (n is not None and u.shape[0] != n):
        raise DimensionError(f"unitary of shape {u.shape} does not act on dimension {n}")
    err = np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0]))
    if err >= tol:
        raise NotUnitaryError(f"U is not unitary (||U^dag U - 1||_F = {err:.3e})")
    return u


def evolve_reduced(rho: np.ndarray, u: np.ndarray, dim_s: int, dim_e: int) -> np.ndarray:
    """Tr_E[U rho U^dag]."""
    return partial_trace(u @ rho @ dagger(u), dim_s, dim_e)


def map_from_joint(rho: BipartiteState, u) -> DynamicalMap:
    """Linear map X -> Tr_E[U (X (x) tau) U^dag] + Tr(X) Tr_E[U chi U^dag].

    tau is the environment marginal and chi = rho - eta (x) tau, so the map
    sends the system marginal eta to Tr_E[U rho U^dag].
    """
    ds, de = rho.dim_s, rho.dim_e
    u = check_unitary(u, rho.dim)
    tau = rho.tau
    offset = evolve_reduced(rho.chi, u, ds, de)
    return map_from_function(
        lambda x: evolve_reduced(np.kron(x, tau), u, ds, de) + np.trace(x) * offset, ds
    )


def dilation_operators(u, basis: ProjectorBasis, taus: Sequence, dim_e: int) -> np.ndarray:
    """D^{kl}_j with [D^{kl}_j]_{r r'} = sum_a' U_{r l; r' a'} [sqrt(tau_j)]_{a' k}.

    Returned with shape (dim_s, dim_e, dim_e, dim_s, dim_s), indexed [j, k, l, r, r'].
    """
    ds = basis.dim
    ut = u.reshape(ds, dim_e, ds, dim_e)  # [r, l, r', a']
    roots = np.array([psd_sqrt(t) for t in taus])  # [j, a', k]
    return np.einsum("rlsa,jak->jklrs", ut, roots)


def map_from_classical(p, basis: ProjectorBasis, taus: Sequence, u) -> KrausSet:
    """Kraus operators C^(kl) = sum_m D^{kl}_m Pi_m for a classically correlated initial state."""
    rho = classically_correlated(p, basis, taus)  # validates inputs
    ds, de = rho.dim_s, rho.dim_e
    u = check_unitary(u, rho.dim)
    dops = dilation_operators(u, basis, taus, de)
    c = np.einsum("mklrs,mst->klrt", dops, basis.projectors)
    return KrausSet.from_operators(c.reshape(de * de, ds, ds))


def choi_eig(m: DynamicalMap) -> MapEigensystem:
    """Eigenvalues (descending) and eigenmatrices of the B matrix.

    For an eigenvector v indexed (i, r), the eigenmatrix is zeta[r, i] = v[i*d + r],
    i.e. the row-major reshape transposed, so that
    Lambda(X) = sum_a lambda_a zeta_a X zeta_a^dag.
    """
    d = m.d
    ed = herm_eig(m.b_matrix)
    z = ed.eigenvectors.T.reshape(d * d, d, d).transpose(0, 2, 1)
    return MapEigensystem(ed.eigenvalues, z)


def min_choi_eigenvalue(m: DynamicalMap) -> float:
    b = m.b_matrix
    return float(np.linalg.eigvalsh(0.5 * (b + dagger(b)))[0])


def is_cp(m: DynamicalMap, tol: float = 1e-10) -> tuple[bool, float]:
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo = min_choi_eigenvalue(m)
    return lo >= -tol, lo


def apply_map(m: DynamicalMap, eta) -> np.ndarray:
    x = as_matrix(eta)
    if x.shape != (m.d, m.d):
        raise DimensionError(f"operator of shape {x.shape} does not fit map dimension {m.d}")
    return np.einsum("ij,irjs->rs", x, m.tensor)


def kraus_to_map(k: KrausSet) -> DynamicalMap:
    if k.completeness_error > KRAUS_TOL:
        raise CompletenessError(f"Kraus set completeness error {k.completeness_error:.3e}")
    c = k.operators
    d = k.d
    # B[(i,r),(j,s)] = sum_a C_a[r,i] conj(C_a[s,j])
    b = np.einsum("ari,asj->irjs", c, c.conj()).reshape(d * d, d * d)
    return DynamicalMap(b, d)


def kraus_from_map(m: DynamicalMap, tol: float = 1e-10) -> KrausSet:
    """C_a = sqrt(lambda_a) zeta_a over the non-negligible eigenvalues; requires a CP map."""
    es = choi_eig(m)
    if es.lambdas[-1] < -tol:
        raise ValueError(f"map is not completely positive (min eigenvalue {es.lambdas[-1]:.3e})")
    keep = es.lambdas > tol
    ops = np.sqrt(es.lambdas[keep])[:, None, None] * es.eigenmatrices[keep]
    return KrausSet.from_operators(ops)


def is_compatible(eta, rho_ref: BipartiteState, tol: float = HERM_TOL) -> bool:
    """Whether eta (x) tau + chi, built from rho_ref's correlations, is positive semidefinite."""
    eta = as_matrix(eta)
    if eta.shape != (rho_ref.dim_s, rho_ref.dim_s):
        raise DimensionError("eta does not match the reference system dimension")
    joint = np.kron(eta, rho_ref.tau) + rho_ref.chi
    return bool(np.linalg.eigvalsh(0.5 * (joint + dagger(joint)))[0] >= -tol)


# --- the two-qubit example -------------------------------------------------

def heisenberg_hamiltonian(omega: float = 1.0) -> np.ndarray:
    """omega * sum_j sigma_j (x) sigma_j."""
    return omega * sum(np.kron(s, s) for s in PAULIS)


def example_unitary(omega_t: float) -> np.ndarray:
    """exp(-i omega t sum_j sigma_j (x) sigma_j)."""
    return unitary_from_hamiltonian(heisenberg_hamiltonian(1.0), omega_t)


def example_map(omega_t: float, c23: float) -> DynamicalMap:
    """Map induced by the Heisenberg unitary on the sigma_y (x) sigma_z correlated state.

    Only the correlation c23 enters: tau = 1/2 and chi = c23/4 sigma_y (x) sigma_z
    for every local Bloch vector, so the state with a = 0 is used.
    """
    rho = BipartiteState(example_operator(np.zeros(3), c23), 2, 2)
    return map_from_joint(rho, example_unitary(omega_t))


def analytic_example(omega_t: float, c23: float) -> tuple[np.ndarray, AffineBlochMap]:
    """Closed-form Choi spectrum (lambda_1..lambda_4) and Bloch-vector action of the example map.

    The spectrum is returned in the order lambda_{1,2} (the +/- pair that can turn
    negative) followed by lambda_{3,4}.  The Bloch shift carries the sign produced by
    exp(-iHt): a -> cos^2(2wt) a - c23 cos(2wt) sin(2wt) x_hat.
    """
    c = np.cos(2 * omega_t)
    s = np.sin(2 * omega_t)
    root = np.sqrt(4 * c * c + c23 * c23 * s * s)
    lam = np.array([
        0.5 * (1 - c * c + c23 * c * s),
        0.5 * (1 - c * c - c23 * c * s),
        0.5 * (1 + c * c + c * root),
        0.5 * (1 + c * c - c * root),
    ])
    bloch = AffineBlochMap(linear=c * c * np.eye(3), shift=np.array([-c23 * c * s, 0.0, 0.0]))
    return lam, bloch


def bloch_map_of(m: DynamicalMap) -> AffineBlochMap:
    """Extract the affine Bloch-vector action of a qubit map."""
    if m.d != 2:
        raise DimensionError("Bloch representation needs a qubit map")
    half = np.eye(2) / 2
    shift = np.array([np.trace(s @ apply_map(m, half)).real for s in PAULIS])
    lin = np.empty((3, 3))
    for k, sk in enumerate(PAULIS):
        img = apply_map(m, sk / 2)
        lin[:, k] = [np.trace(s @ img).real for s in PAULIS]
    return AffineBlochMap(lin, shift)
