"""Density matrices, bipartite states and projector bases."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qcore import (
    HERM_TOL,
    KEEP_E,
    KEEP_S,
    PAULIS,
    SIGMA_Y,
    SIGMA_Z,
    DimensionError,
    NotPSDError,
    as_matrix,
    check_density,
    dagger,
    haar_unitary,
    partial_trace,
    partial_transpose,
    random_density,
    random_simplex,
)

PPT_DECISIVE_DIM = 6


@dataclass(frozen=True)
class BipartiteState:
    """A density matrix on S (x) E with its dimension split."""

    mat: np.ndarray
    dim_s: int
    dim_e: int

    def __post_init__(self):
        m = check_density(self.mat)
        if self.dim_s * self.dim_e != m.shape[0]:
            raise DimensionError(
                f"dims ({self.dim_s}, {self.dim_e}) do not match a {m.shape[0]}-dimensional state"
            )
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.dim_s * self.dim_e

    @property
    def eta(self) -> np.ndarray:
        return partial_trace(self.mat, self.dim_s, self.dim_e, KEEP_S)

    @property
    def tau(self) -> np.ndarray:
        return partial_trace(self.mat, self.dim_s, self.dim_e, KEEP_E)

    @property
    def chi(self) -> np.ndarray:
        """Correlation operator rho - eta (x) tau."""
        return self.mat - np.kron(self.eta, self.tau)


@dataclass(frozen=True)
class ProjectorBasis:
    """Complete set of rank-1, mutually orthogonal projectors on one subsystem.

    ``vectors`` holds the underlying orthonormal vectors as columns.
    """

    vectors: np.ndarray
    projectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = as_matrix(self.vectors)
        d = v.shape[0]
        if v.shape != (d, d):
            raise DimensionError(f"basis needs {d} vectors of length {d}, got shape {v.shape}")
        if np.linalg.norm(dagger(v) @ v - np.eye(d)) >= HERM_TOL * d:
            raise ValueError("basis vectors are not orthonormal")
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "projectors", np.einsum("ik,jk->kij", v, v.conj()))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.projectors)

    @classmethod
    def computational(cls, d: int) -> "ProjectorBasis":
        return cls(np.eye(d, dtype=complex))

    @classmethod
    def from_bloch_axis(cls, n) -> "ProjectorBasis":
        """Qubit basis {(1 + n.sigma)/2, (1 - n.sigma)/2} for a unit vector n."""
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        theta = np.arccos(np.clip(n[2], -1.0, 1.0))
        phi = np.arctan2(n[1], n[0])
        up = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
        dn = np.array([-np.exp(-1j * phi) * np.sin(theta / 2), np.cos(theta / 2)])
        return cls(np.column_stack([up, dn]))

    @classmethod
    def random(cls, d: int, rng: np.random.Generator) -> "ProjectorBasis":
        return cls(haar_unitary(d, rng))

    def check(self, tol: float = HERM_TOL) -> None:
        """Re-verify idempotence, orthogonality and completeness on the stored projectors."""
        p = self.projectors
        d = self.dim
        for j in range(d):
            if np.linalg.norm(p[j] @ p[j] - p[j]) >= tol:
                raise ValueError(f"projector {j} is not idempotent")
            for m in range(j + 1, d):
                if np.linalg.norm(p[m] @ p[j]) >= tol:
                    raise ValueError(f"projectors {m} and {j} are not orthogonal")
        if np.linalg.norm(p.sum(axis=0) - np.eye(d)) >= tol:
            raise ValueError("projectors do not sum to the identity")


def bloch_vector(eta) -> np.ndarray:
    """Read back a_j = Tr[sigma_j eta] for a qubit operator."""
    eta = as_matrix(eta)
    return np.array([np.trace(s @ eta).real for s in PAULIS])


def from_bloch(a) -> np.ndarray:
    """Qubit density matrix (1 + a.sigma)/2."""
    a = np.asarray(a, dtype=float)
    if a.shape != (3,):
        raise ValueError("Bloch vector must have 3 components")
    if np.linalg.norm(a) > 1 + 1e-12:
        raise ValueError(f"|a| = {np.linalg.norm(a):.6g} exceeds 1")
    return 0.5 * (np.eye(2) + sum(ai * s for ai, s in zip(a, PAULIS)))


def example_eigenvalues(a, c23: float) -> np.ndarray:
    """Closed-form spectrum of 1/4 (1 + a.sigma (x) 1 + c23 sigma_y (x) sigma_z), descending."""
    a = np.asarray(a, dtype=float)
    s = a @ a + c23 * c23
    cross = 2 * a[1] * c23
    r_plus = np.sqrt(max(s + cross, 0.0))
    r_minus = np.sqrt(max(s - cross, 0.0))
    return np.sort(0.25 * np.array([1 + r_plus, 1 + r_minus, 1 - r_plus, 1 - r_minus]))[::-1]


def example_operator(a, c23: float) -> np.ndarray:
    """1/4 (1 (x) 1 + a_j sigma_j (x) 1 + c23 sigma_y (x) sigma_z), without validity checks."""
    a = np.asarray(a, dtype=float)
    local = sum(ai * s for ai, s in zip(a, PAULIS))
    return 0.25 * (np.eye(4) + np.kron(local, np.eye(2)) + c23 * np.kron(SIGMA_Y, SIGMA_Z))


def example_state(a, c23: float) -> BipartiteState:
    """Two-qubit state with a local Bloch vector and a sigma_y (x) sigma_z correlation."""
    lo = example_eigenvalues(a, c23)[-1]
    if lo < -HERM_TOL:
        raise NotPSDError(f"(a={list(np.asarray(a, float))}, c23={c23}) gives eigenvalue {lo:.6g} < 0")
    return BipartiteState(example_operator(a, c23), 2, 2)


def max_example_c23(a) -> float:
    """Largest c23 >= 0 for which example_state(a, c23) is a valid state."""
    a = np.asarray(a, dtype=float)
    # boundary: |a|^2 + c^2 + 2|a_y| c = 1
    ay = abs(a[1])
    disc = ay * ay - (a @ a - 1)
    if disc < 0:
        return 0.0
    return max(0.0, -ay + np.sqrt(disc))


def _check_simplex(p: np.ndarray) -> None:
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValueError("p must be a probability vector")


def classically_correlated(p, basis: ProjectorBasis, taus: Sequence) -> BipartiteState:
    """sum_j p_j Pi_j (x) tau_j."""
    p = np.asarray(p, dtype=float)
    _check_simplex(p)
    if len(p) != basis.dim or len(taus) != basis.dim:
        raise DimensionError("need one probability and one environment state per projector")
    taus = [check_density(t) for t in taus]
    de = taus[0].shape[0]
    if any(t.shape != (de, de) for t in taus):
        raise DimensionError("environment states must share one dimension")
    rho = sum(pj * np.kron(pi, tj) for pj, pi, tj in zip(p, basis.projectors, taus))
    return BipartiteState(rho, basis.dim, de)


def product_state(eta, tau) -> BipartiteState:
    eta = check_density(eta)
    tau = check_density(tau)
    return BipartiteState(np.kron(eta, tau), eta.shape[0], tau.shape[0])


def bell_state() -> BipartiteState:
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return BipartiteState(np.outer(psi, psi.conj()), 2, 2)


def classical_bit_state() -> BipartiteState:
    """1/2 (|00><00| + |11><11|)."""
    return BipartiteState(np.diag([0.5, 0, 0, 0.5]).astype(complex), 2, 2)


def marginal(rho: BipartiteState, side: str = KEEP_S) -> np.ndarray:
    return partial_trace(rho.mat, rho.dim_s, rho.dim_e, side)


def dephase(rho: BipartiteState, basis: ProjectorBasis) -> np.ndarray:
    """sum_j (Pi_j (x) 1) rho (Pi_j (x) 1)."""
    t = rho.mat.reshape(rho.dim_s, rho.dim_e, rho.dim_s, rho.dim_e)
    out = np.einsum("jab,becf,jcd->aedf", basis.projectors, t, basis.projectors)
    return out.reshape(rho.dim, rho.dim)


def ppt_min_eigenvalue(rho: BipartiteState) -> float:
    pt = partial_transpose(rho.mat, rho.dim_s, rho.dim_e, KEEP_E)
    return float(np.linalg.eigvalsh(0.5 * (pt + dagger(pt)))[0])


def ppt_verdict(rho: BipartiteState, tol: float = HERM_TOL) -> str:
    """'entangled', 'separable' or 'ppt-undecided' (PPT but beyond 2x2 / 2x3)."""
    if ppt_min_eigenvalue(rho) < -tol:
        return "entangled"
    if rho.dim <= PPT_DECISIVE_DIM:
        return "separable"
    return "ppt-undecided"


def random_classical_parts(dim_s: int, dim_e: int, rng: np.random.Generator):
    """Random (p, basis, taus) triple for a classically correlated state."""
    basis = ProjectorBasis.random(dim_s, rng)
    p = random_simplex(dim_s, rng)
    taus = [random_density(dim_e, rng) for _ in range(dim_s)]
    return p, basis, taus


def random_state(dim_s: int, dim_e: int, rng: np.random.Generator, rank: int | None = None) -> BipartiteState:
    return BipartiteState(random_density(dim_s * dim_e, rng, rank), dim_s, dim_e)
