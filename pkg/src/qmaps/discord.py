"""Mutual information, measurement-conditioned entropy and quantum discord.

Measurements are rank-1 projective measurements on the system S.  All
entropies are in bits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .qcore import PAULIS, DimensionError, dagger, haar_unitary, vn_entropy
from .states import BipartiteState, ProjectorBasis, dephase

DISCORD_FLOOR = -1e-6
P_CUTOFF = 1e-14


@dataclass(frozen=True)
class OptimizerConfig:
    grid: tuple[int, int] = (64, 128)
    restarts: int = 20
    xtol: float = 1e-8
    ftol: float = 1e-13
    seed: int = 0
    max_iter: int = 4000


@dataclass(frozen=True)
class DiscordResult:
    mutual_info: float
    j_max: float
    discord: float
    best_basis: ProjectorBasis
    restarts_used: int
    converged: bool
    clamped: bool = False


def mutual_information(rho: BipartiteState) -> float:
    return vn_entropy(rho.eta) + vn_entropy(rho.tau) - vn_entropy(rho.mat)


def _conditional_blocks(rho: BipartiteState, projectors: np.ndarray) -> np.ndarray:
    """Unnormalized E-conditionals Tr_S[(Pi (x) 1) rho] for a stack of projectors (..., ds, ds)."""
    t = rho.mat.reshape(rho.dim_s, rho.dim_e, rho.dim_s, rho.dim_e)
    return np.einsum("...ba,aebf->...ef", projectors, t)


def _weighted_entropy(blocks: np.ndarray) -> np.ndarray:
    """sum_j p_j H(M_j / p_j) for unnormalized blocks of shape (..., n, de, de), summed over n."""
    herm = 0.5 * (blocks + np.conj(np.swapaxes(blocks, -1, -2)))
    mu = np.clip(np.linalg.eigvalsh(herm), 0.0, None)
    p = mu.sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        mlogm = np.where(mu > 0, mu * np.log2(np.where(mu > 0, mu, 1.0)), 0.0).sum(axis=-1)
        plogp = np.where(p > P_CUTOFF, p * np.log2(np.where(p > P_CUTOFF, p, 1.0)), 0.0)
    term = np.where(p > P_CUTOFF, -mlogm + plogp, 0.0)
    return term.sum(axis=-1)


def conditional_entropy(rho: BipartiteState, basis: ProjectorBasis) -> float:
    """sum_j p_j H(rho_{E|Pi_j}) for a projective measurement on S."""
    if basis.dim != rho.dim_s:
        raise DimensionError(f"basis acts on dimension {basis.dim}, system has {rho.dim_s}")
    return float(_weighted_entropy(_conditional_blocks(rho, basis.projectors)))


def _qubit_projectors(theta, phi) -> np.ndarray:
    """Projector pairs (1 +/- n.sigma)/2 for arrays of polar angles; shape (..., 2, 2, 2)."""
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    ns = np.einsum("...k,kab->...ab", n, np.array(PAULIS))
    eye = np.eye(2)
    return 0.5 * np.stack([eye + ns, eye - ns], axis=-3)


def _qubit_search(rho: BipartiteState, opt: OptimizerConfig):
    nt, nphi = opt.grid
    theta = np.linspace(0.0, np.pi, nt)
    phi = np.linspace(0.0, 2 * np.pi, nphi, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    vals = _weighted_entropy(_conditional_blocks(rho, _qubit_projectors(tt, pp)))

    def f(x):
        return float(_weighted_entropy(_conditional_blocks(rho, _qubit_projectors(x[0], x[1]))))

    best = (np.inf, None, False)
    starts = np.argsort(vals, axis=None, kind="stable")[:3]
    for flat in starts:
        i, j = np.unravel_index(flat, vals.shape)
        x0 = np.array([theta[i], phi[j]])
        simplex = np.array([x0, x0 + [np.pi / nt, 0.0], x0 + [0.0, 2 * np.pi / nphi]])
        res = minimize(
            f, x0, method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": opt.xtol, "fatol": opt.ftol,
                     "maxiter": opt.max_iter},
        )
        fx = min(float(res.fun), float(vals[i, j]))
        if fx < best[0]:
            x = res.x if res.fun <= vals[i, j] else x0
            best = (fx, x, bool(res.success))
    h, x, ok = best
    n = np.array([np.sin(x[0]) * np.cos(x[1]), np.sin(x[0]) * np.sin(x[1]), np.cos(x[0])])
    return h, ProjectorBasis.from_bloch_axis(n), len(starts), ok


def givens_unitary(params: np.ndarray, d: int) -> np.ndarray:
    """Product of two-level rotations G_ij(theta, phi) over all pairs i < j."""
    u = np.eye(d, dtype=complex)
    k = 0
    for i in range(d):
        for j in range(i + 1, d):
            th, ph = params[k], params[k + 1]
            k += 2
            c, s = np.cos(th), np.sin(th)
            g = np.eye(d, dtype=complex)
            g[i, i] = c
            g[j, j] = c
            g[i, j] = -np.exp(-1j * ph) * s
            g[j, i] = np.exp(1j * ph) * s
            u = u @ g
    return u


def _projectors_of(u: np.ndarray) -> np.ndarray:
    return np.einsum("ik,jk->kij", u, u.conj())


def _seed_bases(rho: BipartiteState) -> list[np.ndarray]:
    """Deterministic starting bases: eigenbasis of the S marginal and of a generic conditional operator."""
    _, v_eta = np.linalg.eigh(rho.eta)
    ops = conditional_operators(rho)
    weights = np.cos(np.arange(1, len(ops) + 1) * 0.7548776662466927)
    mix = np.einsum("k,kab->ab", weights, ops)
    _, v_mix = np.linalg.eigh(0.5 * (mix + dagger(mix)))
    return [v_eta.astype(complex), v_mix.astype(complex)]


def _qudit_search(rho: BipartiteState, opt: OptimizerConfig):
    d = rho.dim_s
    npar = d * (d - 1)
    seeds = _seed_bases(rho)
    for r in range(opt.restarts):
        rng = np.random.default_rng([opt.seed, r])
        seeds.append(haar_unitary(d, rng))

    def objective(v0):
        def f(x):
            u = v0 @ givens_unitary(x, d)
            return float(_weighted_entropy(_conditional_blocks(rho, _projectors_of(u))))
        return f

    def descend(v0, x0, step, xatol, fatol):
        simplex = np.vstack([x0, x0 + step * np.eye(npar)])
        return minimize(
            objective(v0), x0, method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": xatol, "fatol": fatol,
                     "maxiter": opt.max_iter * npar},
        )

    # coarse pass from every start, full-tolerance refinement of the three best
    coarse = [descend(v0, np.zeros(npar), 0.3, 1e-3, 1e-7) for v0 in seeds]
    order = np.argsort([r.fun for r in coarse], kind="stable")[:3]
    best = (np.inf, None, False)
    for k in order:
        res = descend(seeds[k], coarse[k].x, 1e-3, opt.xtol, opt.ftol)
        if res.fun < best[0]:
            best = (float(res.fun), seeds[k] @ givens_unitary(res.x, d), bool(res.success))
    h, u, ok = best
    return h, ProjectorBasis(u), len(seeds), ok


def discord(rho: BipartiteState, opt: OptimizerConfig | None = None) -> DiscordResult:
    """Discord I - max_Pi J with the measurement on S.

    Qubit systems use a (theta, phi) grid followed by Nelder-Mead refinement;
    larger systems use Givens-parametrized bases with random restarts.
    """
    opt = opt or OptimizerConfig()
    mi = mutual_information(rho)
    h_e = vn_entropy(rho.tau)
    if rho.dim_s == 1:
        h_min, basis, used, ok = h_e, ProjectorBasis.computational(1), 0, True
    elif rho.dim_s == 2:
        h_min, basis, used, ok = _qubit_search(rho, opt)
    else:
        h_min, basis, used, ok = _qudit_search(rho, opt)
    j_max = h_e - h_min
    value = mi - j_max
    clamped = False
    if value < 0:
        if value < DISCORD_FLOOR:
            ok = False
        value, clamped = 0.0, True
    return DiscordResult(mi, j_max, value, basis, used, ok, clamped)


def conditional_operators(rho: BipartiteState) -> np.ndarray:
    """A_k = Tr_E[(1 (x) B_k) rho] over the matrix-unit basis B_k = E_ab of E.

    Non-Hermitian units are fine here: A_{ab} and A_{ba} are adjoints, and the
    Hermitian combinations span the same commutant.
    """
    t = rho.mat.reshape(rho.dim_s, rho.dim_e, rho.dim_s, rho.dim_e)
    # Tr_E[(1 (x) E_ab) rho] = sum over e of rho[(s,b),(s',e)] delta(a, e) -> rho block [., b, ., a]
    return np.einsum("sbta->abst", t).reshape(rho.dim_e * rho.dim_e, rho.dim_s, rho.dim_s)


def zero_discord_test(rho: BipartiteState, tol: float = 1e-8,
                      opt: OptimizerConfig | None = None) -> tuple[bool, ProjectorBasis | None]:
    """Decide whether rho = sum_j (Pi_j (x) 1) rho (Pi_j (x) 1) for some basis on S.

    The conditional operators A_k must commute; a generic combination of them is
    diagonalized and rho is dephased in that eigenbasis.  If the commuting check
    passes but dephasing does not reproduce rho (degenerate combination), the
    variational discord is thresholded at ``tol`` instead.
    """
    ops = conditional_operators(rho)
    comm = max(
        (np.linalg.norm(a @ b - b @ a) for i, a in enumerate(ops) for b in ops[i + 1:]),
        default=0.0,
    )
    if comm >= tol:
        return False, None
    herm = np.concatenate([ops + np.conj(np.swapaxes(ops, 1, 2)),
                           1j * (ops - np.conj(np.swapaxes(ops, 1, 2)))])
    weights = np.cos(np.arange(1, len(herm) + 1) * 0.7548776662466927) + 0.1
    mix = np.einsum("k,kab->ab", weights, herm)
    _, v = np.linalg.eigh(0.5 * (mix + dagger(mix)))
    basis = ProjectorBasis(v.astype(complex))
    if np.linalg.norm(dephase(rho, basis) - rho.mat) < tol:
        return True, basis
    res = discord(rho, opt)
    if res.discord < tol:
        return True, res.best_basis
    return False, None
