"""Independent reference computations used by the tests.

Nothing here imports qmaps; each oracle rebuilds the quantity from scratch.
"""
import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def entropy_bits(m):
    w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    w = w[w > 1e-15]
    return float(-(w * np.log2(w)).sum())


def ptrace_s(rho, ds, de):
    return np.trace(rho.reshape(ds, de, ds, de), axis1=0, axis2=2)


def ptrace_e(rho, ds, de):
    return np.trace(rho.reshape(ds, de, ds, de), axis1=1, axis2=3)


def reduced_evolution(rho, u, ds, de):
    return ptrace_e(u @ rho @ u.conj().T, ds, de)


def mutual_info(rho, ds, de):
    return entropy_bits(ptrace_e(rho, ds, de)) + entropy_bits(ptrace_s(rho, ds, de)) - entropy_bits(rho)


def grid_discord(rho, n_theta=256, n_phi=512):
    """Two-qubit discord by brute force over Bloch directions of the S measurement."""
    h_e = entropy_bits(ptrace_s(rho, 2, 2))
    best = np.inf
    for th in np.linspace(0, np.pi, n_theta):
        # one theta row at a time keeps memory small
        ph = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
        n = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.full_like(ph, np.cos(th))], 1)
        ns = n[:, 0, None, None] * SX + n[:, 1, None, None] * SY + n[:, 2, None, None] * SZ
        total = np.zeros(n_phi)
        for sign in (1, -1):
            proj = 0.5 * (np.eye(2) + sign * ns)
            # E-block of (P (x) 1) rho, unnormalized
            blk = np.einsum("nba,aebf->nef", proj, rho.reshape(2, 2, 2, 2))
            blk = 0.5 * (blk + np.conj(np.swapaxes(blk, 1, 2)))
            mu = np.clip(np.linalg.eigvalsh(blk), 0, None)
            p = mu.sum(1)
            with np.errstate(divide="ignore", invalid="ignore"):
                q = np.where(p[:, None] > 1e-14, mu / p[:, None], 0)
                h = -np.where(q > 0, q * np.log2(np.where(q > 0, q, 1)), 0).sum(1)
            total += p * h
        best = min(best, total.min())
    return mutual_info(rho, 2, 2) - (h_e - best)


def random_density(d, rng, rank=None):
    k = rank or d
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return m / np.trace(m).real


def bell():
    v = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.outer(v, v.conj())
