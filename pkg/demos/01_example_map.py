"""
Two qubits, one correlation, one Heisenberg coupling
====================================================

The state 1/4 (1 + a.sigma (x) 1 + c23 sigma_y (x) sigma_z) is separable (its
partial transpose is itself), yet the map it induces on the first qubit under
exp(-i wt sum_j sigma_j (x) sigma_j) stops being completely positive for
short times.
"""

# %%
import numpy as np

from qmaps import channels, states
from qmaps.qcore import partial_transpose

rho = states.example_state([0.2, 0.0, 0.1], 0.6)
print("PT leaves the state unchanged:", np.allclose(partial_transpose(rho.mat, 2, 2), rho.mat))
print("system marginal Bloch vector:", states.bloch_vector(rho.eta))

# %% Closed-form spectrum against the assembled map
for wt in (0.05, np.pi / 8, np.pi / 4):
    lam, _ = channels.analytic_example(wt, 1.0)
    num = channels.choi_eig(channels.example_map(wt, 1.0)).lambdas
    print(f"wt={wt:.4f}  analytic={np.round(np.sort(lam)[::-1], 6)}  numeric={np.round(num, 6)}")

# %% Where does complete positivity fail?  Scan wt at full correlation.
grid = np.linspace(0, np.pi / 2, 201)
lo = np.array([channels.min_choi_eigenvalue(channels.example_map(w, 1.0)) for w in grid])
ncp = lo < -1e-12
edges = grid[1:][np.diff(ncp.astype(int)) != 0]
print("CP status flips at wt =", np.round(edges, 4), " (pi/8 = %.4f, 3pi/8 = %.4f)" % (np.pi / 8, 3 * np.pi / 8))

# %% The map as an affine squeeze of the Bloch ball
m = channels.example_map(0.05, 1.0)
aff = channels.bloch_map_of(m)
print("linear part diag:", np.round(np.diag(aff.linear), 6), " shift:", np.round(aff.shift, 6))

# %% Outside the compatibility domain the map can return a non-state
ref = states.example_state([0, 0, 0], 1.0)
for a in ([0, 0, 0.5], [-1, 0, 0]):
    eta = states.from_bloch(a)
    out = channels.apply_map(m, eta)
    print(a, "compatible:", channels.is_compatible(eta, ref),
          " min output eigenvalue: %.4f" % np.linalg.eigvalsh(out)[0])
