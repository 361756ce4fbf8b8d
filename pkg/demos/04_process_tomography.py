"""
Process tomography with correlated initial states
=================================================

Measuring a rank-1 fiducial first factorizes the joint state, so the
reconstruction is always CP.  Rotating without measuring keeps the
correlations, and discordant ones can show up as negative Choi eigenvalues.
"""

# %%
import numpy as np

from qmaps import channels, states, tomography

rng = np.random.default_rng(3)
rho, u = tomography.random_tomography_pair(rng)
for model in (tomography.PreparationModel.projective(2),
              tomography.PreparationModel.rotation_only(2, states.from_bloch([0, 0, 1]))):
    res = tomography.simulate(model, rho, u)
    print(f"{model.mode.value:14s} min eig {res.min_eigenvalue:+.4f}  negativity {res.negativity:.4f}")

# %% Two initial states with the same population p0 = 0.7 on |0>
for seed in range(3):
    a, b = tomography.howard_scenario(0.7, 1.0, seed=seed)
    print(f"seed {seed}: classical branch min eig {a.min_eigenvalue:+.5f}, "
          f"discordant branch negativity {b.negativity:.4f}")

# %% Closest CP map by eigenvalue truncation
ncp = channels.example_map(0.05, 1.0)
cp, dist = tomography.closest_cp(ncp)
print("distance %.4f, new min eigenvalue %.1e, trace %.6f" % (dist, np.linalg.eigvalsh(cp.b_matrix)[0],
                                                              np.trace(cp.b_matrix).real))
print("trace preservation lost: %.4f" % cp.trace_preservation_error())
