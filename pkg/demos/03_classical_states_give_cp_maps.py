"""
Zero discord implies complete positivity
========================================

For rho = sum_j p_j Pi_j (x) tau_j the reduced dynamics has Kraus operators
C = sum_m D_m Pi_m built from U and sqrt(tau_j).  The same Kraus set works for
every choice of p, so it is a genuine map on the marginal.
"""

# %%
import numpy as np

from qmaps import channels, classify, states
from qmaps.discord import zero_discord_test
from qmaps.qcore import haar_unitary, random_simplex

rng = np.random.default_rng(0)
p, basis, taus = states.random_classical_parts(3, 2, rng)
u = haar_unitary(6, rng)
kraus = channels.map_from_classical(p, basis, taus, u)
print("Kraus operators:", len(kraus.operators), " completeness error: %.1e" % kraus.completeness_error)
print("min Choi eigenvalue: %.1e" % channels.min_choi_eigenvalue(channels.kraus_to_map(kraus)))

for _ in range(3):
    q = random_simplex(3, rng)
    rho = states.classically_correlated(q, basis, taus)
    err = np.linalg.norm(kraus.apply(rho.eta) - channels.evolve_reduced(rho.mat, u, 3, 2))
    print("p =", np.round(q, 3), " output error %.1e" % err)

# %% The randomized harness across dimensions
recs = classify.theorem_harness(100, [(2, 2), (2, 3), (3, 2), (3, 3)], seed=1)
print("worst min Choi eigenvalue over 100 trials: %.1e" % min(r.min_choi_eigenvalue for r in recs))

# %% And the other direction: NCP maps only turn up with discord
recs = classify.ncp_search(40, "random-correlated", seed=0)
ncp = [r for r in recs if r.min_choi_eigenvalue < -1e-6]
print(f"NCP maps: {len(ncp)}/40, smallest discord among them: {min(r.discord for r in ncp):.4f}")

# %% A subtlety: the affine extension of a zero-discord state need not be CP.
# 1/4 (1 + sigma_y (x) sigma_z) is classical in the sigma_y basis, but the map
# X -> Tr_E[U (X (x) tau + Tr X chi) U^dag] is NCP; the Kraus map agrees with it
# on the actual marginal and differs elsewhere.
rho = states.example_state([0, 0, 0], 1.0)
print("zero discord:", zero_discord_test(rho)[0])
print("affine map min eigenvalue: %.4f" % channels.min_choi_eigenvalue(channels.example_map(0.05, 1.0)))
