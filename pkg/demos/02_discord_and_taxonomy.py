"""
Discord and the correlation taxonomy
====================================

Discord is I minus the best classical correlation extractable by a projective
measurement on S.  It vanishes exactly on states of the form
sum_j p_j Pi_j (x) tau_j.
"""

# %%
import numpy as np

from qmaps import classify, states
from qmaps.discord import discord, zero_discord_test

for name, rho in [("Bell", states.bell_state()),
                  ("classical bit", states.classical_bit_state()),
                  ("example a=(.5,0,0) c23=.5", states.example_state([0.5, 0, 0], 0.5)),
                  ("example a=(0,.3,0) c23=.5", states.example_state([0, 0.3, 0], 0.5))]:
    r = discord(rho)
    print(f"{name:28s} I={r.mutual_info:.6f}  J={r.j_max:.6f}  D={r.discord:.6f}")

# %% The structural test finds the dephasing basis directly
ok, basis = zero_discord_test(states.example_state([0, 0.3, 0], 0.5))
print("zero discord:", ok)
print("witness Bloch axes:", [np.round(states.bloch_vector(p), 6) for p in basis.projectors])

# %% Taxonomy
rng = np.random.default_rng(1)
samples = {
    "product": states.product_state(states.from_bloch([0, 0, 0.4]), states.from_bloch([0.3, 0, 0])),
    "classical": states.classically_correlated(*states.random_classical_parts(2, 2, rng)),
    "separable, discordant": states.example_state([0.5, 0, 0], 0.5),
    "Bell": states.bell_state(),
}
for name, rho in samples.items():
    c = classify.classify_state(rho)
    print(f"{name:22s} -> {c.label.value:28s} discord={c.discord:.4f} minPT={c.min_pt_eigenvalue:.4f}")
