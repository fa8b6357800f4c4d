# %% [markdown]
# Local entanglement at half filling as a function of U
#
# The thermodynamic double occupancy comes from a single Bessel integral.
# A 70-site ring solved from the Lieb-Wu equations should sit on top of it.

# %%
import numpy as np

from hubbard_ent import double_occupancy_integral, local_entanglement_half_filling
from hubbard_ent.bethe import ModelSector, local_state
from hubbard_ent.entanglement import von_neumann_entropy

grid = np.linspace(-8, 8, 17)
w = np.array([double_occupancy_integral(U) for U in grid])
ev = np.array([local_entanglement_half_filling(U) for U in grid])

# %%
# E_v peaks at U = 0 (all four local states equally likely) and falls to one
# bit on both sides: spins at large repulsion, empty/double pairs at large
# attraction.
for U, wi, ei in zip(grid, w, ev):
    print(f"U={U:+5.1f}  w={wi:.6f}  E_v={ei:.6f}")

# %%
# Finite ring versus the infinite chain.
print("\n  U     w(L=70)    w(inf)     E_v(L=70)  E_v(inf)")
for U in (1.0, 2.0, 4.0, 8.0):
    _, rho = local_state(ModelSector(70, 70, 35, U))
    print(f"{U:4.1f}  {rho.w:.6f}  {double_occupancy_integral(U):.6f}  "
          f"{von_neumann_entropy(rho):.6f}  {local_entanglement_half_filling(U):.6f}")
