# %% [markdown]
# Entanglement versus magnetization at half filling
#
# Flipping spins up removes down electrons; at saturation every site holds
# one up electron and the local state is pure.

# %%
from hubbard_ent.scans import scan_magnetization

L = 60
curves = {U: scan_magnetization(L, L, U) for U in (2.0, 4.0, 8.0)}

# %%
print(" m_z    " + "  ".join(f"U={U:<5g}" for U in curves))
for points in zip(*curves.values()):
    print(f"{points[0].parameter:.4f}  " + "  ".join(f"{p.E_v:.5f}" for p in points))
