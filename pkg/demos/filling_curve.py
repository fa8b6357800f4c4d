# %% [markdown]
# Entanglement versus filling
#
# Only even N with M = N/2 (singlets).  Points above half filling are the
# mirror images of those below, so the curve is symmetric about n = 1.

# %%
import math

from hubbard_ent.scans import derivative_jump_at_half_filling, jump_versus_coupling, scan_filling

L = 60
curves = {U: scan_filling(L, U) for U in (1.0, 4.0, 16.0, math.inf)}

# %%
# Where does each curve peak?  At U = inf the closed form peaks at n = 2/3;
# finite U pushes the maximum towards n = 1.
for U, recs in curves.items():
    best = max(recs, key=lambda r: r.E_v)
    print(f"U={U:>5}: max E_v={best.E_v:.5f} at n={best.parameter:.4f}")

# %%
# The slope jumps at n = 1 for U > 0 and the two sides are exact negatives.
left, right = derivative_jump_at_half_filling(L, 4.0)
print(f"\nU=4: dE_v/dn left={left:.5f}, right={right:.5f}")

# %%
# Jump and charge gap side by side (not compared quantitatively).
for U, slope, gap in jump_versus_coupling(L, [0.0, 1.0, 2.0, 4.0, 8.0]):
    print(f"U={U:4.1f}  left slope={slope:+.5f}  charge gap={gap:.5f}")
