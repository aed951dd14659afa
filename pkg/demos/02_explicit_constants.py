# %% [markdown]
# # Explicit constants
#
# Two right-hand sides for the same regime differ only in the argument of a
# logarithm.  L1 uses 1 - |phi_a(w)|^2, L2 uses |1 - <phi_a(w), a>|.  This demo
# measures how far apart they can be.

# %%
import math

import numpy as np

from ballasy import CPoint, random_ball_points
from ballasy.asymptotics import note1_forms, sup_bound_21

rng = np.random.default_rng(0)
pairs = random_ball_points(rng, 1, 20_000, 0.9999).reshape(-1, 2, 1)
ratios = np.array([note1_forms(CPoint(w), CPoint(a), 0.0, 3.0)[:2] for w, a in pairs])
L1, L2 = ratios.T
print("max L2/L1:", (L2 / L1).max(), " bound 1 + log 2 =", 1 + math.log(2))
print("max L1/L2:", (L1 / L2).max(), " bound M + 1 = 2")
print("fraction with L2 > L1:", np.mean(L2 > L1))

# %% [markdown]
# L2 can exceed L1: the logarithm arguments differ by the factor
# |1 - <w, a>| / (1 - |w|^2), which can be as small as 1/(1 + |w|).  Since both
# logarithms are at least 1, this costs at most a factor 1 + log 2.

# %%
w, a = CPoint((-0.2814 - 0.2749j,)), CPoint((-0.3960 - 0.8805j,))
print(note1_forms(w, a, 0.0, 3.0))

# %% [markdown]
# The supremum of x^eps log^y(e/x) over (0, 2) is found in closed form from its
# stationary point and compared with the stated upper bound.

# %%
for eps, y in [(0.5, 2.0), (1.0, -1.0), (2.5, 4.0), (0.01, 1.0)]:
    sup, bound = sup_bound_21(eps, y)
    print(f"eps={eps:<5} y={y:<5} sup={sup:.6g}  bound={bound:.6g}")
