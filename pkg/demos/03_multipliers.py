# %% [markdown]
# # Function spaces and multiplier criteria
#
# Norms are maxima over a boundary-refined grid, so every number below is a
# lower bound for the true supremum.  Growth between the last two grid shells
# is what flags a divergent quantity.

# %%
from ballasy import CPoint, NormalWeight
from ballasy.spaces import (SpaceParams, bergman_reproduce, fpms_norm, make_fw, matched_nu, monomial,
                            multiplier_criteria, psi1, psi2, psi3)

mu = NormalWeight(1.0)
sp = SpaceParams(p=2, s=1, mu=mu, nu=matched_nu(mu, 1, 1, 2), n=1)
for f in (psi1(), psi2(), psi3()):
    crit = multiplier_criteria(f, sp)
    print(f.tag, {k: (round(v.published_value, 3), v.diverges) for k, v in crit.items()})

# %% [markdown]
# psi1 is bounded but its gradient grows too fast tangentially; psi2 and psi3
# have tame gradients but are unbounded.

# %% [markdown]
# The point-evaluation test functions vanish at their own point and have grid
# norms that stay bounded as the point moves to the sphere.

# %%
half = NormalWeight(0.5)
sp2 = SpaceParams(2, 1, half, half, 1)
for r in (0.9, 0.99, 0.999):
    f = make_fw(CPoint((r,)), half, 2, 1)
    print(r, f.value(CPoint((r,)).array), round(fpms_norm(f, sp2), 4))

# %% [markdown]
# The weighted Bergman projection reproduces polynomials.

# %%
for alpha in (0.0, 1.0):
    print(alpha, bergman_reproduce(monomial((2,)), alpha, CPoint((0.3 + 0.2j,))))
