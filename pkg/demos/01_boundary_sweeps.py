# %% [markdown]
# # Boundary sweeps
#
# Every integral family has a right-hand side that is claimed to be comparable
# to it as w approaches the sphere.  A sweep evaluates both sides on radii
# 1 - 2^-m and looks at the ratio: it should stay inside a bounded window, and
# the fitted exponent of (1 - |w|^2) should match the dominant term.

# %%
from ballasy import classify, family, run_sweep, verdict
from ballasy.verifier import SweepPlan, default_radii

fam = family("PropA_I", 1, c=1)
print(classify(fam).label)
rep = run_sweep(fam)
for row in rep.rows[-4:]:
    print(f"m={row.m:>4}  lhs={row.lhs:.6e}  rhs={row.rhs:.6e}  ratio={row.ratio:.6f}")

# %% [markdown]
# Here the integral has a closed form, so the ratio is constant and the window
# is 1 up to rounding.

# %%
v = verdict(rep)
print(v.passed, f"window={v.window:.4f}", f"slope={v.slope:.4f} (predicted {v.predicted})")

# %% [markdown]
# Two-point families also depend on how the second point moves.  With a fixed
# second point the rate is usually different from the rate with a = w.

# %%
fam = family("PropB", 2, delta=0, t=3.5, r=0.5, k=0)
print(classify(fam).label)
for coupling in ("same", "fixed"):
    v = verdict(run_sweep(fam, SweepPlan(coupling=coupling)))
    print(f"{coupling:>5}: slope {v.slope:.3f}, predicted {v.predicted:.3f}, window {v.window:.2f}")

# %% [markdown]
# A negative control shifts the claimed exponent by 0.5.  The sweep must
# reject it, otherwise the passes above would mean nothing.

# %%
bad = verdict(run_sweep(family("PropA_I", 1, c=1), rhs_shift=0.5))
print(bad.passed, bad.reasons)

# %% [markdown]
# A pure logarithmic rate settles slowly, so this sweep goes out to 1 - 2^-19.
# The radial integrals are evaluated in terms of 1 - rho, never by forming rho
# close to 1.

# %%
deep = run_sweep(family("L21_I1", delta=0, c=0, k=0), SweepPlan(radii=default_radii(range(2, 20))))
print(f"log growth exponent {deep.summary['log_growth']:.3f}, window {deep.summary['window']:.3f}")
