# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # Sandwich campaigns
#
# A subgroup H generated by Ep(nu, R) and a few seeded transvections should sit
# between Ep(sigma, Gamma) and the transporter of Sp(sigma, Gamma), where
# (sigma, Gamma) is the closure net.  We sample words over the generators of H
# and check both inclusions.

# %%
from symnet import IndexSet, LevelSeed, ModRing, closure_from_levels, make_equiv, sandwich_check, shrink_level

Z8 = ModRing(8)
gl = make_equiv(IndexSet(5), [[1, 2, 3, 4, 5], [-1, -2, -3, -4, -5]])
seed = LevelSeed.of(Z8, [(1, -2, 2)], [(2, 4)])
report = sandwich_check(gl, seed, Z8, trials=300, seed=0)
print("clean:", report.ok, "over", report.trials, "words")

# %% [markdown]
# Shrinking one level of the net below the closure breaks the sandwich.  The
# failure records the trial number, so the exact word can be replayed alone.

# %%
net = closure_from_levels(gl, seed, Z8)
bad = shrink_level(net, 1, -2)
broken = sandwich_check(gl, seed, Z8, trials=300, seed=0, net=bad, stop_at_first=True)
f = broken.failures[0]
print(f.assertion, "at trial", f.trial, f.detail)
again = sandwich_check(gl, seed, Z8, trials=1, seed=0, net=bad, start=f.trial)
assert again.failures[0].to_json() == f.to_json()
