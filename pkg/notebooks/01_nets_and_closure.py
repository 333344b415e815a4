# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # Form nets and their closure
#
# Ideals of Z/m are stored by a divisor generator, so a form net over Z/m is a
# pair of integer arrays.  We start from the block relation on four indices,
# seed one cross-block level and look at the least exact major net above it.

# %%
import numpy as np

from symnet import IndexSet, LevelSeed, ModRing, closure_from_levels, make_equiv, nu_net, validate

R = ModRing(4)
nu = make_equiv(IndexSet(4), [[1, 2, -1, -2], [3, 4, -3, -4]])
base = nu_net(nu, R)
print(base.sigma)

# %% [markdown]
# Inside a block every level is the unit ideal (generator 1), outside it is
# zero (generator 4).  Seeding `sigma_{1,3} = (2)` spreads to the whole pair of
# off-diagonal blocks.

# %%
net = closure_from_levels(nu, LevelSeed.of(R, [(1, 3, 2)]), R)
print(net.sigma)
print("gamma:", net.gamma)
print("exact:", validate(net, require_exact=True) == [])

# %% [markdown]
# The general-linear shaped relation has two non-self-conjugate classes.  Here
# a seeded level on the upper-right block also forces a proper form parameter.

# %%
Z8 = ModRing(8)
gl = make_equiv(IndexSet(5), [[1, 2, 3, 4, 5], [-1, -2, -3, -4, -5]])
gnet = closure_from_levels(gl, LevelSeed.of(Z8, [(1, -2, 2)]), Z8)
print("sigma_{1,-1} =", gnet.s(1, -1), " Gamma_1 =", gnet.g(1), " Gamma_-1 =", gnet.g(-1))
assert np.all(gnet.gamma[:5] == 4)
