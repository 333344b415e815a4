# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # One-row extraction and CRT patching
#
# A one-row parabolic element factors into short transvections along its row
# and one trailing long transvection.  For `p > 0` the long parameter is the row
# length; for `p < 0` the two differ by twice the cross terms.

# %%
import numpy as np

from symnet import IndexSet, ModRing, decompose_one_row, long_parameter, row_length
from symnet.extraction import one_row_matrix
from symnet.symplectic import word_product

Z4, iset = ModRing(4), IndexSet(3)
for p in (1, -1):
    a = one_row_matrix({2: 1, -2: 2, p: 1}, p, Z4, iset)
    word = decompose_one_row(a, p)
    assert word_product(word, Z4, iset) == a
    print(f"p={p:+d}  long parameter {long_parameter(a, p)}  row length {row_length(a, -p)}")

# %% [markdown]
# Over a composite modulus the membership test for Sp(sigma, Gamma) splits over
# the prime-power factors.

# %%
from symnet import LevelSeed, closure_from_levels, make_equiv, patch_membership, sample_word
from symnet.localization import factor_report
from symnet.nets import full_net

Z12 = ModRing(12)
nu = make_equiv(IndexSet(4), [[1, 2, -1, -2], [3, 4, -3, -4]])
net = closure_from_levels(nu, LevelSeed.of(Z12, [(1, 3, 6)]), Z12)
counts = np.zeros(2, dtype=int)
for t in range(200):
    _, b = sample_word(full_net(Z12, net.index_set), 6, t)
    counts[int(patch_membership(b, net))] += 1
print("outside / inside:", counts)
_, b = sample_word(full_net(Z12, net.index_set), 6, 0)
print(factor_report(b, net))
