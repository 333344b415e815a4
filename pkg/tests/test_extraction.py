import numpy as np
import pytest

from symnet.extraction import (
    ShapeError,
    decompose_one_row,
    enumerate_one_row,
    length_discrepancy,
    level_extraction_check,
    long_parameter,
    one_row_matrix,
    random_one_row,
    shape_check,
    shape_violations,
)
from symnet.indices import IndexSet, make_equiv
from symnet.nets import LevelSeed, closure_from_levels
from symnet.subgroups import row_length
from symnet.symplectic import T, TransvectionSpec, identity, is_symplectic, word_product
from symnet.zmod import ModRing

Z2, Z4, Z8 = ModRing(2), ModRing(4), ModRing(8)


def product(specs, ring, iset):
    return word_product(specs, ring, iset)


def test_shape_examples():
    iset = IndexSet(3)
    for p in iset:
        assert shape_check(identity(Z4, iset), p)
    assert shape_check(T(-1, 2, 3, Z4, iset), 1)
    assert not shape_check(T(2, 3, 1, Z4, iset), 1)
    assert (2, 3) in shape_violations(T(2, 3, 1, Z4, iset), 1)


def test_decompose_examples():
    iset = IndexSet(3)
    specs = decompose_one_row(identity(Z4, iset), 1)
    assert all(s.xi == 0 for s in specs)
    for xi in range(4):
        specs = decompose_one_row(T(-1, 2, xi, Z4, iset), 1)
        assert specs == [
            TransvectionSpec(-1, 2, xi),
            TransvectionSpec(-1, -2, 0),
            TransvectionSpec(-1, 3, 0),
            TransvectionSpec(-1, -3, 0),
            TransvectionSpec(-1, 1, 0),
        ]
    for alpha in range(8):
        specs = decompose_one_row(T(-1, 1, alpha, Z8, iset), 1)
        assert specs[-1] == TransvectionSpec(-1, 1, alpha)
        assert all(s.xi == 0 for s in specs[:-1])
        assert row_length(T(-1, 1, alpha, Z8, iset), -1) == alpha


def test_decompose_rejects_wrong_shape():
    with pytest.raises(ShapeError, match="first offending"):
        decompose_one_row(T(2, 3, 1, Z4, IndexSet(3)), 1)


@pytest.mark.parametrize("m,n", [(2, 3), (3, 2), (4, 2)])
def test_round_trip_exhaustive(m, n):
    ring, iset = ModRing(m), IndexSet(n)
    for p in iset:
        count = 0
        for a in enumerate_one_row(p, ring, iset):
            assert product(decompose_one_row(a, p), ring, iset) == a
            count += 1
        # the row entries and the long parameter are free; the column is forced
        assert count == m ** (2 * n - 1)


def test_enumeration_matches_construction():
    ring, iset = Z2, IndexSet(2)
    for p in iset:
        built = set()
        for bits in range(2 ** 3):
            row = {j: (bits >> k) & 1 for k, j in enumerate(j for j in iset if j != -p)}
            built.add(one_row_matrix(row, p, ring, iset))
        assert built == set(enumerate_one_row(p, ring, iset))


def test_round_trip_random():
    rng = np.random.default_rng(41)
    for t in range(3000):
        ring = (Z4, Z8, ModRing(9), ModRing(12))[t % 4]
        iset = IndexSet(2 + t % 4)
        p = int(rng.choice(iset.indices))
        a = random_one_row(p, ring, iset, rng)
        assert is_symplectic(a) and shape_check(a, p)
        assert product(decompose_one_row(a, p), ring, iset) == a


def test_long_parameter_against_row_length():
    rng = np.random.default_rng(42)
    for t in range(2000):
        ring = (Z4, Z8, ModRing(9), ModRing(12))[t % 4]
        iset = IndexSet(2 + t % 3)
        p = int(rng.choice(iset.indices))
        a = random_one_row(p, ring, iset, rng)
        alpha = long_parameter(a, p)
        cross = sum(a[-p, j] * a[-p, -j] for j in iset.positive if j != abs(p))
        if p > 0:
            assert row_length(a, -p) == alpha
            assert length_discrepancy(a, p) == 0
        else:
            assert row_length(a, -p) == (-alpha - 2 * cross) % ring.modulus
            assert length_discrepancy(a, p) == (-2 * alpha - 2 * cross) % ring.modulus


def test_long_parameter_equals_row_length_over_z2():
    iset = IndexSet(3)
    for p in iset:
        for a in enumerate_one_row(p, Z2, iset):
            assert length_discrepancy(a, p) == 0


def test_negative_p_discrepancy_witness():
    # over Z/4 with p = -1 and a_{1,-1} = 1 the row length is -1 while the factor is 1
    iset = IndexSet(2)
    a = one_row_matrix({-1: 1}, -1, Z4, iset)
    assert long_parameter(a, -1) == 1
    assert row_length(a, 1) == 3
    wrong = decompose_one_row(a, -1)[:-1] + [TransvectionSpec(1, -1, row_length(a, 1))]
    assert product(wrong, Z4, iset) != a


def test_level_extraction():
    nu = make_equiv(IndexSet(4), [[1, 2, -1, -2], [3, 4, -3, -4]])
    net = closure_from_levels(nu, LevelSeed.of(Z8, [(1, 3, 2)], [(2, 4)]), Z8)
    rng = np.random.default_rng(43)
    assert level_extraction_check(identity(Z8, net.index_set), 1, net).ok
    for t in range(300):
        p = int(rng.choice(net.index_set.indices))
        a = random_one_row(p, Z8, net.index_set, rng, net=net)
        rep = level_extraction_check(a, p, net)
        assert rep.ok and product(rep.specs, Z8, net.index_set) == a
        # every factor is an Ep(sigma, Gamma) generator
        assert all(s.xi % net.level(s.i, s.j).generator == 0 for s in rep.specs)


def test_level_extraction_reports_entry_outside_sigma():
    nu = make_equiv(IndexSet(4), [[1, 2, -1, -2], [3, 4, -3, -4]])
    net = closure_from_levels(nu, LevelSeed.of(Z8, [(1, 3, 2)]), Z8)
    assert net.s(-1, 3).generator == 2
    a = one_row_matrix({3: 1}, 1, Z8, net.index_set)
    rep = level_extraction_check(a, 1, net)
    assert not rep.ok and rep.outside == [TransvectionSpec(-1, 3, 1)]

