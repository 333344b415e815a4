import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symnet.indices import IndexSet, all_equivalence_relations, make_equiv
from symnet.nets import LevelSeed, closure_from_levels, diagonal_net, full_net, nu_net
from symnet.subgroups import (
    GeneratorWord,
    HypothesisError,
    congruence_corollary_check,
    corollary_sides,
    ep_generator_set,
    ep_generators,
    net_entry_membership,
    product_length_identity_check,
    product_length_terms,
    row_length,
    row_lengths,
    sample_word,
    sp_membership,
    sp_violations,
)
from symnet.symplectic import T, TransvectionSpec, identity, is_symplectic, transvection, word_product
from symnet.zmod import ModRing

Z2, Z4, Z8 = ModRing(2), ModRing(4), ModRing(8)


def block_nu():
    return make_equiv(IndexSet(4), [[1, 2, -1, -2], [3, 4, -3, -4]])


def gl_nu(n=5):
    return make_equiv(IndexSet(n), [list(range(1, n + 1)), [-i for i in range(1, n + 1)]])


def gl_closure():
    """Over Z/8: sigma_{i,-j} = (2), sigma_{-i,j} = 0, Gamma_+ = (4), Gamma_- = 0."""
    return closure_from_levels(gl_nu(), LevelSeed.of(Z8, [(1, -2, 2)]), Z8)


def naive_row_length(a, i):
    """S_{i,-i} by a scalar loop, after checking the inverse really inverts."""
    iset, m = a.index_set, a.m
    A = a.entries
    size = 2 * iset.n
    X = a.inv.entries
    assert np.array_equal(A @ X % m, np.eye(size, dtype=np.int64))
    return sum(int(a[i, j]) * int(X[iset.pos(j), iset.pos(-i)]) for j in iset.positive) % m


def gauss_inverse(a, p):
    k = a.shape[0]
    aug = np.concatenate([a % p, np.eye(k, dtype=np.int64)], axis=1)
    for c in range(k):
        r = next(r for r in range(c, k) if aug[r, c] % p)
        aug[[c, r]] = aug[[r, c]]
        aug[c] = aug[c] * pow(int(aug[c, c]), -1, p) % p
        for r2 in range(k):
            if r2 != c:
                aug[r2] = (aug[r2] - aug[r2, c] * aug[c]) % p
    return aug[:, k:]


# ---- generators


def test_diagonal_net_has_no_generators():
    assert list(ep_generators(diagonal_net(Z4, IndexSet(3)))) == []


def test_block_net_generator_count_matches_brute_force():
    net = nu_net(block_nu(), Z2)
    iset = net.index_set
    brute = set()
    for i, j in itertools.permutations(iset.indices, 2):
        for xi in range(1, 2):
            if T(i, j, xi, Z2, iset) != identity(Z2, iset) and sp_membership(T(i, j, xi, Z2, iset), net):
                brute.add((i, j, xi))
    ours = {(s.i, s.j, s.xi) for s in ep_generators(net)}
    assert ours == brute
    short = [g for g in ours if g[1] != -g[0]]
    assert len(short) == 16 and len(ours) - len(short) == 8


def test_generators_are_symplectic_and_in_levels():
    net = gl_closure()
    for s in ep_generators(net):
        t = transvection(s, net.ring, net.index_set)
        assert is_symplectic(t)
        assert sp_membership(t, net)
        assert s.xi % net.level(s.i, s.j).generator == 0


def test_principal_generators_subset():
    gens = ep_generator_set(gl_closure())
    principal = list(gens.specs(principal=True))
    assert len(principal) == len(gens)
    assert all(gens.contains(s) for s in principal)


# ---- sampling


def test_sample_word_basics():
    net = gl_closure()
    w, g = sample_word(net, 0, 5)
    assert len(w) == 0 and g == identity(net.ring, net.index_set)
    w1, g1 = sample_word(net, 20, 5)
    w2, g2 = sample_word(net, 20, 5)
    assert w1 == w2 and g1 == g2
    assert w1.product(net.ring, net.index_set) == g1
    assert g1 @ w1.inverse().product(net.ring, net.index_set) == identity(net.ring, net.index_set)
    assert GeneratorWord.from_json(w1.to_json(), 5) == w1
    with pytest.raises(ValueError):
        sample_word(net, -1, 0)


def test_sampled_specs_lie_in_levels():
    net = gl_closure()
    for seed in range(50):
        w, g = sample_word(net, 30, seed)
        assert all(s.xi % net.level(s.i, s.j).generator == 0 for s in w.specs)
        assert sp_membership(g, net)


# ---- row lengths


def test_row_length_examples():
    iset = IndexSet(2)
    assert row_length(T(1, -1, 2, Z4, iset), 1) == 2
    assert not row_lengths(identity(Z8, IndexSet(3))).any()


def test_row_length_matches_definition():
    rng = np.random.default_rng(21)
    for t in range(200):
        m, n = (4, 8, 9, 12)[t % 4], 1 + t % 4
        iset = IndexSet(n)
        net = full_net(ModRing(m), iset)
        _, g = sample_word(net, 10, [21, t])
        i = int(rng.choice(iset.indices))
        assert row_length(g, i) == naive_row_length(g, i)


def test_row_length_with_gaussian_inverse():
    for p in (3, 5, 7):
        iset = IndexSet(3)
        for t in range(30):
            _, g = sample_word(full_net(ModRing(p), iset), 12, [p, t])
            X = gauss_inverse(g.entries.copy(), p)
            for i in iset:
                direct = sum(int(g[i, j]) * int(X[iset.pos(j), iset.pos(-i)]) for j in iset.positive) % p
                assert row_length(g, i) == direct


def test_row_length_lies_in_antidiagonal_sigma():
    for net in (gl_closure(), nu_net(block_nu(), Z8)):
        for t in range(100):
            _, g = sample_word(net, 20, t)
            S = row_lengths(g)
            for i in net.index_set:
                assert S[net.index_set.pos(i)] % net.s(i, -i).generator == 0


# ---- membership


def test_sp_membership_examples():
    net = gl_closure()
    iset = net.index_set
    assert sp_membership(identity(Z8, iset), net)
    # Gamma_1 = (4): alpha = 2 is outside, alpha = 4 inside
    assert not sp_membership(T(1, -1, 2, Z8, iset), net)
    assert sp_membership(T(1, -1, 4, Z8, iset), net)
    kinds = {v[0] for v in sp_violations(T(1, -1, 2, Z8, iset), net)}
    assert kinds == {"length"}  # the entry 2 lies in sigma_{1,-1} = (2); the length 6 does not lie in (4)


def test_sp_violations_report_entries():
    net = nu_net(block_nu(), Z4)
    bad = sp_violations(T(1, 3, 1, Z4, net.index_set), net)
    assert ("entry", (1, 3), 1) in bad and ("entry", (-3, -1), 3) in bad
    assert not sp_membership(T(1, 3, 1, Z4, net.index_set), net)


def test_membership_with_full_gamma_is_entry_test():
    rng = np.random.default_rng(22)
    iset = IndexSet(3)
    for nu in all_equivalence_relations(3):
        net = nu_net(nu, Z4).replace(gamma=np.ones(6, dtype=np.int64))
        for t in range(10):
            g = word_product([TransvectionSpec(*[int(x) for x in rng.choice(iset.indices, 2, replace=False)],
                                               int(rng.integers(4))) for _ in range(4)], Z4, iset)
            assert sp_membership(g, net) == net_entry_membership(g, net)


def test_membership_closed_under_product_and_inverse():
    for net in (gl_closure(), closure_from_levels(block_nu(), LevelSeed.of(Z8, [(1, 3, 2)], [(3, 4)]), Z8)):
        for t in range(100):
            _, a = sample_word(net, 15, [1, t])
            _, b = sample_word(net, 15, [2, t])
            assert sp_membership(a @ b, net)
            assert sp_membership(a.inv, net)


def test_ep_nu_words_lie_in_nu_net_group():
    for n in (2, 3, 4):
        for nu in all_equivalence_relations(n):
            net = nu_net(nu, Z4)
            for t in range(3):
                _, g = sample_word(net, 12, [n, t])
                assert sp_membership(g, net)


# ---- length of products


def _all_transvections(ring, iset):
    out = [identity(ring, iset)]
    for i, j in itertools.permutations(iset.indices, 2):
        for xi in range(1, ring.modulus):
            out.append(T(i, j, xi, ring, iset))
    return out


def test_product_identity_with_identity_factor():
    _, a = sample_word(full_net(Z8, IndexSet(3)), 10, 3)
    e = identity(Z8, IndexSet(3))
    assert product_length_identity_check(a, e) and product_length_identity_check(e, a)


def test_product_identity_exhaustive_pairs_z2_n2():
    mats = _all_transvections(Z2, IndexSet(2))
    assert len(mats) == 13
    for a, b in itertools.product(mats, repeat=2):
        assert product_length_identity_check(a, b)


def test_product_identity_random_words():
    for t in range(2000):
        m = (4, 8, 9, 12)[t % 4]
        net = full_net(ModRing(m), IndexSet(4))
        _, a = sample_word(net, 12, [3, t])
        _, b = sample_word(net, 12, [4, t])
        assert product_length_identity_check(a, b)
        assert product_length_identity_check(a, b, i=-2)


def test_product_identity_detects_wrong_product():
    _, a = sample_word(full_net(Z8, IndexSet(2)), 6, 1)
    b = T(1, -1, 1, Z8, IndexSet(2))
    assert product_length_identity_check(a, b)
    assert not np.array_equal(product_length_terms(a, b), row_lengths(a @ T(1, -1, 2, Z8, IndexSet(2))))


# ---- corollaries


CORNETS = {
    "gl": gl_closure,
    "block": lambda: closure_from_levels(block_nu(), LevelSeed.of(Z8, [(1, 3, 2)], [(3, 4)]), Z8),
}


def _short_in(net, rng, require=None):
    gens = [lv for lv in ep_generator_set(net).levels if lv[1] != -lv[0]]
    while True:
        i, j, d = gens[rng.integers(len(gens))]
        if require is None or require(i, j):
            return TransvectionSpec(i, j, d * int(rng.integers(net.m // d)))


def test_left_mult_zero_parameter():
    net = gl_closure()
    _, a = sample_word(net, 10, 0)
    for i in net.index_set:
        lhs, rhs = corollary_sides("left_mult", net, i, a, t=TransvectionSpec(1, 2, 0))
        assert lhs == rhs == row_length(a, i)


@pytest.mark.parametrize("name", sorted(CORNETS))
def test_corollaries_random(name):
    net = CORNETS[name]()
    rng = np.random.default_rng(23)
    iset = net.index_set
    for t in range(1000):
        _, a = sample_word(net, 10, [5, t])
        i = int(rng.choice(iset.indices))
        kind = ("group_closure", "left_mult", "right_mult", "root_short")[t % 4]
        if kind == "group_closure":
            _, b = sample_word(net, 10, [6, t])
            assert congruence_corollary_check(kind, net, i, a, b=b)
        else:
            assert congruence_corollary_check(kind, net, i, a, t=_short_in(net, rng))


def test_root_short_pair_random():
    net = gl_closure()
    rng = np.random.default_rng(24)
    done = 0
    while done < 300:
        t = _short_in(net, rng)
        u = _short_in(net, rng, lambda i, j: i == t.i and j not in (t.j, -t.j, i, -i))
        if t.j in (t.i, -t.i):
            continue
        _, a = sample_word(net, 10, [7, done])
        i = int(rng.choice(net.index_set.indices))
        assert congruence_corollary_check("root_short_pair", net, i, a, t=t, u=u)
        done += 1


def test_root_short_over_block_nu_net():
    """Gamma = R here, so this mainly exercises the hypothesis checks on a second net shape."""
    net = nu_net(block_nu(), Z8)
    rng = np.random.default_rng(25)
    for t in range(1000):
        _, a = sample_word(net, 10, [8, t])
        i = int(rng.choice(net.index_set.indices))
        assert congruence_corollary_check("root_short", net, i, a, t=_short_in(net, rng))


def test_inverse_length_congruence():
    # 0 = S_i(a^-1 a) gives S_i(a^-1) = -sum_k (a'_ik)^2 S_k(a) modulo Gamma_i
    for net in (gl_closure(), CORNETS["block"]()):
        iset = net.index_set
        for t in range(200):
            _, a = sample_word(net, 15, [9, t])
            ai = a.inv
            S = row_lengths(a)
            for i in iset:
                rhs = -sum(int(ai[i, k]) ** 2 * int(S[iset.pos(k)]) for k in iset)
                assert (row_length(ai, i) - rhs) % net.g(i).generator == 0


def test_corollary_hypotheses():
    net = gl_closure()
    a = identity(Z8, net.index_set)
    with pytest.raises(HypothesisError):
        corollary_sides("left_mult", net, 1, a, t=TransvectionSpec(1, -1, 4))
    with pytest.raises(HypothesisError):
        corollary_sides("left_mult", net, 1, a, t=TransvectionSpec(-1, 2, 1))
    with pytest.raises(HypothesisError):
        corollary_sides("root_short_pair", net, 1, a, t=TransvectionSpec(1, 2, 1), u=TransvectionSpec(1, -2, 2))
    with pytest.raises(HypothesisError):
        corollary_sides("group_closure", net, 1, a)
    with pytest.raises(HypothesisError):
        corollary_sides("right_mult", net, 1, T(-1, 2, 1, Z8, net.index_set), t=TransvectionSpec(1, 2, 1))
    with pytest.raises(ValueError):
        corollary_sides("nope", net, 1, a)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([4, 8, 9, 12]), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_product_identity_property(m, n, seed):
    net = full_net(ModRing(m), IndexSet(n))
    _, a = sample_word(net, 8, [seed, 0])
    _, b = sample_word(net, 8, [seed, 1])
    assert product_length_identity_check(a, b)
