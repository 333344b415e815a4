"""Groups attached to a form net: Ep(sigma, Gamma) words and Sp(sigma, Gamma) membership.

Membership in Sp(sigma, Gamma) is level-wise: every entry ``g_ij`` lies in
``sigma_ij`` and every row length ``S_{i,-i}(g) = sum_{j>0} g_ij g'_{j,-i}``
lies in ``Gamma_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .indices import EquivRel, IndexSet
from .nets import FormNet, LevelSeed, nu_net
from .symplectic import SympMatrix, TransvectionSpec, apply_right, mirror_array, transvection
from .zmod import ModRing


class HypothesisError(ValueError):
    """Inputs do not satisfy the hypotheses of the identity being checked."""


# ------------------------------------------------------------- generators


@dataclass(frozen=True)
class GeneratorSet:
    """Index pairs with the ideal their transvection parameters range over."""

    ring: ModRing
    index_set: IndexSet
    levels: tuple[tuple[int, int, int], ...]  # (i, j, generator d); j == -i for long

    def __len__(self):
        return len(self.levels)

    def specs(self, principal: bool = False) -> Iterator[TransvectionSpec]:
        """Every transvection with a nonzero parameter in its level.

        With ``principal`` only the level generator itself is used; those
        transvections generate the same group.
        """
        m = self.ring.modulus
        for i, j, d in self.levels:
            if principal:
                yield TransvectionSpec(i, j, d)
            else:
                for xi in range(d, m, d):
                    yield TransvectionSpec(i, j, xi)

    def sample_spec(self, rng: np.random.Generator) -> TransvectionSpec:
        i, j, d = self.levels[rng.integers(len(self.levels))]
        return TransvectionSpec(i, j, d * int(rng.integers(self.ring.modulus // d)))

    def contains(self, spec: TransvectionSpec) -> bool:
        return any(i == spec.i and j == spec.j and spec.xi % d == 0 for i, j, d in self.levels)

    def union(self, other: GeneratorSet) -> GeneratorSet:
        merged: dict[tuple[int, int], int] = {}
        for i, j, d in self.levels + other.levels:
            merged[(i, j)] = gcd(merged.get((i, j), 0), d)
        return GeneratorSet(self.ring, self.index_set, tuple((i, j, d) for (i, j), d in merged.items()))


def ep_generator_set(net: FormNet) -> GeneratorSet:
    """Short pairs ``i != +-j`` with level ``sigma_ij`` and long ``(i, -i)`` with ``Gamma_i``; zero levels dropped."""
    m = net.m
    levels = []
    for i in net.index_set:
        for j in net.index_set:
            if j == i:
                continue
            d = net.level(i, j).generator
            if d != m:
                levels.append((i, j, d))
    return GeneratorSet(net.ring, net.index_set, tuple(levels))


def ep_generators(net: FormNet) -> Iterator[TransvectionSpec]:
    """All ``T_ij(xi)``, ``xi`` in ``sigma_ij`` and ``T_{i,-i}(alpha)``, ``alpha`` in ``Gamma_i``, nonzero parameters."""
    return ep_generator_set(net).specs()


def seed_generator_set(nu: EquivRel, seed: LevelSeed, ring: ModRing) -> GeneratorSet:
    """Generators of ``H = <Ep(nu, R), seeded transvections>``."""
    base = ep_generator_set(nu_net(nu, ring))
    extra = tuple((i, j, I.generator) for i, j, I in seed.sigma) + tuple(
        (i, -i, I.generator) for i, I in seed.gamma
    )
    extra = tuple(t for t in extra if t[2] != ring.modulus)
    return base.union(GeneratorSet(ring, nu.index_set, extra))


@dataclass(frozen=True)
class GeneratorWord:
    specs: tuple[TransvectionSpec, ...]
    seed: int | Sequence[int] | None = None

    def __len__(self):
        return len(self.specs)

    def product(self, ring: ModRing, index_set: IndexSet) -> SympMatrix:
        arr = np.eye(2 * index_set.n, dtype=np.int64)
        for spec in self.specs:
            apply_right(arr, spec, ring.modulus)
        return SympMatrix(ring, index_set, arr)

    def inverse(self) -> GeneratorWord:
        return GeneratorWord(tuple(s.negated() for s in reversed(self.specs)), self.seed)

    def to_json(self) -> list:
        return [s.to_json() for s in self.specs]

    @classmethod
    def from_json(cls, obj: list, seed: int | None = None) -> GeneratorWord:
        return cls(tuple(TransvectionSpec.from_json(o) for o in obj), seed)


def sample_from(gens: GeneratorSet, length: int, seed: int | Sequence[int]) -> tuple[GeneratorWord, SympMatrix]:
    """A word of ``length`` uniformly drawn generators (parameters uniform in the level)."""
    if length < 0:
        raise ValueError("length must be >= 0")
    rng = np.random.default_rng(seed)
    if not len(gens):
        word = GeneratorWord((), seed)
    else:
        word = GeneratorWord(tuple(gens.sample_spec(rng) for _ in range(length)), seed)
    return word, word.product(gens.ring, gens.index_set)


def sample_word(net: FormNet, length: int, seed: int | Sequence[int]) -> tuple[GeneratorWord, SympMatrix]:
    return sample_from(ep_generator_set(net), length, seed)


# ------------------------------------------------------------ row lengths


def row_lengths(g: SympMatrix) -> np.ndarray:
    """``S_{i,-i}(g)`` for every ``i`` in dense order."""
    n, m = g.n, g.m
    gi = mirror_array(g.entries, m)
    # sum over positive j of g[i, j] * g'[j, -i]
    prod = g.entries[:, :n] @ gi[:n, :]
    return prod[np.arange(2 * n), np.arange(2 * n)[::-1]] % m


def row_length(g: SympMatrix, i: int) -> int:
    return int(row_lengths(g)[g.index_set.pos(g.index_set.check(i))])


def _check_net(g: SympMatrix, net: FormNet):
    if g.ring != net.ring or g.index_set != net.index_set:
        raise ValueError(f"matrix over Z/{g.m}, n={g.n} vs net over Z/{net.m}, n={net.n}")


def net_entry_membership(g: SympMatrix, net: FormNet) -> bool:
    """``g`` in Sp(sigma): entries only."""
    _check_net(g, net)
    return bool(np.all(g.entries % net.sigma == 0))


def sp_violations(g: SympMatrix, net: FormNet) -> list[tuple[str, tuple[int, ...], int]]:
    """Failing entry and length conditions as ``(kind, indices, value)``."""
    _check_net(g, net)
    idx = net.index_set.indices
    out = []
    bad = np.argwhere(g.entries % net.sigma != 0)
    for p, q in bad:
        out.append(("entry", (idx[p], idx[q]), int(g.entries[p, q])))
    lengths = row_lengths(g)
    for p in np.flatnonzero(lengths % net.gamma != 0):
        out.append(("length", (idx[p],), int(lengths[p])))
    return out


def sp_membership(g: SympMatrix, net: FormNet) -> bool:
    _check_net(g, net)
    if not np.all(g.entries % net.sigma == 0):
        return False
    return bool(np.all(row_lengths(g) % net.gamma == 0))


# ----------------------------------------------------- length of products


def product_length_terms(a: SympMatrix, b: SympMatrix) -> np.ndarray:
    """Right-hand side of the length-of-product expansion for all ``i`` at once.

    ``S(ab)_i = S_i(a) + sum_k a_ik S_k(b) a'_{-k,-i}
                - 2 sum_{j,k,l>0} a_il b_{l,-j} b'_{-j,k} a'_{k,-i}
                - 2 sum_{j,k>0} sum_{l>k} (a_{i,-k} b_{-k,-j} b'_{-j,l} a'_{l,-i}
                                          + a_ik b_{k,-j} b'_{-j,-l} a'_{-l,-i})``
    """
    if a.ring != b.ring or a.index_set != b.index_set:
        raise ValueError("matrices over different rings or ranks")
    n, m = a.n, a.m
    A, B = a.entries, b.entries
    Ai, Bi = mirror_array(A, m), mirror_array(B, m)
    pp = np.arange(n)  # positions of 1..n
    pn = 2 * n - 1 - pp  # positions of -1..-n
    diag = (np.arange(2 * n), np.arange(2 * n)[::-1])  # (i, -i)
    upper = np.triu(np.ones((n, n), dtype=np.int64), k=1)  # [k, l] = 1 iff l > k

    term1 = row_lengths(a)
    term2 = ((A * row_lengths(b)[None, :]) @ Ai[::-1, :])[diag]
    term3 = (A[:, pp] @ B[np.ix_(pp, pn)] % m @ Bi[np.ix_(pn, pp)] % m @ Ai[pp, :])[diag]
    x = (B[np.ix_(pn, pn)] @ Bi[np.ix_(pn, pp)]) % m * upper
    y = (B[np.ix_(pp, pn)] @ Bi[np.ix_(pn, pn)]) % m * upper
    term4 = (A[:, pn] @ x @ Ai[pp, :])[diag] + (A[:, pp] @ y @ Ai[pn, :])[diag]
    return (term1 + term2 - 2 * term3 - 2 * term4) % m


def product_length_identity_check(a: SympMatrix, b: SympMatrix, i: int | None = None) -> bool:
    """Compare the expansion with ``row_length(a @ b, i)`` (all ``i`` when omitted)."""
    rhs = product_length_terms(a, b)
    lhs = row_lengths(a @ b)
    if i is None:
        return bool(np.array_equal(lhs, rhs))
    p = a.index_set.pos(a.index_set.check(i))
    return bool(lhs[p] == rhs[p])


# ----------------------------------------------------------- corollaries

COROLLARY_KINDS = ("group_closure", "left_mult", "right_mult", "root_short", "root_short_pair")


def _require_short_in(spec: TransvectionSpec, net: FormNet, what: str):
    if spec.kind != "short":
        raise HypothesisError(f"{what} must be a short transvection")
    if spec.xi % net.s(spec.i, spec.j).generator:
        raise HypothesisError(f"{what} parameter {spec.xi} not in sigma_{spec.i},{spec.j}")


def corollary_sides(kind: str, net: FormNet, i: int, a: SympMatrix, b: SympMatrix | None = None,
                    t: TransvectionSpec | None = None, u: TransvectionSpec | None = None) -> tuple[int, int]:
    """``(lhs, rhs)`` of a length congruence modulo ``Gamma_i``.

    ``group_closure``   S_i(ab) vs S_i(a) + sum_k a_ik^2 S_k(b)
    ``left_mult``       S_i(T_pq(xi) a) vs S_i(a), or + xi^2 S_q(a) at i = p, + xi^2 S_{-p}(a) at i = -q
    ``right_mult``      S_i(a T_pq(xi)) vs S_i(a)
    ``root_short``      S_i(a T_sr(xi) a^-1) vs a_is^2 xi^2 S_r(a^-1) + a_{i,-r}^2 xi^2 S_{-s}(a^-1)
    ``root_short_pair`` S_i(a T_sr(xi) T_st(zeta) a^-1) vs the four-term expansion
    """
    _check_net(a, net)
    if kind not in COROLLARY_KINDS:
        raise ValueError(f"unknown corollary kind {kind!r}")
    if not net_entry_membership(a, net):
        raise HypothesisError("a is not in Sp(sigma)")
    ring, iset, m = net.ring, net.index_set, net.m
    iset.check(i)
    S = lambda g, k: row_length(g, k)  # noqa: E731

    if kind == "group_closure":
        if b is None or not net_entry_membership(b, net):
            raise HypothesisError("b must be given and lie in Sp(sigma)")
        lhs = S(a @ b, i)
        rhs = S(a, i) + sum(a[i, k] ** 2 * S(b, k) for k in iset)
        return lhs % m, rhs % m

    if t is None:
        raise HypothesisError(f"{kind} needs a transvection")
    _require_short_in(t, net, "transvection")
    tm = transvection(t, ring, iset)
    if kind == "left_mult":
        p, q, xi = t.i, t.j, t.xi
        lhs = S(tm @ a, i)
        if i == p:
            rhs = S(a, p) + xi * xi * S(a, q)
        elif i == -q:
            rhs = S(a, -q) + xi * xi * S(a, -p)
        else:
            rhs = S(a, i)
        return lhs % m, rhs % m
    if kind == "right_mult":
        return S(a @ tm, i) % m, S(a, i) % m

    ainv = a.inv
    s, r, xi = t.i, t.j, t.xi
    if kind == "root_short":
        lhs = S(a @ tm @ ainv, i)
        rhs = a[i, s] ** 2 * xi**2 * S(ainv, r) + a[i, -r] ** 2 * xi**2 * S(ainv, -s)
        return lhs % m, rhs % m

    if u is None:
        raise HypothesisError("root_short_pair needs a second transvection")
    _require_short_in(u, net, "second transvection")
    if u.i != s:
        raise HypothesisError("both transvections must share the row index s")
    tt, zeta = u.j, u.xi
    if r in (s, -s) or tt in (s, -s) or r in (tt, -tt):
        raise HypothesisError("need s != +-r, +-t and r != +-t")
    um = transvection(u, ring, iset)
    lhs = S(a @ tm @ um @ ainv, i)
    rhs = (a[i, s] ** 2 * zeta**2 * S(ainv, tt) + a[i, s] ** 2 * xi**2 * S(ainv, r)
           + a[i, -tt] ** 2 * zeta**2 * S(ainv, -s) + a[i, -r] ** 2 * xi**2 * S(ainv, -s))
    return lhs % m, rhs % m


def congruence_corollary_check(kind: str, net: FormNet, i: int, a: SympMatrix, b: SympMatrix | None = None,
                               t: TransvectionSpec | None = None, u: TransvectionSpec | None = None) -> bool:
    lhs, rhs = corollary_sides(kind, net, i, a, b, t, u)
    return (lhs - rhs) % net.g(i).generator == 0


def word_in_levels(word: GeneratorWord, net: FormNet) -> list[TransvectionSpec]:
    """Specs whose parameter lies outside the net level ``(sigma, Gamma)_ij``."""
    return [s for s in word.specs if s.xi % net.level(s.i, s.j).generator]


def conjugate_levels_ok(h: SympMatrix, specs: Sequence[TransvectionSpec], net: FormNet) -> TransvectionSpec | None:
    """First spec whose conjugate ``h T h^-1`` leaves Sp(sigma, Gamma), or None."""
    hinv = h.inv
    for spec in specs:
        c = h @ transvection(spec, net.ring, net.index_set) @ hinv
        if not sp_membership(c, net):
            return spec
    return None
