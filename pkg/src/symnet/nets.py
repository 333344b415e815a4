"""Form nets of ideals over Z/m.

A form net is a pair ``(sigma, gamma)``: a 2n x 2n array of ideals and a
column of 2n form parameters.  Ideals are stored by generator (see
:mod:`symnet.zmod`), so a net is two integer arrays of divisors of ``m``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

import numpy as np

from .indices import EquivRel, IndexSet
from .zmod import IdealZm, ModRing, RingMismatchError


class NetError(ValueError):
    """Shape mismatch or an axiom violated where a valid net is required."""


@dataclass(frozen=True, eq=False)
class FormNet:
    ring: ModRing
    index_set: IndexSet
    sigma: np.ndarray = field(repr=False)
    gamma: np.ndarray = field(repr=False)

    def __post_init__(self):
        size = 2 * self.index_set.n
        m = self.ring.modulus
        sig = np.array(self.sigma, dtype=np.int64)
        gam = np.array(self.gamma, dtype=np.int64)
        if sig.shape != (size, size) or gam.shape != (size,):
            raise NetError(f"expected sigma {size}x{size} and gamma of length {size}, got {sig.shape}, {gam.shape}")
        for d in itertools.chain(sig.flat, gam.flat):
            if not 1 <= d <= m or m % d:
                raise NetError(f"level generator {d} is not a divisor of {m}")
        sig.setflags(write=False)
        gam.setflags(write=False)
        object.__setattr__(self, "sigma", sig)
        object.__setattr__(self, "gamma", gam)

    @property
    def n(self) -> int:
        return self.index_set.n

    @property
    def m(self) -> int:
        return self.ring.modulus

    def s(self, i: int, j: int) -> IdealZm:
        pos = self.index_set.pos
        return IdealZm(self.ring, int(self.sigma[pos(i), pos(j)]))

    def g(self, i: int) -> IdealZm:
        return IdealZm(self.ring, int(self.gamma[self.index_set.pos(i)]))

    def level(self, i: int, j: int) -> IdealZm:
        """``(sigma, gamma)_ij``: gamma_i on the antidiagonal, sigma_ij elsewhere."""
        return self.g(i) if j == -i else self.s(i, j)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormNet):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.index_set == other.index_set
            and np.array_equal(self.sigma, other.sigma)
            and np.array_equal(self.gamma, other.gamma)
        )

    def __hash__(self):
        return hash((self.ring, self.index_set, self.sigma.tobytes(), self.gamma.tobytes()))

    def __le__(self, other: FormNet) -> bool:
        return leq(self, other)

    def replace(self, sigma=None, gamma=None) -> FormNet:
        return FormNet(
            self.ring,
            self.index_set,
            self.sigma if sigma is None else sigma,
            self.gamma if gamma is None else gamma,
        )

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "sigma": self.sigma.tolist(), "gamma": self.gamma.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> FormNet:
        return cls(ModRing(int(obj["m"])), IndexSet(int(obj["n"])), obj["sigma"], obj["gamma"])

    def __repr__(self):
        return f"FormNet(Z/{self.m}, n={self.n},\nsigma=\n{self.sigma},\ngamma={self.gamma})"


def full_net(ring: ModRing, index_set: IndexSet) -> FormNet:
    size = 2 * index_set.n
    return FormNet(ring, index_set, np.ones((size, size), dtype=np.int64), np.ones(size, dtype=np.int64))


def diagonal_net(ring: ModRing, index_set: IndexSet) -> FormNet:
    size = 2 * index_set.n
    m = ring.modulus
    sigma = np.full((size, size), m, dtype=np.int64)
    np.fill_diagonal(sigma, 1)
    return FormNet(ring, index_set, sigma, np.full(size, m, dtype=np.int64))


def nu_net(nu: EquivRel, ring: ModRing) -> FormNet:
    """``[nu]_R``: unit level inside the classes of ``nu``, zero outside."""
    index_set = nu.index_set
    m = ring.modulus
    idx = index_set.indices
    sigma = np.array([[1 if nu.equiv(i, j) else m for j in idx] for i in idx], dtype=np.int64)
    gamma = np.array([1 if nu.equiv(i, -i) else m for i in idx], dtype=np.int64)
    return FormNet(ring, index_set, sigma, gamma)


def _check_same(a: FormNet, b: FormNet):
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if a.index_set != b.index_set:
        raise NetError(f"rank mismatch: n={a.n} vs n={b.n}")


def leq(a: FormNet, b: FormNet) -> bool:
    """Coordinatewise inclusion of all levels."""
    _check_same(a, b)
    return bool(np.all(a.sigma % b.sigma == 0) and np.all(a.gamma % b.gamma == 0))


def is_major(net: FormNet, nu: EquivRel) -> bool:
    if nu.index_set != net.index_set:
        raise NetError("equivalence relation and net have different rank")
    return leq(nu_net(nu, net.ring), net)


# --------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple[int, ...]
    detail: str

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "indices": list(self.indices), "detail": self.detail}


def _lcm_gen(a: int, b: int, m: int) -> int:
    """Generator of the product ideal ``(a)(b)``."""
    return gcd(a * b, m)


def exact_antidiag(net: FormNet) -> np.ndarray:
    """Generators of ``sum_{k != +-i} sigma_ik sigma_{k,-i} + <gamma_i>`` for every ``i``."""
    m = net.m
    pos = net.index_set.pos
    out = np.empty(2 * net.n, dtype=np.int64)
    for i in net.index_set:
        d = int(net.gamma[pos(i)])
        for k in net.index_set:
            if k in (i, -i):
                continue
            d = gcd(d, _lcm_gen(int(net.sigma[pos(i), pos(k)]), int(net.sigma[pos(k), pos(-i)]), m))
        out[pos(i)] = d
    return out


def validate(net: FormNet, require_exact: bool = False, require_d_net: bool = True,
             require_unitary: bool = True) -> list[Violation]:
    """Every violated axiom with a witnessing index tuple; empty iff all hold."""
    m = net.m
    I = net.index_set.indices
    pos = net.index_set.pos
    S = net.sigma
    G = net.gamma
    out: list[Violation] = []

    def sid(i, j):
        return int(S[pos(i), pos(j)])

    for i, k, j in itertools.product(I, repeat=3):
        prod = _lcm_gen(sid(i, k), sid(k, j), m)
        if prod % sid(i, j):
            out.append(Violation("net", (i, k, j), f"sigma_{i},{k} sigma_{k},{j} = ({prod}) not in sigma_{i},{j} = ({sid(i, j)})"))
    if require_unitary:
        for i, j in itertools.product(I, repeat=2):
            if sid(i, j) != sid(-j, -i):
                out.append(Violation("unitary", (i, j), f"sigma_{i},{j} = ({sid(i, j)}) != sigma_{-j},{-i} = ({sid(-j, -i)})"))
    if require_d_net:
        for i in I:
            if sid(i, i) != 1:
                out.append(Violation("d_net", (i,), f"sigma_{i},{i} = ({sid(i, i)}) is not R"))
    for i in I:
        g = int(G[pos(i)])
        anti = sid(i, -i)
        two = gcd(2 * anti, m)
        if two % g:
            out.append(Violation("form_lower", (i,), f"2 sigma_{i},{-i} = ({two}) not in gamma_{i} = ({g})"))
        if g % anti:
            out.append(Violation("form_upper", (i,), f"gamma_{i} = ({g}) not in sigma_{i},{-i} = ({anti})"))
        for j in I:
            sq = gcd(sid(i, j) ** 2 * int(G[pos(j)]), m)
            if sq % g:
                out.append(Violation("form_square", (i, j),
                                     f"sigma_{i},{j}^[2] gamma_{j} = ({sq}) not in gamma_{i} = ({g})"))
    if require_exact:
        rhs = exact_antidiag(net)
        for i in I:
            if rhs[pos(i)] != sid(i, -i):
                out.append(Violation("exact", (i,), f"sigma_{i},{-i} = ({sid(i, -i)}) but exactness sum = ({rhs[pos(i)]})"))
    return out


def is_valid(net: FormNet, require_exact: bool = False) -> bool:
    return not validate(net, require_exact=require_exact)


def recompute_exact_antidiag(net: FormNet) -> FormNet:
    """Replace each ``sigma_{i,-i}`` by the exactness right-hand side.

    Raises :class:`NetError` if the result is not a form net.
    """
    anti = exact_antidiag(net)
    sigma = net.sigma.copy()
    pos = net.index_set.pos
    for i in net.index_set:
        sigma[pos(i), pos(-i)] = anti[pos(i)]
    out = net.replace(sigma=sigma)
    problems = validate(out)
    if problems:
        raise NetError(f"exact recomputation breaks the axioms: {problems[0].detail}")
    return out


# ------------------------------------------------------------------ closure


@dataclass(frozen=True)
class LevelSeed:
    """Extra levels to absorb: ``sigma`` entries for ``i != +-j`` and ``gamma`` entries."""

    sigma: tuple[tuple[int, int, IdealZm], ...] = ()
    gamma: tuple[tuple[int, IdealZm], ...] = ()

    def __post_init__(self):
        for i, j, _ in self.sigma:
            if j in (i, -i):
                raise NetError(f"seed sigma entry ({i}, {j}) must satisfy i != +-j; use gamma for the antidiagonal")

    @classmethod
    def of(cls, ring: ModRing, sigma: Iterable = (), gamma: Iterable = ()) -> LevelSeed:
        """Build from plain ``(i, j, generator)`` and ``(i, generator)`` tuples."""
        return cls(
            tuple((int(i), int(j), ring.ideal(int(d))) for i, j, d in sigma),
            tuple((int(i), ring.ideal(int(d))) for i, d in gamma),
        )

    def check(self, ring: ModRing, index_set: IndexSet):
        for i, j, ideal in self.sigma:
            index_set.check(i)
            index_set.check(j)
            if ideal.ring != ring:
                raise RingMismatchError(f"seed ideal over {ideal.ring}, expected {ring}")
        for i, ideal in self.gamma:
            index_set.check(i)
            if ideal.ring != ring:
                raise RingMismatchError(f"seed ideal over {ideal.ring}, expected {ring}")

    def to_json(self) -> dict:
        return {
            "sigma": [[i, j, I.generator] for i, j, I in self.sigma],
            "gamma": [[i, I.generator] for i, I in self.gamma],
        }

    @classmethod
    def from_json(cls, obj: dict, ring: ModRing) -> LevelSeed:
        return cls.of(ring, obj.get("sigma", []), obj.get("gamma", []))


def closure_from_levels(nu: EquivRel, seed: LevelSeed, ring: ModRing) -> FormNet:
    """Least exact unitary form D-net above ``[nu]_R`` containing the seed levels.

    Off-antidiagonal ``sigma`` and ``gamma`` are grown by the inflationary rules
    below until nothing changes; ``sigma_{i,-i}`` is always the exactness sum.
    """
    index_set = nu.index_set
    seed.check(ring, index_set)
    base = nu_net(nu, ring)
    m = ring.modulus
    size = 2 * index_set.n
    pos = index_set.pos
    I = index_set.indices
    S = base.sigma.copy()
    G = base.gamma.copy()
    for i, j, ideal in seed.sigma:
        S[pos(i), pos(j)] = gcd(int(S[pos(i), pos(j)]), ideal.generator)
    for i, ideal in seed.gamma:
        G[pos(i)] = gcd(int(G[pos(i)]), ideal.generator)
    mirror = [size - 1 - p for p in range(size)]

    def antidiag():
        for i in I:
            d = int(G[pos(i)])
            for k in I:
                if k not in (i, -i):
                    d = gcd(d, S[pos(i), pos(k)] * S[pos(k), pos(-i)], m)
            S[pos(i), pos(-i)] = d

    changed = True
    while changed:
        before_s, before_g = S.copy(), G.copy()
        # (1) unitarity
        S[:] = np.gcd(S, S[::-1, ::-1].T)
        # (2) net products sigma_ik sigma_kj <= sigma_ij
        antidiag()
        for p in range(size):
            row = np.gcd(S[p, :, None] * S, m)
            S[p] = np.gcd(S[p], np.gcd.reduce(row, axis=0))
        # (3) form parameters: 2 sigma_{i,-i} <= gamma_i, sigma_ij^[2] gamma_j <= gamma_i
        antidiag()
        for p in range(size):
            G[p] = np.gcd(G[p], np.gcd(2 * S[p, mirror[p]], m))
            G[p] = np.gcd(G[p], np.gcd.reduce(np.gcd(S[p] ** 2 * G, m)))
        # (4) exactness
        antidiag()
        S[np.arange(size), np.arange(size)] = 1
        changed = not (np.array_equal(S, before_s) and np.array_equal(G, before_g))
    return FormNet(ring, index_set, S, G)


def block_constancy_violations(net: FormNet, nu: EquivRel) -> list[tuple[int, int, int, int]]:
    """Index quadruples ``(i, j, k, l)``, ``k ~ i``, ``l ~ j``, where levels differ."""
    out = []
    I = net.index_set.indices
    for i, j in itertools.product(I, repeat=2):
        for k in nu.cls(i):
            if net.s(k, j) != net.s(i, j) or net.g(k) != net.g(i):
                out.append((i, j, k, j))
        for l in nu.cls(j):
            if net.s(i, l) != net.s(i, j):
                out.append((i, j, i, l))
    return out
