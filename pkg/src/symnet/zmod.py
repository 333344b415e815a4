"""Arithmetic in Z/m and the lattice of its ideals.

Every ideal of Z/m is principal and generated by a divisor ``d`` of ``m``;
``d == m`` is the zero ideal and ``d == 1`` the unit ideal.  Inclusion is
reversed divisibility: ``(a) <= (b)`` iff ``b | a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterator


class RingMismatchError(ValueError):
    """Raised when objects over different moduli are combined."""


def factorize(m: int) -> dict[int, int]:
    """Prime factorization of ``m`` as ``{p: v_p(m)}`` (trial division)."""
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


@dataclass(frozen=True)
class ModRing:
    modulus: int

    def __post_init__(self):
        if not isinstance(self.modulus, int) or self.modulus < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.modulus!r}")

    def __repr__(self):
        return f"Z/{self.modulus}"

    def __call__(self, value: int) -> RingElem:
        return RingElem(self, value % self.modulus)

    def reduce(self, value: int) -> int:
        return value % self.modulus

    def elements(self) -> range:
        return range(self.modulus)

    def is_unit(self, x: int) -> bool:
        return gcd(x, self.modulus) == 1

    def units(self) -> list[int]:
        return [x for x in range(1, self.modulus) if gcd(x, self.modulus) == 1]

    @cached_property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(factorize(self.modulus)))

    @property
    def is_local(self) -> bool:
        return len(self.primes) == 1

    def ideal(self, generator: int) -> IdealZm:
        """The ideal generated by an arbitrary element."""
        return IdealZm(self, gcd(generator % self.modulus, self.modulus) or self.modulus)

    @property
    def zero_ideal(self) -> IdealZm:
        return IdealZm(self, self.modulus)

    @property
    def unit_ideal(self) -> IdealZm:
        return IdealZm(self, 1)

    def ideals(self) -> list[IdealZm]:
        """All ideals, ordered by generator."""
        return [IdealZm(self, d) for d in range(1, self.modulus + 1) if self.modulus % d == 0]


@dataclass(frozen=True)
class RingElem:
    ring: ModRing
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.ring.modulus:
            raise ValueError(f"{self.value} is not a canonical representative mod {self.ring.modulus}")

    def _coerce(self, other) -> int:
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other.value
        return int(other)

    def __add__(self, other):
        return self.ring(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.ring(self.value - self._coerce(other))

    def __rsub__(self, other):
        return self.ring(self._coerce(other) - self.value)

    def __mul__(self, other):
        return self.ring(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.ring(-self.value)

    def __pow__(self, k: int):
        return self.ring(pow(self.value, k, self.ring.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.ring.modulus})"


@dataclass(frozen=True)
class IdealZm:
    ring: ModRing
    generator: int

    def __post_init__(self):
        m = self.ring.modulus
        if not 1 <= self.generator <= m or m % self.generator:
            raise ValueError(f"ideal generator {self.generator} must be a divisor of {m} in [1, {m}]")

    @property
    def is_zero(self) -> bool:
        return self.generator == self.ring.modulus

    @property
    def is_unit(self) -> bool:
        return self.generator == 1

    def elements(self) -> list[int]:
        return list(range(0, self.ring.modulus, self.generator))

    def __len__(self):
        return self.ring.modulus // self.generator

    def __contains__(self, x) -> bool:
        return ideal_contains(self, x)

    def __le__(self, other: IdealZm) -> bool:
        _check_same(self, other)
        return self.generator % other.generator == 0

    def __ge__(self, other: IdealZm) -> bool:
        return other <= self

    def __lt__(self, other: IdealZm) -> bool:
        return self <= other and self != other

    def __gt__(self, other: IdealZm) -> bool:
        return other < self

    def __add__(self, other: IdealZm) -> IdealZm:
        return ideal_sum(self, other)

    def __mul__(self, other: IdealZm) -> IdealZm:
        return ideal_product(self, other)

    def __repr__(self):
        if self.is_zero:
            return "(0)"
        return f"({self.generator})"

    def to_json(self) -> dict:
        return {"m": self.ring.modulus, "d": self.generator}

    @classmethod
    def from_json(cls, obj: dict) -> IdealZm:
        return cls(ModRing(int(obj["m"])), int(obj["d"]))


def _check_same(a: IdealZm, b: IdealZm):
    if a.ring != b.ring:
        raise RingMismatchError(f"ideals over {a.ring} and {b.ring}")


def ideal_sum(a: IdealZm, b: IdealZm) -> IdealZm:
    _check_same(a, b)
    return IdealZm(a.ring, gcd(a.generator, b.generator))


def ideal_product(a: IdealZm, b: IdealZm) -> IdealZm:
    _check_same(a, b)
    return IdealZm(a.ring, gcd(a.generator * b.generator, a.ring.modulus))


def ideal_contains(a: IdealZm, x) -> bool:
    if isinstance(x, RingElem):
        if x.ring != a.ring:
            raise RingMismatchError(f"element of {x.ring} tested against ideal of {a.ring}")
        x = x.value
    return x % a.generator == 0


def square_scale_product(a: IdealZm, b: IdealZm) -> IdealZm:
    """Smallest ideal containing every ``xi**2 * beta`` with xi in ``a``, beta in ``b``.

    The squares of multiples of ``d_a`` all lie in ``(d_a**2)`` and ``d_a**2``
    itself is one of them, so the additive span is ``(d_a**2 * d_b)``.
    """
    _check_same(a, b)
    return a.ring.ideal(a.generator * a.generator * b.generator)


def double_ideal(a: IdealZm) -> IdealZm:
    return a.ring.ideal(2 * a.generator)


def jacobson_radical(ring: ModRing) -> IdealZm:
    rad = 1
    for p in ring.primes:
        rad *= p
    return IdealZm(ring, rad)


def crt_split(ring: ModRing) -> list[ModRing]:
    """Local factors ``Z/p^k`` of ``ring``, ascending by prime."""
    return [ModRing(p**k) for p, k in sorted(factorize(ring.modulus).items())]


def _check_factor(ring: ModRing, factor: ModRing):
    if ring.modulus % factor.modulus:
        raise RingMismatchError(f"{factor} is not a quotient of {ring}")


def project_elem(x, factor: ModRing) -> int:
    return int(x) % factor.modulus


def project_ideal(a: IdealZm, factor: ModRing) -> IdealZm:
    _check_factor(a.ring, factor)
    return IdealZm(factor, gcd(a.generator, factor.modulus))


def crt_lift(residues: list[int], factors: list[ModRing]) -> int:
    """Unique ``x mod prod(moduli)`` with ``x = r_i mod m_i`` for pairwise coprime moduli."""
    x, mod = 0, 1
    for r, f in zip(residues, factors):
        mi = f.modulus
        # x + mod*t = r (mod mi)
        t = ((r - x) * pow(mod, -1, mi)) % mi
        x += mod * t
        mod *= mi
    return x % mod


def enumerate_span(values: Iterator[int] | list[int], ring: ModRing) -> frozenset[int]:
    """Additive subgroup of ``ring`` generated by ``values`` (brute force)."""
    m = ring.modulus
    span = {0}
    frontier = [0]
    gens = {v % m for v in values} - {0}
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                t = (s + g) % m
                if t not in span:
                    span.add(t)
                    nxt.append(t)
        frontier = nxt
    return frozenset(span)
