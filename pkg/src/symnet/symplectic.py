"""Symplectic matrices over Z/m, elementary transvections and the Steinberg relations.

Rows and columns are indexed by I = (1..n, -n..-1) stored densely in that order.
A matrix ``a`` is symplectic iff its inverse is the *mirror*
``a~[i, j] = eps_i eps_j a[-j, -i]``; membership is tested as ``a @ a~ == e``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .indices import IndexSet, sign
from .zmod import ModRing, RingMismatchError


class NotSymplecticError(ValueError):
    """The mirror test failed."""


class TransvectionIndexError(ValueError):
    """Invalid index pair for a short or long transvection."""


def _signs(n: int) -> np.ndarray:
    return np.array([1] * n + [-1] * n, dtype=np.int64)


def mirror_array(a: np.ndarray, m: int) -> np.ndarray:
    """``a~[p, q] = eps_p eps_q a[-q, -p]`` on dense arrays."""
    d = _signs(a.shape[0] // 2)
    return (d[:, None] * a[::-1, ::-1].T * d[None, :]) % m


@dataclass(frozen=True, eq=False)
class SympMatrix:
    ring: ModRing
    index_set: IndexSet
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        size = 2 * self.index_set.n
        arr = np.array(self.entries, dtype=np.int64) % self.ring.modulus
        if arr.shape != (size, size):
            raise ValueError(f"expected a {size}x{size} array, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.index_set.n

    @property
    def m(self) -> int:
        return self.ring.modulus

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        pos = self.index_set.pos
        return int(self.entries[pos(self.index_set.check(i)), pos(self.index_set.check(j))])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SympMatrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.index_set == other.index_set
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.ring, self.index_set, self.entries.tobytes()))

    def __matmul__(self, other: SympMatrix) -> SympMatrix:
        return multiply(self, other)

    @property
    def inv(self) -> SympMatrix:
        """Mirror inverse (no membership check)."""
        return SympMatrix(self.ring, self.index_set, mirror_array(self.entries, self.m))

    def rows(self) -> list[list[int]]:
        return self.entries.tolist()

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "rows": self.rows()}

    def __repr__(self):
        return f"SympMatrix(Z/{self.m}, n={self.n},\n{self.entries})"


def identity(ring: ModRing, index_set: IndexSet) -> SympMatrix:
    return SympMatrix(ring, index_set, np.eye(2 * index_set.n, dtype=np.int64))


def is_symplectic(a: SympMatrix | np.ndarray, m: int | None = None) -> bool:
    if isinstance(a, SympMatrix):
        arr, m = a.entries, a.m
    else:
        arr = np.asarray(a, dtype=np.int64)
        if m is None:
            raise ValueError("modulus required for a bare array")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
        return False
    prod = (arr % m) @ mirror_array(arr % m, m) % m
    return bool(np.array_equal(prod, np.eye(arr.shape[0], dtype=np.int64)))


def symp_inverse(a: SympMatrix) -> SympMatrix:
    if not is_symplectic(a):
        raise NotSymplecticError("mirror test failed; matrix is not symplectic")
    return a.inv


def _check_compatible(a: SympMatrix, b: SympMatrix):
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if a.index_set != b.index_set:
        raise ValueError(f"rank mismatch: n={a.n} vs n={b.n}")


def multiply(a: SympMatrix, b: SympMatrix) -> SympMatrix:
    _check_compatible(a, b)
    return SympMatrix(a.ring, a.index_set, a.entries @ b.entries % a.m)


def commutator(x: SympMatrix, y: SympMatrix) -> SympMatrix:
    """``[x, y] = x y x^-1 y^-1``."""
    return x @ y @ x.inv @ y.inv


@dataclass(frozen=True)
class TransvectionSpec:
    """``T_ij(xi)``; long when ``j == -i``."""

    i: int
    j: int
    xi: int

    def __post_init__(self):
        if self.i == 0 or self.j == 0 or self.i == self.j:
            raise TransvectionIndexError(f"invalid index pair ({self.i}, {self.j})")

    @property
    def kind(self) -> str:
        return "long" if self.j == -self.i else "short"

    def negated(self) -> TransvectionSpec:
        return TransvectionSpec(self.i, self.j, -self.xi)

    def to_json(self) -> dict:
        return {"kind": self.kind, "i": self.i, "j": self.j, "xi": self.xi}

    @classmethod
    def from_json(cls, obj: dict) -> TransvectionSpec:
        spec = cls(int(obj["i"]), int(obj["j"]), int(obj["xi"]))
        if "kind" in obj and obj["kind"] != spec.kind:
            raise TransvectionIndexError(f"kind {obj['kind']!r} does not match pair ({spec.i}, {spec.j})")
        return spec


def short(i: int, j: int, xi: int) -> TransvectionSpec:
    if j in (i, -i):
        raise TransvectionIndexError(f"short transvection needs j != +-i, got ({i}, {j})")
    return TransvectionSpec(i, j, xi)


def long(i: int, alpha: int) -> TransvectionSpec:
    return TransvectionSpec(i, -i, alpha)


def transvection_array(i: int, j: int, xi: int, n: int, m: int) -> np.ndarray:
    index_set = IndexSet(n)
    index_set.check(i)
    index_set.check(j)
    if i == j:
        raise TransvectionIndexError(f"invalid index pair ({i}, {j})")
    pos = index_set.pos
    a = np.eye(2 * n, dtype=np.int64)
    a[pos(i), pos(j)] = (a[pos(i), pos(j)] + xi) % m
    if j != -i:
        a[pos(-j), pos(-i)] = (a[pos(-j), pos(-i)] - sign(i) * sign(j) * xi) % m
    return a


def transvection(spec: TransvectionSpec, ring: ModRing, index_set: IndexSet) -> SympMatrix:
    return SympMatrix(ring, index_set, transvection_array(spec.i, spec.j, spec.xi, index_set.n, ring.modulus))


def T(i: int, j: int, xi: int, ring: ModRing, index_set: IndexSet) -> SympMatrix:
    """Shorthand for ``transvection(TransvectionSpec(i, j, xi), ...)``."""
    return transvection(TransvectionSpec(i, j, xi), ring, index_set)


def apply_left(arr: np.ndarray, spec: TransvectionSpec, m: int) -> np.ndarray:
    """``T(spec) @ arr`` as row operations, in place; returns ``arr``."""
    n = arr.shape[0] // 2
    pi = spec.i - 1 if spec.i > 0 else 2 * n + spec.i
    pj = spec.j - 1 if spec.j > 0 else 2 * n + spec.j
    if spec.j == -spec.i:
        arr[pi] = (arr[pi] + spec.xi * arr[pj]) % m
    else:
        pmj, pmi = 2 * n - 1 - pj, 2 * n - 1 - pi
        s = (1 if spec.i > 0 else -1) * (1 if spec.j > 0 else -1)
        arr[pi] = (arr[pi] + spec.xi * arr[pj]) % m
        arr[pmj] = (arr[pmj] - s * spec.xi * arr[pmi]) % m
    return arr


def apply_right(arr: np.ndarray, spec: TransvectionSpec, m: int) -> np.ndarray:
    """``arr @ T(spec)`` as column operations, in place; returns ``arr``."""
    n = arr.shape[0] // 2
    pi = spec.i - 1 if spec.i > 0 else 2 * n + spec.i
    pj = spec.j - 1 if spec.j > 0 else 2 * n + spec.j
    if spec.j == -spec.i:
        arr[:, pj] = (arr[:, pj] + spec.xi * arr[:, pi]) % m
    else:
        pmj, pmi = 2 * n - 1 - pj, 2 * n - 1 - pi
        s = (1 if spec.i > 0 else -1) * (1 if spec.j > 0 else -1)
        arr[:, pj] = (arr[:, pj] + spec.xi * arr[:, pi]) % m
        arr[:, pmi] = (arr[:, pmi] - s * spec.xi * arr[:, pmj]) % m
    return arr


def word_product(word: Iterable[TransvectionSpec], ring: ModRing, index_set: IndexSet) -> SympMatrix:
    arr = np.eye(2 * index_set.n, dtype=np.int64)
    for spec in word:
        apply_right(arr, spec, ring.modulus)
    return SympMatrix(ring, index_set, arr)


def root_element(g: SympMatrix, spec: TransvectionSpec) -> SympMatrix:
    """``g T(spec) g^-1``."""
    t = transvection(spec, g.ring, g.index_set)
    return g @ t @ g.inv


# ---------------------------------------------------------------- Steinberg

STEINBERG_RELATIONS = ("R1", "R2", "R3", "R4", "R5", "R6")


class SideConditionError(ValueError):
    """Indices do not satisfy the side conditions of a Steinberg relation."""


def steinberg_sides(
    relation: str, indices: Sequence[int], params: Sequence[int], ring: ModRing, index_set: IndexSet
) -> tuple[SympMatrix, SympMatrix]:
    """Left- and right-hand sides of a Steinberg relation.

    ``indices``/``params`` per relation::

        R1 (i, j)        (xi,)       T_ij(xi) = T_{-j,-i}(-eps_i eps_j xi),     i != +-j
        R2 (i, j)        (xi, zeta)  T_ij(xi) T_ij(zeta) = T_ij(xi + zeta),    i != j
        R3 (i, j, h, k)  (xi, zeta)  [T_ij(xi), T_hk(zeta)] = e,  h != j, -i and k != i, -j
        R4 (i, j, h)     (xi, zeta)  [T_ij(xi), T_jh(zeta)] = T_ih(xi zeta), i, h != +-j, i != +-h
        R5 (i, j)        (xi, zeta)  [T_ij(xi), T_{j,-i}(zeta)] = T_{i,-i}(2 xi zeta), i != +-j
        R6 (i, j)        (xi, zeta)  [T_{i,-i}(xi), T_{-i,j}(zeta)]
                                         = T_ij(xi zeta) T_{-j,j}(eps_i eps_j xi zeta^2), i != +-j
    """
    for i in indices:
        index_set.check(i)
    if not check_side_conditions(relation, indices):
        raise SideConditionError(f"{relation}: side conditions fail for indices {tuple(indices)}")

    def t(i, j, x):
        return T(i, j, x, ring, index_set)

    e = identity(ring, index_set)
    if relation == "R1":
        i, j = indices
        (xi,) = params
        return t(i, j, xi), t(-j, -i, -sign(i) * sign(j) * xi)
    xi, zeta = params
    if relation == "R2":
        i, j = indices
        return t(i, j, xi) @ t(i, j, zeta), t(i, j, xi + zeta)
    if relation == "R3":
        i, j, h, k = indices
        return commutator(t(i, j, xi), t(h, k, zeta)), e
    if relation == "R4":
        i, j, h = indices
        return commutator(t(i, j, xi), t(j, h, zeta)), t(i, h, xi * zeta)
    if relation == "R5":
        i, j = indices
        return commutator(t(i, j, xi), t(j, -i, zeta)), t(i, -i, 2 * xi * zeta)
    if relation == "R6":
        i, j = indices
        lhs = commutator(t(i, -i, xi), t(-i, j, zeta))
        return lhs, t(i, j, xi * zeta) @ t(-j, j, sign(i) * sign(j) * xi * zeta * zeta)
    raise ValueError(f"unknown relation {relation!r}")


def check_side_conditions(relation: str, indices: Sequence[int]) -> bool:
    if relation == "R1":
        i, j = indices
        return j not in (i, -i)
    if relation == "R2":
        i, j = indices
        return i != j
    if relation == "R3":
        i, j, h, k = indices
        return i != j and h != k and h not in (j, -i) and k not in (i, -j)
    if relation == "R4":
        i, j, h = indices
        return i not in (j, -j) and h not in (j, -j) and i not in (h, -h)
    if relation in ("R5", "R6"):
        i, j = indices
        return j not in (i, -i)
    raise ValueError(f"unknown relation {relation!r}")


def steinberg_check(
    relation: str, indices: Sequence[int], params: Sequence[int], ring: ModRing, index_set: IndexSet
) -> bool:
    lhs, rhs = steinberg_sides(relation, indices, params, ring, index_set)
    return lhs == rhs


def admissible_indices(relation: str, index_set: IndexSet) -> list[tuple[int, ...]]:
    """Every index tuple meeting a relation's side conditions."""
    arity = {"R1": 2, "R2": 2, "R3": 4, "R4": 3, "R5": 2, "R6": 2}[relation]
    return [
        tup
        for tup in itertools.product(index_set.indices, repeat=arity)
        if check_side_conditions(relation, tup)
    ]


def relation_params(relation: str) -> int:
    return 1 if relation == "R1" else 2
