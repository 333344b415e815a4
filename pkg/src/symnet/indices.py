"""The signed index set I = (1, ..., n, -n, ..., -1) and unitary equivalence relations on it."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional


class IndexRangeError(ValueError):
    """Index out of range for the given rank."""


class PartitionError(ValueError):
    """Raised for lists that do not partition I or are not unitary."""


@dataclass(frozen=True)
class IndexSet:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @cached_property
    def indices(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1)) + tuple(range(-self.n, 0))

    @property
    def positive(self) -> range:
        return range(1, self.n + 1)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return 2 * self.n

    def __contains__(self, i) -> bool:
        return isinstance(i, int) and 1 <= abs(i) <= self.n

    def check(self, i: int) -> int:
        if i not in self:
            raise IndexRangeError(f"index {i!r} not in I for n={self.n}")
        return i

    def pos(self, i: int) -> int:
        """Dense 0-based row/column position of index ``i``."""
        return i - 1 if i > 0 else 2 * self.n + i

    def index_at(self, p: int) -> int:
        return self.indices[p]


def sign(i: int, index_set: Optional[IndexSet] = None) -> int:
    if i == 0 or (index_set is not None and i not in index_set):
        raise IndexRangeError(f"index {i!r} out of range")
    return 1 if i > 0 else -1


@dataclass(frozen=True)
class HeightPair:
    """``h(nu)``; ``None`` stands for infinity (type absent)."""

    self_conjugate_min: Optional[int]
    non_self_conjugate_min: Optional[int]

    @staticmethod
    def _le(a: Optional[int], b: Optional[int]) -> bool:
        if b is None:
            return True
        if a is None:
            return False
        return a <= b

    def __le__(self, other: HeightPair) -> bool:
        return self._le(self.self_conjugate_min, other.self_conjugate_min) and self._le(
            self.non_self_conjugate_min, other.non_self_conjugate_min
        )

    def __ge__(self, other: HeightPair) -> bool:
        return other <= self

    def as_tuple(self) -> tuple[float, float]:
        inf = math.inf
        a, b = self.self_conjugate_min, self.non_self_conjugate_min
        return (inf if a is None else a, inf if b is None else b)

    def __repr__(self):
        a, b = (("inf" if v is None else str(v)) for v in (self.self_conjugate_min, self.non_self_conjugate_min))
        return f"({a}, {b})"


@dataclass(frozen=True)
class EquivRel:
    index_set: IndexSet
    classes: tuple[frozenset[int], ...]

    @cached_property
    def class_id(self) -> dict[int, int]:
        return {i: c for c, cls in enumerate(self.classes) for i in cls}

    @property
    def n(self) -> int:
        return self.index_set.n

    def cls(self, i: int) -> frozenset[int]:
        return self.classes[self.class_id[i]]

    def equiv(self, i: int, j: int) -> bool:
        return self.class_id[i] == self.class_id[j]

    def is_self_conjugate(self, cls: frozenset[int]) -> bool:
        return all(-i in cls for i in cls)

    def conjugate_class(self, cls: frozenset[int]) -> frozenset[int]:
        """The action ``-1 . nu(i) = nu(-i)``."""
        return self.cls(-next(iter(cls)))

    def to_json(self) -> dict:
        return {"n": self.n, "classes": [sorted(c, key=self.index_set.pos) for c in self.classes]}

    @classmethod
    def from_json(cls, obj: dict) -> EquivRel:
        return make_equiv(IndexSet(int(obj["n"])), obj["classes"])

    def __repr__(self):
        body = ", ".join("{" + ",".join(map(str, sorted(c, key=self.index_set.pos))) + "}" for c in self.classes)
        return f"EquivRel(n={self.n}: {body})"


def make_equiv(index_set: IndexSet, partition: Iterable[Iterable[int]]) -> EquivRel:
    classes = []
    seen: set[int] = set()
    for block in partition:
        block = [int(i) for i in block]
        if not block:
            raise PartitionError("empty class")
        for i in block:
            if i not in index_set:
                raise PartitionError(f"index {i} not in I for n={index_set.n}")
            if i in seen:
                raise PartitionError(f"index {i} occurs in more than one class")
            seen.add(i)
        classes.append(frozenset(block))
    missing = set(index_set.indices) - seen
    if missing:
        raise PartitionError(f"indices {sorted(missing)} are not covered")
    # order classes by their first index in I so equal relations compare equal
    classes.sort(key=lambda c: min(index_set.pos(i) for i in c))
    nu = EquivRel(index_set, tuple(classes))
    for cls in nu.classes:
        members = sorted(cls, key=index_set.pos)
        for j in members[1:]:
            i = members[0]
            if not nu.equiv(-i, -j):
                raise PartitionError(f"not unitary: {i} ~ {j} but {-i} !~ {-j}")
    return nu


def height(nu: EquivRel) -> HeightPair:
    sc = [len(c) for c in nu.classes if nu.is_self_conjugate(c)]
    nsc = [len(c) for c in nu.classes if not nu.is_self_conjugate(c)]
    return HeightPair(min(sc) if sc else None, min(nsc) if nsc else None)


def height_at_least(nu: EquivRel, a: int, b: int) -> bool:
    return height(nu) >= HeightPair(a, b)


def _admissible(nu: EquivRel, kind: str, chosen: tuple[int, ...], i: int) -> bool:
    for s in chosen:
        if i == s or i == -s or not nu.equiv(i, s):
            return False
    if kind == "C" and not nu.equiv(i, -i):
        return False
    return True


def base_tuples(nu: EquivRel, kind: str, k: int) -> Iterator[tuple[int, ...]]:
    """All A-type or C-type base ``k``-tuples in lexicographic order of positions."""
    if kind not in ("A", "C"):
        raise ValueError(f"kind must be 'A' or 'C', got {kind!r}")
    if k < 1:
        raise ValueError("k must be >= 1")

    def extend(chosen: tuple[int, ...]):
        if len(chosen) == k:
            yield chosen
            return
        for i in nu.index_set:
            if _admissible(nu, kind, chosen, i):
                yield from extend(chosen + (i,))

    yield from extend(())


def all_equivalence_relations(n: int) -> Iterator[EquivRel]:
    """Every unitary equivalence relation on I_{2n} (exhaustive; feasible for n <= 6)."""
    index_set = IndexSet(n)
    # a unitary relation is determined by a partition of the +-pairs {1..n} into groups,
    # each group then either one self-conjugate class or a split C, -C.
    for blocks in _set_partitions(list(range(1, n + 1))):
        choices = []
        for block in blocks:
            opts = [[frozenset(block) | frozenset(-i for i in block)]]
            first, rest = block[0], block[1:]
            for signs in itertools.product((1, -1), repeat=len(rest)):
                c = frozenset([first] + [s * j for s, j in zip(signs, rest)])
                opts.append([c, frozenset(-i for i in c)])
            choices.append(opts)
        for combo in itertools.product(*choices):
            yield make_equiv(index_set, [c for part in combo for c in part])


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for b in range(len(part)):
            yield part[:b] + [[first] + part[b]] + part[b + 1 :]
