"""Decomposition of one-row parabolic elements into transvections.

A symplectic ``a`` has one-row shape at ``p`` when ``a_pp = a_{-p,-p} = 1`` and
``a_ij = delta_ij`` whenever ``i != -p`` and ``j != p``.  Such a matrix is

    prod_{j = 1..n, j != |p|} T_{-p,j}(a_{-p,j}) T_{-p,-j}(a_{-p,-j})  *  T_{-p,p}(alpha)

with ``alpha = a_{-p,p} - eps_{-p} sum_j a_{-p,j} a_{-p,-j}`` (positive ``j != |p|``).
For ``p > 0`` this is the row length ``S_{-p,p}(a)``.  For ``p < 0`` the row length
is ``-alpha - 2 sum_j a_{-p,j} a_{-p,-j}``, which agrees with ``alpha`` only modulo 2
and sign, so the exact parameter is used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .nets import FormNet
from .subgroups import GeneratorWord, row_length
from .symplectic import SympMatrix, TransvectionSpec, is_symplectic


class ShapeError(ValueError):
    """Matrix is not of one-row shape at the given index."""


def shape_violations(a: SympMatrix, p: int) -> list[tuple[int, int]]:
    iset = a.index_set
    iset.check(p)
    out = []
    for i in iset:
        for j in iset:
            if (i, j) in ((p, p), (-p, -p)):
                if a[i, j] != 1:
                    out.append((i, j))
            elif i != -p and j != p and a[i, j] != (1 if i == j else 0):
                out.append((i, j))
    return out


def shape_check(a: SympMatrix, p: int) -> bool:
    return not shape_violations(a, p)


def decompose_one_row(a: SympMatrix, p: int) -> list[TransvectionSpec]:
    bad = shape_violations(a, p)
    if bad:
        raise ShapeError(f"not of one-row shape at p={p}; first offending entry {bad[0]}")
    specs = []
    for j in a.index_set.positive:
        if j == abs(p):
            continue
        specs.append(TransvectionSpec(-p, j, a[-p, j]))
        specs.append(TransvectionSpec(-p, -j, a[-p, -j]))
    specs.append(TransvectionSpec(-p, p, long_parameter(a, p)))
    return specs


def long_parameter(a: SympMatrix, p: int) -> int:
    """Parameter of the trailing long factor of a one-row element at ``p``."""
    cross = sum(a[-p, j] * a[-p, -j] for j in a.index_set.positive if j != abs(p))
    return (a[-p, p] - (1 if p < 0 else -1) * cross) % a.m


def length_discrepancy(a: SympMatrix, p: int) -> int:
    """``row_length(a, -p) - long_parameter(a, p)``; zero for ``p > 0`` and over Z/2."""
    return (row_length(a, -p) - long_parameter(a, p)) % a.m


def one_row_matrix(row: dict[int, int], p: int, ring, index_set) -> SympMatrix:
    """The one-row element with prescribed entries ``a_{-p,j}`` for ``j != +-p`` and long parameter ``row[p]``.

    Built as the displayed product, so it is symplectic by construction.
    """
    word = []
    for j in index_set.positive:
        if j == abs(p):
            continue
        word.append(TransvectionSpec(-p, j, row.get(j, 0)))
        word.append(TransvectionSpec(-p, -j, row.get(-j, 0)))
    word.append(TransvectionSpec(-p, p, row.get(p, 0)))
    return GeneratorWord(tuple(word)).product(ring, index_set)


def random_one_row(p: int, ring, index_set, rng: np.random.Generator, net: FormNet | None = None) -> SympMatrix:
    """Random one-row element; with ``net`` the entries are drawn from its levels."""
    m = ring.modulus
    row = {}
    for j in index_set:
        if j == -p:
            continue
        d = 1 if net is None else net.level(-p, j).generator
        row[j] = d * int(rng.integers(m // d))
    return one_row_matrix(row, p, ring, index_set)


def enumerate_one_row(p: int, ring, index_set):
    """Every symplectic one-row element at ``p`` (exhaustive over free entries)."""
    m = ring.modulus
    iset = index_set
    pos = iset.pos
    row_slots = [(-p, j) for j in iset if j != -p]
    col_slots = [(i, p) for i in iset if i not in (p, -p)]
    slots = row_slots + col_slots
    for values in itertools.product(range(m), repeat=len(slots)):
        arr = np.eye(2 * iset.n, dtype=np.int64)
        for (i, j), v in zip(slots, values):
            arr[pos(i), pos(j)] = v
        if is_symplectic(arr, m):
            yield SympMatrix(ring, iset, arr)


@dataclass
class ExtractionReport:
    ok: bool
    specs: list[TransvectionSpec]
    outside: list[TransvectionSpec]

    def __bool__(self):
        return self.ok


def level_extraction_check(a: SympMatrix, p: int, net: FormNet) -> ExtractionReport:
    """Decompose ``a`` and report factors whose parameter leaves its net level."""
    specs = decompose_one_row(a, p)
    outside = [s for s in specs if s.xi % net.level(s.i, s.j).generator]
    return ExtractionReport(not outside, specs, outside)
