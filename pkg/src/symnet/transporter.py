"""Congruence description of the normalizer of Sp(sigma, Gamma) and sandwich campaigns.

A matrix ``a`` normalizes Sp(sigma, Gamma) iff

* (T1) ``a_ij sigma_jk a'_kl <= sigma_il``
* (T2) ``a_ij^2 sigma_jk^[2] S_{k,-k}(a^-1) in Gamma_i``
* (T3) ``a_ij^2 Gamma_j <= Gamma_i``

for all indices.  Levels are principal, so each condition is checked on the
level generators only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .indices import EquivRel, height_at_least, make_equiv
from .nets import FormNet, LevelSeed, closure_from_levels, is_major
from .subgroups import (
    GeneratorWord,
    HypothesisError,
    ep_generator_set,
    row_lengths,
    sample_from,
    seed_generator_set,
    sp_violations,
)
from .symplectic import SympMatrix, TransvectionSpec, mirror_array
from .zmod import ModRing


@dataclass
class TransporterReport:
    t1_violations: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    t2_violations: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    t3_violations: list[tuple[tuple[int, ...], int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.t1_violations or self.t2_violations or self.t3_violations)

    def __bool__(self):
        return self.ok

    def first(self) -> tuple[str, tuple[int, ...], int] | None:
        for name, lst in (("T1", self.t1_violations), ("T2", self.t2_violations), ("T3", self.t3_violations)):
            if lst:
                return (name, *lst[0])
        return None

    def to_json(self) -> dict:
        enc = lambda lst: [{"indices": list(ix), "value": v} for ix, v in lst]  # noqa: E731
        return {"T1": enc(self.t1_violations), "T2": enc(self.t2_violations), "T3": enc(self.t3_violations)}


def _check(a: SympMatrix, net: FormNet):
    if a.ring != net.ring or a.index_set != net.index_set:
        raise ValueError(f"matrix over Z/{a.m}, n={a.n} vs net over Z/{net.m}, n={net.n}")


def _collect(mask: np.ndarray, values: np.ndarray, idx: tuple[int, ...], limit: int | None):
    hits = np.argwhere(mask)
    if limit is not None:
        hits = hits[:limit]
    return [(tuple(idx[p] for p in h), int(values[tuple(h)])) for h in hits]


def check_t1(a: SympMatrix, net: FormNet, limit: int | None = None) -> list[tuple[tuple[int, ...], int]]:
    """Violations ``(i, j, k, l)`` of ``a_ij d(sigma_jk) a'_kl in sigma_il``."""
    _check(a, net)
    m = a.m
    A = a.entries
    Ai = mirror_array(A, m)
    vals = (A[:, :, None, None] * net.sigma[None, :, :, None] % m) * Ai[None, None, :, :] % m
    mask = vals % net.sigma[:, None, None, :] != 0
    return _collect(mask, vals, a.index_set.indices, limit)


def check_t2(a: SympMatrix, net: FormNet, limit: int | None = None) -> list[tuple[tuple[int, ...], int]]:
    """Violations ``(i, j, k)`` of ``a_ij^2 d(sigma_jk)^2 S_{k,-k}(a^-1) in Gamma_i``."""
    _check(a, net)
    m = a.m
    A2 = a.entries * a.entries % m
    D2 = net.sigma * net.sigma % m
    s_inv = row_lengths(a.inv)
    vals = A2[:, :, None] * (D2 * s_inv[None, :] % m)[None, :, :] % m
    mask = vals % net.gamma[:, None, None] != 0
    return _collect(mask, vals, a.index_set.indices, limit)


def check_t3(a: SympMatrix, net: FormNet, limit: int | None = None) -> list[tuple[tuple[int, ...], int]]:
    """Violations ``(i, j)`` of ``a_ij^2 d(Gamma_j) in Gamma_i``."""
    _check(a, net)
    m = a.m
    vals = a.entries * a.entries % m * net.gamma[None, :] % m
    mask = vals % net.gamma[:, None] != 0
    return _collect(mask, vals, a.index_set.indices, limit)


def transporter_report(a: SympMatrix, net: FormNet, limit: int | None = None) -> TransporterReport:
    return TransporterReport(check_t1(a, net, limit), check_t2(a, net, limit), check_t3(a, net, limit))


def coarsest_relation(net: FormNet) -> EquivRel:
    """The coarsest unitary relation with ``i ~ j`` only where ``sigma_ij = sigma_ji = R``."""
    idx = net.index_set.indices
    unit = {(i, j) for i in idx for j in idx if net.s(i, j).is_unit and net.s(j, i).is_unit}
    classes: list[list[int]] = []
    seen: set[int] = set()
    for i in idx:
        if i in seen:
            continue
        cls = [j for j in idx if (i, j) in unit]
        seen.update(cls)
        classes.append(cls)
    return make_equiv(net.index_set, classes)


def transporter_hypothesis(net: FormNet, nu: EquivRel | None = None) -> str | None:
    """Why the net falls outside the theorem's hypothesis, or None."""
    if nu is None:
        nu = coarsest_relation(net)
    if not is_major(net, nu):
        return f"net is not major with respect to {nu}"
    small = [sorted(c) for c in nu.classes if len(c) < 3]
    if small:
        return f"classes with fewer than 3 elements: {small}"
    return None


def is_in_transporter(a: SympMatrix, net: FormNet, nu: EquivRel | None = None,
                      limit: int | None = None) -> tuple[bool, TransporterReport]:
    """Whether ``a`` satisfies (T1)-(T3) for ``net``, with the violation report.

    Outside the theorem's hypothesis the check still runs, with a warning.
    """
    problem = transporter_hypothesis(net, nu)
    if problem:
        warnings.warn(f"transporter hypothesis fails: {problem}", stacklevel=2)
    report = transporter_report(a, net, limit)
    return report.ok, report


# ------------------------------------------------------------- conjugation


def conjugate_transvections(h: SympMatrix, specs: Sequence[TransvectionSpec]) -> np.ndarray:
    """Stacked ``h T h^-1`` for every spec, shape ``(K, 2n, 2n)``.

    Uses ``h T_ij(xi) h^-1 = e + xi (h_{*i} h'_{j*} - eps_i eps_j h_{*,-j} h'_{-i,*})``.
    """
    n, m = h.n, h.m
    H, Hi = h.entries, mirror_array(h.entries, m)
    size = 2 * n
    pos = h.index_set.pos
    out = np.broadcast_to(np.eye(size, dtype=np.int64), (len(specs), size, size)).copy()
    for t, s in enumerate(specs):
        pi, pj = pos(s.i), pos(s.j)
        upd = np.outer(H[:, pi], Hi[pj, :])
        if s.j != -s.i:
            sg = (1 if s.i > 0 else -1) * (1 if s.j > 0 else -1)
            upd = upd - sg * np.outer(H[:, size - 1 - pj], Hi[size - 1 - pi, :])
        out[t] = (out[t] + s.xi * upd) % m
    return out


def batch_sp_membership(arrs: np.ndarray, net: FormNet) -> np.ndarray:
    """Sp(sigma, Gamma) membership for a stack of symplectic matrices."""
    m, n = net.m, net.n
    size = 2 * n
    entries_ok = np.all(arrs % net.sigma[None] == 0, axis=(1, 2))
    d = np.array([1] * n + [-1] * n, dtype=np.int64)
    inv = d[None, :, None] * arrs[:, ::-1, ::-1].transpose(0, 2, 1) * d[None, None, :] % m
    prod = arrs[:, :, :n] @ inv[:, :n, :] % m
    lengths = prod[:, np.arange(size), np.arange(size)[::-1]]
    return entries_ok & np.all(lengths % net.gamma[None] == 0, axis=1)


def _principal_specs(net: FormNet) -> tuple[TransvectionSpec, ...]:
    return tuple(ep_generator_set(net).specs(principal=True))


@lru_cache(maxsize=32)
def _ep_pool(net: FormNet, trials: int, max_length: int, seed: int) -> tuple[tuple[GeneratorWord, SympMatrix], ...]:
    gens = ep_generator_set(net)
    pool = []
    for t in range(trials):
        length = trial_length(seed, t, max_length, 0x5E)
        pool.append(sample_from(gens, length, [seed, t]))
    return tuple(pool)


@dataclass
class NormalizationResult:
    ok: bool
    trials: int
    word: GeneratorWord | None = None
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def normalization_witness(a: SympMatrix, net: FormNet, trials: int = 1000, seed: int = 0,
                          max_length: int = 30) -> NormalizationResult:
    """Check ``a g a^-1`` in Sp(sigma, Gamma) for sampled ``g`` in Ep(sigma, Gamma)."""
    _check(a, net)
    ainv = a.inv
    for t, (word, g) in enumerate(_ep_pool(net, trials, max_length, seed)):
        c = a @ g @ ainv
        bad = sp_violations(c, net)
        if bad:
            return NormalizationResult(False, t + 1, word, bad)
    return NormalizationResult(True, trials)


# ------------------------------------------------------------------ sandwich


@dataclass
class SandwichFailure:
    assertion: str  # "transporter" or "conjugation"
    trial: int
    seed: list[int]
    word: GeneratorWord
    detail: dict

    def to_json(self) -> dict:
        return {
            "assertion": self.assertion,
            "trial": self.trial,
            "seed": list(self.seed),
            "word": self.word.to_json(),
            "detail": self.detail,
        }


@dataclass
class SandwichReport:
    net: FormNet
    trials: int
    failures: list[SandwichFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok


def trial_length(seed: int, t: int, max_length: int, tag: int) -> int:
    """Word length for trial ``t``; depends only on ``(seed, t)`` so single trials replay."""
    return int(np.random.default_rng([seed, t, tag]).integers(0, max_length + 1))


def sandwich_check(nu: EquivRel, extra: LevelSeed, ring: ModRing, trials: int = 1000, seed: int = 0,
                   max_length: int = 30, net: FormNet | None = None, stop_at_first: bool = False,
                   start: int = 0) -> SandwichReport:
    """Sample words over ``Ep(nu, R)`` plus the seeded transvections and check both sandwich inclusions.

    (a) every word ``h`` satisfies (T1)-(T3) against the closure net;
    (b) ``h T h^-1`` lies in Sp(sigma, Gamma) for each generator ``T`` of Ep(sigma, Gamma).

    ``net`` overrides the closure (used for mutation runs).  Trials run over
    ``start .. start + trials - 1``.
    """
    if not height_at_least(nu, 4, 5):
        raise HypothesisError(f"sandwich check needs h(nu) >= (4, 5), got {nu}")
    if net is None:
        net = closure_from_levels(nu, extra, ring)
    gens = seed_generator_set(nu, extra, ring)
    specs = _principal_specs(net)
    report = SandwichReport(net, trials)
    for t in range(start, start + trials):
        length = trial_length(seed, t, max_length, 0x5A)
        word, h = sample_from(gens, length, [seed, t])
        tr = transporter_report(h, net, limit=1)
        if not tr.ok:
            name, ix, val = tr.first()
            report.failures.append(SandwichFailure("transporter", t, [seed, t], word,
                                                   {"condition": name, "indices": list(ix), "value": val}))
        if specs:
            ok = batch_sp_membership(conjugate_transvections(h, specs), net)
            if not ok.all():
                spec = specs[int(np.flatnonzero(~ok)[0])]
                report.failures.append(SandwichFailure("conjugation", t, [seed, t], word,
                                                       {"generator": spec.to_json()}))
        if stop_at_first and report.failures:
            break
    return report


def shrink_level(net: FormNet, i: int, j: int, generator: int | None = None) -> FormNet:
    """Mutation: lower ``sigma_ij`` and its unitary partner (default to zero)."""
    pos = net.index_set.pos
    d = net.m if generator is None else generator
    sigma = net.sigma.copy()
    sigma[pos(i), pos(j)] = d
    sigma[pos(-j), pos(-i)] = d
    return net.replace(sigma=sigma)
