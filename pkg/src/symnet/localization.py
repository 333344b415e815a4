"""Standard settings over Z/m, CRT projection and congruence subgroups.

Over a finite ring every localization at a maximal ideal is the surjective
quotient ``Z/m -> Z/p^k`` and the multiplicative set maps into the units.  The
S-closure therefore changes nothing, and patching over maximal ideals is the
Chinese Remainder Theorem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .indices import EquivRel, height_at_least
from .nets import FormNet, LevelSeed, NetError, closure_from_levels, validate
from .subgroups import HypothesisError, sample_from, seed_generator_set, sp_membership, sp_violations
from .symplectic import SympMatrix
from .transporter import trial_length
from .zmod import IdealZm, ModRing, RingMismatchError, crt_split, jacobson_radical, project_ideal


def is_crt_component(ring: ModRing, factor: ModRing) -> bool:
    """``factor`` is ``Z/q`` with ``q | m`` and ``gcd(q, m/q) = 1``."""
    m, q = ring.modulus, factor.modulus
    return q > 1 and m % q == 0 and gcd(q, m // q) == 1


def _check_component(ring: ModRing, factor: ModRing):
    if not is_crt_component(ring, factor):
        raise RingMismatchError(f"{factor} is not a CRT component of {ring}")


@dataclass(frozen=True)
class StandardSettingZm:
    """A standard setting ``(R, R', S)`` over a finite ring.

    The subring image is the whole ring and ``S`` is a set of units; both
    follow from surjectivity of the localization map.
    """

    ring: ModRing
    multipliers: tuple[int, ...] = ()

    def __post_init__(self):
        m = self.ring.modulus
        mult = tuple(sorted({x % m for x in self.multipliers})) or tuple(self.ring.units())
        bad = [x for x in mult if not self.ring.is_unit(x)]
        if bad:
            raise ValueError(f"multipliers must be units of {self.ring}, got {bad}")
        object.__setattr__(self, "multipliers", mult)

    @classmethod
    def local(cls, ring: ModRing, factor: ModRing) -> StandardSettingZm:
        """The setting obtained by localizing ``ring`` at the prime of ``factor``."""
        _check_component(ring, factor)
        return cls(factor)


@dataclass(frozen=True)
class CongruenceLevel:
    ideal: IdealZm

    @classmethod
    def jacobson(cls, ring: ModRing) -> CongruenceLevel:
        return cls(jacobson_radical(ring))


def project_matrix(a: SympMatrix, factor: ModRing) -> SympMatrix:
    _check_component(a.ring, factor)
    return SympMatrix(factor, a.index_set, a.entries % factor.modulus)


@lru_cache(maxsize=256)
def project_net(net: FormNet, factor: ModRing) -> FormNet:
    """Coordinatewise image of ``net``; raises if the image fails validation."""
    _check_component(net.ring, factor)
    q = factor.modulus
    out = FormNet(factor, net.index_set, np.gcd(net.sigma, q), np.gcd(net.gamma, q))
    exact = not validate(net, require_exact=True)
    bad = validate(out, require_exact=exact)
    if bad:
        raise NetError(f"projection to {factor} broke the net: {bad[0]}")
    return out


def _closure_level(d: int, m: int, mults, power: int) -> int:
    # {xi | some x in S has x^power * xi in (d)}, as a generator
    members = [xi for xi in range(m) if any((pow(x, power, m) * xi) % d == 0 for x in mults)]
    g = m
    for xi in members:
        g = gcd(g, xi)
    return g


def s_closure(net: FormNet, setting: StandardSettingZm) -> FormNet:
    """S-closure, evaluated by brute force over the multipliers.

    With ``S`` inside the units this is the identity; the collapse is asserted.
    """
    if net.ring != setting.ring:
        raise RingMismatchError(f"{net.ring} vs {setting.ring}")
    m = net.m
    mults = setting.multipliers
    sig_cache = {int(d): _closure_level(int(d), m, mults, 1) for d in np.unique(net.sigma)}
    gam_cache = {int(d): _closure_level(int(d), m, mults, 2) for d in np.unique(net.gamma)}
    sigma = np.vectorize(sig_cache.__getitem__, otypes=[np.int64])(net.sigma)
    gamma = np.vectorize(gam_cache.__getitem__, otypes=[np.int64])(net.gamma)
    out = net.replace(sigma=sigma, gamma=gamma)
    assert out == net, "S-closure moved a level although S consists of units"
    return out


def congruence_membership(a: SympMatrix, level: CongruenceLevel) -> bool:
    """``a = e`` modulo the level ideal."""
    d = level.ideal.generator
    return bool(np.all((a.entries - np.eye(2 * a.n, dtype=np.int64)) % d == 0))


def into_congruence(h: SympMatrix, level: CongruenceLevel, max_order: int = 100_000) -> tuple[int, SympMatrix]:
    """Smallest power ``h^k`` (``k >= 1``) congruent to ``e``, with ``k``."""
    g = h
    for k in range(1, max_order + 1):
        if congruence_membership(g, level):
            return k, g
        g = g @ h
    raise RuntimeError(f"order modulo {level.ideal} exceeds {max_order}")


@dataclass
class JacobsonReport:
    net: FormNet
    trials: int
    congruent_words: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok


def jacobson_corollary_check(nu: EquivRel, extra: LevelSeed, ring: ModRing, trials: int = 1000,
                             seed: int = 0, max_length: int = 30, start: int = 0) -> JacobsonReport:
    """Sampled ``H``-elements in ``Sp(2n, R, J)`` must lie in ``Sp(sigma, Gamma)``.

    Each sampled word ``h`` is replaced by its first power congruent to ``e``
    modulo ``J`` so that every trial contributes an element of the intersection.
    """
    if not ring.is_local:
        raise HypothesisError(f"{ring} is not local")
    if not height_at_least(nu, 4, 5):
        raise HypothesisError(f"need h(nu) >= (4, 5), got {nu}")
    net = closure_from_levels(nu, extra, ring)
    level = CongruenceLevel.jacobson(ring)
    gens = seed_generator_set(nu, extra, ring)
    report = JacobsonReport(net, trials)
    for t in range(start, start + trials):
        length = trial_length(seed, t, max_length, 0x7A)
        word, h = sample_from(gens, length, [seed, t])
        k, g = into_congruence(h, level)
        report.congruent_words += 1
        bad = sp_violations(g, net)
        if bad:
            kind, ix, val = bad[0]
            report.failures.append({"trial": t, "seed": [seed, t], "power": k, "word": word.to_json(),
                                    "kind": kind, "indices": list(ix), "value": val})
    return report


def patch_membership(b: SympMatrix, net: FormNet, check: bool = True) -> bool:
    """Sp(sigma, Gamma) membership decided factor by factor.

    With ``check`` the answer is compared against the direct test.
    """
    local = all(sp_membership(project_matrix(b, f), project_net(net, f)) for f in crt_split(b.ring))
    if check:
        direct = sp_membership(b, net)
        if direct != local:
            raise AssertionError(f"CRT patching disagrees with direct membership ({local} vs {direct})")
    return local


def factor_report(b: SympMatrix, net: FormNet) -> dict[int, bool]:
    """Membership per prime-power factor, keyed by the factor modulus."""
    return {f.modulus: sp_membership(project_matrix(b, f), project_net(net, f)) for f in crt_split(b.ring)}


def project_ideal_level(level: CongruenceLevel, factor: ModRing) -> CongruenceLevel:
    return CongruenceLevel(project_ideal(level.ideal, factor))

