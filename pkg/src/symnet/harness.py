"""Seeded verification campaigns, JSON boundary parsing and report emission.

Every trial draws its randomness from ``default_rng([seed, tag, t])`` alone, so a
failing trial can be replayed in isolation from ``(seed, trial)``.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .extraction import decompose_one_row, level_extraction_check, random_one_row
from .indices import EquivRel, IndexSet, PartitionError, height_at_least, make_equiv
from .localization import factor_report, jacobson_corollary_check, patch_membership, project_matrix
from .nets import FormNet, LevelSeed, NetError, closure_from_levels, validate
from .subgroups import (
    GeneratorWord,
    ep_generator_set,
    product_length_identity_check,
    row_lengths,
    sample_from,
    sp_membership,
    sp_violations,
)
from .symplectic import (
    STEINBERG_RELATIONS,
    SympMatrix,
    admissible_indices,
    is_symplectic,
    mirror_array,
    relation_params,
    steinberg_check,
)
from .transporter import sandwich_check, shrink_level, transporter_report, trial_length
from .zmod import ModRing, crt_split

SUITES = ("steinberg", "length-identity", "group-closure", "transporter", "sandwich", "extraction", "jacobson", "crt")


class InputError(ValueError):
    """Malformed or invalid input at the JSON boundary; the message names the location."""


# ------------------------------------------------------------------ config


@dataclass(frozen=True)
class CampaignConfig:
    m: int
    n: int
    nu: tuple[tuple[int, ...], ...] | None = None  # None: a single class holding all of I
    seed: int = 0
    trials: int = 100
    max_length: int = 30
    suites: tuple[str, ...] = ()
    extra_levels: dict = field(default_factory=dict)
    mutate: bool = False
    trial: int | None = None  # replay a single trial

    def __post_init__(self):
        if self.m < 2:
            raise InputError(f"config.m: need m >= 2, got {self.m}")
        if self.n < 1:
            raise InputError(f"config.n: need n >= 1, got {self.n}")
        if self.trials < 1:
            raise InputError(f"config.trials: need trials >= 1, got {self.trials}")
        if self.max_length < 0:
            raise InputError(f"config.max_length: need max_length >= 0, got {self.max_length}")
        for k, s in enumerate(self.suites):
            if s not in SUITES:
                raise InputError(f"config.suites[{k}]: unknown suite {s!r}; known: {', '.join(SUITES)}")

    @property
    def ring(self) -> ModRing:
        return ModRing(self.m)

    @property
    def index_set(self) -> IndexSet:
        return IndexSet(self.n)

    def relation(self) -> EquivRel:
        iset = self.index_set
        classes = self.nu if self.nu is not None else (iset.indices,)
        try:
            return make_equiv(iset, classes)
        except (PartitionError, ValueError) as exc:
            raise InputError(f"config.nu: {exc}") from None

    def seed_levels(self) -> LevelSeed:
        try:
            seed = LevelSeed.from_json(self.extra_levels, self.ring)
            seed.check(self.ring, self.index_set)
        except (ValueError, TypeError) as exc:
            raise InputError(f"config.extra_levels: {exc}") from None
        return seed

    def trial_ids(self) -> range:
        if self.trial is not None:
            return range(self.trial, self.trial + 1)
        return range(self.trials)

    @classmethod
    def from_json(cls, obj: Any, **overrides) -> CampaignConfig:
        if not isinstance(obj, dict):
            raise InputError("config: expected a JSON object")
        known = {"m", "n", "nu", "seed", "trials", "max_length", "suites", "extra_levels", "mutate", "trial"}
        unknown = sorted(set(obj) - known)
        if unknown:
            raise InputError(f"config: unknown field(s) {unknown}")
        data = dict(obj)
        data.update({k: v for k, v in overrides.items() if v is not None})
        for req in ("m", "n"):
            if req not in data:
                raise InputError(f"config.{req}: missing")
        kw: dict[str, Any] = {}
        for name in ("m", "n", "seed", "trials", "max_length", "trial"):
            if name in data and data[name] is not None:
                kw[name] = _as_int(data[name], f"config.{name}")
        if data.get("nu") is not None:
            nu = data["nu"]
            if isinstance(nu, dict):
                nu = nu.get("classes")
            if not isinstance(nu, list) or not all(isinstance(c, list) for c in nu):
                raise InputError("config.nu: expected a list of classes (lists of indices)")
            kw["nu"] = tuple(tuple(_as_int(i, f"config.nu[{a}][{b}]") for b, i in enumerate(c)) for a, c in enumerate(nu))
        if "suites" in data:
            suites = data["suites"]
            if isinstance(suites, str) or not isinstance(suites, (list, tuple)):
                raise InputError("config.suites: expected a list of suite names")
            kw["suites"] = tuple(suites)
        if "extra_levels" in data:
            if not isinstance(data["extra_levels"], dict):
                raise InputError("config.extra_levels: expected an object with 'sigma' and/or 'gamma'")
            kw["extra_levels"] = data["extra_levels"]
        if "mutate" in data:
            kw["mutate"] = bool(data["mutate"])
        return cls(**kw)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "nu": None if self.nu is None else [list(c) for c in self.nu],
            "seed": self.seed,
            "trials": self.trials,
            "max_length": self.max_length,
            "suites": list(self.suites),
            "extra_levels": self.extra_levels,
            "mutate": self.mutate,
            "trial": self.trial,
        }


def _as_int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{where}: expected an integer, got {v!r}")
    return v


# ------------------------------------------------------------------ results


@dataclass
class SuiteResult:
    suite: str
    status: str  # "pass", "fail" or "skip"
    checked: int = 0
    counterexample: dict | None = None
    note: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "status": self.status, "checked": self.checked,
               "counterexample": self.counterexample, "note": self.note}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> SuiteResult:
        return cls(obj["suite"], obj["status"], obj.get("checked", 0), obj.get("counterexample"),
                   obj.get("note", ""), obj.get("seconds", 0.0))


def _rng(cfg: CampaignConfig, tag: int, t: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, tag, t])


def _fail(suite: str, checked: int, t: int, cfg: CampaignConfig, **detail) -> SuiteResult:
    ce = {"seed": cfg.seed, "trial": t, **detail}
    return SuiteResult(suite, "fail", checked, ce)


# ------------------------------------------------------------------ suites


def _suite_steinberg(cfg: CampaignConfig) -> SuiteResult:
    ring, iset = cfg.ring, cfg.index_set
    tuples = {r: admissible_indices(r, iset) for r in STEINBERG_RELATIONS}
    rels = [r for r in STEINBERG_RELATIONS if tuples[r]]
    if not rels:
        return SuiteResult("steinberg", "skip", note=f"no admissible indices for n={cfg.n}")
    checked = 0
    for t in cfg.trial_ids():
        rng = _rng(cfg, 1, t)
        rel = rels[int(rng.integers(len(rels)))]
        idx = tuples[rel][int(rng.integers(len(tuples[rel])))]
        params = [int(x) for x in rng.integers(0, cfg.m, relation_params(rel))]
        checked += 1
        if not steinberg_check(rel, idx, params, ring, iset):
            return _fail("steinberg", checked, t, cfg, relation=rel, indices=list(idx), params=params)
    return SuiteResult("steinberg", "pass", checked)


def _full_gens(cfg: CampaignConfig):
    return ep_generator_set(FormNet(cfg.ring, cfg.index_set,
                                    np.ones((2 * cfg.n, 2 * cfg.n), dtype=np.int64),
                                    np.ones(2 * cfg.n, dtype=np.int64)))


def _suite_length_identity(cfg: CampaignConfig) -> SuiteResult:
    gens = _full_gens(cfg)
    checked = 0
    for t in cfg.trial_ids():
        la = trial_length(cfg.seed, t, cfg.max_length, 0x21)
        lb = trial_length(cfg.seed, t, cfg.max_length, 0x22)
        wa, a = sample_from(gens, la, [cfg.seed, 0x21, t])
        wb, b = sample_from(gens, lb, [cfg.seed, 0x22, t])
        checked += 1
        if not product_length_identity_check(a, b):
            return _fail("length-identity", checked, t, cfg, word_a=wa.to_json(), word_b=wb.to_json())
    return SuiteResult("length-identity", "pass", checked)


def campaign_net(cfg: CampaignConfig) -> FormNet:
    return closure_from_levels(cfg.relation(), cfg.seed_levels(), cfg.ring)


def _suite_group_closure(cfg: CampaignConfig) -> SuiteResult:
    net = campaign_net(cfg)
    gens = ep_generator_set(net)
    checked = 0
    for t in cfg.trial_ids():
        word, g = sample_from(gens, trial_length(cfg.seed, t, cfg.max_length, 0x31), [cfg.seed, 0x31, t])
        for which, x in (("product", g), ("inverse", g.inv)):
            checked += 1
            bad = sp_violations(x, net)
            if bad:
                kind, ix, val = bad[0]
                return _fail("group-closure", checked, t, cfg, word=word.to_json(), which=which,
                             kind=kind, indices=list(ix), value=val)
    return SuiteResult("group-closure", "pass", checked)


def _suite_transporter(cfg: CampaignConfig) -> SuiteResult:
    net = campaign_net(cfg)
    gens = ep_generator_set(net)
    checked = 0
    for t in cfg.trial_ids():
        word, g = sample_from(gens, trial_length(cfg.seed, t, cfg.max_length, 0x41), [cfg.seed, 0x41, t])
        checked += 1
        rep = transporter_report(g, net, limit=1)
        if not rep.ok:
            name, ix, val = rep.first()
            return _fail("transporter", checked, t, cfg, word=word.to_json(), condition=name,
                         indices=list(ix), value=val)
    return SuiteResult("transporter", "pass", checked)


def mutated_net(net: FormNet, nu: EquivRel) -> FormNet:
    """Shrink the first nonzero short level inside a class of ``nu`` to zero."""
    for i in net.index_set:
        for j in net.index_set:
            if j not in (i, -i) and nu.equiv(i, j) and net.s(i, j).generator != net.m:
                return shrink_level(net, i, j)
    raise NetError("no level inside a class of nu to shrink")


def _suite_sandwich(cfg: CampaignConfig) -> SuiteResult:
    nu = cfg.relation()
    if not height_at_least(nu, 4, 5):
        return SuiteResult("sandwich", "skip", note=f"h(nu) >= (4, 5) fails for {nu}")
    extra = cfg.seed_levels()
    net = campaign_net(cfg)
    if cfg.mutate:
        net = mutated_net(net, nu)
    ids = cfg.trial_ids()
    rep = sandwich_check(nu, extra, cfg.ring, trials=len(ids), seed=cfg.seed, max_length=cfg.max_length,
                         net=net, stop_at_first=True, start=ids.start)
    if rep.failures:
        f = rep.failures[0]
        return SuiteResult("sandwich", "fail", f.trial - ids.start + 1,
                           {"seed": cfg.seed, "trial": f.trial, "assertion": f.assertion,
                            "word": f.word.to_json(), **f.detail},
                           note="mutated net" if cfg.mutate else "")
    return SuiteResult("sandwich", "pass", len(ids), note="mutated net" if cfg.mutate else "")


def _suite_extraction(cfg: CampaignConfig) -> SuiteResult:
    net = campaign_net(cfg)
    ring, iset = cfg.ring, cfg.index_set
    checked = 0
    for t in cfg.trial_ids():
        rng = _rng(cfg, 0x51, t)
        p = int(iset.indices[int(rng.integers(2 * cfg.n))])
        a = random_one_row(p, ring, iset, rng, net=net)
        specs = decompose_one_row(a, p)
        checked += 1
        if GeneratorWord(tuple(specs)).product(ring, iset) != a:
            return _fail("extraction", checked, t, cfg, p=p, matrix=a.to_json(), reason="round trip")
        rep = level_extraction_check(a, p, net)
        if not rep.ok:
            return _fail("extraction", checked, t, cfg, p=p, matrix=a.to_json(),
                         reason="level", outside=[s.to_json() for s in rep.outside])
    return SuiteResult("extraction", "pass", checked)


def _suite_jacobson(cfg: CampaignConfig) -> SuiteResult:
    nu = cfg.relation()
    if not cfg.ring.is_local:
        return SuiteResult("jacobson", "skip", note=f"Z/{cfg.m} is not local")
    if not height_at_least(nu, 4, 5):
        return SuiteResult("jacobson", "skip", note=f"h(nu) >= (4, 5) fails for {nu}")
    ids = cfg.trial_ids()
    rep = jacobson_corollary_check(nu, cfg.seed_levels(), cfg.ring, trials=len(ids), seed=cfg.seed,
                                   max_length=cfg.max_length, start=ids.start)
    if rep.failures:
        f = dict(rep.failures[0])
        f["seed"] = cfg.seed
        return SuiteResult("jacobson", "fail", rep.congruent_words, f)
    return SuiteResult("jacobson", "pass", rep.congruent_words)


def _suite_crt(cfg: CampaignConfig) -> SuiteResult:
    """Patched against direct membership; projection against products and lengths."""
    net = campaign_net(cfg)
    pools = (ep_generator_set(net), _full_gens(cfg))
    factors = crt_split(cfg.ring)
    checked = 0
    for t in cfg.trial_ids():
        gens = pools[t % 2]
        length = trial_length(cfg.seed, t, cfg.max_length, 0x61)
        wa, a = sample_from(gens, length, [cfg.seed, 0x61, t])
        wb, b = sample_from(pools[1], length, [cfg.seed, 0x62, t])
        checked += 1
        direct = sp_membership(a, net)
        try:
            patched = patch_membership(a, net, check=False)
        except NetError as exc:
            return _fail("crt", checked, t, cfg, word=wa.to_json(), reason=f"projection: {exc}")
        if direct != patched:
            return _fail("crt", checked, t, cfg, word=wa.to_json(), direct=direct, patched=patched,
                         factors={str(k): v for k, v in factor_report(a, net).items()})
        ab = a @ b
        for f in factors:
            pa, pb = project_matrix(a, f), project_matrix(b, f)
            if project_matrix(ab, f) != pa @ pb:
                return _fail("crt", checked, t, cfg, word_a=wa.to_json(), word_b=wb.to_json(),
                             factor=f.modulus, reason="projection is not multiplicative")
            if not np.array_equal(row_lengths(a) % f.modulus, row_lengths(pa)):
                return _fail("crt", checked, t, cfg, word=wa.to_json(), factor=f.modulus,
                             reason="projection does not commute with row lengths")
    return SuiteResult("crt", "pass", checked)


_REGISTRY: dict[str, Callable[[CampaignConfig], SuiteResult]] = {
    "steinberg": _suite_steinberg,
    "length-identity": _suite_length_identity,
    "group-closure": _suite_group_closure,
    "transporter": _suite_transporter,
    "sandwich": _suite_sandwich,
    "extraction": _suite_extraction,
    "jacobson": _suite_jacobson,
    "crt": _suite_crt,
}


def run(cfg: CampaignConfig) -> list[SuiteResult]:
    """Run the selected suites in registry order."""
    out = []
    for name in sorted(set(cfg.suites), key=SUITES.index):
        t0 = time.perf_counter()
        res = _REGISTRY[name](cfg)
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out


def replay(cfg: CampaignConfig, result: SuiteResult) -> SuiteResult:
    """Rerun only the trial recorded in a failing result."""
    if result.counterexample is None:
        raise ValueError("result carries no counterexample")
    ce = result.counterexample
    one = CampaignConfig(**{**cfg.__dict__, "seed": ce["seed"], "trial": ce["trial"], "suites": (result.suite,)})
    return _REGISTRY[result.suite](one)


# ------------------------------------------------------------------ output


def emit(results: list[SuiteResult], fmt: str = "json", timing: bool = False) -> str:
    """Serialized report; field order is fixed and timings are opt-in, so reruns are byte-identical."""
    if fmt == "json":
        return json.dumps([r.to_json(timing) for r in results], indent=2 if results else None)
    if fmt == "text":
        lines = []
        for r in results:
            line = f"{r.suite:<16} {r.status.upper():<4} checked={r.checked}"
            if r.note:
                line += f"  ({r.note})"
            if timing:
                line += f"  {r.seconds:.2f}s"
            lines.append(line)
            if r.counterexample is not None:
                lines.append("  counterexample: " + json.dumps(r.counterexample))
        return "\n".join(lines)
    raise ValueError(f"unknown format {fmt!r}")


def parse_report(text: str) -> list[SuiteResult]:
    return [SuiteResult.from_json(o) for o in json.loads(text)]


# ------------------------------------------------------------------ inputs


def load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _require(obj: Any, keys: tuple[str, ...], where: str) -> dict:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a JSON object")
    for k in keys:
        if k not in obj:
            raise InputError(f"{where}.{k}: missing")
    return obj


def parse_matrix(obj: Any, where: str = "matrix") -> SympMatrix:
    """``{"m", "n", "rows"}`` with rows in the order ``1..n, -n..-1``; must be symplectic."""
    _require(obj, ("m", "n", "rows"), where)
    m, n = _as_int(obj["m"], f"{where}.m"), _as_int(obj["n"], f"{where}.n")
    if m < 2 or n < 1:
        raise InputError(f"{where}: need m >= 2 and n >= 1")
    rows = obj["rows"]
    if not isinstance(rows, list) or len(rows) != 2 * n:
        raise InputError(f"{where}.rows: expected {2 * n} rows")
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 2 * n:
            raise InputError(f"{where}.rows[{r}]: expected {2 * n} entries")
        for c, v in enumerate(row):
            _as_int(v, f"{where}.rows[{r}][{c}]")
    arr = np.array(rows, dtype=np.int64) % m
    if not is_symplectic(arr, m):
        bad = np.argwhere((arr @ mirror_array(arr, m) - np.eye(2 * n, dtype=np.int64)) % m)[0]
        iset = IndexSet(n)
        raise InputError(f"{where}: not symplectic (a * mirror(a) differs from e at "
                         f"({iset.index_at(int(bad[0]))}, {iset.index_at(int(bad[1]))}))")
    return SympMatrix(ModRing(m), IndexSet(n), arr)


def parse_relation(obj: Any, where: str = "nu") -> EquivRel:
    _require(obj, ("n", "classes"), where)
    n = _as_int(obj["n"], f"{where}.n")
    if n < 1:
        raise InputError(f"{where}.n: need n >= 1")
    classes = obj["classes"]
    if not isinstance(classes, list) or not all(isinstance(c, list) for c in classes):
        raise InputError(f"{where}.classes: expected a list of lists")
    for a, c in enumerate(classes):
        for b, i in enumerate(c):
            _as_int(i, f"{where}.classes[{a}][{b}]")
    try:
        return make_equiv(IndexSet(n), classes)
    except (PartitionError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_net(obj: Any, where: str = "net", require_exact: bool = False) -> FormNet:
    _require(obj, ("m", "n", "sigma", "gamma"), where)
    try:
        net = FormNet.from_json(obj)
    except (NetError, ValueError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from None
    bad = validate(net, require_exact=require_exact)
    if bad:
        v = bad[0]
        raise InputError(f"{where}: axiom {v.axiom} fails at {v.indices}: {v.detail}")
    return net


def parse_seed_levels(obj: Any, ring: ModRing, index_set: IndexSet, where: str = "seed_levels") -> LevelSeed:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a JSON object")
    for key, arity in (("sigma", 3), ("gamma", 2)):
        for k, entry in enumerate(obj.get(key, [])):
            if not isinstance(entry, list) or len(entry) != arity:
                raise InputError(f"{where}.{key}[{k}]: expected a list of {arity} integers")
            for c, v in enumerate(entry):
                _as_int(v, f"{where}.{key}[{k}][{c}]")
    try:
        seed = LevelSeed.from_json(obj, ring)
        seed.check(ring, index_set)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None
    return seed


def parse_inputs(matrix: str | None = None, net: str | None = None, nu: str | None = None) -> dict:
    """Load and validate whichever of the matrix, net and relation files are given."""
    out: dict[str, Any] = {}
    if matrix is not None:
        out["matrix"] = parse_matrix(load_json(matrix), matrix)
    if net is not None:
        out["net"] = parse_net(load_json(net), net)
    if nu is not None:
        out["nu"] = parse_relation(load_json(nu), nu)
    return out
