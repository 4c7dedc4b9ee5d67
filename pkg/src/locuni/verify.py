"""Independent trace verification.

Replays a trace from its embedded instance using only the ring-model and
blowup layers, re-deriving every field: ideal membership, pivot
minimality, adjoined vectors, centering, the lift equalities for tagged
steps, and finally the certificate (parameter basis via elementary
divisors, generation of the maximal ideal, exact reconstruction of every
target expression, nonnegative divisibility witnesses).  The driver that
produced the trace is never consulted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .blowup import blowup_along
from .errors import EngineError, InstanceError
from .instances import Instance, instance_from_dict
from .lattices import snf
from .reduction import (
    MODE_EMBEDDED,
    MODE_LU,
    TAG_CLEARING,
    TAG_ELIMINATION,
    TAG_LOC_LIFT,
    TAG_ORDERING,
    TAG_RANK_ONE,
    TAG_RES_LIFT,
)
from .ringmodel import (
    RingModel,
    center_of,
    dimension,
    express,
    localize_at,
    minimal_generators,
    monomial_member,
    residue_ring,
    ring_equal,
    vadd,
    vsub,
    zero_vec,
)
from .values import lex_cmp

KNOWN_TAGS = (
    TAG_RANK_ONE,
    TAG_LOC_LIFT,
    TAG_RES_LIFT,
    TAG_ELIMINATION,
    TAG_ORDERING,
    TAG_CLEARING,
)

STATUS_DONE = "done"
STATUS_FUEL = "fuel-exhausted"


@dataclass
class VerifyReport:
    valid: bool
    failure: str | None = None
    checks: int = 0

    def describe(self) -> str:
        if self.valid:
            return f"Valid ({self.checks} checks)"
        return f"Invalid: {self.failure}"


class _Failure(Exception):
    pass


def _vec(x: Any, d: int, where: str) -> tuple[int, ...]:
    if not isinstance(x, list) or len(x) != d:
        raise _Failure(f"{where}: expected an integer array of length {d}")
    for v in x:
        if isinstance(v, bool) or not isinstance(v, int):
            raise _Failure(f"{where}: non-integer entry {v!r}")
    return tuple(x)


def _replay_step(R: RingModel, raw: dict, idx: int, count) -> RingModel:
    d = R.dim
    where = f"step {idx}"
    tag = raw.get("tag")
    if tag not in KNOWN_TAGS:
        raise _Failure(f"{where}: unknown tag {tag!r}")
    ideal = [_vec(u, d, f"{where} ideal") for u in raw.get("ideal", [])]
    if not ideal or len(set(ideal)) != len(ideal):
        raise _Failure(f"{where}: ideal must be a nonempty duplicate-free list")
    pivot = _vec(raw.get("pivot"), d, f"{where} pivot")
    adjoined = [_vec(u, d, f"{where} adjoined") for u in raw.get("adjoined", [])]

    count()
    for u in ideal:
        if monomial_member(u, R) is None:
            raise _Failure(f"{where}: ideal generator {list(u)} not in the ring")
    count()
    if pivot not in ideal:
        raise _Failure(f"{where}: pivot not among ideal generators")
    pv = R.val.value(pivot)
    for u in ideal:
        if lex_cmp(pv, R.val.value(u)) > 0:
            raise _Failure(f"{where}: pivot is not of minimal value")
    count()
    expected = sorted({vsub(u, pivot) for u in ideal if u != pivot})
    if sorted(adjoined) != expected:
        raise _Failure(f"{where}: adjoined vectors do not match ideal minus pivot")

    level = raw.get("level")
    mult = raw.get("multiplier")
    try:
        result = RingModel(dim=d, gens=tuple(R.gens) + tuple(adjoined), val=R.val,
                           inverted=R.inverted)
    except EngineError as exc:
        raise _Failure(f"{where}: {exc}") from exc

    if tag in (TAG_LOC_LIFT, TAG_RES_LIFT):
        if not isinstance(level, int) or not 1 <= level < R.val.levels:
            raise _Failure(f"{where}: lift step needs a level in 1..{R.val.levels - 1}")
    if tag == TAG_LOC_LIFT and len(ideal) == 2 and zero_vec(d) not in ideal:
        count()
        s = _vec(mult, d, f"{where} multiplier") if mult is not None else zero_vec(d)
        ratio = [vsub(u, s) for u in ideal]
        try:
            before = localize_at(R, center_of(R, level))
            direct = blowup_along(before, ratio)
            after = localize_at(result, center_of(result, level))
            if not ring_equal(after, direct.result):
                raise _Failure(f"{where}: lift does not match the localization blowup")
        except EngineError as exc:
            raise _Failure(f"{where}: localization re-derivation failed: {exc}") from exc
    if tag == TAG_RES_LIFT:
        count()
        try:
            p_before = center_of(R, level)
            direct = blowup_along(residue_ring(R, p_before), ideal)
            p_after = center_of(result, level)
            if not ring_equal(residue_ring(result, p_after), direct.result):
                raise _Failure(f"{where}: lift does not match the residue blowup")
            if not ring_equal(localize_at(result, p_after), localize_at(R, p_before)):
                raise _Failure(f"{where}: residue lift moved the localization")
        except EngineError as exc:
            raise _Failure(f"{where}: residue re-derivation failed: {exc}") from exc
    return result


def _check_certificate(inst: Instance, final: RingModel, cert: Any, count) -> None:
    if not isinstance(cert, dict):
        raise _Failure("certificate must be an object for a completed trace")
    d = final.dim
    params = [_vec(p, d, "certificate parameter") for p in cert.get("parameters", [])]

    count()
    for p in params:
        if monomial_member(p, final) is None:
            raise _Failure(f"certificate parameter {list(p)} not in the final ring")
    count()
    if len(params) != dimension(final):
        raise _Failure("certificate parameter count does not match the dimension")
    count()
    stacked = []
    basis = final.full_lattice
    for v in list(params) + list(final.unit_lattice.basis):
        coords = basis.coordinates(v)
        if coords is None:
            raise _Failure(f"certificate parameter {list(v)} outside the exponent group")
        stacked.append(list(coords))
    if stacked:
        divisors = snf(stacked)
        if len(divisors) != basis.rank or any(x != 1 for x in divisors):
            raise _Failure("certificate parameters are not a unimodular basis")
    elif basis.rank != 0:
        raise _Failure("certificate parameters are not a unimodular basis")
    count()
    for g in minimal_generators(final):
        if express(g, params, final.unit_lattice, final.val) is None:
            raise _Failure("maximal ideal is not generated by the certificate parameters")

    exprs = cert.get("expressions", [])
    if inst.mode == MODE_LU:
        if exprs:
            raise _Failure("plain mode certificates carry no expressions")
        return
    if not isinstance(exprs, list) or len(exprs) != len(inst.targets):
        raise _Failure("certificate must carry one expression per target")
    dense = []
    for i, (target, entry) in enumerate(zip(inst.targets, exprs)):
        count()
        if not isinstance(entry, dict):
            raise _Failure(f"expression {i} must be an object")
        rec_target = _vec(entry.get("target"), d, f"expression {i} target")
        if rec_target != target:
            raise _Failure(f"expression {i} does not echo target {list(target)}")
        exponents = entry.get("exponents")
        if not isinstance(exponents, list) or len(exponents) != len(params):
            raise _Failure(f"expression {i}: exponent vector of wrong length")
        if any(isinstance(e, bool) or not isinstance(e, int) or e < 0 for e in exponents):
            raise _Failure(f"expression {i}: exponents must be nonnegative integers")
        unit = _vec(entry.get("unit"), d, f"expression {i} unit")
        if not final.unit_lattice.contains(unit):
            raise _Failure(f"expression {i}: unit part is not a unit of the final ring")
        acc = unit
        for e, p in zip(exponents, params):
            acc = vadd(acc, tuple(e * x for x in p))
        if acc != target:
            raise _Failure(f"expression {i} does not reconstruct its target")
        dense.append(tuple(exponents))

    witnesses = cert.get("witnesses")
    if inst.mode != MODE_EMBEDDED:
        return
    count()
    if not isinstance(witnesses, list) or len(witnesses) != max(0, len(inst.targets) - 1):
        raise _Failure("embedded certificate needs one witness per consecutive pair")
    for i, w in enumerate(witnesses):
        wv = _vec(w, len(params), f"witness {i}") if params else tuple(w or ())
        expected = vsub(dense[i + 1], dense[i])
        if tuple(wv) != expected:
            raise _Failure(f"witness {i} is not the difference of adjacent exponents")
        if any(x < 0 for x in wv):
            raise _Failure(f"witness {i} is negative: divisibility chain broken")


def verify_dict(data: dict) -> VerifyReport:
    checks = 0

    def count():
        nonlocal checks
        checks += 1

    try:
        try:
            inst = instance_from_dict(data.get("instance"), name_hint="trace")
        except InstanceError as exc:
            raise _Failure(f"instance echo invalid: {exc}") from exc
        R = inst.model()
        steps = data.get("steps")
        if not isinstance(steps, list):
            raise _Failure("steps must be a list")
        for idx, raw in enumerate(steps):
            if not isinstance(raw, dict):
                raise _Failure(f"step {idx} must be an object")
            R = _replay_step(R, raw, idx, count)

        final = data.get("final")
        count()
        if not isinstance(final, dict):
            raise _Failure("final ring summary missing")
        rec_gens = sorted(_vec(g, R.dim, "final generator") for g in final.get("generators", []))
        if rec_gens != list(R.gens):
            raise _Failure("final generators do not match the replayed ring")
        rec_inv = sorted(_vec(g, R.dim, "final inverted") for g in final.get("inverted", []))
        if rec_inv != sorted(R.inverted):
            raise _Failure("final inverted markers do not match the replayed ring")

        status = data.get("status")
        if status == STATUS_DONE:
            _check_certificate(inst, R, data.get("certificate"), count)
        elif status == STATUS_FUEL:
            count()
            if data.get("certificate") is not None:
                raise _Failure("fuel-exhausted traces carry no certificate")
        else:
            raise _Failure(f"unknown status {status!r}")

        fuel = data.get("fuel")
        count()
        if not isinstance(fuel, dict):
            raise _Failure("fuel summary missing")
        by_tag: dict[str, int] = {}
        for raw in steps:
            by_tag[raw["tag"]] = by_tag.get(raw["tag"], 0) + 1
        if fuel.get("by_tag") != by_tag:
            raise _Failure("per-tag step counts do not match the steps")
    except _Failure as exc:
        return VerifyReport(valid=False, failure=str(exc), checks=checks)
    return VerifyReport(valid=True, checks=checks)
