"""Reduction of resolution problems to the rank-one oracle.

The driver recurses on the number of value levels.  At each composite
stage it splits the attached valuation at the first level where some
generator has nonzero value, so the head acts with rank one and the tail
is handled by recursion on the residue ring:

  1. resolve the localization at the head center and lift the chain
     back (two steps on R per simple step);
  2. for monomialization modes, factor every target into a head-unit
     part times a parameter monomial and clear unit denominators by
     blowups along (s, y_1..y_r);
  3. for the divisibility mode, reorder the unit parts by tail value
     with a single blowup along (x^n, y_1..y_r);
  4. extract one binomial relation per excess generator of the center
     and resolve the residue ring with the relation units and target
     units as its monomialization targets, lifting back;
  5. eliminate each excess generator with one blowup along
     (a_k, y_1..y_r), after which the center is generated by the
     localization parameters and the model is regular.

Every trace step carries a provenance tag and, for lifted steps, the
level and multiplier needed to re-derive it independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .blowup import BlowupStep, blowup_along
from .errors import EngineError, MembershipError
from .lifting import lift_from_localization, lift_from_residue, parameters_in_p
from .rankone import (
    DONE,
    FUEL_EXHAUSTED,
    Budget,
    RankOneOutcome,
    Strategy,
    enforce_divisibility,
    monomialize_targets,
    uniformize_rank_one,
)
from .ringmodel import (
    MonomialExpression,
    RingModel,
    center_of,
    clearing_multiplier,
    express,
    localize_at,
    minimal_generators,
    monomial_member,
    require_regular,
    residue_ring,
    unit_combination,
    vadd,
    vscale,
    vsub,
    zero_vec,
)
from .values import ExpVec, first_nonzero_level, is_lex_positive, split_level

MODE_LU = "lu"
MODE_WEAK = "weak"
MODE_EMBEDDED = "embedded"
MODES = (MODE_LU, MODE_WEAK, MODE_EMBEDDED)

TAG_RANK_ONE = "rankone"
TAG_LOC_LIFT = "localization-lift"
TAG_RES_LIFT = "residue-lift"
TAG_ELIMINATION = "relation-elimination"
TAG_ORDERING = "value-ordering"
TAG_CLEARING = "unit-clearing"


@dataclass(frozen=True)
class BinomialRelation:
    """Monomial identity ``unit_factor + excess = sum(rhs_terms) + rhs_unit``.

    The excess generator times a head-unit monomial equals a parameter
    monomial times another head-unit monomial; the head value of
    ``unit_factor`` is zero and the parameter degree of the right side
    is at least one.
    """

    excess: ExpVec
    unit_factor: ExpVec
    rhs_terms: tuple[tuple[ExpVec, int], ...]
    rhs_unit: ExpVec

    def holds(self) -> bool:
        lhs = vadd(self.unit_factor, self.excess)
        rhs = list(self.rhs_unit)
        for g, c in self.rhs_terms:
            for i, x in enumerate(g):
                rhs[i] += c * x
        return lhs == tuple(rhs)


@dataclass(frozen=True)
class TraceStep:
    tag: str
    step: BlowupStep
    level: int | None = None
    multiplier: ExpVec | None = None


@dataclass(frozen=True)
class Certificate:
    parameters: tuple[ExpVec, ...]
    expressions: tuple[MonomialExpression, ...]
    witnesses: tuple[ExpVec, ...] | None


@dataclass(frozen=True)
class Trace:
    initial: RingModel
    mode: str
    targets: tuple[ExpVec, ...]
    steps: tuple[TraceStep, ...]
    final: RingModel
    certificate: Certificate | None
    status: str
    fuel_limit: int
    fuel_used: int

    @property
    def fuel_by_tag(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for ts in self.steps:
            out[ts.tag] = out.get(ts.tag, 0) + 1
        return out


@dataclass
class _Run:
    """Mutable recursion state: the shared budget and strategy."""

    strategy: Strategy
    budget: Budget


def _certify(R: RingModel, mode: str, targets: Sequence[ExpVec]) -> Certificate:
    cert = require_regular(R)
    params = cert.parameters
    if mode == MODE_LU:
        return Certificate(parameters=params, expressions=(), witnesses=None)
    exprs = []
    for t in targets:
        expr = express(t, params, R.unit_lattice, R.val)
        if expr is None:
            raise EngineError(f"target {t} not expressible over final parameters")
        exprs.append(expr)
    witnesses = None
    if mode == MODE_EMBEDDED:
        dense = [e.dense(params) for e in exprs]
        wits = []
        for lo, hi in zip(dense, dense[1:]):
            diff = vsub(hi, lo)
            if any(x < 0 for x in diff):
                raise EngineError("divisibility chain broken in final certificate")
            wits.append(diff)
        witnesses = tuple(wits)
    return Certificate(parameters=params, expressions=tuple(exprs), witnesses=witnesses)


def _factor_targets(
    R: RingModel, level: int, params: Sequence[ExpVec], targets: Sequence[ExpVec]
) -> list[MonomialExpression]:
    """Write each target as head-unit part plus parameter combination."""
    Rp = localize_at(R, center_of(R, level))
    head = R.val.head(level)
    out = []
    for t in targets:
        expr = express(t, params, Rp.unit_lattice, head)
        if expr is None:
            raise EngineError(f"target {t} not expressible over localization parameters")
        out.append(expr)
    return out


def extract_relations(
    R: RingModel, level: int, params: Sequence[ExpVec]
) -> list[BinomialRelation]:
    """One binomial relation per needed center class that is not a parameter.

    Each minimal generator of R with positive head value that is not
    unit-equivalent to a parameter is solved over the parameters in the
    localization; the negative part of its unit combination is the
    head-unit factor that the elimination loop divides out.
    """
    head = R.val.head(level)
    p = center_of(R, level)
    Rp = localize_at(R, p)
    param_set = list(params)
    out = []
    for rep in minimal_generators(R):
        if not is_lex_positive(head.value(rep)):
            continue
        if any(R.unit_lattice.contains(vsub(rep, y)) for y in param_set):
            continue
        expr = express(rep, param_set, Rp.unit_lattice, head)
        if expr is None:
            raise EngineError("localization is not regular over the given parameters")
        combo = unit_combination(Rp, expr.unit)
        a_k = zero_vec(R.dim)
        v = zero_vec(R.dim)
        for c, u in zip(combo, Rp.unit_gens):
            if c < 0:
                a_k = vadd(a_k, vscale(-c, u))
            elif c > 0:
                v = vadd(v, vscale(c, u))
        if all(x == 0 for x in a_k):
            raise EngineError(f"excess generator {rep} is already redundant")
        rel = BinomialRelation(
            excess=rep, unit_factor=a_k, rhs_terms=expr.terms, rhs_unit=v
        )
        assert rel.holds()
        out.append(rel)
    return out


def eliminate_excess_generators(
    R: RingModel,
    level: int,
    relations: Sequence[BinomialRelation],
    budget: Budget,
) -> tuple[list[BlowupStep], RingModel, str]:
    """Blow up along (a_k, y_1..y_r) until no excess generator remains.

    One step per relation suffices here: dividing the parameters by the
    unit factor turns the relation into a monomial expression of the
    excess generator over the new parameters.  Parameters move at each
    step, so relations are re-extracted every round.
    """
    steps: list[BlowupStep] = []
    rels = list(relations)
    while rels:
        if not budget.try_spend():
            return steps, R, FUEL_EXHAUSTED
        rel = rels[0]
        params = parameters_in_p(R, center_of(R, level))
        step = blowup_along(R, [rel.unit_factor, *params])
        steps.append(step)
        R = step.result
        rels = extract_relations(R, level, parameters_in_p(R, center_of(R, level)))
    return steps, R, DONE


def order_unit_values(
    R: RingModel, level: int, targets: Sequence[ExpVec]
) -> BlowupStep | None:
    """Single blowup making the targets' unit parts nondecreasing in tail value.

    Targets must factor over the localization parameters with
    componentwise-ordered exponents.  Returns None when the unit parts
    are already ordered.  Otherwise pick the unit generator x of
    positive tail value whose value level is minimal (lex-smallest
    exponent among those), solve the minimal power n that reorders every
    strict pair, and blow up along (x^n, y_1..y_r).
    """
    p = center_of(R, level)
    params = parameters_in_p(R, p)
    tail = R.val.tail(level)
    factored = _factor_targets(R, level, params, targets)
    gammas = [e.dense(params) for e in factored]
    alphas = [e.unit for e in factored]
    for lo, hi in zip(gammas, gammas[1:]):
        if any(a > b for a, b in zip(lo, hi)):
            raise EngineError("target exponents are not componentwise ordered")
    tails = [tail.value(a) for a in alphas]
    if all(lo <= hi for lo, hi in zip(tails, tails[1:])):
        return None
    for i in range(len(targets) - 1):
        if gammas[i] == gammas[i + 1] and tails[i] > tails[i + 1]:
            raise EngineError("equal exponents with decreasing unit values")

    Rp = localize_at(R, p)
    candidates = [u for u in Rp.unit_gens if is_lex_positive(tail.value(u))]
    if not candidates:
        raise EngineError("no unit generator of positive tail value available")
    x = min(candidates, key=lambda u: (first_nonzero_level(tail.value(u)), u))
    vx = tail.value(x)

    def min_power(c, d) -> int:
        # smallest n >= 0 with n*d > c lexicographically, where d > 0
        if not is_lex_positive(c):
            return 0
        lam = first_nonzero_level(d)
        if lam > first_nonzero_level(c):
            raise EngineError("tail value of reordering unit is too deep")
        n = max(0, math.ceil(c[lam - 1] / d[lam - 1]))
        while not tuple(n * w for w in d) > tuple(c):
            n += 1
        return n

    n = 1
    for i in range(len(targets) - 1):
        dg = sum(gammas[i + 1]) - sum(gammas[i])
        if dg <= 0:
            continue
        c = tuple(a - b for a, b in zip(tails[i], tails[i + 1]))
        n = max(n, min_power(c, tuple(dg * w for w in vx)))
    return blowup_along(R, [vscale(n, x), *params])


def _residue_targets(
    R: RingModel,
    level: int,
    alphas: Sequence[ExpVec],
    relations: Sequence[BinomialRelation],
) -> list[ExpVec]:
    tail = R.val.tail(level)
    seen = set()
    collected = []
    for t in list(alphas) + [rel.unit_factor for rel in relations]:
        if t not in seen:
            seen.add(t)
            collected.append(t)
    collected.sort(key=lambda t: (tail.value(t), t))
    return collected


def _lift_and_emit(R, level, sub_steps, lift_one, tag, emit):
    """Lift a chain of sub-steps one simple step at a time, emitting trace rows."""
    from .blowup import decompose_to_simple

    current = R
    for step in sub_steps:
        simples = [step] if step.is_simple else decompose_to_simple(step)
        for simple in simples:
            rec = lift_one(current, level, simple)
            for produced in rec.steps:
                emit(TraceStep(tag, produced, level=level, multiplier=rec.multiplier))
            current = rec.final
    return current


def _drive(
    R: RingModel,
    mode: str,
    targets: tuple[ExpVec, ...],
    run: _Run,
    emit,
) -> tuple[RingModel, Certificate | None, str]:
    if not R.positive_gens:
        return R, _certify(R, mode, targets), DONE

    n = R.val.levels
    j = split_level(R.val, R.gens)

    if j == n:
        outcome = uniformize_rank_one(R, run.strategy, run.budget)
        for s in outcome.steps:
            emit(TraceStep(TAG_RANK_ONE, s))
        if outcome.status != DONE:
            return outcome.final, None, FUEL_EXHAUSTED
        if mode == MODE_EMBEDDED and targets:
            result = enforce_divisibility(outcome, targets, run.budget)
            for s in result.outcome.steps[len(outcome.steps):]:
                emit(TraceStep(TAG_RANK_ONE, s))
            outcome = result.outcome
            if outcome.status != DONE:
                return outcome.final, None, FUEL_EXHAUSTED
        return outcome.final, _certify(outcome.final, mode, targets), DONE

    # --- composite level: resolve the localization first
    sub_trace: list[TraceStep] = []
    sub_final, _, sub_status = _drive(
        localize_at(R, center_of(R, j)), mode, targets, run, sub_trace.append
    )
    R = _lift_and_emit(
        R, j, [ts.step for ts in sub_trace], lift_from_localization, TAG_LOC_LIFT, emit
    )
    if sub_status != DONE:
        return R, None, FUEL_EXHAUSTED

    # --- factor targets over the center parameters, clearing unit denominators
    alphas: list[ExpVec] = []
    if mode != MODE_LU:
        guard = 0
        while True:
            guard += 1
            if guard > len(targets) + 2:
                raise EngineError("unit clearing did not stabilize")
            params = parameters_in_p(R, center_of(R, j))
            factored = _factor_targets(R, j, params, targets)
            Rbar = residue_ring(R, center_of(R, j))
            dirty = None
            for expr in factored:
                if monomial_member(expr.unit, Rbar) is None:
                    dirty = expr
                    break
            if dirty is None:
                alphas = [e.unit for e in factored]
                break
            Rp = localize_at(R, center_of(R, j))
            beta = clearing_multiplier(Rp, [dirty.unit])
            if not run.budget.try_spend():
                return R, None, FUEL_EXHAUSTED
            step = blowup_along(R, [beta, *params])
            emit(TraceStep(TAG_CLEARING, step, level=j))
            R = step.result

    # --- divisibility mode: reorder unit parts by tail value
    if mode == MODE_EMBEDDED and targets:
        step = order_unit_values(R, j, targets)
        if step is not None:
            if not run.budget.try_spend():
                return R, None, FUEL_EXHAUSTED
            emit(TraceStep(TAG_ORDERING, step, level=j))
            R = step.result
            params = parameters_in_p(R, center_of(R, j))
            alphas = [e.unit for e in _factor_targets(R, j, params, targets)]

    # --- resolve the residue ring with unit parts as its targets
    relations = extract_relations(R, j, parameters_in_p(R, center_of(R, j)))
    Rbar = residue_ring(R, center_of(R, j))
    if Rbar.positive_gens:
        res_targets = _residue_targets(R, j, alphas, relations)
        mode_b = MODE_EMBEDDED if mode == MODE_EMBEDDED else (
            MODE_WEAK if res_targets else MODE_LU
        )
        sub_trace = []
        _, _, sub_status = _drive(
            Rbar, mode_b, tuple(res_targets), run, sub_trace.append
        )
        R = _lift_and_emit(
            R, j, [ts.step for ts in sub_trace], lift_from_residue, TAG_RES_LIFT, emit
        )
        if sub_status != DONE:
            return R, None, FUEL_EXHAUSTED
        relations = extract_relations(R, j, parameters_in_p(R, center_of(R, j)))

    # --- eliminate the excess generators of the center
    steps, R, status = eliminate_excess_generators(R, j, relations, run.budget)
    for s in steps:
        emit(TraceStep(TAG_ELIMINATION, s, level=j))
    if status != DONE:
        return R, None, FUEL_EXHAUSTED

    return R, _certify(R, mode, targets), DONE


def uniformize(
    R: RingModel,
    mode: str = MODE_LU,
    targets: Sequence[Sequence[int]] = (),
    strategy: Strategy = Strategy(),
) -> Trace:
    """Resolve R with respect to its attached valuation; emit a full trace.

    Targets must be monomials of R; in the divisibility mode they must
    arrive sorted by value.  Fuel exhaustion yields a partial trace with
    status ``fuel-exhausted`` rather than an error.
    """
    if mode not in MODES:
        raise EngineError(f"unknown mode {mode!r}")
    targets_t = tuple(tuple(int(x) for x in t) for t in targets)
    for t in targets_t:
        if monomial_member(t, R) is None:
            raise MembershipError(f"target {t} is not a monomial of the ring")
    if mode == MODE_EMBEDDED:
        vals = [R.val.value(t) for t in targets_t]
        for lo, hi in zip(vals, vals[1:]):
            if lo > hi:
                raise EngineError("targets for the divisibility mode must be sorted by value")

    run = _Run(strategy=strategy, budget=Budget(strategy.fuel))
    trace_steps: list[TraceStep] = []
    final, cert, status = _drive(R, mode, targets_t, run, trace_steps.append)
    return Trace(
        initial=R,
        mode=mode,
        targets=targets_t,
        steps=tuple(trace_steps),
        final=final,
        certificate=cert,
        status=status,
        fuel_limit=strategy.fuel,
        fuel_used=run.budget.used,
    )
