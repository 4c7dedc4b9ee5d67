"""Lifting blowup sequences from localizations and residue rings.

Blowing up the localization R_p (head valuation) or the residue ring
R/p (tail valuation) can be reproduced by blowups of R itself.  A lift
from the localization takes a simple ratio a/b of R_p-monomials,
multiplies both sides by a head-unit monomial s that clears their unit
denominators (so that a+s and b+s are genuine monomials of R), and
performs the two-step sequence: adjoin both, then adjoin their ratio.
A lift from the residue ring is a single step on R with the identical
exponents, because residue monomials keep their vectors.

Every lift re-checks its defining equality at runtime: the localization
of the lifted result must equal the direct blowup of the localization,
and a residue lift must reproduce the direct residue blowup while
leaving the localization untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .blowup import BlowupStep, blowup_along
from .errors import EngineError, MembershipError, NotAUnitError, RegularityError
from .ringmodel import (
    MonomialExpression,
    PrimeDescriptor,
    RingModel,
    center_of,
    clearing_multiplier,
    express,
    localize_at,
    minimal_generators,
    monomial_member,
    require_regular,
    residue_ring,
    ring_equal,
    vadd,
    zero_vec,
)
from .values import ExpVec


@dataclass(frozen=True)
class LiftRecord:
    """One lifted simple step: the source-side ratio and the produced R-steps."""

    level: int
    ratio: tuple[ExpVec, ExpVec]  # (a, b) with value(b) <= value(a) on the source side
    steps: tuple[BlowupStep, ...]
    multiplier: ExpVec

    @property
    def final(self) -> RingModel:
        return self.steps[-1].result


def _ratio_of(step: BlowupStep) -> tuple[ExpVec, ExpVec]:
    if not step.is_simple:
        raise EngineError("lift expects a simple blowup step")
    others = [u for u in step.ideal if u != step.pivot]
    a = others[0] if others else step.pivot
    return a, step.pivot


def lift_from_localization(R: RingModel, level: int, step: BlowupStep) -> LiftRecord:
    """Lift one simple blowup of the localization at the level-`level` center.

    Produces two steps on R: first adjoin a+s and b+s along the ideal
    (1, a*s, b*s), then adjoin their ratio.  If the full values happen to
    satisfy value(a*s) < value(b*s), both ratio directions agree on the
    localization (the head values tie), and the pivot rule inverts the
    ratio automatically.
    """
    a, b = _ratio_of(step)
    p = center_of(R, level)
    Rp = localize_at(R, p)
    expr_a = monomial_member(a, Rp)
    expr_b = monomial_member(b, Rp)
    if expr_a is None or expr_b is None:
        raise MembershipError("ratio is not a pair of localization monomials")
    s = clearing_multiplier(Rp, [expr_a.unit, expr_b.unit])
    a_s, b_s = vadd(a, s), vadd(b, s)
    first = blowup_along(R, [zero_vec(R.dim), a_s, b_s])
    second = blowup_along(first.result, [a_s, b_s])
    record = LiftRecord(level=level, ratio=(a, b), steps=(first, second), multiplier=s)
    direct = blowup_along(Rp, [a, b])
    lifted_loc = localize_at(second.result, center_of(second.result, level))
    if not ring_equal(lifted_loc, direct.result):
        raise EngineError("lift does not reproduce the localization blowup")
    return record


def lift_sequence_from_localization(
    R: RingModel, level: int, steps: Sequence[BlowupStep]
) -> list[LiftRecord]:
    """Lift a chain of blowups of R_p, factoring non-simple steps first.

    The final localization of R equals the chain's final ring; if that
    ring is regular the localization is regular as well.
    """
    from .blowup import decompose_to_simple

    records: list[LiftRecord] = []
    current = R
    for step in steps:
        simple_steps = [step] if step.is_simple else decompose_to_simple(step)
        for simple in simple_steps:
            rec = lift_from_localization(current, level, simple)
            records.append(rec)
            current = rec.final
    if records and steps:
        final_loc = localize_at(current, center_of(current, level))
        if not ring_equal(final_loc, steps[-1].result):
            raise EngineError("lifted chain does not end at the chain's localization")
    return records


def lift_from_residue(R: RingModel, level: int, step: BlowupStep) -> LiftRecord:
    """Lift one simple blowup of the residue ring at the level-`level` center.

    Residue monomials are head units of R with the identical exponent,
    so the lift is the single step adjoining the same ratio to R.  The
    residue of the result reproduces the direct residue blowup and the
    localization does not move.
    """
    a, b = _ratio_of(step)
    p = center_of(R, level)
    Rbar = residue_ring(R, p)
    if monomial_member(a, Rbar) is None or monomial_member(b, Rbar) is None:
        raise MembershipError("ratio is not a pair of residue-ring monomials")
    head = R.val.head(level)
    for v in (a, b):
        if any(x != 0 for x in head.value(v)):
            raise NotAUnitError(f"residue representative {v} is not a head unit")
    lifted = blowup_along(R, [a, b])
    record = LiftRecord(level=level, ratio=(a, b), steps=(lifted,), multiplier=zero_vec(R.dim))
    new_center = center_of(lifted.result, level)
    direct = blowup_along(Rbar, [a, b])
    if not ring_equal(residue_ring(lifted.result, new_center), direct.result):
        raise EngineError("residue lift does not reproduce the residue blowup")
    if not ring_equal(localize_at(lifted.result, new_center), localize_at(R, p)):
        raise EngineError("residue lift moved the localization")
    return record


def lift_sequence_from_residue(
    R: RingModel, level: int, steps: Sequence[BlowupStep]
) -> list[LiftRecord]:
    """Lift a chain of residue-ring blowups; preserves R_p at every stage."""
    from .blowup import decompose_to_simple

    records: list[LiftRecord] = []
    current = R
    for step in steps:
        simple_steps = [step] if step.is_simple else decompose_to_simple(step)
        for simple in simple_steps:
            rec = lift_from_residue(current, level, simple)
            records.append(rec)
            current = rec.final
    return records


def steps_of(records: Sequence[LiftRecord]) -> list[BlowupStep]:
    return [s for rec in records for s in rec.steps]


def parameters_in_p(R: RingModel, p: PrimeDescriptor) -> tuple[ExpVec, ...]:
    """Parameter representatives for R_p chosen among monomials of R inside p.

    The canonical representatives of a regular localization are already
    generators of R of positive head value, hence monomials of R lying
    in p; should a representative ever carry a unit denominator, it is
    renormalized by the matching clearing monomial.
    """
    Rp = localize_at(R, p)
    cert = require_regular(Rp)
    out = []
    for rep in cert.parameters:
        if monomial_member(rep, R) is None:
            expr = monomial_member(rep, Rp)
            if expr is None:
                raise RegularityError(f"parameter {rep} escaped the localization")
            rep = vadd(rep, clearing_multiplier(Rp, [expr.unit]))
            if monomial_member(rep, R) is None:
                raise RegularityError(f"parameter {rep} cannot be renormalized into R")
        out.append(rep)
    return tuple(sorted(out))
