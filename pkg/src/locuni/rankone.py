"""Rank-one resolution oracle for monomial ring models.

The driver reduces everything to valuations whose nonzero values live at
a single level; this module makes such models regular by iterated
blowups.  Two strategies are provided: ``pairmin`` blows up along the
two minimal-value minimal generators (continued-fraction style descent)
and ``fullideal`` blows up along all minimal generators at once.  Both
are deterministic; neither is guaranteed to terminate in general
dimension, so every loop is fuel-limited and exhaustion is an ordinary
outcome, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .blowup import BlowupStep, blowup_along
from .errors import EngineError, MembershipError
from .ringmodel import (
    MonomialExpression,
    RegularityCertificate,
    RingModel,
    assert_member,
    express,
    is_regular,
    minimal_generators,
    require_regular,
    vsub,
)
from .values import ExpVec, split_level

DONE = "done"
FUEL_EXHAUSTED = "fuel-exhausted"

PAIR_MIN = "pairmin"
FULL_IDEAL = "fullideal"
DEFAULT_FUEL = 256


@dataclass(frozen=True)
class Strategy:
    kind: str = PAIR_MIN
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        if self.kind not in (PAIR_MIN, FULL_IDEAL):
            raise EngineError(f"unknown strategy {self.kind!r}")
        if self.fuel <= 0:
            raise EngineError("fuel must be positive")


class Budget:
    """Shared mutable blowup allowance; exhaustion is reported, never raised."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def try_spend(self, n: int = 1) -> bool:
        if self.used + n > self.limit:
            return False
        self.used += n
        return True

    @property
    def remaining(self) -> int:
        return self.limit - self.used


@dataclass(frozen=True)
class RankOneOutcome:
    steps: tuple[BlowupStep, ...]
    final: RingModel
    certificate: RegularityCertificate | None
    status: str


class DivisibilityResult(NamedTuple):
    outcome: RankOneOutcome
    expressions: tuple[MonomialExpression, ...]
    witnesses: tuple[tuple[int, ...], ...]


def _check_effective_rank_one(R: RingModel) -> None:
    if not R.positive_gens:
        return
    if split_level(R.val, R.gens) != R.val.levels:
        raise EngineError("attached valuation is not rank one on this model")


def _select_ideal(R: RingModel, kind: str) -> tuple[ExpVec, ...]:
    mins = minimal_generators(R)
    if kind == FULL_IDEAL:
        return mins
    ranked = sorted(mins, key=lambda g: (R.val.value(g), g))
    return tuple(ranked[:2])


def uniformize_rank_one(
    R: RingModel, strategy: Strategy = Strategy(), budget: Budget | None = None
) -> RankOneOutcome:
    """Blow up until regular or out of fuel.

    Requires the attached valuation to be rank one on the model (all
    nonzero generator values at the last attached level).
    """
    _check_effective_rank_one(R)
    if budget is None:
        budget = Budget(strategy.fuel)
    steps: list[BlowupStep] = []
    current = R
    while True:
        cert = is_regular(current)
        if cert is not None:
            return RankOneOutcome(tuple(steps), current, cert, DONE)
        if not budget.try_spend():
            return RankOneOutcome(tuple(steps), current, None, FUEL_EXHAUSTED)
        step = blowup_along(current, _select_ideal(current, strategy.kind))
        steps.append(step)
        current = step.result


def monomialize_targets(
    outcome: RankOneOutcome, targets: Sequence[Sequence[int]]
) -> tuple[MonomialExpression, ...]:
    """Write each target as parameter monomial times unit in the final model.

    Every monomial of a regular model factors this way, so the only
    failure mode is a target outside the ring.
    """
    if outcome.status != DONE or outcome.certificate is None:
        raise EngineError("cannot monomialize without a regular final model")
    final = outcome.final
    params = outcome.certificate.parameters
    out = []
    for t in targets:
        t = tuple(int(x) for x in t)
        expr = express(t, params, final.unit_lattice, final.val)
        if expr is None:
            raise MembershipError(f"target {t} is not in the ring")
        out.append(expr)
    return tuple(out)


def _chain_gap(exponents: list[tuple[int, ...]]) -> int | None:
    """Index of the first consecutive pair without componentwise order."""
    for i in range(len(exponents) - 1):
        lo, hi = exponents[i], exponents[i + 1]
        if any(a > b for a, b in zip(lo, hi)):
            return i
    return None


def enforce_divisibility(
    outcome: RankOneOutcome,
    targets: Sequence[Sequence[int]],
    budget: Budget | None = None,
) -> DivisibilityResult:
    """Blow up pairs of parameters until target exponents form a chain.

    Targets must arrive sorted by value.  While two consecutive targets
    have incomparable parameter exponents, the pair of parameters
    carrying opposite excess is blown up (pivot the one of smaller
    value); star subdivision of a regular model stays regular, which is
    re-checked every round.
    """
    if outcome.status != DONE:
        raise EngineError("cannot enforce divisibility without a regular model")
    if budget is None:
        budget = Budget(DEFAULT_FUEL)
    targets = [tuple(int(x) for x in t) for t in targets]
    for lo, hi in zip(targets, targets[1:]):
        v_lo, v_hi = outcome.final.val.value(lo), outcome.final.val.value(hi)
        if v_lo > v_hi:
            raise EngineError("targets not sorted by value")

    steps = list(outcome.steps)
    current = outcome.final
    cert = outcome.certificate
    while True:
        params = cert.parameters
        exprs = monomialize_targets(
            RankOneOutcome(tuple(steps), current, cert, DONE), targets
        )
        dense = [e.dense(params) for e in exprs]
        gap = _chain_gap(dense)
        if gap is None:
            witnesses = tuple(
                vsub(hi, lo) for lo, hi in zip(dense, dense[1:])
            )
            out = RankOneOutcome(tuple(steps), current, cert, DONE)
            return DivisibilityResult(out, exprs, witnesses)
        delta = vsub(dense[gap + 1], dense[gap])
        over = next(params[k] for k, x in enumerate(delta) if x < 0)
        under = next(params[k] for k, x in enumerate(delta) if x > 0)
        if not budget.try_spend():
            out = RankOneOutcome(tuple(steps), current, None, FUEL_EXHAUSTED)
            return DivisibilityResult(out, (), ())
        step = blowup_along(current, [over, under])
        steps.append(step)
        current = step.result
        cert = require_regular(current)
