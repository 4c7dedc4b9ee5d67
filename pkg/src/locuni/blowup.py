"""Local blowing ups of ring models along monomial ideals.

A blowup along an ideal adjoins the differences ``u - pivot`` for every
ideal generator ``u``, where the pivot is a generator of minimal lex
value (ties broken by lex-smallest exponent so traces are reproducible).
The resulting model keeps the ambient dimension, the attached valuation
and the exponent group N; only the generator monoid grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import MembershipError, PivotError
from .ringmodel import RingModel, assert_member, vsub
from .values import ExpVec, lex_cmp


@dataclass(frozen=True)
class BlowupStep:
    source: RingModel
    ideal: tuple[ExpVec, ...]
    pivot: ExpVec
    adjoined: tuple[ExpVec, ...]
    result: RingModel

    @property
    def is_simple(self) -> bool:
        return len(self.adjoined) <= 1


def _pick_pivot(R: RingModel, ideal: Sequence[ExpVec]) -> ExpVec:
    best = ideal[0]
    best_val = R.val.value(best)
    for u in ideal[1:]:
        v = R.val.value(u)
        c = lex_cmp(v, best_val)
        if c < 0 or (c == 0 and u < best):
            best, best_val = u, v
    return best


def _make_step(R: RingModel, ideal: tuple[ExpVec, ...], pivot: ExpVec) -> BlowupStep:
    adjoined = tuple(sorted({vsub(u, pivot) for u in ideal if u != pivot}))
    result = RingModel(
        dim=R.dim,
        gens=tuple(R.gens) + adjoined,
        val=R.val,
        inverted=R.inverted,
    )
    return BlowupStep(source=R, ideal=ideal, pivot=pivot, adjoined=adjoined, result=result)


def blowup_along(R: RingModel, ideal: Sequence[Sequence[int]]) -> BlowupStep:
    """Blow up R along the ideal spanned by the given monomials.

    Every ideal generator must be a monomial of R (checked eagerly).
    The pivot is chosen with minimal lex value, ties broken by
    lex-smallest exponent vector; the result does not depend on the
    choice among tied generators (a tested property, not a precondition).
    """
    gens = tuple(sorted({tuple(int(x) for x in u) for u in ideal}))
    if not gens:
        raise MembershipError("empty ideal")
    for u in gens:
        assert_member(u, R, "ideal generator")
    pivot = _pick_pivot(R, gens)
    return _make_step(R, gens, pivot)


def simple_blowup(R: RingModel, a: Sequence[int], b: Sequence[int]) -> BlowupStep:
    """Adjoin the single ratio a/b; requires value(b) <= value(a)."""
    a = tuple(int(x) for x in a)
    b = tuple(int(x) for x in b)
    assert_member(a, R, "numerator")
    assert_member(b, R, "denominator")
    if lex_cmp(R.val.value(b), R.val.value(a)) > 0:
        raise PivotError(f"pivot not minimal: value of {b} exceeds value of {a}")
    ideal = tuple(sorted({a, b}))
    return _make_step(R, ideal, b)


def decompose_to_simple(step: BlowupStep) -> list[BlowupStep]:
    """Factor a blowup into one simple blowup per non-pivot ideal generator.

    The composite result has exactly the generator set of the one-shot
    step, so the chain ends in an equal ring.
    """
    out: list[BlowupStep] = []
    current = step.source
    for u in step.ideal:
        if u == step.pivot:
            continue
        simple = simple_blowup(current, u, step.pivot)
        out.append(simple)
        current = simple.result
    return out
