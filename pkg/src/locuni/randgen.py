"""Seeded random model generators for the property suites.

Everything takes an explicit ``random.Random`` so that the selftest
command and the pytest suites are reproducible run to run.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .ringmodel import RingModel, is_regular, localize_at, monomial_member, center_of
from .values import ExpVec, MonomialValuation, is_lex_nonnegative, is_lex_positive


def random_valuation(rng: random.Random, d: int, n: int) -> MonomialValuation:
    rows = []
    for _ in range(n):
        row = [Fraction(rng.randrange(0, 4), rng.choice((1, 1, 2))) for _ in range(d)]
        rows.append(tuple(row))
    if all(all(x == 0 for x in row) for row in rows):
        rows[rng.randrange(n)] = tuple(
            Fraction(rng.randrange(1, 4)) for _ in range(d)
        )
    return MonomialValuation(tuple(rows))


def random_model(
    rng: random.Random,
    max_dim: int = 4,
    max_levels: int = 3,
    max_gens: int = 6,
    max_entry: int = 5,
) -> RingModel:
    """Random centered model with at least one positive-value generator."""
    while True:
        d = rng.randrange(2, max_dim + 1)
        n = rng.randrange(1, max_levels + 1)
        val = random_valuation(rng, d, n)
        gens: set[ExpVec] = set()
        for _ in range(rng.randrange(1, max_gens + 1)):
            g = tuple(rng.randrange(-2, max_entry + 1) for _ in range(d))
            if any(g) and is_lex_nonnegative(val.value(g)):
                gens.add(g)
        if not gens:
            continue
        R = RingModel(dim=d, gens=tuple(sorted(gens)), val=val)
        if R.positive_gens:
            return R


def random_composite_model(rng: random.Random, **kw) -> tuple[RingModel, int]:
    """Model with >= 2 levels and a proper center: some head unit, some not."""
    while True:
        R = random_model(rng, **kw)
        n = R.val.levels
        if n < 2:
            continue
        for j in range(1, n):
            head = R.val.head(j)
            units = [g for g in R.gens if not is_lex_positive(head.value(g))]
            positives = [g for g in R.gens if is_lex_positive(head.value(g))]
            if units and positives:
                return R, j
        continue


def random_monomial(rng: random.Random, R: RingModel, max_coeff: int = 2) -> ExpVec:
    """Random monomial of R: small monoid combination plus a unit shift."""
    acc = [0] * R.dim
    for g in R.positive_gens:
        c = rng.randrange(0, max_coeff + 1)
        for i, x in enumerate(g):
            acc[i] += c * x
    for u in R.unit_gens:
        c = rng.randrange(-1, 2)
        for i, x in enumerate(u):
            acc[i] += c * x
    return tuple(acc)


def random_localization_ratio(
    rng: random.Random, R: RingModel, level: int
) -> tuple[ExpVec, ExpVec]:
    """Pair (a, b) of localization monomials with head value(b) <= value(a)."""
    Rp = localize_at(R, center_of(R, level))
    a = random_monomial(rng, Rp)
    b = random_monomial(rng, Rp)
    if Rp.val.value(a) < Rp.val.value(b):
        a, b = b, a
    return a, b


def random_residue_ratio(
    rng: random.Random, R: RingModel, level: int
) -> tuple[ExpVec, ExpVec] | None:
    """Pair of residue-ring monomials with tail value(b) <= value(a)."""
    from .ringmodel import residue_ring

    Rbar = residue_ring(R, center_of(R, level))
    if not Rbar.gens:
        return None
    a = random_monomial(rng, Rbar, max_coeff=2)
    b = random_monomial(rng, Rbar, max_coeff=2)
    if Rbar.val.value(a) < Rbar.val.value(b):
        a, b = b, a
    return a, b


def random_singular_plane_model(rng: random.Random, max_entry: int = 6) -> RingModel:
    """Singular two-dimensional rank-one model with first-quadrant exponents."""
    while True:
        w = (Fraction(rng.randrange(1, 5)), Fraction(rng.randrange(1, 5), rng.choice((1, 2))))
        val = MonomialValuation((w,))
        gens: set[ExpVec] = set()
        for _ in range(rng.randrange(2, 5)):
            g = (rng.randrange(0, max_entry + 1), rng.randrange(0, max_entry + 1))
            if any(g):
                gens.add(g)
        if not gens:
            continue
        R = RingModel(dim=2, gens=tuple(sorted(gens)), val=val)
        if R.positive_gens and is_regular(R) is None:
            return R


def random_member_query(rng: random.Random, R: RingModel) -> ExpVec:
    """Query vector biased toward plausible members but often outside."""
    if rng.random() < 0.5:
        base = random_monomial(rng, R)
        noise = tuple(rng.randrange(-1, 2) for _ in range(R.dim))
        return tuple(b + x for b, x in zip(base, noise))
    return tuple(rng.randrange(-4, 7) for _ in range(R.dim))
