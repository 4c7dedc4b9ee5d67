"""Localized monomial algebras with exact lattice invariants.

A ring model is the subring of a Laurent field generated by the
monomials ``x^g`` for ``g`` in a finite generator set, localized at the
prime of all monomials of lex-positive value under an attached monomial
valuation.  Generators of value zero (and generators explicitly marked
inverted) are units of the local ring; the group they generate is the
unit lattice L.  The group N generated by *all* exponents models the
fraction field and is fixed along blowups.

The monomials of the model are exactly ``monoid(positive generators) + L``,
and every structural question below (membership, minimal generators,
dimension, regularity) reduces to exact integer lattice computations on
N, L and the positive generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    CenteringError,
    DimensionError,
    MembershipError,
    RegularityError,
)
from .lattices import LatticeBasis, hnf, snf, solve_combination
from .values import (
    ExpVec,
    MonomialValuation,
    first_nonzero_level,
    is_lex_nonnegative,
    is_lex_positive,
)


def vadd(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(k: int, a: ExpVec) -> ExpVec:
    return tuple(k * x for x in a)


def zero_vec(d: int) -> ExpVec:
    return (0,) * d


@dataclass(frozen=True)
class MonomialExpression:
    """A witness that ``target = sum(c_g * g) + unit`` with c_g >= 0, unit in L."""

    target: ExpVec
    terms: tuple[tuple[ExpVec, int], ...]
    unit: ExpVec

    def reconstruct(self) -> ExpVec:
        acc = list(self.unit)
        for g, c in self.terms:
            for i, x in enumerate(g):
                acc[i] += c * x
        return tuple(acc)

    def is_exact(self) -> bool:
        return self.reconstruct() == self.target

    @property
    def degree(self) -> int:
        return sum(c for _, c in self.terms)

    def dense(self, order: Sequence[ExpVec]) -> tuple[int, ...]:
        """Coefficients aligned to a fixed generator order."""
        lookup = dict(self.terms)
        return tuple(lookup.get(g, 0) for g in order)


@dataclass(frozen=True)
class PrimeDescriptor:
    """Center of the head valuation up to a level: its positive generators."""

    level: int
    members: tuple[ExpVec, ...]


@dataclass(frozen=True)
class RegularityCertificate:
    """Chosen parameter exponents; one representative per needed unit class."""

    parameters: tuple[ExpVec, ...]


@dataclass(frozen=True)
class RingModel:
    dim: int
    gens: tuple[ExpVec, ...]
    val: MonomialValuation
    inverted: frozenset[ExpVec] = frozenset()

    def __post_init__(self):
        gens = tuple(sorted({tuple(int(x) for x in g) for g in self.gens}))
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "inverted", frozenset(tuple(g) for g in self.inverted))
        if self.val.dim != self.dim:
            raise DimensionError(
                f"valuation on {self.val.dim} variables attached to dim {self.dim}"
            )
        for g in gens:
            if len(g) != self.dim:
                raise DimensionError(f"generator {g} has length != {self.dim}")
            if not is_lex_nonnegative(self.val.value(g)):
                raise CenteringError(f"generator {g} has lex-negative value")
        for g in self.inverted:
            if g not in gens:
                raise CenteringError(f"inverted marker {g} is not a generator")
            if any(v != 0 for v in self.val.value(g)):
                raise CenteringError(f"inverted generator {g} has nonzero value")

    @cached_property
    def positive_gens(self) -> tuple[ExpVec, ...]:
        return tuple(g for g in self.gens if is_lex_positive(self.val.value(g)))

    @cached_property
    def unit_gens(self) -> tuple[ExpVec, ...]:
        return tuple(g for g in self.gens if not is_lex_positive(self.val.value(g)))

    @cached_property
    def unit_lattice(self) -> LatticeBasis:
        return hnf(self.unit_gens, self.dim)

    @cached_property
    def full_lattice(self) -> LatticeBasis:
        return hnf(self.gens, self.dim)


def express(
    target: Sequence[int],
    gens: Sequence[ExpVec],
    unit_lattice: LatticeBasis,
    val: MonomialValuation,
) -> MonomialExpression | None:
    """First (in deterministic order) writing of ``target`` over ``gens`` and units.

    Searches for nonnegative integer coefficients c with
    ``target - sum(c_g * g)`` in the unit lattice.  The search is
    stratified by the first level at which each generator's value is
    nonzero: at level k only the stratum-k generators contribute, their
    level-k values are positive, and the exact level-k budget of the
    running remainder bounds every coefficient.  Generators within a
    stratum are tried in lex order with ascending coefficients, so the
    returned expression is reproducible.
    """
    target = tuple(int(x) for x in target)
    d = len(target)
    n = val.levels
    strata: dict[int, list[tuple[ExpVec, Fraction]]] = {}
    for g in sorted(set(gens)):
        lev = first_nonzero_level(val.value(g))
        if lev is None:
            raise CenteringError(f"generator {g} of value zero passed as positive")
        w = val.row_value(lev, g)
        if w <= 0:
            raise CenteringError(f"generator {g} has lex-negative value")
        strata.setdefault(lev, []).append((g, w))

    def at_level(level: int, remainder: ExpVec):
        # returns (coeff dict, unit vector) on success, None otherwise
        if level > n:
            if unit_lattice.contains(remainder):
                return {}, remainder
            return None
        group = strata.get(level, [])
        budget = val.row_value(level, remainder)
        if not group:
            if budget != 0:
                return None
            return at_level(level + 1, remainder)
        if budget < 0:
            return None
        coeffs = [0] * len(group)

        def assign(idx: int, left: Fraction, acc: ExpVec):
            if idx == len(group):
                if left != 0:
                    return None
                deeper = at_level(level + 1, vsub(remainder, acc))
                if deeper is None:
                    return None
                merged, unit = deeper
                merged = dict(merged)
                for (g, _), c in zip(group, coeffs):
                    if c:
                        merged[g] = c
                return merged, unit
            g, w = group[idx]
            for c in range(int(left / w) + 1):
                coeffs[idx] = c
                out = assign(idx + 1, left - c * w, vadd(acc, vscale(c, g)) if c else acc)
                if out is not None:
                    return out
            coeffs[idx] = 0
            return None

        return assign(0, budget, zero_vec(d))

    found = at_level(1, target)
    if found is None:
        return None
    coeff_map, unit = found
    terms = tuple(sorted((g, c) for g, c in coeff_map.items() if c))
    expr = MonomialExpression(target=target, terms=terms, unit=unit)
    assert expr.is_exact()
    return expr


def monomial_member(a: Sequence[int], R: RingModel) -> MonomialExpression | None:
    """Decide x^a in R; returns a reconstructing expression or None."""
    return express(a, R.positive_gens, R.unit_lattice, R.val)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def monomial_member_bruteforce(
    a: Sequence[int], R: RingModel, bound: int
) -> MonomialExpression | None:
    """Exhaustive oracle: all coefficient tuples with total degree <= bound.

    Unit parts are solved by lattice membership exactly as in the main
    routine; only the search over positive-generator coefficients is
    replaced by plain enumeration.  Test-only companion of
    ``monomial_member``.
    """
    target = tuple(int(x) for x in a)
    gens = sorted(R.positive_gens)
    for total in range(bound + 1):
        for combo in _compositions(total, len(gens)):
            rem = list(target)
            for g, c in zip(gens, combo):
                if c:
                    for i, x in enumerate(g):
                        rem[i] -= c * x
            rem_t = tuple(rem)
            if R.unit_lattice.contains(rem_t):
                terms = tuple((g, c) for g, c in zip(gens, combo) if c)
                return MonomialExpression(target=target, terms=terms, unit=rem_t)
    return None


def _unit_classes(R: RingModel) -> list[list[ExpVec]]:
    """Positive generators grouped by congruence modulo the unit lattice."""
    classes: list[list[ExpVec]] = []
    for g in R.positive_gens:
        for cls in classes:
            if R.unit_lattice.contains(vsub(g, cls[0])):
                cls.append(g)
                break
        else:
            classes.append([g])
    return classes


def minimal_generators(R: RingModel) -> tuple[ExpVec, ...]:
    """One representative per unit class of generators that m actually needs.

    A whole class is redundant when its members lie in the monoid spanned
    by the *other* positive generators plus units; the lex-smallest
    member represents each needed class.  Classes matter: two generators
    differing by a unit would each witness the other's redundancy.
    """
    classes = _unit_classes(R)
    out = []
    for cls in classes:
        others = [g for c in classes if c is not cls for g in c]
        rep = min(cls)
        if express(rep, others, R.unit_lattice, R.val) is None:
            out.append(rep)
    return tuple(sorted(out))


def dimension(R: RingModel) -> int:
    """Krull dimension: rank of the full exponent group over the unit group."""
    return R.full_lattice.rank - R.unit_lattice.rank


def is_regular(R: RingModel) -> RegularityCertificate | None:
    """Certificate that the minimal generator classes freely span N/L.

    Regular iff the count of needed classes equals rank(N) - rank(L) and
    the representatives together with the unit lattice generate all of N
    with trivial elementary divisors.
    """
    mins = minimal_generators(R)
    if len(mins) != dimension(R):
        return None
    n_basis = R.full_lattice
    stacked = []
    for v in mins + R.unit_lattice.basis:
        coords = n_basis.coordinates(v)
        assert coords is not None
        stacked.append(list(coords))
    if not stacked:
        return RegularityCertificate(parameters=())
    divisors = snf(stacked)
    if len(divisors) != n_basis.rank or any(x != 1 for x in divisors):
        return None
    return RegularityCertificate(parameters=mins)


def center_of(R: RingModel, level: int) -> PrimeDescriptor:
    """Generators of lex-positive value within the first `level` coordinates."""
    if not 0 < level <= R.val.levels:
        raise DimensionError(f"center level {level} out of range 1..{R.val.levels}")
    members = tuple(g for g in R.gens if is_lex_positive(R.val.value(g)[:level]))
    return PrimeDescriptor(level=level, members=members)


def localize_at(R: RingModel, p: PrimeDescriptor) -> RingModel:
    """R_p: invert every head-unit generator and attach only the head valuation."""
    if p != center_of(R, p.level):
        raise CenteringError("descriptor is not the center at its level")
    head = R.val.head(p.level)
    keep = set(p.members)
    inverted = frozenset(g for g in R.gens if g not in keep)
    return RingModel(dim=R.dim, gens=R.gens, val=head, inverted=inverted)


def residue_ring(R: RingModel, p: PrimeDescriptor) -> RingModel:
    """R/p: keep the head-unit generators, attach the tail valuation.

    Exponent vectors are kept verbatim, so a monomial of the residue ring
    lifts to the identical monomial of R.
    """
    if p != center_of(R, p.level):
        raise CenteringError("descriptor is not the center at its level")
    drop = set(p.members)
    survivors = tuple(g for g in R.gens if g not in drop)
    tail = R.val.tail(p.level)
    inverted = frozenset(g for g in R.inverted if g not in drop)
    return RingModel(dim=R.dim, gens=survivors, val=tail, inverted=inverted)


def ring_equal(R: RingModel, S: RingModel) -> bool:
    """Mutual monomial containment (generators and inverses of units)."""
    if R.dim != S.dim:
        raise DimensionError("ring models of different ambient dimension")
    if R.val != S.val:
        raise DimensionError("ring models with different attached valuations")

    def contained(a: RingModel, b: RingModel) -> bool:
        for g in a.positive_gens:
            if monomial_member(g, b) is None:
                return False
        for u in a.unit_gens:
            if not b.unit_lattice.contains(u):
                return False
        return True

    return contained(R, S) and contained(S, R)


def unit_combination(R: RingModel, unit_vec: ExpVec) -> tuple[int, ...]:
    """Integer coefficients writing a unit-lattice vector over the unit generators."""
    combo = solve_combination(R.unit_gens, unit_vec, R.dim)
    if combo is None:
        raise MembershipError(f"{unit_vec} is not in the unit lattice")
    return combo


def clearing_multiplier(R: RingModel, unit_vecs: Iterable[ExpVec]) -> ExpVec:
    """Smallest monoid monomial s over unit generators with v + s in the
    unit-generator monoid for every v in `unit_vecs`.

    Each v must lie in the unit lattice; s collects, per unit generator,
    the deepest negative coefficient appearing in any of the solved
    integer combinations.
    """
    need = [0] * len(R.unit_gens)
    for v in unit_vecs:
        combo = unit_combination(R, v)
        for i, c in enumerate(combo):
            if -c > need[i]:
                need[i] = -c
    s = zero_vec(R.dim)
    for c, g in zip(need, R.unit_gens):
        if c:
            s = vadd(s, vscale(c, g))
    return s


def assert_member(a: Sequence[int], R: RingModel, what: str = "monomial") -> MonomialExpression:
    expr = monomial_member(a, R)
    if expr is None:
        raise MembershipError(f"{what} {tuple(a)} is not in the ring")
    return expr


def require_regular(R: RingModel) -> RegularityCertificate:
    cert = is_regular(R)
    if cert is None:
        raise RegularityError("ring model is not regular")
    return cert
