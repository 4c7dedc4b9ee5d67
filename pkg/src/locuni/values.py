"""Ordered value groups and monomial valuations.

Values live in Q^n ordered lexicographically.  A value vector is a plain
tuple of ``fractions.Fraction`` entries, so Python's native tuple
comparison *is* the lex order; the helpers below add the explicit
three-way comparison, head/tail projections and the level bookkeeping
that the rest of the engine builds on.

A monomial valuation is an n x d matrix W of exact rationals acting on
integer exponent vectors by ``a -> W @ a``.  Row j is the weight of
level j; the chain of convex subgroups is the chain of coordinate
suffixes, so splitting a valuation at level j is just a row split of W.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, NotAUnitError, TrivialValuationError

ExpVec = tuple[int, ...]
ValueVec = tuple[Fraction, ...]


def lex_cmp(v: Sequence[Fraction], w: Sequence[Fraction]) -> int:
    """Three-way lex comparison: -1, 0 or +1.

    The first differing coordinate decides.  Vectors of unequal length
    do not belong to the same value group and are rejected.
    """
    if len(v) != len(w):
        raise DimensionError(f"value vectors of lengths {len(v)} and {len(w)}")
    for a, b in zip(v, w):
        if a != b:
            return -1 if a < b else 1
    return 0


def is_lex_positive(v: Sequence[Fraction]) -> bool:
    for a in v:
        if a != 0:
            return a > 0
    return False


def is_lex_nonnegative(v: Sequence[Fraction]) -> bool:
    for a in v:
        if a != 0:
            return a > 0
    return True


def first_nonzero_level(v: Sequence[Fraction]) -> int | None:
    """1-based index of the first nonzero coordinate, or None if v = 0."""
    for i, a in enumerate(v):
        if a != 0:
            return i + 1
    return None


def project(v: ValueVec, j: int) -> ValueVec:
    """Head of v in Q^j: the image under the quotient by the level-j suffix group."""
    if not 0 <= j <= len(v):
        raise DimensionError(f"level {j} out of range for length {len(v)}")
    return v[:j]


def residual(v: ValueVec, j: int) -> ValueVec:
    """Tail of v past level j; defined only on vectors whose head vanishes."""
    if not 0 <= j <= len(v):
        raise DimensionError(f"level {j} out of range for length {len(v)}")
    if any(a != 0 for a in v[:j]):
        raise NotAUnitError(f"value {v} has nonzero head at level <= {j}")
    return v[j:]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise DimensionError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class MonomialValuation:
    """Weight matrix of a monomial valuation on d variables with n lex levels."""

    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.weights or not self.weights[0]:
            raise DimensionError("weight matrix must be nonempty")
        rows = tuple(tuple(_as_fraction(x) for x in row) for row in self.weights)
        d = len(rows[0])
        if any(len(row) != d for row in rows):
            raise DimensionError("ragged weight matrix")
        object.__setattr__(self, "weights", rows)

    @property
    def levels(self) -> int:
        return len(self.weights)

    @property
    def dim(self) -> int:
        return len(self.weights[0])

    def value(self, a: Sequence[int]) -> ValueVec:
        """W @ a, exactly."""
        if len(a) != self.dim:
            raise DimensionError(f"exponent length {len(a)}, expected {self.dim}")
        return tuple(sum(w * e for w, e in zip(row, a)) for row in self.weights)

    def row_value(self, level: int, a: Sequence[int]) -> Fraction:
        """Single coordinate W_level @ a (level is 1-based)."""
        if len(a) != self.dim:
            raise DimensionError(f"exponent length {len(a)}, expected {self.dim}")
        row = self.weights[level - 1]
        return sum((w * e for w, e in zip(row, a)), Fraction(0))

    def head(self, j: int) -> "MonomialValuation":
        if not 1 <= j <= self.levels:
            raise DimensionError(f"head level {j} out of range 1..{self.levels}")
        return MonomialValuation(self.weights[:j])

    def tail(self, j: int) -> "MonomialValuation":
        if not 0 <= j < self.levels:
            raise DimensionError(f"tail level {j} out of range 0..{self.levels - 1}")
        return MonomialValuation(self.weights[j:])


def evaluate(val: MonomialValuation, a: Sequence[int]) -> ValueVec:
    return val.value(a)


def decompose(val: MonomialValuation, j: int) -> tuple[MonomialValuation, MonomialValuation]:
    """Split into the head valuation (rows 1..j) and the tail (rows j+1..n).

    For every exponent a, ``value(a) == head.value(a) + tail.value(a)``
    as a concatenation; the tail is only ever applied to head-unit
    monomials of a ring model.
    """
    if not 1 <= j < val.levels:
        raise DimensionError(f"no proper split at level {j} of {val.levels}")
    return val.head(j), val.tail(j)


def split_level(val: MonomialValuation, gens: Iterable[Sequence[int]]) -> int:
    """Smallest level j >= 1 at which some generator has nonzero value.

    The head valuation up to this level is rank one on any ring generated
    by ``gens`` (all shallower rows vanish on the whole exponent lattice),
    which is what makes the recursion bottom out in the rank-one oracle.
    """
    best: int | None = None
    for g in gens:
        lev = first_nonzero_level(val.value(g))
        if lev is not None and (best is None or lev < best):
            best = lev
    if best is None:
        raise TrivialValuationError("valuation trivial on R")
    return best
