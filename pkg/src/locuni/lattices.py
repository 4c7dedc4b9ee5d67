"""Exact integer lattice arithmetic: Hermite and Smith normal forms.

Everything here works on tuples of Python ints, so there is no overflow
and no floating point anywhere.  Lattices are presented by their row
Hermite normal form, which is unique, so two lattices are equal iff
their bases compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError

IntVec = tuple[int, ...]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, x, y) with x*a + y*b == g >= 0
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def _row_reduce(rows: list[list[int]], transform: list[list[int]] | None):
    """In-place row HNF of `rows`; `transform` (if given) tracks row ops."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivot_row = 0
    for col in range(n_cols):
        # find a row with nonzero entry in this column at or below pivot_row
        sel = None
        for r in range(pivot_row, n_rows):
            if rows[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        if transform is not None:
            transform[pivot_row], transform[sel] = transform[sel], transform[pivot_row]
        # clear the column below the pivot with gcd row operations
        for r in range(pivot_row + 1, n_rows):
            while rows[r][col] != 0:
                a, b = rows[pivot_row][col], rows[r][col]
                if abs(a) <= abs(b) and b % a == 0:
                    q = b // a
                    for c in range(n_cols):
                        rows[r][c] -= q * rows[pivot_row][c]
                    if transform is not None:
                        for c in range(len(transform[r])):
                            transform[r][c] -= q * transform[pivot_row][c]
                else:
                    g, x, y = _xgcd(a, b)
                    # new pivot row = x*old_pivot + y*row_r  (first entry g)
                    # new row_r = -(b//g)*old_pivot + (a//g)*row_r (first entry 0)
                    bg, ag = -(b // g), a // g
                    for c in range(n_cols):
                        pa, rb = rows[pivot_row][c], rows[r][c]
                        rows[pivot_row][c] = x * pa + y * rb
                        rows[r][c] = bg * pa + ag * rb
                    if transform is not None:
                        for c in range(len(transform[r])):
                            pa, rb = transform[pivot_row][c], transform[r][c]
                            transform[pivot_row][c] = x * pa + y * rb
                            transform[r][c] = bg * pa + ag * rb
        # make pivot positive
        if rows[pivot_row][col] < 0:
            for c in range(n_cols):
                rows[pivot_row][c] = -rows[pivot_row][c]
            if transform is not None:
                for c in range(len(transform[pivot_row])):
                    transform[pivot_row][c] = -transform[pivot_row][c]
        # reduce entries above the pivot into [0, pivot)
        p = rows[pivot_row][col]
        for r in range(pivot_row):
            q = rows[r][col] // p
            if q:
                for c in range(n_cols):
                    rows[r][c] -= q * rows[pivot_row][c]
                if transform is not None:
                    for c in range(len(transform[r])):
                        transform[r][c] -= q * transform[pivot_row][c]
        pivot_row += 1
    return pivot_row


@dataclass(frozen=True)
class LatticeBasis:
    """Row HNF basis of a sublattice of Z^dim.  Empty basis = zero lattice."""

    dim: int
    basis: tuple[IntVec, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence[int]) -> IntVec | None:
        """Integer coordinates of v in this basis, or None if v is outside."""
        if len(v) != self.dim:
            raise DimensionError(f"vector length {len(v)}, lattice dim {self.dim}")
        vec = list(v)
        coords = []
        for row in self.basis:
            col = next(i for i, x in enumerate(row) if x != 0)
            if vec[col] % row[col] != 0:
                return None
            q = vec[col] // row[col]
            coords.append(q)
            if q:
                for c in range(self.dim):
                    vec[c] -= q * row[c]
        if any(vec):
            return None
        return tuple(coords)

    def member(self, v: Sequence[int]) -> bool:
        return self.contains(v)


def hnf(vectors: Iterable[Sequence[int]], dim: int | None = None) -> LatticeBasis:
    """Row Hermite normal form of the lattice generated by `vectors`."""
    vecs = [list(v) for v in vectors]
    if dim is None:
        if not vecs:
            raise DimensionError("cannot infer ambient dimension of empty input")
        dim = len(vecs[0])
    if any(len(v) != dim for v in vecs):
        raise DimensionError("ragged input to hnf")
    if not vecs:
        return LatticeBasis(dim, ())
    rank = _row_reduce(vecs, None)
    return LatticeBasis(dim, tuple(tuple(r) for r in vecs[:rank]))


def hnf_with_transform(
    vectors: Sequence[Sequence[int]], dim: int
) -> tuple[LatticeBasis, tuple[IntVec, ...]]:
    """HNF plus the unimodular transform T with T @ vectors == padded HNF rows.

    T is square of size len(vectors); rows past the rank map onto zero.
    """
    vecs = [list(v) for v in vectors]
    if any(len(v) != dim for v in vecs):
        raise DimensionError("ragged input to hnf_with_transform")
    k = len(vecs)
    transform = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    if not vecs:
        return LatticeBasis(dim, ()), ()
    rank = _row_reduce(vecs, transform)
    basis = LatticeBasis(dim, tuple(tuple(r) for r in vecs[:rank]))
    return basis, tuple(tuple(r) for r in transform)


def solve_combination(
    vectors: Sequence[Sequence[int]], target: Sequence[int], dim: int
) -> IntVec | None:
    """Some integer row combination m with m @ vectors == target, or None."""
    basis, transform = hnf_with_transform(vectors, dim)
    coords = basis.coordinates(target)
    if coords is None:
        return None
    k = len(vectors)
    out = [0] * k
    for c, t_row in zip(coords, transform):
        if c:
            for i in range(k):
                out[i] += c * t_row[i]
    return tuple(out)


def snf(matrix: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero elementary divisors of an integer matrix, d1 | d2 | ... | dk."""
    rows = [list(r) for r in matrix]
    if not rows:
        return ()
    n_cols = len(rows[0])
    if any(len(r) != n_cols for r in rows):
        raise DimensionError("ragged input to snf")
    a = rows
    m, n = len(a), n_cols

    def clear_at(t: int) -> None:
        # alternate row and column eliminations until a[t][t] divides its
        # row and column and everything else in them is zero
        while True:
            # bring a nonzero entry to (t, t)
            pos = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] != 0:
                        pos = (i, j)
                        break
                if pos:
                    break
            if pos is None:
                return
            i, j = pos
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
            changed = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    if a[i][t] % a[t][t] == 0:
                        # plain reduction keeps the pivot row intact
                        q = a[i][t] // a[t][t]
                        for c in range(t, n):
                            a[i][c] -= q * a[t][c]
                    else:
                        # gcd step: strictly shrinks the pivot, so this loop
                        # cannot run forever
                        g, x, y = _xgcd(a[t][t], a[i][t])
                        p, q = a[t][t] // g, a[i][t] // g
                        for c in range(t, n):
                            u, v = a[t][c], a[i][c]
                            a[t][c] = x * u + y * v
                            a[i][c] = -q * u + p * v
                        changed = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    if a[t][j] % a[t][t] == 0:
                        q = a[t][j] // a[t][t]
                        for r in range(t, m):
                            a[r][j] -= q * a[r][t]
                    else:
                        g, x, y = _xgcd(a[t][t], a[t][j])
                        p, q = a[t][t] // g, a[t][j] // g
                        for r in range(t, m):
                            u, v = a[r][t], a[r][j]
                            a[r][t] = x * u + y * v
                            a[r][j] = -q * u + p * v
                        changed = True
            if not changed:
                return

    for t in range(min(m, n)):
        clear_at(t)
    divisors = [abs(a[t][t]) for t in range(min(m, n)) if a[t][t] != 0]
    # enforce the divisibility chain d1 | d2 | ... via pairwise gcd/lcm
    from math import gcd

    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            g = gcd(divisors[i], divisors[j])
            if g != divisors[i]:
                lcm = divisors[i] // g * divisors[j]
                divisors[i], divisors[j] = g, lcm
    return tuple(sorted(divisors))
