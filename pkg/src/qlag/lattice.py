"""Exact integer/rational lattice arithmetic.

The exponent rows e_1..e_n of a quadric system generate a full-rank lattice
L in R^m (m = number of equations).  This module extracts a canonical basis
of L (Hermite normal form), the dual lattice basis, and the 2^m coset
representatives of G = L*/2L* whose parities with the generator rows drive
everything group-theoretic downstream (sign action, freeness, orientation
characters).

All arithmetic here is exact: integers for L, fractions.Fraction for L*.
Parity statements must never pass through floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DimensionMismatch, RankDeficient, SingularBasis

IntVector = tuple[int, ...]
FracVector = tuple[Fraction, ...]


def _as_int_rows(rows: Sequence[Sequence[int]]) -> tuple[IntVector, ...]:
    out = []
    for r in rows:
        row = tuple(int(x) for x in r)
        if any(row[i] != r[i] for i in range(len(row))):
            raise ValueError("exponent entries must be integers")
        out.append(row)
    return tuple(out)


@dataclass(frozen=True)
class ExponentMatrix:
    """Integer exponent rows e_1..e_n, one per ambient coordinate.

    rows[i] has length ``codim`` (the number of quadric equations); the rows
    must span a rank-``codim`` lattice.  n >= 1 and 0 <= k <= n-1 where
    k = n - codim is the dimension of the solution variety.  The degenerate
    n = 0 case (no coordinates, no equations) is allowed as the neutral
    element of product assembly.
    """

    rows: tuple[IntVector, ...]

    def __init__(self, rows: Sequence[Sequence[int]]):
        object.__setattr__(self, "rows", _as_int_rows(rows))
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise DimensionMismatch("exponent rows have unequal lengths")
        m = self.codim
        if self.n:
            if not 1 <= m <= self.n:
                raise ValueError(
                    f"need between 1 and n equations, got {m} for n={self.n}"
                )
            if _row_rank(self.rows) < m:
                raise RankDeficient(
                    f"exponent rows span rank {_row_rank(self.rows)} < {m}"
                )

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def codim(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def k(self) -> int:
        return self.n - self.codim

    def row(self, i: int) -> IntVector:
        return self.rows[i]

    def column(self, j: int) -> IntVector:
        return tuple(r[j] for r in self.rows)


@dataclass(frozen=True)
class LatticeBasis:
    """Square nonsingular basis matrix; rows are the basis vectors.

    Entries are Fractions so the dual basis (rows of the inverse transpose)
    is representable exactly.  A basis of the generator lattice itself has
    integer entries, a dual basis generally does not.
    """

    rows: tuple[FracVector, ...]

    def __init__(self, rows: Sequence[Sequence]):
        frac_rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        object.__setattr__(self, "rows", frac_rows)
        m = len(frac_rows)
        if any(len(r) != m for r in frac_rows):
            raise DimensionMismatch("basis matrix must be square")
        if m and _det(frac_rows) == 0:
            raise SingularBasis("basis matrix has determinant 0")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def det(self) -> Fraction:
        return _det(self.rows)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.rows for x in r)

    def coordinates(self, v: Sequence) -> FracVector:
        """Coefficients c with  v = sum_i c_i * rows[i],  exact."""
        vec = tuple(Fraction(x) for x in v)
        if len(vec) != self.dim:
            raise DimensionMismatch("vector length does not match basis")
        # Solve B^T c = v by Gauss-Jordan over Q.
        cols = [[self.rows[i][j] for i in range(self.dim)] for j in range(self.dim)]
        return tuple(_solve(cols, vec))

    def contains(self, v: Sequence) -> bool:
        """True iff v is an integer combination of the basis rows."""
        return all(c.denominator == 1 for c in self.coordinates(v))

    def as_float_array(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self.rows], dtype=float)


@dataclass(frozen=True)
class GammaGroup:
    """Coset representatives of L*/2L*: all {0,1}-combinations of the dual
    basis rows, enumerated in lexicographic order over the coefficient bits
    (so the zero vector comes first)."""

    representatives: tuple[FracVector, ...]
    dual: LatticeBasis

    def __len__(self) -> int:
        return len(self.representatives)

    def __iter__(self) -> Iterator[FracVector]:
        return iter(self.representatives)

    def nonzero(self) -> tuple[FracVector, ...]:
        return self.representatives[1:]


# ---------------------------------------------------------------------------
# exact linear algebra helpers
# ---------------------------------------------------------------------------


def _det(rows: Sequence[FracVector]) -> Fraction:
    m = len(rows)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, m):
            f = a[r][col] * inv
            if f:
                for c in range(col, m):
                    a[r][c] -= f * a[col][c]
    return det


def _solve(matrix_rows, rhs) -> list[Fraction]:
    """Solve A x = rhs exactly; A given as list of rows of Fractions."""
    m = len(matrix_rows)
    a = [list(matrix_rows[i]) + [rhs[i]] for i in range(m)]
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            raise SingularBasis("singular system in exact solve")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(m):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][m] for r in range(m)]


def _row_rank(rows: Sequence[IntVector]) -> int:
    return len(hermite_normal_form(rows))


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[IntVector, ...]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows: pivots positive, in echelon position, entries
    above each pivot reduced into [0, pivot).  Integer row operations only,
    so the returned rows are a canonical basis of the same row lattice.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return ()
    ncols = len(work[0])
    basis: list[list[int]] = []
    pivot_cols: list[int] = []
    for col in range(ncols):
        # annihilate column `col` across the remaining rows by gcd steps
        carrier = None
        rest = []
        for r in work:
            if r[col] != 0:
                if carrier is None:
                    carrier = r
                else:
                    # Euclidean reduction of (carrier[col], r[col])
                    while r[col] != 0:
                        q = carrier[col] // r[col]
                        carrier = [a - q * b for a, b in zip(carrier, r)]
                        carrier, r = r, carrier
                    rest.append(r)
            else:
                rest.append(r)
        if carrier is not None:
            if carrier[col] < 0:
                carrier = [-a for a in carrier]
            basis.append(carrier)
            pivot_cols.append(col)
        work = [r for r in rest if any(r)]
    # reduce entries above each pivot
    for i in reversed(range(len(basis))):
        p = pivot_cols[i]
        for j in range(i):
            q = basis[j][p] // basis[i][p]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    return tuple(tuple(r) for r in basis)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def lattice_basis_from_generators(exponents: ExponentMatrix) -> LatticeBasis:
    """Canonical (HNF) basis of the lattice generated by the exponent rows.

    Raises RankDeficient when the rows span less than full rank; degenerate
    inputs are rejected rather than silently completed.
    """
    m = exponents.codim
    hnf = hermite_normal_form(exponents.rows)
    if len(hnf) < m:
        raise RankDeficient(f"generators span rank {len(hnf)}, need {m}")
    return LatticeBasis(hnf)


def dual_basis(basis: LatticeBasis) -> LatticeBasis:
    """Rows b*_j with <b_i, b*_j> = delta_ij, exactly (inverse transpose)."""
    m = basis.dim
    rows = []
    for j in range(m):
        rhs = [Fraction(1 if i == j else 0) for i in range(m)]
        # column j of B^{-1}  ==  row j of B^{-T}
        rows.append(_solve([list(r) for r in basis.rows], rhs))
    return LatticeBasis(rows)


def gamma_representatives(dual: LatticeBasis) -> GammaGroup:
    """All {0,1}-combinations of the dual basis rows: 2^m coset
    representatives of L*/2L*, the zero vector first."""
    m = dual.dim
    reps = []
    for eps in itertools.product((0, 1), repeat=m):
        v = [Fraction(0)] * m
        for i, e in enumerate(eps):
            if e:
                v = [a + b for a, b in zip(v, dual.rows[i])]
        reps.append(tuple(v))
    return GammaGroup(tuple(reps), dual)


def pairing(gamma: Sequence, e_row: Sequence[int]) -> Fraction:
    """Euclidean pairing (gamma, e) = sum_i gamma_i * e_i, exact."""
    if len(gamma) != len(e_row):
        raise DimensionMismatch(
            f"pairing of lengths {len(gamma)} and {len(e_row)}"
        )
    return sum((Fraction(g) * int(e) for g, e in zip(gamma, e_row)), Fraction(0))


def pairing_parity(gamma: Sequence, e_row: Sequence[int]) -> int:
    """Parity (0 or 1) of the pairing, which must be an integer."""
    value = pairing(gamma, e_row)
    if value.denominator != 1:
        raise ValueError(f"pairing {value} is not an integer; gamma not in L*")
    return value.numerator % 2


@dataclass(frozen=True)
class FreeActionResult:
    free: bool
    # for each nonzero representative, the first row index with odd pairing,
    # or None if all pairings are even (the freeness failure witness)
    witnesses: tuple[tuple[FracVector, int | None], ...]

    def __bool__(self) -> bool:
        return self.free


def verify_free_action(exponents: ExponentMatrix, group: GammaGroup) -> FreeActionResult:
    """A nonzero class gamma acts freely iff some (e_j, gamma) is odd.

    Returns the verdict plus, per nonzero representative, a witness row
    index j (or None on failure).  Parities are computed exactly.
    """
    witnesses = []
    free = True
    for gamma in group.nonzero():
        j = next(
            (i for i in range(exponents.n) if pairing_parity(gamma, exponents.row(i)) == 1),
            None,
        )
        if j is None:
            free = False
        witnesses.append((gamma, j))
    return FreeActionResult(free, tuple(witnesses))


def sum_vector(exponents: ExponentMatrix) -> IntVector:
    """Componentwise sum of all exponent rows.

    The immersion built from the system is minimal (not merely volume
    critical under Hamiltonian deformations) exactly when this vanishes.
    """
    m = exponents.codim
    out = [0] * m
    for r in exponents.rows:
        for j in range(m):
            out[j] += r[j]
    return tuple(out)
