"""The masure of SL3 over F_q((t)), at desk scale.

Building points are homothety classes of rank-3 lattices over F_q[[t]],
given by invertible matrices whose columns generate them.  An apartment is
a frame: an invertible matrix g with val(det g) divisible by 3, charting
the coweight point lam = (lam1, lam2, lam3) to the class of
g . diag(t^-lam1, t^-lam2, t^-lam3).  With this sign the elementary
unipotent x_alpha(u) fixes exactly the half-apartment D(alpha, omega(u)),
which is the anchor every retraction and membership computation here is
calibrated against.  The divisibility restriction keeps vertex types
matching between charts, so chart transitions land in the affine Weyl
group W^v x Q^vee rather than its type-rotating extension.

Apartment coordinates live in the realization of the A2 matrix; a point x
has alpha_1(x) = lam1 - lam2 and alpha_2(x) = lam2 - lam3, both integers
exactly at the special points.  Non-special points are barycenters of the
corners of their alcove, stored as (lattice class, weight) pairs.

All lattice computations reduce a matrix to its triangular canonical form
over F_q[[t]]: monomial pivots, one per row, entries below them reduced
modulo the pivot.  Row order (0,1,2) gives the lower form whose pivot
exponents read off the retraction from minus infinity; order (2,1,0)
gives plus infinity.  Inputs are exact Laurent polynomials and every
division is tracked, so a verdict either is exact or raises
PrecisionExhausted; nothing is silently rounded.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction as Q
from typing import Sequence

from ..errors import DimensionMismatch, MasureError, PrecisionExhausted
from ..kmcore import RootGeneratingSystem, default_realization, validate_matrix
from ..linalg import Vector
from . import laurent as L
from .base import MasureModel
from .finite_field import GF

Matrix = tuple[tuple[L.Laurent, ...], ...]


def _sl3_rgs() -> RootGeneratingSystem:
    return default_realization(validate_matrix([[2, -1], [-1, 2]]))


# -- exact 3x3 Laurent linear algebra ----------------------------------------


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = L.zero(A[0][0].field)
            for k in range(3):
                acc = L.add(acc, L.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _det(A: Matrix) -> L.Laurent:
    def m2(a, b, c, d):
        return L.sub(L.mul(a, d), L.mul(b, c))

    return L.add(
        L.sub(
            L.mul(A[0][0], m2(A[1][1], A[1][2], A[2][1], A[2][2])),
            L.mul(A[0][1], m2(A[1][0], A[1][2], A[2][0], A[2][2])),
        ),
        L.mul(A[0][2], m2(A[1][0], A[1][1], A[2][0], A[2][1])),
    )


def _adjugate(A: Matrix) -> Matrix:
    def m2(a, b, c, d):
        return L.sub(L.mul(a, d), L.mul(b, c))

    cof = [[None] * 3 for _ in range(3)]
    idx = ((1, 2), (0, 2), (0, 1))
    for i in range(3):
        for j in range(3):
            r0, r1 = idx[i]
            c0, c1 = idx[j]
            minor = m2(A[r0][c0], A[r0][c1], A[r1][c0], A[r1][c1])
            cof[i][j] = minor if (i + j) % 2 == 0 else L.neg(minor)
    return tuple(tuple(cof[j][i] for j in range(3)) for i in range(3))


def _identity(field: GF) -> Matrix:
    return tuple(
        tuple(L.one(field) if i == j else L.zero(field) for j in range(3)) for i in range(3)
    )


def _diag(field: GF, exponents: Sequence[int]) -> Matrix:
    return tuple(
        tuple(L.monomial(field, exponents[i]) if i == j else L.zero(field) for j in range(3))
        for i in range(3)
    )


# -- triangular canonical form ------------------------------------------------


class TriangularForm:
    """Result of reducing an invertible matrix over the valuation ring.

    `pivots[r]` is the exponent of the monomial pivot in row r; `below` maps
    (row, pivot row) to the exact polynomial left after reduction, for rows
    processed after the pivot's.  The lattice is a diagonal one exactly
    when every `below` entry is zero.
    """

    __slots__ = ("pivots", "below")

    def __init__(self, pivots, below):
        self.pivots = pivots
        self.below = below

    @property
    def diagonal(self) -> bool:
        return all(e.is_exact_zero for e in self.below.values())

    def key(self):
        """Class invariant: the form shifted so the row-0 pivot is t^0."""
        s = self.pivots[0]
        entries = []
        for (i, j), e in sorted(self.below.items()):
            coeffs = tuple(
                (exp - s, c)
                for exp, c in (
                    (e.val_ + k, c) for k, c in enumerate(e.coeffs)
                )
                if c
            )
            entries.append(((i, j), coeffs))
        return (tuple(p - s for p in self.pivots), tuple(entries))


def _triangularize(M: Matrix, precision: int, row_order: Sequence[int]) -> TriangularForm:
    field = M[0][0].field
    cols = [[M[i][j] for i in range(3)] for j in range(3)]

    for step, r in enumerate(row_order):
        # minimum valuation wins; an entry only known to be zero to some
        # order cannot win unless its possible valuations reach the
        # current minimum, in which case the budget is genuinely spent
        best = None
        best_val = math.inf
        floors = []
        for j in range(step, 3):
            e = cols[j][r]
            if e.coeffs:
                if e.val_ < best_val:
                    best, best_val = j, e.val_
            elif not e.exact:
                floors.append(e.known_to + 1)
        if best is None:
            if floors:
                raise PrecisionExhausted(
                    f"pivot for row {r} is zero to order {min(floors) - 1}"
                )
            raise MasureError("matrix is singular over the series field")
        if any(f <= best_val for f in floors):
            raise PrecisionExhausted(
                f"pivot valuation for row {r} undecidable at order {best_val}"
            )
        cols[step], cols[best] = cols[best], cols[step]
        pivot = cols[step][r]
        for j in range(step + 1, 3):
            entry = cols[j][r]
            if entry.is_exact_zero:
                continue
            q = L.divide(entry, pivot, precision)
            cols[j] = [L.sub(cols[j][i], L.mul(q, cols[step][i])) for i in range(3)]

    pivots = [0, 0, 0]
    for step, r in enumerate(row_order):
        pivot = cols[step][r]
        a = pivot.val()
        pivots[r] = a
        unit_inv = L.inverse(L.floor_div_monomial(pivot, a), precision)
        cols[step] = [L.mul(entry, unit_inv) for entry in cols[step]]
        cols[step][r] = L.monomial(field, a)

    below = {}
    for stepj in range(3):
        rj = row_order[stepj]
        for stepi in range(stepj + 1, 3):
            ri = row_order[stepi]
            a = pivots[ri]
            entry = cols[stepj][ri]
            q = L.floor_div_monomial(entry, a)
            if not q.is_exact_zero:
                cols[stepj] = [
                    L.sub(cols[stepj][k], L.mul(q, cols[stepi][k])) for k in range(3)
                ]
                entry = cols[stepj][ri]
            if entry.coeffs:
                lo = min(entry.val_, a)
            elif entry.known_to is None:
                lo = a
            else:
                lo = min(entry.known_to + 1, a)
            reduced = L.Laurent(field, lo, entry.coeff_window(lo, a))
            cols[stepj][ri] = reduced
            below[(ri, rj)] = reduced
    return TriangularForm(tuple(pivots), below)


# -- points and apartments -----------------------------------------------------


class SL3Point:
    """Barycenter of alcove corners: pairs (lattice class, weight).

    Equality and hashing use the canonical class keys and weights only;
    representative matrices ride along for later membership tests.
    """

    __slots__ = ("data", "reps")

    def __init__(self, corners):
        corners = sorted(corners, key=lambda c: (c[1], c[0]))
        self.data = tuple((key, weight) for key, weight, _ in corners)
        self.reps = tuple(rep for _, _, rep in corners)

    def __eq__(self, other) -> bool:
        return isinstance(other, SL3Point) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __repr__(self) -> str:
        return f"SL3Point({len(self.data)} corners)"


class SL3Apartment:
    """Frame matrix with exact polynomial entries, val(det) in 3Z."""

    __slots__ = ("matrix", "_adj", "_det")

    def __init__(self, matrix: Matrix):
        self.matrix = matrix
        if any(not e.exact for row in matrix for e in row):
            raise MasureError("frame entries must be exact polynomials")
        det = _det(matrix)
        if det.is_exact_zero:
            raise MasureError("frame is singular")
        if det.val() % 3 != 0:
            raise MasureError("frame determinant valuation must be divisible by 3")
        self._adj = _adjugate(matrix)
        self._det = det

    def __repr__(self) -> str:
        return "SL3Apartment(...)"


def _alcove_corners(a: Q, b: Q) -> list[tuple[int, int, Q]]:
    """Corners (integer alpha-values) and barycentric weights of the alcove
    containing the point with alpha-values (a, b); zero weights dropped."""
    m1 = a.numerator // a.denominator
    m2 = b.numerator // b.denominator
    f = a - m1
    g = b - m2
    if f + g <= 1:
        raw = [(m1, m2, 1 - f - g), (m1 + 1, m2, f), (m1, m2 + 1, g)]
    else:
        raw = [(m1 + 1, m2, 1 - g), (m1, m2 + 1, 1 - f), (m1 + 1, m2 + 1, f + g - 1)]
    return [(ca, cb, w) for ca, cb, w in raw if w > 0]


class SL3Model(MasureModel):
    """SL3 over F_q((t)) with a fixed precision budget for divisions."""

    name = "sl3"

    def __init__(self, q: int = 2, precision: int = 40):
        self.field = GF(q)
        self.precision = precision
        self._rgs = _sl3_rgs()
        self._standard = SL3Apartment(_identity(self.field))

    @property
    def rgs(self) -> RootGeneratingSystem:
        return self._rgs

    @property
    def root_height_bound(self) -> int:
        return 2

    @property
    def weyl_length_bound(self) -> int:
        return 3

    def standard_apartment(self) -> SL3Apartment:
        return self._standard

    # alpha-values (a, b) <-> realization coordinates

    def _alpha_values(self, coords: Sequence) -> tuple[Q, Q]:
        if len(coords) != 2:
            raise DimensionMismatch("apartment coordinates have dimension 2")
        x1, x2 = (Q(c) for c in coords)
        return (2 * x1 - x2, -x1 + 2 * x2)

    def _from_alpha(self, a: Q, b: Q) -> Vector:
        return (Q(2 * a + b, 3), Q(a + 2 * b, 3))

    def _corner_matrix(self, apartment: SL3Apartment, ca: int, cb: int) -> Matrix:
        lam = (ca + cb, cb, 0)
        return _matmul(apartment.matrix, _diag(self.field, [-e for e in lam]))

    def _corner_key(self, M: Matrix):
        return _triangularize(M, self.precision, (0, 1, 2)).key()

    def chart(self, apartment: SL3Apartment, coords: Sequence) -> SL3Point:
        a, b = self._alpha_values(coords)
        corners = []
        for ca, cb, w in _alcove_corners(a, b):
            M = self._corner_matrix(apartment, ca, cb)
            corners.append((self._corner_key(M), w, M))
        return SL3Point(corners)

    def apartment_coords(self, apartment: SL3Apartment, point: SL3Point) -> Vector | None:
        positions = []
        for rep in point.reps:
            N = _matmul(apartment._adj, rep)
            form = _triangularize(N, self.precision, (0, 1, 2))
            if not form.diagonal:
                return None
            d = form.pivots
            positions.append((d[1] - d[0], d[2] - d[1]))
        weights = [w for _, w in point.data]
        a = sum((Q(p[0]) * w for p, w in zip(positions, weights)), Q(0))
        b = sum((Q(p[1]) * w for p, w in zip(positions, weights)), Q(0))
        # the corners of (a, b)'s alcove in this chart must be exactly the
        # classes the point is made of, with the same weights
        expected = sorted((ca, cb, w) for ca, cb, w in _alcove_corners(a, b))
        got = sorted((p[0], p[1], w) for p, w in zip(positions, weights))
        if expected != got:
            return None
        return self._from_alpha(a, b)

    def point_retract(self, point: SL3Point, germ) -> Vector:
        from ..apartment import minus_infinity

        order = (0, 1, 2) if germ == minus_infinity(self._rgs) else (2, 1, 0)
        a = Q(0)
        b = Q(0)
        for rep, (_, w) in zip(point.reps, point.data):
            form = _triangularize(rep, self.precision, order)
            d = form.pivots
            a += w * (d[1] - d[0])
            b += w * (d[2] - d[1])
        return self._from_alpha(a, b)

    def special_points(self, window_radius: int) -> tuple[Vector, ...]:
        out = []
        for a in range(-window_radius, window_radius + 1):
            for b in range(-window_radius, window_radius + 1):
                if abs(a + b) <= window_radius:
                    out.append(self._from_alpha(Q(a), Q(b)))
        return tuple(out)

    def same_apartment(self, first: SL3Apartment, second: SL3Apartment) -> bool:
        P = _matmul(first._adj, second.matrix)
        for i in range(3):
            if sum(1 for j in range(3) if not P[i][j].is_exact_zero) != 1:
                return False
        for j in range(3):
            if sum(1 for i in range(3) if not P[i][j].is_exact_zero) != 1:
                return False
        return True

    def random_apartment(self, seed: int, complexity: int) -> SL3Apartment:
        rng = random.Random(seed)
        frame = _identity(self.field)
        for _ in range(complexity):
            if rng.randrange(3) < 2:
                i, j = rng.sample(range(3), 2)
                val = rng.randrange(-complexity, complexity + 1)
                coeffs = [rng.randrange(self.field.q) for _ in range(complexity + 1)]
                u = L.from_coeffs(self.field, val, coeffs)
                factor = [[L.one(self.field) if r == c else L.zero(self.field) for c in range(3)] for r in range(3)]
                factor[i][j] = u
                frame = _matmul(frame, tuple(tuple(row) for row in factor))
            else:
                d = [rng.randrange(-complexity, complexity + 1) for _ in range(3)]
                d[2] -= (d[0] + d[1] + d[2]) % 3
                units = [rng.randrange(1, self.field.q) for _ in range(3)]
                factor = tuple(
                    tuple(
                        L.monomial(self.field, d[r], units[r]) if r == c else L.zero(self.field)
                        for c in range(3)
                    )
                    for r in range(3)
                )
                frame = _matmul(frame, factor)
        return SL3Apartment(frame)
