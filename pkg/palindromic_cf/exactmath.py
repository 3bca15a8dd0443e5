"""Exact rational and integer linear algebra.

Matrices are sympy ``ImmutableMatrix`` objects with ``Rational`` entries,
vectors are column matrices, and polynomials are sympy ``Poly`` objects in
``x``. Nothing in this module uses floating point.
"""
import logging
from dataclasses import dataclass
from functools import reduce
from math import gcd
from sympy import (ImmutableMatrix, Matrix, Poly, Rational, ZZ, ceiling, eye,
                   floor, ilcm, symbols, zeros)
try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex
from sympy.polys.matrices import DomainMatrix
from .errors import DegenerateError, EmptyPlaneError, InternalError, \
    PreconditionError
logger = logging.getLogger(__name__)

x = symbols('x')


def to_rational(value) -> Rational:
    """Converts an int, a Fraction, a sympy number or a 'p/q' string to a
    Rational.
    """
    if isinstance(value, str):
        value = value.strip()
    return Rational(value)


def matrix(rows) -> ImmutableMatrix:
    return ImmutableMatrix([[to_rational(e) for e in row] for row in rows])


def vector(entries) -> ImmutableMatrix:
    return ImmutableMatrix([to_rational(e) for e in entries])


def columns_matrix(vectors) -> ImmutableMatrix:
    """Stacks column vectors side by side."""
    return ImmutableMatrix.hstack(*[ImmutableMatrix(v) for v in vectors])


def is_integer_matrix(M) -> bool:
    return all(e.is_Integer for e in M)


def to_int_rows(M) -> list[list[int]]:
    return [[int(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def primitive_vector(v) -> ImmutableMatrix:
    """Scales a nonzero rational vector to a primitive integer vector whose
    first nonzero entry is positive.
    """
    entries = [Rational(e) for e in v]
    if all(e == 0 for e in entries):
        raise DegenerateError('zero vector has no primitive multiple')
    denominator = reduce(ilcm, (e.q for e in entries), 1)
    ints = [int(e * denominator) for e in entries]
    divisor = reduce(gcd, ints)
    lead = next(e for e in ints if e != 0)
    if lead < 0:
        divisor = -divisor
    return ImmutableMatrix([e // divisor for e in ints])


def _add_rows(m, i, j, a, b, c, d):
    # replace m[i] by a*m[i] + b*m[j]
    # and m[j] by c*m[i] + d*m[j]
    for k in range(len(m[i])):
        e = m[i][k]
        m[i][k] = a * e + b * m[j][k]
        m[j][k] = c * e + d * m[j][k]


def hermite_form(M) -> tuple[ImmutableMatrix, ImmutableMatrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with U·M = H, U unimodular, and H in row echelon form with
    positive pivots and the entries above each pivot reduced into
    [0, pivot).
    """
    if not is_integer_matrix(M):
        raise PreconditionError('hermite_form requires an integer matrix')
    rows, cols = M.shape
    h = to_int_rows(M)
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            s, t, g = igcdex(a, b)
            _add_rows(h, r, i, s, t, -b // g, a // g)
            _add_rows(u, r, i, s, t, -b // g, a // g)
        pivot = h[r][c]
        if pivot == 0:
            continue
        if pivot < 0:
            h[r] = [-e for e in h[r]]
            u[r] = [-e for e in u[r]]
            pivot = -pivot
        for k in range(r):
            q = h[k][c] // pivot
            if q:
                h[k] = [e - q * f for e, f in zip(h[k], h[r])]
                u[k] = [e - q * f for e, f in zip(u[k], u[r])]
        r += 1
    H = ImmutableMatrix(rows, cols, lambda i, j: h[i][j]) if cols else \
        ImmutableMatrix.zeros(rows, 0)
    U = ImmutableMatrix(rows, rows, lambda i, j: u[i][j])
    return H, U


def _integer_rows(M) -> ImmutableMatrix:
    """Clears denominators row by row."""
    out = []
    for i in range(M.rows):
        row = [Rational(e) for e in M.row(i)]
        denominator = reduce(ilcm, (e.q for e in row), 1)
        out.append([int(e * denominator) for e in row])
    return ImmutableMatrix(out) if out else ImmutableMatrix.zeros(0, M.cols)


def _nonzero_rows(H) -> list[ImmutableMatrix]:
    return [H.row(i) for i in range(H.rows) if any(e != 0 for e in H.row(i))]


def kernel_basis(M, over: str = 'rationals') -> list[ImmutableMatrix]:
    """Basis of the right kernel {v : M·v = 0}.

    over='rationals' returns a ℚ-basis; over='integers' returns a ℤ-basis of
    ker(M) ∩ ℤⁿ, in Hermite-reduced form.
    """
    M = ImmutableMatrix(M)
    if over == 'rationals':
        return [ImmutableMatrix(v) for v in Matrix(M).nullspace()]
    if over != 'integers':
        raise PreconditionError(f'unknown kernel mode: {over}')
    n = M.cols
    if M.rows == 0:
        return [ImmutableMatrix(eye(n).col(j)) for j in range(n)]
    H, U = hermite_form(_integer_rows(M).T)
    rank = len(_nonzero_rows(H))
    if rank == n:
        return []
    kernel = ImmutableMatrix.vstack(*[U.row(i) for i in range(rank, n)])
    reduced, _ = hermite_form(kernel)
    basis = [ImmutableMatrix(row.T) for row in _nonzero_rows(reduced)]
    for v in basis:
        if any(e != 0 for e in M * v):
            raise InternalError('integer kernel vector is not annihilated')
    return basis


def det(M) -> Rational:
    return Rational(ImmutableMatrix(M).det(method='bareiss'))


def int_det(rows) -> int:
    """Determinant of a small integer matrix given as nested lists."""
    n = len(rows)
    return int(DomainMatrix([[ZZ(e) for e in row] for row in rows],
                            (n, n), ZZ).det())


def charpoly(M) -> Poly:
    """Characteristic polynomial det(xI − M)."""
    return Poly(ImmutableMatrix(M).charpoly(x).as_expr(), x)


def poly_at_matrix(P: Poly, M) -> ImmutableMatrix:
    """Evaluates P at the square matrix M using Horner's rule."""
    M = ImmutableMatrix(M)
    result = zeros(M.rows, M.cols)
    for c in P.all_coeffs():
        result = result * M + c * eye(M.rows)
    return ImmutableMatrix(result)


def is_unimodular(M) -> bool:
    M = ImmutableMatrix(M)
    return M.is_square and is_integer_matrix(M) and abs(det(M)) == 1


def random_unimodular(rng, n: int = 4, bound: int = 3,
                      max_tries: int = 100000) -> ImmutableMatrix:
    """Draws integer matrices with entries in [-bound, bound] until one has
    determinant ±1.
    """
    for _ in range(max_tries):
        rows = [[rng.randint(-bound, bound) for _ in range(n)]
                for _ in range(n)]
        if abs(int_det(rows)) == 1:
            return ImmutableMatrix(rows)
    raise PreconditionError(f'no unimodular {n}x{n} matrix found with bound {bound}')


@dataclass(frozen=True)
class AffineLattice2D:
    """The points base + a·d1 + b·d2 for integers a, b."""
    base: ImmutableMatrix
    d1: ImmutableMatrix
    d2: ImmutableMatrix

    def __post_init__(self):
        if columns_matrix([self.d1, self.d2]).rank() != 2:
            raise DegenerateError('lattice directions are dependent')

    @property
    def dimension(self) -> int:
        return self.base.rows

    def point(self, a, b) -> ImmutableMatrix:
        return self.base + a * self.d1 + b * self.d2

    def _minor(self) -> tuple[int, int]:
        n = self.dimension
        for i in range(n):
            for j in range(i + 1, n):
                if self.d1[i] * self.d2[j] - self.d1[j] * self.d2[i] != 0:
                    return i, j
        raise InternalError('no invertible minor')

    def coordinates(self, point) -> tuple[Rational, Rational] | None:
        """Rational (a, b) with point = base + a·d1 + b·d2, or None when the
        point is off the plane.
        """
        i, j = self._minor()
        r = ImmutableMatrix(point) - self.base
        m = self.d1[i] * self.d2[j] - self.d1[j] * self.d2[i]
        a = (r[i] * self.d2[j] - r[j] * self.d2[i]) / m
        b = (self.d1[i] * r[j] - self.d1[j] * r[i]) / m
        if a * self.d1 + b * self.d2 != r:
            return None
        return Rational(a), Rational(b)

    def contains(self, point) -> bool:
        coords = self.coordinates(point)
        return coords is not None and all(c.is_Integer for c in coords)

    def image(self, G) -> 'AffineLattice2D':
        G = ImmutableMatrix(G)
        return AffineLattice2D(G * self.base, G * self.d1, G * self.d2)


def integer_points_of_plane(equations) -> AffineLattice2D | None:
    """All integer points of the 2-dimensional affine plane given by the
    equations a·x = b, as an affine lattice, or None when the plane holds no
    integer point.
    """
    rows = [[to_rational(e) for e in a] for a, _ in equations]
    rhs = [to_rational(b) for _, b in equations]
    A = ImmutableMatrix(rows)
    n = A.cols
    augmented = A.row_join(ImmutableMatrix(rhs))
    rank = A.rank()
    if augmented.rank() > rank:
        raise EmptyPlaneError('empty plane: the equations are inconsistent')
    if n - rank != 2:
        raise PreconditionError(f'equations define a plane of dimension {n - rank}, not 2')
    scaled = _integer_rows(augmented)
    A, b = scaled[:, :n], [int(e) for e in scaled[:, n]]
    # U·Aᵀ = H, so A·Uᵀ = Hᵀ and x = Uᵀ·y turns A·x = b into Hᵀ·y = b
    H, U = hermite_form(A.T)
    y = []
    for i in range(rank):
        c = next(j for j in range(H.cols) if H[i, j] != 0)
        rest = b[c] - sum(H[k, c] * y[k] for k in range(i))
        if rest % H[i, c]:
            logger.info(f'plane has no integer points (pivot {i})')
            return None
        y.append(int(rest // H[i, c]))
    for j in range(H.cols):
        if sum(H[k, j] * y[k] for k in range(rank)) != b[j]:
            return None
    base = U.T * ImmutableMatrix(y + [0] * (n - rank))
    directions, _ = hermite_form(ImmutableMatrix.vstack(U.row(rank),
                                                        U.row(rank + 1)))
    return AffineLattice2D(ImmutableMatrix(base),
                           ImmutableMatrix(directions.row(0).T),
                           ImmutableMatrix(directions.row(1).T))


def lattice_points_with_coordinates(L: AffineLattice2D, parallelogram):
    """Yields ((a, b), point) for the lattice points in the closed
    parallelogram with vertices A, B, C, D (in cyclic order), in
    lexicographic order of (a, b).
    """
    if len(parallelogram) != 4:
        raise PreconditionError('a parallelogram needs four vertices')
    verts = [ImmutableMatrix(v) for v in parallelogram]
    if verts[1] + verts[3] - verts[0] != verts[2]:
        raise DegenerateError('vertices do not form a parallelogram')
    coords = [L.coordinates(v) for v in verts]
    if any(c is None for c in coords):
        raise PreconditionError('parallelogram vertices are not on the lattice plane')
    (a0, b0), (a1, b1), _, (a3, b3) = coords
    e1, e2 = (a1 - a0, b1 - b0), (a3 - a0, b3 - b0)
    area = e1[0] * e2[1] - e1[1] * e2[0]
    if area == 0:
        raise DegenerateError('degenerate parallelogram (zero area)')
    # (a, b) = (a0, b0) + s·e1 + t·e2 with 0 <= s, t <= 1. Both s and t are
    # affine in b for fixed a.
    s_a, s_b = e2[1] / area, -e2[0] / area
    t_a, t_b = -e1[1] / area, e1[0] / area
    a_values = [c[0] for c in coords]
    for a in range(int(ceiling(min(a_values))), int(floor(max(a_values))) + 1):
        low, high = None, None
        for coef_a, coef_b in ((s_a, s_b), (t_a, t_b)):
            offset = coef_a * (a - a0) - coef_b * b0
            # 0 <= offset + coef_b·b <= 1
            if coef_b == 0:
                if not 0 <= offset <= 1:
                    low, high = 1, 0
                    break
                continue
            ends = sorted(((0 - offset) / coef_b, (1 - offset) / coef_b))
            low = ends[0] if low is None else max(low, ends[0])
            high = ends[1] if high is None else min(high, ends[1])
        if low is None or high is None or low > high:
            continue
        for b in range(int(ceiling(low)), int(floor(high)) + 1):
            yield (a, b), L.point(a, b)


def enumerate_lattice_points(L: AffineLattice2D,
                             parallelogram) -> list[ImmutableMatrix]:
    """All points of L inside the closed parallelogram, in lexicographic
    order of lattice coordinates.
    """
    return [point for _, point in
            lattice_points_with_coordinates(L, parallelogram)]
