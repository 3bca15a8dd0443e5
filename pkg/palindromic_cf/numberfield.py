"""Arithmetic in totally real cyclic Galois fields ℚ[x]/(f).

Elements are stored as coordinate tuples in the power basis 1, θ, …, θⁿ⁻¹.
The Galois generator σ is a rational matrix whose row k holds the
coordinates of σ(θᵏ), so that coords(σ(a)) = coords(a)·sigma.
"""
import logging
import operator
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from sympy import (ImmutableMatrix, Matrix, Poly, QQ, Rational, cyclotomic_poly,
                   isprime, primitive_root, symbols)
from sympy.polys.polyerrors import NotInvertible
from . import settings
from .errors import (InputError, InternalError, PreconditionError,
                     ResourceCapError, VerificationError, ZeroElementError)
from .exactmath import det, to_rational, x
logger = logging.getLogger(__name__)

z = symbols('z')


@dataclass(frozen=True)
class CyclicField:
    minpoly: Poly
    sigma: ImmutableMatrix

    @property
    def degree(self) -> int:
        return self.minpoly.degree()

    @cached_property
    def sigma_powers(self) -> tuple[ImmutableMatrix, ...]:
        powers = [ImmutableMatrix.eye(self.degree)]
        for _ in range(self.degree - 1):
            powers.append(powers[-1] * self.sigma)
        return tuple(powers)

    def element(self, coords) -> 'FieldElement':
        coords = tuple(to_rational(c) for c in coords)
        if len(coords) != self.degree:
            raise InputError(f'expected {self.degree} coordinates, got {len(coords)}')
        return FieldElement(self, coords)

    def from_rational(self, c) -> 'FieldElement':
        return self.element([c] + [0] * (self.degree - 1))

    def zero(self) -> 'FieldElement':
        return self.from_rational(0)

    def one(self) -> 'FieldElement':
        return self.from_rational(1)

    def theta(self) -> 'FieldElement':
        return self.element([0, 1] + [0] * (self.degree - 2))

    def from_poly(self, p: Poly) -> 'FieldElement':
        r = Poly(p.as_expr(), x, domain=QQ).rem(self._modulus)
        coeffs = list(reversed(r.all_coeffs())) if not r.is_zero else []
        coeffs += [0] * (self.degree - len(coeffs))
        return self.element(coeffs)

    @cached_property
    def _modulus(self) -> Poly:
        return Poly(self.minpoly.as_expr(), x, domain=QQ)

    def multiplication_matrix(self, a: 'FieldElement') -> ImmutableMatrix:
        """Matrix M with coords(b·a) = coords(b)·M."""
        basis = [self.element([int(i == k) for i in range(self.degree)])
                 for k in range(self.degree)]
        return ImmutableMatrix([list((b * a).coords) for b in basis])

    def with_generator(self, k: int) -> 'CyclicField':
        """The same field with σᵏ as the chosen Galois generator."""
        if gcd(k, self.degree) != 1:
            raise PreconditionError(f'σ^{k} does not generate a group of order {self.degree}')
        return CyclicField(self.minpoly, self.sigma_powers[k % self.degree])

    def validate(self):
        """Checks that the minimal polynomial is irreducible with only real
        roots, that σ maps θ to a root, and that σ has order exactly n.
        """
        n = self.degree
        if n < 1 or not self.minpoly.is_monic:
            raise InputError('minimal polynomial must be monic of positive degree')
        if not self.minpoly.is_irreducible:
            raise InputError(f'{self.minpoly.as_expr()} is not irreducible')
        if self.minpoly.count_roots() != n:
            raise InputError(f'{self.minpoly.as_expr()} is not totally real')
        if self.sigma.shape != (n, n):
            raise InputError('sigma matrix has the wrong shape')
        if self.sigma.row(0) != ImmutableMatrix.eye(n).row(0):
            raise InputError('sigma must fix the rational numbers')
        image = self.element(list(self.sigma.row(1)))
        if not evaluate(self.minpoly, image).is_zero:
            raise InputError('sigma(theta) is not a root of the minimal polynomial')
        identity = ImmutableMatrix.eye(n)
        for k in range(1, n):
            if self.sigma_powers[k] == identity:
                raise InputError(f'sigma has order {k} < {n}')
        if self.sigma_powers[-1] * self.sigma != identity:
            raise InputError(f'sigma^{n} is not the identity')
        return self


@dataclass(frozen=True)
class FieldElement:
    field: CyclicField
    coords: tuple[Rational, ...]

    def _coerce(self, other) -> 'FieldElement':
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InputError('elements belong to different fields')
            return other
        return self.field.from_rational(other)

    def as_poly(self) -> Poly:
        return Poly(list(reversed(self.coords)), x, domain=QQ)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return self.field.from_poly(self.as_poly() * other.as_poly())

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        for _ in range(k):
            result = result * self
        return result

    def inverse(self) -> 'FieldElement':
        if self.is_zero:
            raise ZeroElementError('division by the zero element')
        try:
            inv = self.as_poly().invert(self.field._modulus)
        except NotInvertible:
            raise InternalError('nonzero element is not invertible; minpoly reducible?')
        return self.field.from_poly(inv)

    def __repr__(self):
        return f'FieldElement({self.as_poly().as_expr()})'


_ARITH = {'add': operator.add, 'sub': operator.sub, 'mul': operator.mul,
          'div': operator.truediv}


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op not in _ARITH:
        raise InputError(f'unknown field operation: {op}')
    if a.field != b.field:
        raise InputError('elements belong to different fields')
    return _ARITH[op](a, b)


def evaluate(P: Poly, a: FieldElement) -> FieldElement:
    """P(a) computed inside the field."""
    result = a.field.zero()
    for c in P.all_coeffs():
        result = result * a + c
    return result


def trace_and_norm(a: FieldElement) -> tuple[Rational, Rational]:
    M = a.field.multiplication_matrix(a)
    return Rational(M.trace()), det(M)


def apply_sigma(a: FieldElement, k: int = 1) -> FieldElement:
    S = a.field.sigma_powers[k % a.field.degree]
    row = ImmutableMatrix([list(a.coords)]) * S
    return FieldElement(a.field, tuple(Rational(c) for c in row))


def minpoly_of(a: FieldElement) -> Poly:
    """Monic minimal polynomial of a over ℚ, from the first linear relation
    among 1, a, a², …
    """
    powers = [a.field.one()]
    for d in range(1, a.field.degree + 1):
        powers.append(powers[-1] * a)
        A = Matrix([list(p.coords) for p in powers]).T
        relations = A.nullspace()
        if relations:
            rel = relations[0]
            rel = rel / rel[d]
            P = Poly([rel[k] for k in range(d, -1, -1)], x, domain=QQ)
            if all(c.is_Integer for c in P.all_coeffs()):
                P = Poly(P.as_expr(), x)
            return P
    raise InternalError('no linear relation among powers up to the degree')


def gaussian_period_field(p: int, n: int) -> tuple[CyclicField, FieldElement]:
    """The degree-n subfield of ℚ(ζ_p + ζ_p⁻¹) generated by the Gaussian
    period η₀ = Σ ζ^{g^{nk}}, with σ: ζ ↦ ζ^g for the smallest primitive root
    g mod p. Returns the field (θ = η₀) and ω = θ.
    """
    if not isprime(p):
        raise InputError(f'{p} is not prime')
    if n < 2 or (p - 1) % (2 * n):
        raise InputError(f'n={n} does not divide (p-1)/2 for p={p}')
    g = primitive_root(p)
    f = (p - 1) // n
    phi = Poly(cyclotomic_poly(p, z), z)
    logger.info(f'building period field: p={p}, n={n}, g={g}, f={f}')

    def reduce(e: Poly) -> Poly:
        return e.rem(phi)

    def zeta_power(e: int) -> Poly:
        return reduce(Poly(z ** (e % p), z))

    periods = []
    for j in range(n):
        eta = Poly(0, z)
        for k in range(f):
            eta += zeta_power(pow(g, j + n * k, p))
        periods.append(reduce(eta))
    # Π (X − η_j), expanded with coefficients in ℤ[ζ]
    coeffs = [Poly(1, z)]
    for eta in periods:
        shifted = coeffs + [Poly(0, z)]
        for i in range(1, len(shifted)):
            shifted[i] = reduce(shifted[i] - eta * coeffs[i - 1])
        coeffs = shifted
    int_coeffs = []
    for c in coeffs:
        if c.degree() > 0:
            raise InternalError('period polynomial has a non-rational coefficient')
        int_coeffs.append(int(c.as_expr()))
    minpoly = Poly(int_coeffs, x)
    # express η₁ in the power basis of η₀ by an exact linear solve
    width = p - 1

    def vec(e: Poly) -> list:
        c = list(reversed(e.all_coeffs())) if not e.is_zero else []
        return c + [0] * (width - len(c))

    powers = [Poly(1, z)]
    for _ in range(n - 1):
        powers.append(reduce(powers[-1] * periods[0]))
    A = Matrix([vec(e) for e in powers]).T
    solution, params = A.gauss_jordan_solve(Matrix(vec(periods[1])))
    if params.shape[0]:
        raise InternalError('power basis of the period is not independent')
    provisional = CyclicField(minpoly, ImmutableMatrix.eye(n))
    image = provisional.element(list(solution))
    rows = [list((image ** k).coords) for k in range(n)]
    field = CyclicField(minpoly, ImmutableMatrix(rows)).validate()
    omega = field.theta()
    orbit = ImmutableMatrix([list(apply_sigma(omega, k).coords) for k in range(n)])
    if det(orbit) == 0:
        raise VerificationError(f'Gaussian periods for p={p}, n={n} do not form a normal basis')
    logger.info(f'period field minpoly: {minpoly.as_expr()}')
    return field, omega


@dataclass(frozen=True)
class RootIsolation:
    polynomial: Poly
    intervals: tuple[tuple[Rational, Rational], ...]


def isolate_embeddings(field: CyclicField) -> RootIsolation:
    """Disjoint rational intervals, one around each real root of the
    minimal polynomial, in increasing order.
    """
    raw = field.minpoly.intervals()
    intervals = tuple((Rational(s), Rational(t)) for (s, t), _ in raw)
    if len(intervals) != field.degree:
        raise VerificationError(f'{field.minpoly.as_expr()} has {len(intervals)} real roots, not {field.degree}')
    for s, t in intervals:
        if field.minpoly.count_roots(s, t) != 1:
            raise InternalError(f'interval [{s}, {t}] does not isolate one root')
    return RootIsolation(field.minpoly, intervals)


def refine_sign(a: FieldElement, index: int,
                isolation: RootIsolation | None = None) -> int:
    """Sign (+1 or −1) of a at the index-th real embedding."""
    if a.is_zero:
        raise ZeroElementError('the zero element has no sign')
    if isolation is None:
        isolation = isolate_embeddings(a.field)
    P = a.as_poly()
    if P.degree() <= 0:
        return 1 if a.coords[0] > 0 else -1
    s, t = isolation.intervals[index]
    minpoly = isolation.polynomial
    for _ in range(settings.refinement_cap):
        if s == t:
            value = P.eval(s)
            return 1 if value > 0 else -1
        if P.count_roots(s, t) == 0:
            value = P.eval((s + t) / 2)
            return 1 if value > 0 else -1
        s, t = minpoly.refine_root(s, t, eps=(t - s) / 4)
        s, t = Rational(s), Rational(t)
    raise ResourceCapError(f'sign not certified after {settings.refinement_cap} refinements')


def embedding_signs(a: FieldElement,
                    isolation: RootIsolation | None = None) -> tuple[int, ...]:
    if isolation is None:
        isolation = isolate_embeddings(a.field)
    return tuple(refine_sign(a, i, isolation)
                 for i in range(len(isolation.intervals)))
