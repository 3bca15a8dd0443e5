"""Algebraic continued fractions given by field data, and their symmetries.

A fraction CF(l₁, …, lₙ) is stored as the vector v = (1, α₁, …, α_{n−1}) of
field elements spanning l₁; the line l_i is spanned by σ^{i−1}(v). A matrix
G ∈ GL_n(ℤ) is a symmetry when G·v = μ·σʲ(v) for a field element μ, and then
G(l_i) = l_{i+j}.
"""
import logging
from dataclasses import dataclass, replace
from math import gcd
from sympy import ImmutableMatrix, Matrix, Rational
from .errors import InputError, InternalError, PreconditionError, VerificationError
from .exactmath import charpoly, det, is_integer_matrix, kernel_basis, \
    primitive_vector, x
from .numberfield import (CyclicField, FieldElement, RootIsolation, apply_sigma,
                          embedding_signs, trace_and_norm)
logger = logging.getLogger(__name__)

DIRICHLET = 'dirichlet'
PALINDROMIC_NONCYCLIC = 'palindromic-noncyclic'
CYCLIC = 'cyclic'


def apply_matrix(M, elements) -> tuple[FieldElement, ...]:
    """M·(e₀, …, e_{n−1})ᵀ over the field."""
    field = elements[0].field
    out = []
    for i in range(M.rows):
        acc = field.zero()
        for j, e in enumerate(elements):
            if M[i, j] != 0:
                acc = acc + e * M[i, j]
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class AlgebraicCF:
    field: CyclicField
    alphas: tuple[FieldElement, ...]
    A: ImmutableMatrix | None = None

    def __post_init__(self):
        n = self.field.degree
        if len(self.alphas) != n:
            raise InputError(f'expected {n} basis elements, got {len(self.alphas)}')
        if self.alphas[0] != self.field.one():
            raise InputError('the first basis element must be 1')
        if self.basis_matrix.rank() != n:
            raise InputError('1, α₁, …, α_{n−1} are not linearly independent over ℚ')
        if self.A is not None:
            defect = hyperbolic_defect(self, self.A)
            if defect is not None:
                raise InputError(defect)

    @property
    def n(self) -> int:
        return self.field.degree

    @property
    def basis_matrix(self) -> ImmutableMatrix:
        """Row i holds the power-basis coordinates of α_i."""
        return ImmutableMatrix([list(a.coords) for a in self.alphas])

    def coordinates_of(self, a: FieldElement) -> ImmutableMatrix:
        """Row vector c with a = Σ c_i α_i."""
        return ImmutableMatrix([list(a.coords)]) * self.basis_matrix.inv()

    def eigenvalue(self, M) -> FieldElement | None:
        """λ with M·v = λ·v, or None."""
        w = apply_matrix(ImmutableMatrix(M), self.alphas)
        if all(wk == w[0] * vk for wk, vk in zip(w, self.alphas)):
            return w[0]
        return None

    def transported(self, X) -> 'AlgebraicCF':
        """The fraction X·CF, rescaled so that its first coordinate is 1."""
        X = ImmutableMatrix(X)
        w = apply_matrix(X, self.alphas)
        alphas = tuple(wk / w[0] for wk in w)
        A = None if self.A is None else ImmutableMatrix(X * self.A * X.inv())
        return AlgebraicCF(self.field, alphas, A)

    def with_field(self, field: CyclicField) -> 'AlgebraicCF':
        """Same numbers viewed in a field with another chosen generator."""
        alphas = tuple(field.element(a.coords) for a in self.alphas)
        return replace(self, field=field, alphas=alphas)


def hyperbolic_defect(cf: AlgebraicCF, A) -> str | None:
    """Why A cannot be the hyperbolic operator of cf, or None if it can."""
    A = ImmutableMatrix(A)
    if A.shape != (cf.n, cf.n) or not is_integer_matrix(A) or abs(det(A)) != 1:
        return 'A must be an integer matrix with determinant ±1'
    if cf.eigenvalue(A) is None:
        return 'A does not have (1, α₁, …) as an eigenvector'
    P = charpoly(A)
    if not P.is_irreducible or P.count_roots() != cf.n:
        return 'charpoly(A) is not irreducible with n real roots'
    return None


def check_hyperbolic(cf: AlgebraicCF, A) -> FieldElement:
    """Verifies that A is a hyperbolic operator with eigenvector v and
    returns its eigenvalue ξ.
    """
    defect = hyperbolic_defect(cf, A)
    if defect is not None:
        raise VerificationError(defect)
    return cf.eigenvalue(A)


@dataclass(frozen=True)
class SymmetryReport:
    shift: int
    mus: tuple[FieldElement, ...]
    kind: str
    proper: bool
    mu_product: Rational

    @property
    def sigma_power(self) -> int:
        return self.shift - 1

    @property
    def permutation(self) -> tuple[int, ...]:
        """σ_G as a tuple: entry i−1 is the image of line i."""
        n = len(self.mus)
        return tuple((i + self.sigma_power) % n + 1 for i in range(n))


def shift_matrix(n: int) -> ImmutableMatrix:
    """Ones on the superdiagonal and in the lower-left corner."""
    return ImmutableMatrix(n, n, lambda i, j: int(j == (i + 1) % n))


def classify_kind(report_or_power, n: int | None = None) -> str:
    if isinstance(report_or_power, SymmetryReport):
        j, n = report_or_power.sigma_power, len(report_or_power.mus)
    else:
        j = report_or_power
    j %= n
    if j == 0:
        return DIRICHLET
    if gcd(j, n) == 1:
        return CYCLIC
    return PALINDROMIC_NONCYCLIC


def is_symmetry(cf: AlgebraicCF, G) -> SymmetryReport | None:
    """Report for G if it permutes the eigenlines of cf, else None."""
    G = ImmutableMatrix(G)
    if G.shape != (cf.n, cf.n) or not is_integer_matrix(G) or abs(det(G)) != 1:
        raise InputError('G must be an integer matrix with determinant ±1')
    w = apply_matrix(G, cf.alphas)
    if w[0].is_zero:
        return None
    for j in range(cf.n):
        if all(wk == w[0] * apply_sigma(vk, j) for wk, vk in zip(w, cf.alphas)):
            break
    else:
        logger.info('G does not map l1 onto any conjugate line')
        return None
    mus = [w[0]]
    for _ in range(cf.n - 1):
        mus.append(apply_sigma(mus[-1], 1))
    _, mu_product = trace_and_norm(w[0])
    kind = classify_kind(j, cf.n)
    report = SymmetryReport(shift=j + 1, mus=tuple(mus), kind=kind,
                            proper=mu_product == 1, mu_product=mu_product)
    logger.info(f'symmetry found: kind={kind}, shift={j + 1}, mu_product={mu_product}')
    return report


def properness(report: SymmetryReport, G=None) -> bool:
    """True iff μ₁⋯μₙ = 1. When G is given for a cyclic report, the value is
    cross-checked against charpoly(G) = xⁿ − μ₁⋯μₙ.
    """
    if G is not None and report.kind == CYCLIC:
        n = len(report.mus)
        expected = x ** n - report.mu_product
        if (charpoly(G).as_expr() - expected).expand() != 0:
            raise InternalError(f'charpoly(G) differs from x^{n} - {report.mu_product}')
    return report.mu_product == 1


def fixed_ray(G) -> ImmutableMatrix:
    """Primitive integer generator of ker(G − I)."""
    G = ImmutableMatrix(G)
    basis = kernel_basis(G - ImmutableMatrix.eye(G.rows), over='integers')
    if len(basis) != 1:
        raise PreconditionError(f'eigenvalue 1 has a {len(basis)}-dimensional eigenspace')
    return primitive_vector(basis[0])


def commutes_presymmetry(A, G) -> bool:
    A, G = ImmutableMatrix(A), ImmutableMatrix(G)
    conjugate = G * A * G.inv()
    return conjugate * A == A * conjugate


def symmetry_matrix(cf: AlgebraicCF, mu: FieldElement,
                    sigma_power: int) -> ImmutableMatrix:
    """Integer G with G·v = μ·σʲ(v); with j = 0 this is the operator of
    multiplication by μ on the module spanned by v.
    """
    rows = [cf.coordinates_of(mu * apply_sigma(vk, sigma_power))
            for vk in cf.alphas]
    G = ImmutableMatrix.vstack(*rows)
    if not is_integer_matrix(G):
        raise InputError('μ·σʲ does not preserve the lattice of the fraction')
    return G


def ray_field_coordinate(cf: AlgebraicCF, r) -> FieldElement:
    """The element ξ with r = Σ_i σ^{i}(ξ)·σ^{i}(v), via the trace-dual basis
    of v.
    """
    r = ImmutableMatrix(r)
    n = cf.n
    trace_form = Matrix(n, n, lambda i, j: trace_and_norm(cf.alphas[i] * cf.alphas[j])[0])
    dual = trace_form.inv()
    xi = cf.field.zero()
    for k in range(n):
        beta_k = cf.field.zero()
        for j in range(n):
            if dual[k, j] != 0:
                beta_k = beta_k + cf.alphas[j] * dual[k, j]
        xi = xi + beta_k * r[k]
    return xi


def cone_signs(cf: AlgebraicCF, r,
               isolation: RootIsolation | None = None) -> tuple[int, ...]:
    """Embedding signs of the coordinates of r in the eigenbasis."""
    xi = ray_field_coordinate(cf, r)
    if xi.is_zero:
        raise VerificationError('zero ray')
    return embedding_signs(xi, isolation)
