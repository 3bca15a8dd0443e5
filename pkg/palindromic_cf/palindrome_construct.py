"""Palindromic fractions with a proper cyclic symmetry in every dimension.

The construction takes the least prime p ≡ 1 (mod 2n), the degree-n Gaussian
period field K ⊂ ℚ(ζ_p) with its normal basis ω, σω, …, σⁿ⁻¹ω, and the
vector (1, σω/ω, …, σⁿ⁻¹ω/ω). The cyclic shift H is then a proper cyclic
symmetry with μ₂ = σω/ω.
"""
import logging
from dataclasses import dataclass, replace
from functools import reduce
from itertools import product
from sympy import ImmutableMatrix, ilcm, isprime
from . import settings
from .cf_core import AlgebraicCF, CYCLIC, SymmetryReport, check_hyperbolic, \
    is_symmetry, properness, shift_matrix
from .errors import InputError, InternalError, ResourceCapError, \
    VerificationError
from .exactmath import charpoly, hermite_form, int_det, kernel_basis
from .numberfield import FieldElement, apply_sigma, gaussian_period_field, \
    trace_and_norm
logger = logging.getLogger(__name__)


def least_prime(n: int) -> int:
    """Smallest prime p with p ≡ 1 (mod 2n)."""
    if n < 2:
        raise InputError(f'n must be at least 2, got {n}')
    p = 2 * n + 1
    for _ in range(settings.prime_search_cap):
        if isprime(p):
            return p
        p += 2 * n
    raise ResourceCapError(f'no prime p ≡ 1 mod {2 * n} within {settings.prime_search_cap} candidates')


def verify_class_CF(cf: AlgebraicCF) -> bool:
    """αⱼ = Π_{k<j} σᵏ(α₁) for every j, and N(α₁) = 1."""
    alpha1 = cf.alphas[1] if cf.n > 1 else cf.field.one()
    product_ = cf.field.one()
    for j in range(1, cf.n):
        product_ = product_ * apply_sigma(alpha1, j - 1)
        if cf.alphas[j] != product_:
            return False
    _, norm = trace_and_norm(alpha1)
    return norm == 1


@dataclass(frozen=True)
class PalindromeCertificate:
    n: int
    p: int
    cf: AlgebraicCF
    H: ImmutableMatrix
    report: SymmetryReport
    A: ImmutableMatrix | None = None

    def verify(self):
        """Re-runs every check; raises VerificationError on the first
        failure.
        """
        if not isprime(self.p) or (self.p - 1) % (2 * self.n):
            raise VerificationError(f'p={self.p} is not a prime ≡ 1 mod {2 * self.n}')
        self.cf.field.validate()
        if self.H != shift_matrix(self.n):
            raise VerificationError('H is not the cyclic shift matrix')
        if not verify_class_CF(self.cf):
            raise VerificationError('fraction is not in class CF')
        report = is_symmetry(self.cf, self.H)
        if report is None or report != self.report:
            raise VerificationError('stored symmetry report does not match H')
        if report.kind != CYCLIC or report.shift != 2:
            raise VerificationError('H does not act as the full cycle')
        if report.mus[0] != self.cf.alphas[1] or not properness(report, self.H):
            raise VerificationError('H is not a proper symmetry with μ = α₁')
        if self.A is not None:
            check_hyperbolic(self.cf, self.A)
        return self


def construct_palindromic(n: int, with_A: bool = False,
                          bound: int | None = None) -> PalindromeCertificate:
    p = least_prime(n)
    field, omega = gaussian_period_field(p, n)
    alphas = tuple(apply_sigma(omega, j) / omega for j in range(n))
    cf = AlgebraicCF(field, alphas)
    _, norm = trace_and_norm(alphas[1] if n > 1 else field.one())
    if norm != 1:
        raise InternalError(f'N(α₁) = {norm}, expected 1')
    if not verify_class_CF(cf):
        raise InternalError('constructed fraction is not in class CF')
    H = shift_matrix(n)
    report = is_symmetry(cf, H)
    if report is None or report.shift != 2 or report.kind != CYCLIC:
        raise InternalError('H is not a cyclic symmetry of the constructed fraction')
    if report.mus[0] != alphas[1] or not properness(report, H):
        raise InternalError('H is not a proper symmetry with μ = α₁')
    A = None
    if with_A:
        A = find_hyperbolic_A(cf, bound)
        if A is not None:
            cf = replace(cf, A=A)
        else:
            logger.warning(f'no hyperbolic operator found for n={n}')
    logger.info(f'constructed palindromic fraction for n={n} over p={p}')
    return PalindromeCertificate(n=n, p=p, cf=cf, H=H, report=report, A=A)


def _operator(cf: AlgebraicCF, xi: FieldElement) -> ImmutableMatrix:
    """Rational matrix of multiplication by ξ in the basis v."""
    return ImmutableMatrix.vstack(*[cf.coordinates_of(xi * vk)
                                    for vk in cf.alphas])


def coefficient_ring_basis(cf: AlgebraicCF) -> list[list[int]]:
    """ℤ-basis, as coordinate vectors in v, of the coefficient ring
    {ξ : ξ·M ⊆ M} of the module M spanned by v.
    """
    n = cf.n
    ops = [_operator(cf, vj) for vj in cf.alphas]
    D = reduce(ilcm, (e.q for op in ops for e in op), 1)
    # Σ a_j·D·op_j ≡ 0 mod D, solved as the integer kernel of [N | D·I]
    columns = [[int(D * e) for e in op] for op in ops]
    rows = [[columns[j][k] for j in range(n)] + [D * int(i == k) for i in range(n * n)]
            for k in range(n * n)]
    kernel = kernel_basis(ImmutableMatrix(rows), over='integers')
    projected = ImmutableMatrix([[int(v[j]) for j in range(n)] for v in kernel])
    H, _ = hermite_form(projected)
    basis = [[int(e) for e in H.row(i)] for i in range(H.rows)
             if any(e != 0 for e in H.row(i))]
    if len(basis) != n:
        raise InternalError(f'coefficient ring has rank {len(basis)}, not {n}')
    return basis


def scan_unit_candidates(ops: list[list[list[int]]],
                         candidates: list[tuple[int, ...]]) -> dict:
    """First candidates c (in the given order) for which Σ cᵢ·opsᵢ has
    determinant +1 resp. −1 and an irreducible characteristic polynomial.
    """
    n = len(ops[0])
    hits = {'plus': None, 'minus': None}
    for c in candidates:
        rows = [[sum(ci * op[i][j] for ci, op in zip(c, ops)) for j in range(n)]
                for i in range(n)]
        d = int_det(rows)
        key = 'plus' if d == 1 else 'minus' if d == -1 else None
        if key is None or hits[key] is not None:
            continue
        P = charpoly(ImmutableMatrix(rows))
        if P.is_irreducible:
            hits[key] = tuple(c)
            if key == 'plus':
                break
    return hits


def _shell(n: int, m: int) -> list[tuple[int, ...]]:
    return [c for c in product(range(-m, m + 1), repeat=n)
            if max(abs(ci) for ci in c) == m]


def _scan(ops, candidates) -> dict:
    workers = max(1, settings.max_workers)
    if workers == 1 or len(candidates) < 2 * workers:
        return scan_unit_candidates(ops, candidates)
    from .worker import manager
    size = -(-len(candidates) // workers)
    chunks = [candidates[i:i + size] for i in range(0, len(candidates), size)]
    results = manager.map_requests('scan_units', [
        {'ops': ops, 'candidates': chunk} for chunk in chunks])
    # chunks are merged in order, stopping at the first plus like the
    # sequential scan does
    merged = {'plus': None, 'minus': None}
    for result in results:
        hits = result['hits']
        if merged['minus'] is None and hits['minus'] is not None:
            merged['minus'] = tuple(hits['minus'])
        if hits['plus'] is not None:
            merged['plus'] = tuple(hits['plus'])
            break
    return merged


def find_hyperbolic_A(cf: AlgebraicCF,
                      search_bound: int | None = None) -> ImmutableMatrix | None:
    """Brute-force search for a unit ξ of the coefficient ring whose
    multiplication matrix is hyperbolic. Candidates are ordered by max-norm of
    their coordinates in the coefficient-ring basis, then lexicographically;
    determinant +1 is preferred over −1.
    """
    if search_bound is None:
        search_bound = settings.unit_search_bound
    basis = coefficient_ring_basis(cf)
    n = cf.n
    ops = []
    for b in basis:
        xi = sum((vk * bk for vk, bk in zip(cf.alphas, b)), cf.field.zero())
        op = _operator(cf, xi)
        ops.append([[int(op[i, j]) for j in range(n)] for i in range(n)])
    first_minus = None
    for m in range(1, search_bound + 1):
        hits = _scan(ops, _shell(n, m))
        if first_minus is None:
            first_minus = hits['minus']
        if hits['plus'] is not None:
            return _assemble(cf, ops, hits['plus'])
    if first_minus is not None:
        return _assemble(cf, ops, first_minus)
    logger.info(f'no hyperbolic unit within bound {search_bound}')
    return None


def _assemble(cf, ops, c) -> ImmutableMatrix:
    n = cf.n
    A = ImmutableMatrix(n, n, lambda i, j: sum(ci * op[i][j] for ci, op in zip(c, ops)))
    check_hyperbolic(cf, A)
    logger.info(f'hyperbolic operator found at coefficients {c}, det {int_det(A.tolist())}')
    return A
