"""Normal forms for proper cyclic symmetries of three-dimensional fractions.

A proper cyclic symmetry G ∈ GL₄(ℤ) has eigenvalues 1, −1, i, −i, and the
invariant subspaces l₊, l₋ and L are rational. Inside the G-invariant
hyperplane S₁ = {f = 1} the procedure below walks integer points on the
planes Q and R = G(Q) closest to π = p + L until the orbit z₁, …, z₄ of the
current point spans no further integer points. One of seven lattice
configurations then holds, and each yields an explicit X ∈ GL₄(ℤ) with
X·G·X⁻¹ equal to one of the canonical matrices G₁, …, G₇.

For a fraction CF with that symmetry, X·CF lies in the class 𝐂𝐅_i: β = σ(α),
γ is σ²(α), (α + σ²α)/2 or (α + σ²α + 1)/2, and Tr(α) is 0, 1 or 2.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from sympy import ImmutableMatrix, Rational, floor
from . import settings
from .cf_core import AlgebraicCF, CYCLIC, is_symmetry
from .errors import InternalError, PreconditionError, ResourceCapError, \
    VerificationError
from .exactmath import (AffineLattice2D, columns_matrix, hermite_form,
                        integer_points_of_plane, is_integer_matrix,
                        is_unimodular, kernel_basis,
                        lattice_points_with_coordinates, matrix,
                        primitive_vector, random_unimodular)
from .numberfield import CyclicField, FieldElement, apply_sigma, \
    gaussian_period_field, trace_and_norm
logger = logging.getLogger(__name__)

_CANONICAL_ROWS = {
    1: [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, -1, -1, -1]],
    2: [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, -1, -1, -1]],
    3: [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [2, -1, -1, -1]],
    4: [[1, 0, 0, 0], [0, 0, 1, 0], [0, -1, 0, 2], [0, 0, 0, -1]],
    5: [[1, 0, 0, 0], [0, 0, 1, 0], [0, -1, 0, 2], [1, 0, 0, -1]],
    6: [[1, 0, 0, 0], [0, 0, 1, 0], [-1, -1, 0, 2], [1, 0, 0, -1]],
    7: [[1, 0, 0, 0], [0, 0, 1, 0], [-1, -1, 0, 2], [2, 0, 0, -1]],
}

# Images X(source tuple) of the seven case configurations, as lists of
# standard-basis coefficient vectors.
_TARGET_FRAMES = {
    1: [(1, -1, 0, 0), (1, 0, 0, 1), (1, 0, 1, -1), (1, 0, 0, 0)],
    2: [(1, 0, 0, 0), (1, 0, 0, 1), (1, 0, 1, 0), (1, 1, 0, 0)],
    3: [(1, 0, 0, 0), (1, 0, 0, 1), (1, 0, 1, 0), (1, 1, 0, 0)],
    4: [(1, 0, -1, 1), (1, -1, 2, -1), (1, 1, -1, 1), (1, 0, 0, 0)],
    5: [(1, 0, 0, 0), (1, 0, 0, 1), (1, 0, 1, 0), (1, 1, 0, 1)],
    6: [(1, 1, 0, 1), (1, 0, 0, 0), (1, 0, -1, 1), (1, 0, 0, 1)],
    7: [(1, 1, -1, 2), (1, -1, 2, 0), (1, 2, 0, 2), (1, 0, 0, 1)],
}

CLASS_TRACES = {1: 0, 2: 1, 3: 2, 4: 0, 5: 2, 6: 0, 7: 2}

IDENTITY = ImmutableMatrix.eye(4)


def _load_canonical() -> dict[int, ImmutableMatrix]:
    out = {}
    for i, rows in _CANONICAL_ROWS.items():
        G = matrix(rows)
        if G ** 4 != IDENTITY or not is_unimodular(G):
            raise InternalError(f'canonical matrix G{i} is not of order 4 in GL4(Z)')
        out[i] = G
    return out


_CANONICAL = _load_canonical()


def canonical_matrices() -> list[ImmutableMatrix]:
    """[G₁, …, G₇]."""
    return [_CANONICAL[i] for i in range(1, 8)]


def canonical_matrix(i: int) -> ImmutableMatrix:
    if i not in _CANONICAL:
        raise PreconditionError(f'case index must be in 1..7, got {i}')
    return _CANONICAL[i]


def target_frames() -> dict[int, ImmutableMatrix]:
    """Target frame of each case as a matrix with the frame vectors as
    columns.
    """
    return {i: columns_matrix([matrix([list(v)]).T for v in frame])
            for i, frame in _TARGET_FRAMES.items()}


@dataclass(frozen=True)
class InvariantSplit:
    l_plus: ImmutableMatrix
    l_minus: ImmutableMatrix
    L: tuple[ImmutableMatrix, ImmutableMatrix]


def invariant_split(G) -> InvariantSplit:
    G = ImmutableMatrix(G)
    if G.shape != (4, 4) or not is_unimodular(G):
        raise PreconditionError('G must be a 4x4 integer matrix with determinant ±1')
    G2 = G * G
    if G2 == IDENTITY or G2 * G2 != IDENTITY:
        raise PreconditionError('G is not of order 4')
    if G2 == -IDENTITY:
        raise PreconditionError('wrong eigenstructure: G² = −I')
    plus = kernel_basis(G - IDENTITY, over='integers')
    minus = kernel_basis(G + IDENTITY, over='integers')
    rotation = kernel_basis(G2 + IDENTITY, over='integers')
    dims = (len(plus), len(minus), len(rotation))
    if dims != (1, 1, 2):
        raise PreconditionError(f'wrong eigenstructure: invariant subspaces of dimensions {dims}')
    split = InvariantSplit(primitive_vector(plus[0]), primitive_vector(minus[0]),
                           (rotation[0], rotation[1]))
    if columns_matrix([split.l_plus, split.l_minus, *split.L]).rank() != 4:
        raise InternalError('invariant subspaces do not span Q^4')
    return split


def _covector(vectors, positive_on) -> ImmutableMatrix:
    """Primitive integer row vector vanishing on vectors, positive on
    positive_on.
    """
    rows = ImmutableMatrix.vstack(*[ImmutableMatrix(v).T for v in vectors])
    basis = kernel_basis(rows, over='integers')
    if len(basis) != 1:
        raise InternalError('annihilator is not one-dimensional')
    f = primitive_vector(basis[0]).T
    if (f * positive_on)[0] < 0:
        f = -f
    return ImmutableMatrix(f)


@dataclass(frozen=True)
class HyperplaneFrame:
    """The hyperplane S₁ = {f = 1}, the point p = S₁ ∩ l₊ and the planes
    Q = {f = 1, g = q_level} and R = {f = 1, g = r_level}. The line l runs
    through p along l₋, and π = {f = 1, g = 0}.
    """
    f: ImmutableMatrix
    g: ImmutableMatrix
    p: ImmutableMatrix
    l_minus: ImmutableMatrix
    q_level: Rational
    r_level: Rational
    Q: AffineLattice2D
    R: AffineLattice2D
    pi_is_rational: bool

    def level(self, point) -> Rational:
        return (self.g * ImmutableMatrix(point))[0]

    def project(self, point, level) -> ImmutableMatrix:
        """Projection parallel to l onto the plane g = level."""
        point = ImmutableMatrix(point)
        shift = (level - self.level(point)) / self.level(self.l_minus)
        return point + shift * self.l_minus

    @cached_property
    def p_Q(self) -> ImmutableMatrix:
        return self.project(self.p, self.q_level)

    @cached_property
    def p_R(self) -> ImmutableMatrix:
        return self.project(self.p, self.r_level)


def hyperplane_frame(G, split: InvariantSplit) -> HyperplaneFrame:
    G = ImmutableMatrix(G)
    f = _covector([split.l_minus, *split.L], split.l_plus)
    g = _covector([split.l_plus, *split.L], split.l_minus)
    p = split.l_plus / (f * split.l_plus)[0]
    # integer values of (f, g) form a lattice with basis (1, h12), (0, d)
    H, _ = hermite_form(ImmutableMatrix.vstack(f, g).T)
    h12, d = H[0, 1], H[1, 1]
    if H[0, 0] != 1 or d <= 0:
        raise InternalError('unexpected Hermite form of the (f, g) lattice')
    offset = h12 % d
    if (2 * offset) % d:
        raise InternalError('g-levels on S1 are not symmetric under G')
    pi_is_rational = offset == 0
    q_level = Rational(d) if pi_is_rational else Rational(d, 2)
    r_level = -q_level
    Q = integer_points_of_plane([(f.T, 1), (g.T, q_level)])
    R = integer_points_of_plane([(f.T, 1), (g.T, r_level)])
    if Q is None or R is None:
        raise InternalError('nearest planes hold no integer points')
    frame = HyperplaneFrame(f=f, g=g, p=p, l_minus=split.l_minus,
                            q_level=q_level, r_level=r_level, Q=Q, R=R,
                            pi_is_rational=pi_is_rational)
    if G * frame.p_Q != frame.p_R:
        raise InternalError('G does not map p_Q to p_R')
    logger.info(f'frame: f={list(f)}, g={list(g)}, Q level={q_level}, pi rational={pi_is_rational}')
    return frame


@dataclass(frozen=True)
class ZQuadruple:
    G: ImmutableMatrix
    z: tuple[ImmutableMatrix, ...]
    frame: HyperplaneFrame
    iterations: int = 0

    @property
    def p(self) -> ImmutableMatrix:
        return sum(self.z, ImmutableMatrix.zeros(4, 1)) / 4

    @property
    def p_Q(self) -> ImmutableMatrix:
        return (self.z[0] + self.z[2]) / 2

    @property
    def p_R(self) -> ImmutableMatrix:
        return (self.z[1] + self.z[3]) / 2

    def projections(self, level) -> tuple[ImmutableMatrix, ...]:
        return tuple(self.frame.project(zi, level) for zi in self.z)


def _orbit(G, v) -> tuple[ImmutableMatrix, ...]:
    orbit = [ImmutableMatrix(v)]
    for _ in range(3):
        orbit.append(G * orbit[-1])
    return tuple(orbit)


def _spread(G, frame: HyperplaneFrame, v) -> Rational:
    """G-invariant squared size of the orbit of v around l."""
    w = frame.project(v, 0) - frame.p
    Gw = G * w
    return (w.T * w)[0] + (Gw.T * Gw)[0]


def _start_point(frame: HyperplaneFrame) -> ImmutableMatrix:
    a, b = frame.Q.coordinates(frame.p_Q)
    start = frame.Q.point(int(floor(a + Rational(1, 2))),
                          int(floor(b + Rational(1, 2))))
    if start == frame.p_Q:
        start = start + frame.Q.d1
    return start


def z_procedure(G, frame: HyperplaneFrame) -> ZQuadruple:
    G = ImmutableMatrix(G)
    q, r = frame.q_level, frame.r_level
    v = _start_point(frame)
    spread = _spread(G, frame, v)
    for iteration in range(settings.max_iterations):
        v1, v2, v3, v4 = _orbit(G, v)
        delta_Q = [v1, frame.project(v2, q), v3, frame.project(v4, q)]
        delta_R = [frame.project(v1, r), v2, frame.project(v3, r), v4]
        candidates = []
        for coords, point in lattice_points_with_coordinates(frame.Q, delta_Q):
            if point != frame.p_Q and point not in delta_Q:
                candidates.append((coords, point))
        for _, point in lattice_points_with_coordinates(frame.R, delta_R):
            if point != frame.p_R and point not in delta_R:
                image = G * point
                candidates.append((frame.Q.coordinates(image), image))
        if not candidates:
            logger.info(f'z-procedure terminated after {iteration} steps')
            return ZQuadruple(G, (v1, v2, v3, v4), frame, iteration)
        _, v = min(candidates, key=lambda c: c[0])
        new_spread = _spread(G, frame, v)
        if new_spread >= spread:
            raise InternalError('z-procedure failed to shrink the orbit')
        spread = new_spread
    raise ResourceCapError(f'z-procedure exceeded {settings.max_iterations} iterations')


def case_tuple(i: int, zq: ZQuadruple) -> tuple[ImmutableMatrix, ...]:
    z1, z2, z3, z4 = zq.z
    half, quarter = Rational(1, 2), Rational(1, 4)
    tuples = {
        1: (z1, z2, z3, quarter * (z1 + z2 + z3 + z4)),
        2: (z1, z2, z3, z4),
        3: (z1, half * (z1 + z2), half * (z1 + z3), half * (z1 + z4)),
        4: (z1, z2, half * (z1 + z3), quarter * (z1 + z2 + z3 + z4)),
        5: (z1, z2, half * (z1 + z3), half * (z2 + z4)),
        6: (z1, z2, z3, half * (z1 + z3 + z4 - z2)),
        7: (z1, z2, z3, half * (z1 + z2) + quarter * (z1 + z4 - z3 - z2)),
    }
    return tuples[i]


def detect_case(zq: ZQuadruple) -> list[tuple[int, tuple[ImmutableMatrix, ...]]]:
    """All case configurations whose tuple is a basis of ℤ⁴, in index
    order.
    """
    matches = []
    for i in range(1, 8):
        basis = case_tuple(i, zq)
        if not all(is_integer_matrix(b) for b in basis):
            continue
        if is_unimodular(columns_matrix(basis)):
            matches.append((i, basis))
    if not matches:
        raise InternalError('no lattice configuration matches the z-quadruple')
    logger.info(f'matching cases: {[i for i, _ in matches]}')
    return matches


@dataclass(frozen=True)
class CaseCertificate:
    case: int
    z: tuple[ImmutableMatrix, ...]
    basis_tuple: tuple[ImmutableMatrix, ...]
    X: ImmutableMatrix
    canonical: ImmutableMatrix
    matches: tuple[int, ...] = ()


def build_conjugator(i: int, zq: ZQuadruple) -> CaseCertificate:
    basis = case_tuple(i, zq)
    M = columns_matrix(basis)
    T = target_frames()[i]
    X = ImmutableMatrix(T * M.inv())
    if not is_unimodular(X):
        raise InternalError(f'conjugator for case {i} is not unimodular')
    G_i = canonical_matrix(i)
    if X * zq.G * X.inv() != G_i:
        raise InternalError(f'X·G·X⁻¹ differs from G{i}')
    return CaseCertificate(case=i, z=zq.z, basis_tuple=basis, X=X,
                           canonical=G_i)


def classify_symmetry(G) -> CaseCertificate:
    """Conjugates a proper cyclic symmetry G to its canonical form."""
    G = ImmutableMatrix(G)
    split = invariant_split(G)
    frame = hyperplane_frame(G, split)
    zq = z_procedure(G, frame)
    matches = detect_case(zq)
    case, _ = matches[0]
    certificate = build_conjugator(case, zq)
    return CaseCertificate(case=certificate.case, z=certificate.z,
                           basis_tuple=certificate.basis_tuple,
                           X=certificate.X, canonical=certificate.canonical,
                           matches=tuple(i for i, _ in matches))


def _gamma(i: int, alpha: FieldElement) -> FieldElement:
    sigma2 = apply_sigma(alpha, 2)
    if i in (1, 2, 3):
        return sigma2
    if i in (4, 5):
        return (alpha + sigma2) / 2
    return (alpha + sigma2 + 1) / 2


def class_identities_hold(cf: AlgebraicCF, i: int) -> bool:
    """β = σ(α), the γ identity of class i and Tr(α) = t_i."""
    if cf.n != 4:
        raise PreconditionError('class membership is defined for quartic fields')
    _, alpha, beta, gamma = cf.alphas
    if beta != apply_sigma(alpha, 1) or gamma != _gamma(i, alpha):
        return False
    trace, _ = trace_and_norm(alpha)
    return trace == CLASS_TRACES[i]


def verify_class_membership(cf: AlgebraicCF, i: int) -> bool:
    member = class_identities_hold(cf, i)
    report = is_symmetry(cf, canonical_matrix(i))
    symmetric = report is not None and report.sigma_power == 1 and report.proper
    if member != symmetric:
        raise InternalError(f'class {i} identities and G{i} symmetry disagree')
    return member


def make_class_example(i: int, field: CyclicField,
                       omega: FieldElement) -> AlgebraicCF:
    if field.degree != 4:
        raise PreconditionError('class examples live in quartic fields')
    trace, _ = trace_and_norm(omega)
    alpha = omega - (trace - CLASS_TRACES[i]) / 4
    cf = AlgebraicCF(field, (field.one(), alpha, apply_sigma(alpha, 1),
                             _gamma(i, alpha)))
    if not verify_class_membership(cf, i):
        raise InternalError(f'class {i} example fails its own identities')
    return cf


def classify_fraction(cf: AlgebraicCF, G) -> tuple[CaseCertificate, AlgebraicCF]:
    """Canonical form of a proper cyclic symmetry G of cf, together with the
    transported fraction X·cf, which lies in the class of the matched case
    for the generator σʲ that G induces.
    """
    report = is_symmetry(cf, G)
    if report is None or report.kind != CYCLIC or not report.proper:
        raise VerificationError('G is not a proper cyclic symmetry of the fraction')
    certificate = classify_symmetry(G)
    normalized = cf.transported(certificate.X)
    moved = is_symmetry(normalized, certificate.canonical)
    if moved is None or moved.kind != CYCLIC or not moved.proper:
        raise InternalError('transported fraction lost its symmetry')
    regenerated = normalized.with_field(
        normalized.field.with_generator(moved.sigma_power))
    if not verify_class_membership(regenerated, certificate.case):
        raise InternalError(f'transported fraction is not in class {certificate.case}')
    return certificate, normalized


def conjugated_instance(i: int, rng, field: CyclicField | None = None,
                        omega: FieldElement | None = None,
                        bound: int = 3) -> tuple[AlgebraicCF, ImmutableMatrix, ImmutableMatrix]:
    """A class-i example moved by a random unimodular X₀, with the matching
    conjugate X₀·G_i·X₀⁻¹. Returns (cf, G, X₀). Without a field the
    quartic subfield of ℚ(ζ₁₇) is used.
    """
    if field is None:
        field, omega = gaussian_period_field(17, 4)
    cf = make_class_example(i, field, omega)
    X0 = random_unimodular(rng, 4, bound)
    G = ImmutableMatrix(X0 * canonical_matrix(i) * X0.inv())
    return cf.transported(X0), G, X0
