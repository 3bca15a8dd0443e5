import random
import pytest
from sympy import ImmutableMatrix
from palindromic_cf.cf_core import (CYCLIC, DIRICHLET, PALINDROMIC_NONCYCLIC,
                                    AlgebraicCF, classify_kind,
                                    commutes_presymmetry, cone_signs,
                                    fixed_ray, is_symmetry, properness,
                                    ray_field_coordinate, shift_matrix,
                                    symmetry_matrix)
from palindromic_cf.classifier4 import invariant_split
from palindromic_cf.errors import InputError, InternalError, PreconditionError
from palindromic_cf.exactmath import charpoly, matrix, vector, x
from palindromic_cf.numberfield import apply_sigma, gaussian_period_field


def quartic_fraction():
    """(1, η₁, η₂, η₃) over the quartic subfield of ℚ(ζ₁₇); its lattice is
    the ring of integers.
    """
    field, omega = gaussian_period_field(17, 4)
    alphas = (field.one(),) + tuple(apply_sigma(omega, k) for k in (1, 2, 3))
    return AlgebraicCF(field, alphas), omega


def quadratic_fraction():
    field, theta = gaussian_period_field(5, 2)
    return AlgebraicCF(field, (field.one(), theta)), theta


def random_unit(rng, omega):
    field = omega.field
    u = field.one() if rng.random() < .5 else -field.one()
    for k in range(4):
        u = u * apply_sigma(omega, k) ** rng.randint(-1, 1)
    return u


def test_shift_matrix():
    assert shift_matrix(3) == matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert shift_matrix(4) ** 4 == ImmutableMatrix.eye(4)


def test_classify_kind():
    assert classify_kind(0, 4) == DIRICHLET
    assert classify_kind(2, 4) == PALINDROMIC_NONCYCLIC
    assert classify_kind(1, 4) == CYCLIC
    assert classify_kind(3, 4) == CYCLIC
    assert classify_kind(2, 5) == CYCLIC


def test_algebraic_cf_validation():
    field, omega = gaussian_period_field(17, 4)
    with pytest.raises(InputError):
        AlgebraicCF(field, (field.one(), omega))
    with pytest.raises(InputError):
        AlgebraicCF(field, (omega, omega, omega, omega))
    with pytest.raises(InputError):
        AlgebraicCF(field, (field.one(), omega, omega + 1, omega * omega))


def test_identity_is_dirichlet():
    cf, _ = quartic_fraction()
    report = is_symmetry(cf, ImmutableMatrix.eye(4))
    assert report.kind == DIRICHLET
    assert report.shift == 1
    assert report.permutation == (1, 2, 3, 4)
    assert report.proper


def test_not_a_symmetry():
    cf, _ = quartic_fraction()
    G = matrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert is_symmetry(cf, G) is None
    with pytest.raises(InputError):
        is_symmetry(cf, matrix([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0],
                                [0, 0, 0, 1]]))


def test_symmetry_matrix_roundtrip():
    cf, omega = quartic_fraction()
    rng = random.Random(4)
    for j in (1, 2, 3):
        u = random_unit(rng, omega)
        G = symmetry_matrix(cf, u, j)
        report = is_symmetry(cf, G)
        assert report.sigma_power == j
        assert report.mus[0] == u
        assert report.permutation == tuple((i + j) % 4 + 1 for i in range(4))
    assert is_symmetry(cf, symmetry_matrix(cf, omega, 2)).kind == \
        PALINDROMIC_NONCYCLIC


def test_symmetry_matrix_not_integral():
    cf, omega = quartic_fraction()
    with pytest.raises(InputError):
        symmetry_matrix(cf, omega / 2, 1)


def test_properness_three_ways_quartic():
    """properness ⇔ charpoly(G) = x⁴ − 1 ⇔ G⁴ = I on cyclic symmetries
    built from units.
    """
    cf, omega = quartic_fraction()
    rng = random.Random(11)
    for _ in range(100):
        G = symmetry_matrix(cf, random_unit(rng, omega), rng.choice((1, 3)))
        report = is_symmetry(cf, G)
        assert report.kind == CYCLIC
        proper = properness(report, G)
        assert proper == (charpoly(G).as_expr() == x ** 4 - 1)
        assert proper == (G ** 4 == ImmutableMatrix.eye(4))


def test_properness_quadratic():
    cf, theta = quadratic_fraction()
    for e in range(-3, 4):
        for sign in (1, -1):
            G = symmetry_matrix(cf, theta ** e * sign, 1)
            report = is_symmetry(cf, G)
            proper = properness(report, G)
            assert proper == (e % 2 == 0)
            assert proper == (G ** 2 == ImmutableMatrix.eye(2))
    # G·(1, θ) = −θ·σ(1, θ) and N(−θ) = −1
    G = matrix([[0, -1], [1, 0]])
    report = is_symmetry(cf, G)
    assert report is not None
    assert report.mu_product == -1
    assert not properness(report, G)


def test_properness_cross_check_detects_mismatch():
    cf, theta = quadratic_fraction()
    G = symmetry_matrix(cf, theta, 1)
    report = is_symmetry(cf, G)
    with pytest.raises(InternalError):
        properness(report, ImmutableMatrix.eye(2))


def test_invariant_subspaces_of_proper_symmetries():
    cf, omega = quartic_fraction()
    rng = random.Random(12)
    for _ in range(10):
        G = symmetry_matrix(cf, random_unit(rng, omega), rng.choice((1, 3)))
        split = invariant_split(G)
        assert G * split.l_plus == split.l_plus
        assert G * split.l_minus == -split.l_minus
        for w in split.L:
            assert G * G * w == -w


def test_fixed_ray():
    G1 = matrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, -1, -1, -1]])
    assert fixed_ray(G1) == vector([1, 0, 0, 0])
    with pytest.raises(PreconditionError):
        fixed_ray(ImmutableMatrix.eye(3))


def test_commutes_presymmetry():
    A = matrix([[2, 1], [1, 1]])
    assert commutes_presymmetry(A, ImmutableMatrix.eye(2))
    assert commutes_presymmetry(A, A)
    assert not commutes_presymmetry(A, matrix([[0, 1], [1, 0]]))


def test_ray_field_coordinate():
    cf, theta = quadratic_fraction()
    xi = theta * 3 - 1
    # r = Σ σ^i(ξ)·σ^i(v) is rational, hence its coordinates are too
    r = []
    for k in range(2):
        component = xi * cf.alphas[k] + apply_sigma(xi * cf.alphas[k], 1)
        assert component.is_rational
        r.append(component.coords[0])
    assert ray_field_coordinate(cf, vector(r)) == xi
    assert cone_signs(cf, vector(r)) == tuple(
        -s for s in cone_signs(cf, vector([-e for e in r])))


def test_operator_must_be_hyperbolic():
    cf, theta = quadratic_fraction()
    A = symmetry_matrix(cf, theta, 0)
    assert A == matrix([[0, 1], [1, -1]])
    assert AlgebraicCF(cf.field, cf.alphas, A).A == A
    # identity and its negative fix every line but are not hyperbolic
    for bad in (ImmutableMatrix.eye(2), -ImmutableMatrix.eye(2),
                matrix([[1, 1], [0, 1]]), 2 * A):
        with pytest.raises(InputError):
            AlgebraicCF(cf.field, cf.alphas, bad)


def test_symmetries_commute_with_operator_conjugates():
    cf, theta = quadratic_fraction()
    cf = AlgebraicCF(cf.field, cf.alphas, symmetry_matrix(cf, theta, 0))
    for e in range(-2, 3):
        for sign in (1, -1):
            for j in (0, 1):
                G = symmetry_matrix(cf, theta ** e * sign, j)
                assert is_symmetry(cf, G) is not None
                assert commutes_presymmetry(cf.A, G)


def test_fixed_ray_of_proper_symmetry_avoids_eigenhyperplanes():
    cf, omega = quartic_fraction()
    rng = random.Random(13)
    proper_count = 0
    for _ in range(10):
        G = symmetry_matrix(cf, random_unit(rng, omega), rng.choice((1, 3)))
        if not properness(is_symmetry(cf, G), G):
            continue
        proper_count += 1
        r = fixed_ray(G)
        assert G * r == r
        signs = cone_signs(cf, r)
        assert len(signs) == 4
        assert all(s in (1, -1) for s in signs)
    assert proper_count


def test_transported():
    cf, omega = quartic_fraction()
    X = matrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    moved = cf.transported(X)
    assert moved.alphas[0] == cf.field.one()
    G = symmetry_matrix(cf, omega, 1)
    report = is_symmetry(moved, X * G * X.inv())
    assert report is not None and report.sigma_power == 1


if __name__ == "__main__":
    test_properness_three_ways_quartic()
    test_properness_quadratic()
    test_symmetry_matrix_roundtrip()
