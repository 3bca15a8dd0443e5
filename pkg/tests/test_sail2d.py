import pytest
from sympy import Rational
from palindromic_cf.errors import InputError, PreconditionError
from palindromic_cf.numberfield import apply_sigma, gaussian_period_field
from palindromic_cf.palindrome_construct import construct_palindromic
from palindromic_cf.sail2d import (PeriodicCF, QuadraticSurd,
                                   check_trace_criterion, convergents, expand,
                                   find_non_palindromic, is_palindromic_period,
                                   surd_from_quadratic, trace_criterion_scan)


def test_expand_examples():
    cases = {(0, 2, 1): ((1,), (2,)),
             (1, 5, 2): ((), (1,)),
             (0, 3, 1): ((1,), (1, 2)),
             (1, 13, 2): ((2,), (3,)),
             (4, 37, 7): ((), (1, 2, 3))}
    for (P, D, Q), (preperiod, period) in cases.items():
        cf = expand(QuadraticSurd(P, D, Q))
        assert cf.preperiod == preperiod
        assert cf.period == period


def test_expand_negative_surd():
    # (3 + √5)/(−2) = −(3 + √5)/2
    cf = expand(QuadraticSurd(3, 5, -2))
    assert cf.preperiod == (-3, 2)
    assert cf.period == (1,)


def test_surd_validation():
    with pytest.raises(InputError):
        QuadraticSurd(1, 4, 1)
    with pytest.raises(InputError):
        QuadraticSurd(1, 2, 0)
    with pytest.raises(PreconditionError):
        expand(QuadraticSurd(1, 2, 3))


def test_canonical():
    s = QuadraticSurd(1, 2, 3)
    assert not s.is_canonical
    c = s.canonical()
    assert c.is_canonical
    assert c == QuadraticSurd(3, 18, 9)
    assert (c.value - s.value).simplify() == 0


def test_is_palindromic_period():
    assert is_palindromic_period(PeriodicCF((), (2,)))
    assert is_palindromic_period(PeriodicCF((), (1, 2)))
    assert is_palindromic_period(PeriodicCF((1,), (1, 1, 2, 1, 1, 2)))
    assert not is_palindromic_period(PeriodicCF((), (1, 2, 3)))
    assert not is_palindromic_period(PeriodicCF((), (1, 1, 2, 2, 3)))
    # no rotation of (1, 2) is a palindrome, but its reversal is a rotation
    assert is_palindromic_period(PeriodicCF((), (2, 1)))
    assert is_palindromic_period(PeriodicCF((), (1, 2, 2)))
    assert check_trace_criterion(QuadraticSurd(0, 3, 1)).as_pair() == (True, True)


def test_check_trace_criterion():
    assert check_trace_criterion(QuadraticSurd(0, 2, 1)).as_pair() == (True, True)
    assert check_trace_criterion(QuadraticSurd(1, 13, 2)).as_pair() == (True, True)
    report = check_trace_criterion(QuadraticSurd(4, 37, 7))
    assert report.trace == Rational(8, 7)
    assert report.as_pair() == (False, False)


def test_convergents_of_sqrt2():
    cf = expand(QuadraticSurd(0, 2, 1))
    assert convergents(cf, 4) == [1, Rational(3, 2), Rational(7, 5), Rational(17, 12)]


def test_convergents_approach_value():
    for s in (QuadraticSurd(0, 2, 1), QuadraticSurd(4, 37, 7),
              QuadraticSurd(3, 5, -2), QuadraticSurd(1, 13, 2)):
        cf = expand(s)
        for k in range(1, 4):
            count = len(cf.preperiod) + k * len(cf.period)
            approximation = convergents(cf, count)[-1]
            assert abs(s.value - approximation) < Rational(1, approximation.q ** 2)


def test_periods_are_minimal():
    for s in trace_criterion_scan(60):
        period = expand(s).period
        n = len(period)
        for d in range(1, n):
            if n % d == 0:
                assert period != period[:d] * (n // d)


def test_trace_criterion_forward():
    surds = trace_criterion_scan(200)
    assert surds
    for s in surds:
        assert s.trace in (0, 1)
        report = check_trace_criterion(s)
        assert report.trace_criterion
        assert report.palindromic


def test_find_non_palindromic():
    report = find_non_palindromic(200)
    assert report is not None
    assert not report.palindromic
    assert not report.trace_criterion


def test_surd_from_quadratic():
    field, theta = gaussian_period_field(5, 2)
    assert surd_from_quadratic(theta, 1) == QuadraticSurd(-1, 5, 2)
    assert surd_from_quadratic(theta, 0) == QuadraticSurd(1, 5, -2)
    with pytest.raises(PreconditionError):
        surd_from_quadratic(field.from_rational(3), 0)


def test_constructed_quadratic_fraction_is_palindromic():
    certificate = construct_palindromic(2)
    alpha1 = certificate.cf.alphas[1]
    assert alpha1 == -certificate.cf.field.theta() - 2
    for embedding in (0, 1):
        s = surd_from_quadratic(alpha1, embedding)
        assert is_palindromic_period(expand(s))
    assert alpha1 * apply_sigma(alpha1, 1) == certificate.cf.field.one()


if __name__ == "__main__":
    test_expand_examples()
    test_is_palindromic_period()
    test_convergents_of_sqrt2()
    test_trace_criterion_forward()
    test_find_non_palindromic()
