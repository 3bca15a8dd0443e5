"""Periodic continued fractions of real quadratic irrationals.

A surd (P + √D)/Q with Q | D − P² expands through the integer recurrence

    a = ⌊(P + √D)/Q⌋,  P' = a·Q − P,  Q' = (D − P'²)/Q

whose states (P, Q) eventually cycle. A number of trace 0 or 1 always has a
period that reads the same backwards after a suitable rotation.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from sympy import Rational, ilcm, sqrt
from .errors import InputError, PreconditionError
from .numberfield import FieldElement
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticSurd:
    P: int
    D: int
    Q: int

    def __post_init__(self):
        if self.Q == 0:
            raise InputError('Q must be nonzero')
        if self.D <= 0 or isqrt(self.D) ** 2 == self.D:
            raise InputError(f'D = {self.D} is not a positive non-square; the surd is rational')

    @property
    def is_canonical(self) -> bool:
        return (self.D - self.P ** 2) % self.Q == 0

    def canonical(self) -> 'QuadraticSurd':
        """Equal surd with Q | D − P², obtained by scaling with |Q|."""
        if self.is_canonical:
            return self
        m = abs(self.Q)
        return QuadraticSurd(self.P * m, self.D * m * m, self.Q * m)

    @property
    def trace(self) -> Rational:
        return Rational(2 * self.P, self.Q)

    @property
    def value(self):
        return (self.P + sqrt(self.D)) / self.Q


@dataclass(frozen=True)
class PeriodicCF:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def partial_quotients(self, count: int) -> list[int]:
        out = list(self.preperiod[:count])
        while len(out) < count:
            out.extend(self.period)
        return out[:count]


def _floor_quotient(P: int, r: int, Q: int) -> int:
    # √D lies strictly between r and r + 1
    if Q > 0:
        return (P + r) // Q
    return (P + r + 1) // Q


def expand(s: QuadraticSurd) -> PeriodicCF:
    if not s.is_canonical:
        raise PreconditionError(f'{s} is not canonical: Q does not divide D − P²')
    r = isqrt(s.D)
    P, Q = s.P, s.Q
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(quotients)
        a = _floor_quotient(P, r, Q)
        quotients.append(a)
        P = a * Q - P
        Q = (s.D - P * P) // Q
    start = seen[(P, Q)]
    return PeriodicCF(tuple(quotients[:start]), tuple(quotients[start:]))


def is_palindromic_period(cf: PeriodicCF) -> bool:
    """True when the reversed period is a cyclic rotation of the period."""
    period = list(cf.period)
    reversed_ = period[::-1]
    return any(reversed_ == period[k:] + period[:k] for k in range(len(period)))


@dataclass(frozen=True)
class TraceReport:
    surd: QuadraticSurd
    expansion: PeriodicCF
    trace: Rational

    @cached_property
    def trace_criterion(self) -> bool:
        return self.trace in (0, 1)

    @cached_property
    def palindromic(self) -> bool:
        return is_palindromic_period(self.expansion)

    def as_pair(self) -> tuple[bool, bool]:
        return self.trace_criterion, self.palindromic


def check_trace_criterion(s: QuadraticSurd) -> TraceReport:
    return TraceReport(s, expand(s), s.trace)


def convergents(cf: PeriodicCF, count: int) -> list[Rational]:
    """The first count convergents p_k/q_k."""
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    out = []
    for a in cf.partial_quotients(count):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Rational(p, q))
    return out


def canonical_surds(max_D: int, max_abs: int | None = None):
    """Canonical surds with D ≤ max_D, ordered by D, then Q, then P. By
    default |P| and |Q| range up to max_D.
    """
    if max_abs is None:
        max_abs = max_D
    for D in range(2, max_D + 1):
        if isqrt(D) ** 2 == D:
            continue
        for Q in range(-max_abs, max_abs + 1):
            if Q == 0:
                continue
            for P in range(-max_abs, max_abs + 1):
                if (D - P * P) % Q == 0:
                    yield QuadraticSurd(P, D, Q)


def trace_criterion_scan(max_D: int) -> list[QuadraticSurd]:
    """Every canonical surd with D ≤ max_D and trace 0 or 1.

    Trace 0 means P = 0 and Q | D; trace 1 means Q = 2P with 2P | D − P².
    """
    found = []
    for D in range(2, max_D + 1):
        if isqrt(D) ** 2 == D:
            continue
        for Q in range(1, D + 1):
            if D % Q == 0:
                found.extend([QuadraticSurd(0, D, Q), QuadraticSurd(0, D, -Q)])
        for P in range(-D, D + 1):
            if P != 0 and (D - P * P) % (2 * P) == 0:
                found.append(QuadraticSurd(P, D, 2 * P))
    logger.info(f'{len(found)} surds of trace 0 or 1 with D <= {max_D}')
    return found


def find_non_palindromic(max_D: int, max_abs: int = 10) -> TraceReport | None:
    for s in canonical_surds(max_D, max_abs):
        report = check_trace_criterion(s)
        if not report.palindromic:
            logger.info(f'non-palindromic period {list(report.expansion.period)} at {s}')
            return report
    return None


def surd_from_quadratic(a: FieldElement, embedding: int) -> QuadraticSurd:
    """a at the given real embedding of its quadratic field (embeddings in
    increasing order of the root of the minimal polynomial).
    """
    field = a.field
    if field.degree != 2:
        raise PreconditionError('surd_from_quadratic needs a quadratic field')
    if embedding not in (0, 1):
        raise PreconditionError(f'embedding index must be 0 or 1, got {embedding}')
    lead, b, c = (Rational(e) for e in field.minpoly.all_coeffs())
    if lead != 1 or not (b.is_integer and c.is_integer):
        raise PreconditionError('minimal polynomial must be monic with integer coefficients')
    if a.is_rational:
        raise PreconditionError('a is rational')
    # θ = (−b ± √Δ)/2 with the smaller root first
    discriminant = int(b * b - 4 * c)
    sign = -1 if embedding == 0 else 1
    n0, n1 = a.coords
    d = ilcm(n0.q, n1.q)
    N0, N1 = int(n0 * d), int(n1 * d)
    P, m, Q = 2 * N0 - N1 * int(b), sign * N1, 2 * d
    if m < 0:
        P, Q, m = -P, -Q, -m
    return QuadraticSurd(P, m * m * discriminant, Q).canonical()

