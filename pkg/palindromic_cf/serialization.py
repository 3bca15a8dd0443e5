"""JSON codecs for the public types.

Rationals are strings "p/q" (or "p" when q = 1), matrices are arrays of
row arrays, polynomials are little-endian coefficient arrays. All numbers are
emitted as strings so that big integers survive any JSON reader.
"""
import json
import logging
from pathlib import Path
import chardet
from sympy import ImmutableMatrix, Poly, Rational
from . import settings
from .cf_core import AlgebraicCF, SymmetryReport
from .errors import InputError
from .exactmath import matrix, to_rational, x
from .numberfield import CyclicField, FieldElement
logger = logging.getLogger(__name__)


def rational_to_json(r) -> str:
    r = Rational(r)
    return str(r.p) if r.q == 1 else f'{r.p}/{r.q}'


def rational_from_json(value) -> Rational:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InputError(f'expected a rational string, got {value!r}')
    try:
        return to_rational(value)
    except (TypeError, ValueError) as e:
        raise InputError(f'not a rational number: {value!r}') from e


def matrix_to_json(M) -> list[list[str]]:
    M = ImmutableMatrix(M)
    return [[rational_to_json(M[i, j]) for j in range(M.cols)]
            for i in range(M.rows)]


def matrix_from_json(rows, square: bool = False,
                     integer: bool = False) -> ImmutableMatrix:
    if not isinstance(rows, list) or not rows or \
            not all(isinstance(r, list) for r in rows):
        raise InputError('a matrix must be a nonempty array of row arrays')
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise InputError('matrix rows have inconsistent lengths')
    M = matrix([[rational_from_json(e) for e in r] for r in rows])
    if square and M.rows != M.cols:
        raise InputError(f'expected a square matrix, got {M.rows}x{M.cols}')
    if integer and not all(e.is_Integer for e in M):
        raise InputError('expected an integer matrix')
    return M


def vector_to_json(v) -> list[str]:
    return [rational_to_json(e) for e in v]


def poly_to_json(P: Poly) -> list[str]:
    return [rational_to_json(c) for c in reversed(P.all_coeffs())]


def poly_from_json(coeffs) -> Poly:
    if not isinstance(coeffs, list) or len(coeffs) < 2:
        raise InputError('a polynomial must be an array of at least two coefficients')
    values = [rational_from_json(c) for c in coeffs]
    if values[-1] == 0:
        raise InputError('leading coefficient is zero')
    if all(v.is_Integer for v in values):
        values = [int(v) for v in values]
    return Poly(list(reversed(values)), x)


def field_to_json(field: CyclicField) -> dict:
    return {'degree': field.degree,
            'minpoly': poly_to_json(field.minpoly),
            'sigma': matrix_to_json(field.sigma)}


def field_from_json(data) -> CyclicField:
    if not isinstance(data, dict) or not {'minpoly', 'sigma'} <= data.keys():
        raise InputError('a field needs "minpoly" and "sigma"')
    field = CyclicField(poly_from_json(data['minpoly']),
                        matrix_from_json(data['sigma'], square=True))
    if 'degree' in data and int(data['degree']) != field.degree:
        raise InputError(f'declared degree {data["degree"]} differs from {field.degree}')
    return field.validate()


def element_to_json(a: FieldElement) -> list[str]:
    return [rational_to_json(c) for c in a.coords]


def element_from_json(field: CyclicField, coords) -> FieldElement:
    if not isinstance(coords, list):
        raise InputError('a field element is an array of coordinates')
    return field.element([rational_from_json(c) for c in coords])


def cf_to_json(cf: AlgebraicCF) -> dict:
    data = {'field': field_to_json(cf.field),
            'alphas': [element_to_json(a) for a in cf.alphas]}
    if cf.A is not None:
        data['A'] = matrix_to_json(cf.A)
    return data


def cf_from_json(data) -> AlgebraicCF:
    if not isinstance(data, dict) or not {'field', 'alphas'} <= data.keys():
        raise InputError('a fraction needs "field" and "alphas"')
    field = field_from_json(data['field'])
    alphas = tuple(element_from_json(field, a) for a in data['alphas'])
    A = data.get('A')
    if A is not None:
        A = matrix_from_json(A, square=True, integer=True)
    return AlgebraicCF(field, alphas, A)


def report_to_json(report: SymmetryReport) -> dict:
    return {'shift': report.shift,
            'permutation': list(report.permutation),
            'mus': [element_to_json(mu) for mu in report.mus],
            'kind': report.kind,
            'proper': report.proper,
            'mu_product': rational_to_json(report.mu_product)}


def report_from_json(field: CyclicField, data) -> SymmetryReport:
    try:
        return SymmetryReport(
            shift=int(data['shift']),
            mus=tuple(element_from_json(field, mu) for mu in data['mus']),
            kind=str(data['kind']),
            proper=bool(data['proper']),
            mu_product=rational_from_json(data['mu_product']))
    except (KeyError, TypeError) as e:
        raise InputError(f'malformed symmetry report: {e}') from e


def palindrome_certificate_to_json(certificate) -> dict:
    data = {'n': certificate.n,
            'p': certificate.p,
            'cf': cf_to_json(certificate.cf),
            'H': matrix_to_json(certificate.H),
            'report': report_to_json(certificate.report)}
    if certificate.A is not None:
        data['A'] = matrix_to_json(certificate.A)
    return data


def palindrome_certificate_from_json(data):
    from .palindrome_construct import PalindromeCertificate
    try:
        cf = cf_from_json(data['cf'])
        A = data.get('A')
        return PalindromeCertificate(
            n=int(data['n']), p=int(data['p']), cf=cf,
            H=matrix_from_json(data['H'], square=True, integer=True),
            report=report_from_json(cf.field, data['report']),
            A=None if A is None else matrix_from_json(A, square=True, integer=True))
    except (KeyError, TypeError) as e:
        raise InputError(f'malformed certificate: {e}') from e


def case_certificate_to_json(certificate) -> dict:
    return {'case': certificate.case,
            'matches': list(certificate.matches),
            'z': [vector_to_json(z) for z in certificate.z],
            'basis_tuple': [vector_to_json(b) for b in certificate.basis_tuple],
            'X': matrix_to_json(certificate.X),
            'G_canonical': matrix_to_json(certificate.canonical)}


def case_certificate_from_json(data):
    from .classifier4 import CaseCertificate
    try:
        return CaseCertificate(
            case=int(data['case']),
            z=tuple(matrix_from_json([[e] for e in z]) for z in data['z']),
            basis_tuple=tuple(matrix_from_json([[e] for e in b])
                              for b in data['basis_tuple']),
            X=matrix_from_json(data['X'], square=True, integer=True),
            canonical=matrix_from_json(data['G_canonical'], square=True,
                                       integer=True),
            matches=tuple(int(i) for i in data.get('matches', [])))
    except (KeyError, TypeError) as e:
        raise InputError(f'malformed case certificate: {e}') from e


def trace_report_to_json(report) -> dict:
    s = report.surd
    return {'P': str(s.P), 'D': str(s.D), 'Q': str(s.Q),
            'preperiod': [str(a) for a in report.expansion.preperiod],
            'period': [str(a) for a in report.expansion.period],
            'palindromic': report.palindromic,
            'trace': rational_to_json(report.trace),
            'trace_criterion': report.trace_criterion}


def dumps(data) -> str:
    return json.dumps(data, indent=settings.json_indent, ensure_ascii=False)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f'invalid JSON: {e}') from e


def read_json_file(path: Path | str):
    """Reads a JSON file. The bytes are decoded as UTF-8 when possible and
    otherwise with the encoding chardet guesses.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f'no such file: {path}')
    raw_data = path.read_bytes()
    try:
        text = raw_data.decode('utf-8')
    except UnicodeDecodeError:
        detect_result = chardet.detect(raw_data)
        used_encoding = detect_result['encoding'] or 'utf-8'
        logger.info(f'decoding {path} as {used_encoding}')
        try:
            text = raw_data.decode(used_encoding)
        except (UnicodeDecodeError, LookupError) as e:
            raise InputError(f'cannot decode {path}: {e}') from e
    return loads(text)
