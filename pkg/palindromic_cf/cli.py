"""Command-line interface.

    palindromic-cf construct --n 4 [--with-A --bound B --workers W]
    palindromic-cf check-symmetry --cf cf.json --g g.json
    palindromic-cf classify4 --cf cf.json --g g.json
    palindromic-cf class-example --i 3 [--seed 7]
    palindromic-cf sail2d P D Q
    palindromic-cf canonical

JSON goes to stdout and diagnostics to stderr. Exit codes: 0 success,
1 negative verification, 2 invalid input, 3 resource cap, 4 internal error.
"""
import argparse
import logging
import random
import sys
from pygments import highlight
from pygments.formatters import TerminalFormatter
from pygments.lexers import JsonLexer
from . import settings, __version__
from .errors import InputError, PalindromicError
from .serialization import (case_certificate_to_json, cf_from_json, cf_to_json,
                            dumps, matrix_from_json, matrix_to_json,
                            palindrome_certificate_to_json, read_json_file,
                            report_to_json, trace_report_to_json)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 4
CLASS_EXAMPLE_PRIME = 17


def emit(data, stream=None):
    stream = stream or sys.stdout
    text = dumps(data)
    if stream.isatty():
        text = highlight(text, JsonLexer(), TerminalFormatter()).rstrip('\n')
    print(text, file=stream)


def _load_cf(path):
    data = read_json_file(path)
    if isinstance(data, dict) and 'cf' in data:
        data = data['cf']
    return cf_from_json(data)


def _load_matrix(path):
    data = read_json_file(path)
    if isinstance(data, dict):
        if 'G' not in data:
            raise InputError(f'{path} holds neither a matrix nor a "G" entry')
        data = data['G']
    return matrix_from_json(data, square=True, integer=True)


def cmd_construct(args) -> int:
    from .palindrome_construct import construct_palindromic
    if args.workers is not None:
        settings.max_workers = args.workers
    certificate = construct_palindromic(args.n, with_A=args.with_A,
                                        bound=args.bound)
    certificate.verify()
    emit(palindrome_certificate_to_json(certificate))
    return EXIT_OK


def cmd_check_symmetry(args) -> int:
    from .cf_core import is_symmetry, properness
    cf = _load_cf(args.cf)
    G = _load_matrix(args.g)
    report = is_symmetry(cf, G)
    if report is None:
        emit({'result': 'not-a-symmetry'})
        return 1
    properness(report, G)
    emit(report_to_json(report))
    return EXIT_OK


def cmd_classify4(args) -> int:
    from .classifier4 import classify_fraction
    cf = _load_cf(args.cf)
    G = _load_matrix(args.g)
    certificate, normalized = classify_fraction(cf, G)
    data = case_certificate_to_json(certificate)
    data['normalized_cf'] = cf_to_json(normalized)
    emit(data)
    return EXIT_OK


def cmd_class_example(args) -> int:
    from .classifier4 import canonical_matrix, conjugated_instance, \
        make_class_example
    from .numberfield import gaussian_period_field
    field, omega = gaussian_period_field(CLASS_EXAMPLE_PRIME, 4)
    if args.seed is None:
        cf = make_class_example(args.i, field, omega)
        G = canonical_matrix(args.i)
    else:
        cf, G, _ = conjugated_instance(args.i, random.Random(args.seed),
                                       field, omega)
    emit({'cf': cf_to_json(cf), 'G': matrix_to_json(G)})
    return EXIT_OK


def cmd_sail2d(args) -> int:
    from .sail2d import QuadraticSurd, check_trace_criterion
    surd = QuadraticSurd(args.P, args.D, args.Q)
    if not surd.is_canonical:
        surd = surd.canonical()
        logger.info(f'rescaled to canonical form {surd}')
    emit(trace_report_to_json(check_trace_criterion(surd)))
    return EXIT_OK


def cmd_canonical(args) -> int:
    from .classifier4 import canonical_matrices
    emit([{'case': i, 'G': matrix_to_json(G)}
          for i, G in enumerate(canonical_matrices(), start=1)])
    return EXIT_OK


def _int_at_least(minimum):
    def parse(value):
        try:
            n = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f'{value!r} is not an integer')
        if n < minimum:
            raise argparse.ArgumentTypeError(f'must be at least {minimum}, got {n}')
        return n
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='palindromic-cf',
        description='Palindromic multidimensional continued fractions')
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='overrides the log_level setting')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('construct', help='palindromic fraction for dimension N')
    p.add_argument('--n', type=_int_at_least(2), required=True, metavar='N')
    p.add_argument('--with-A', dest='with_A', action='store_true',
                   help='also search a hyperbolic operator')
    p.add_argument('--bound', type=_int_at_least(1), default=None, metavar='B')
    p.add_argument('--workers', type=_int_at_least(1), default=None, metavar='W')
    p.set_defaults(func=cmd_construct)

    for name, func, text in (
            ('check-symmetry', cmd_check_symmetry, 'symmetry report for G'),
            ('classify4', cmd_classify4, 'canonical form of a proper cyclic symmetry')):
        p = sub.add_parser(name, help=text)
        p.add_argument('--cf', required=True, metavar='CF_JSON')
        p.add_argument('--g', required=True, metavar='G_JSON')
        p.set_defaults(func=func)

    p = sub.add_parser('class-example', help='fraction of class i with G_i')
    p.add_argument('--i', type=int, required=True, choices=range(1, 8), metavar='I')
    p.add_argument('--seed', type=int, default=None, metavar='S',
                   help='conjugate by a random unimodular matrix')
    p.set_defaults(func=cmd_class_example)

    p = sub.add_parser('sail2d', help='periodic expansion of (P + sqrt D)/Q')
    p.add_argument('P', type=int)
    p.add_argument('D', type=int)
    p.add_argument('Q', type=int)
    p.set_defaults(func=cmd_sail2d)

    p = sub.add_parser('canonical', help='the seven canonical matrices')
    p.set_defaults(func=cmd_canonical)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.log_level is not None:
        settings.log_level = args.log_level
    logging.getLogger().setLevel(settings.log_level)
    try:
        return args.func(args)
    except PalindromicError as e:
        logger.error(f'{type(e).__name__}: {e}')
        return e.exit_code
    except Exception:
        logger.exception('unexpected failure')
        return EXIT_INTERNAL
