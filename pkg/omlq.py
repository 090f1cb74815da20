#!/usr/bin/env python3
"""
omlq - Automata and regular expressions with values in an orthomodular lattice.

Load lattices, automata, languages and regexes from JSON documents, run the
constructions on them, and verify the accompanying theory with seeded
property suites.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from automata import (LAutomaton, concat_aut, determinize, eps_reduce, equiv_degree_exact, fold_aut,
                      hom_preimage_aut, inverse_aut, product_aut, union_aut)
from config import PIVOT_ORDERS, Settings, apply_environment, configure, get_settings, load_config
from documents import (automaton_document, automaton_from_document, language_from_document, load_automaton,
                       load_homomorphism, load_lattice, load_regex, read_json, regex_document, write_json)
from errors import NotOrthomodular, OmlqError
from harness import SUITES, VerificationEngine, all_passed, format_reports
from kleene import RegexFactory, kleene_representation
from languages import Alphabet, FiniteTable, LValuedLanguage, equiv_degree_bounded, parse_word
from lattice import OrthoLattice
from logic import ImplKind
from regularity import reg_witness, table_automaton, witness_bounds

COMMANDS = ('lattice', 'rec', 'determinize', 'eps-reduce', 'compose', 'equiv', 'witness', 'to-regex',
            'regex-eval', 'verify')

COMPOSE_OPS = ('union', 'product', 'concat', 'star', 'inverse', 'hom-preimage')

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERRUPTED = 0, 1, 2, 130


def setup_logging(verbose: bool = False):
    """
    Configure logging for the application.

    Args:
        verbose: Enable verbose (DEBUG) logging
    """
    level = logging.DEBUG if verbose else logging.INFO

    # Diagnostics go to stderr; stdout carries result documents only
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )

    logging.getLogger('graphviz').setLevel(logging.WARNING)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='Path to a JSON configuration file')
    common.add_argument('--impl', type=int, choices=range(6), help='Implication 0-5 (default: 3, Sasaki)')
    common.add_argument('--commutator-cap', type=int, help='Largest element set for commutator computation')
    common.add_argument('--pivot-order', type=str,
                        help=f"State elimination order: {' or '.join(PIVOT_ORDERS)} or a comma-separated list")
    common.add_argument('--format', choices=('json', 'table'), default='json', help='Output format')
    common.add_argument('-o', '--output', type=str, help='Write the result here instead of stdout')
    common.add_argument('--verbose', action='store_true', help='Enable verbose logging')
    return common


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='omlq',
        description='Automata and regular expressions over orthomodular lattices',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s lattice check builtin:mo2
  %(prog)s rec --automaton samples/fork.json --word "a"
  %(prog)s determinize --automaton samples/fork.json -o det.json --emit-dot det.dot
  %(prog)s compose --op product --automaton samples/fork.json --other samples/loop.json
  %(prog)s equiv --left samples/table.json --right samples/loop.json --max-len 4
  %(prog)s to-regex --automaton samples/fork.json --pivot-order lex
  %(prog)s regex-eval --lattice builtin:mo2 --alphabet "a" --regex "<x>a*" --word "a a"
  %(prog)s verify --suite all --lattice builtin:mo2 --seed 7 --max-len 5 --samples 100
        """
    )
    sub = parser.add_subparsers(dest='command', required=True, metavar='{' + ','.join(COMMANDS) + '}')

    lat = sub.add_parser('lattice', parents=[common], help='Validate or print a lattice')
    lat.add_argument('action', choices=('check', 'show', 'commutator'))
    lat.add_argument('ref', help='builtin:<name> or a lattice JSON file')
    lat.add_argument('--elements', nargs='*', default=[], help='Element names for commutator')

    rec = sub.add_parser('rec', parents=[common], help='Evaluate rec(M, s)')
    rec.add_argument('--automaton', required=True)
    rec.add_argument('--word', action='append', default=None,
                     help='Space-separated word; repeatable (default: the empty word)')
    rec.add_argument('--max-len', type=int, help='Print every word up to this length instead')

    for name, text in (('determinize', 'Power-set construction'), ('eps-reduce', 'Remove ε-transitions')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('--automaton', required=True)
        p.add_argument('--emit-dot', type=str, help='Also write a Graphviz DOT file')

    comp = sub.add_parser('compose', parents=[common], help='Combine automata')
    comp.add_argument('--op', required=True, choices=COMPOSE_OPS)
    comp.add_argument('--automaton', required=True)
    comp.add_argument('--other', help='Second automaton for union, product and concat')
    comp.add_argument('--hom', help='Homomorphism JSON for hom-preimage')
    comp.add_argument('--emit-dot', type=str, help='Also write a Graphviz DOT file')

    eq = sub.add_parser('equiv', parents=[common], help='Degree of equivalence of two languages')
    eq.add_argument('--left', required=True, help='Automaton or language table JSON')
    eq.add_argument('--right', required=True, help='Automaton or language table JSON')
    eq.add_argument('--exact', action='store_true', help='Exact degree over all words')
    eq.add_argument('--max-len', type=int, help='Bounded degree over words up to this length')

    wit = sub.add_parser('witness', parents=[common], help='Regularity clause of one witness automaton')
    wit.add_argument('--language', required=True, help='Language table or automaton JSON')
    wit.add_argument('--automaton', required=True, help='Witness automaton JSON')
    wit.add_argument('--commutative', action='store_true')
    wit.add_argument('--deterministic', action='store_true')
    wit.add_argument('--max-len', type=int, help='Horizon of the bounded upper estimate')

    reg = sub.add_parser('to-regex', parents=[common], help='Kleene representation of an automaton')
    reg.add_argument('--automaton', required=True)

    ev = sub.add_parser('regex-eval', parents=[common], help='Evaluate a regex at words')
    ev.add_argument('--lattice', required=True)
    ev.add_argument('--alphabet', required=True, help='Space-separated symbols')
    ev.add_argument('--regex', required=True, help='Regex text or a .json AST file')
    ev.add_argument('--word', action='append', default=None, help='Space-separated word; repeatable')

    ver = sub.add_parser('verify', parents=[common], help='Run a verification suite')
    ver.add_argument('--suite', default='all', choices=SUITES)
    ver.add_argument('--lattice', default='builtin:mo2')
    ver.add_argument('--seed', type=int)
    ver.add_argument('--max-len', type=int)
    ver.add_argument('--samples', type=int)
    ver.add_argument('--max-pump', type=int)
    ver.add_argument('--workers', type=int)

    return parser.parse_args(argv)


def build_settings(args: argparse.Namespace) -> Settings:
    """Defaults < config file < OMLQ_COMMUTATOR_CAP < command-line flags."""
    settings = load_config(args.config) if args.config else Settings()
    settings = apply_environment(settings)
    overrides: Dict[str, Any] = {}
    if args.impl is not None:
        overrides['impl'] = args.impl
    if args.commutator_cap is not None:
        if args.commutator_cap < 1:
            raise ValueError("--commutator-cap must be >= 1")
        overrides['commutator_cap'] = args.commutator_cap
    if args.pivot_order:
        overrides['pivot_order'] = args.pivot_order
    return dataclasses.replace(settings, **overrides)


def _require_orthomodular(lat: OrthoLattice) -> OrthoLattice:
    if not lat.is_orthomodular:
        raise NotOrthomodular(lat.describe_violation())
    return lat


def _automaton(path: str) -> LAutomaton:
    m = load_automaton(path)
    _require_orthomodular(m.lattice)
    return m


def _language(path: str) -> LValuedLanguage:
    """A language table when the document has entries, else the language of an automaton."""
    doc = read_json(path)
    base = Path(path).parent
    if isinstance(doc, dict) and 'entries' in doc:
        lang: LValuedLanguage = language_from_document(doc, base)
    else:
        lang = automaton_from_document(doc, base).language()
    _require_orthomodular(lang.lattice)
    return lang


def _as_automaton(lang: LValuedLanguage) -> LAutomaton:
    if isinstance(lang, FiniteTable):
        return table_automaton(lang)
    return lang.automaton


def _words(raw: Optional[List[str]], alphabet: Alphabet) -> List[tuple]:
    return [parse_word(w, alphabet) for w in (raw or [''])]


def emit(text: str, output: Optional[str] = None):
    """Print text, or write it to output."""
    if output:
        Path(output).write_text(text + '\n', encoding='utf-8')
    else:
        print(text)


def _value_lines(lat: OrthoLattice, rows, fmt: str) -> str:
    if fmt == 'table':
        width = max((len(w) for w, _ in rows), default=0)
        return '\n'.join(f"{(w or '@').ljust(width)}  {lat.elem_names[v]}" for w, v in rows)
    if len(rows) == 1:
        return lat.elem_names[rows[0][1]]
    return write_json({(w or '@'): lat.elem_names[v] for w, v in rows})


def _emit_automaton(m: LAutomaton, args: argparse.Namespace):
    text = write_json(automaton_document(m), args.output)
    if not args.output:
        print(text)
    if getattr(args, 'emit_dot', None):
        Path(args.emit_dot).write_text(m.to_dot().source, encoding='utf-8')


# -- commands -----------------------------------------------------------------------

def cmd_lattice(args: argparse.Namespace, logger: logging.Logger) -> int:
    lat = load_lattice(args.ref)
    if args.action == 'check':
        _require_orthomodular(lat)
        emit(f"{lat.name}: {lat.size} elements, orthomodular, "
             f"{'Boolean' if lat.is_boolean else 'not distributive'}", args.output)
    elif args.action == 'show':
        text = write_json(lat.to_document(), args.output)
        if not args.output:
            print(text)
    else:
        _require_orthomodular(lat)
        elems = [lat.elem(name) for name in args.elements]
        emit(lat.elem_names[lat.commutator(elems)], args.output)
    return EXIT_OK


def cmd_rec(args: argparse.Namespace, logger: logging.Logger) -> int:
    m = _automaton(args.automaton)
    if args.max_len is not None:
        rows = [(' '.join(w), v) for w, v in sorted(m.rec_table(args.max_len).items(),
                                                    key=lambda item: (len(item[0]), item[0]))]
    else:
        rows = [(' '.join(w), m.rec(w)) for w in _words(args.word, m.alphabet)]
    emit(_value_lines(m.lattice, rows, args.format), args.output)
    return EXIT_OK


def cmd_determinize(args: argparse.Namespace, logger: logging.Logger) -> int:
    m = _automaton(args.automaton)
    logger.info(f"Determinizing {m!r}")
    d = determinize(m)
    logger.info(f"Result has {len(d.states)} state(s)")
    _emit_automaton(d, args)
    return EXIT_OK


def cmd_eps_reduce(args: argparse.Namespace, logger: logging.Logger) -> int:
    _emit_automaton(eps_reduce(_automaton(args.automaton)), args)
    return EXIT_OK


def cmd_compose(args: argparse.Namespace, logger: logging.Logger) -> int:
    m = _automaton(args.automaton)
    if args.op in ('union', 'product', 'concat'):
        if not args.other:
            raise ValueError(f"--op {args.op} needs --other")
        other = load_automaton(args.other, lattice=m.lattice)
        build = {'union': union_aut, 'product': product_aut, 'concat': concat_aut}[args.op]
        result = build(m, other)
    elif args.op == 'star':
        result = fold_aut(m)
    elif args.op == 'inverse':
        result = inverse_aut(m)
    else:
        if not args.hom:
            raise ValueError("--op hom-preimage needs --hom")
        result = hom_preimage_aut(load_homomorphism(args.hom), m)
    _emit_automaton(result, args)
    return EXIT_OK


def cmd_equiv(args: argparse.Namespace, logger: logging.Logger) -> int:
    left, right = _language(args.left), _language(args.right)
    impl = ImplKind(get_settings().impl)
    if args.exact:
        value = equiv_degree_exact(_as_automaton(left), _as_automaton(right), impl)
    else:
        max_len = get_settings().verify.max_len if args.max_len is None else args.max_len
        value = equiv_degree_bounded(left, right, impl, max_len)
    emit(left.lattice.elem_names[value], args.output)
    return EXIT_OK


def cmd_witness(args: argparse.Namespace, logger: logging.Logger) -> int:
    lang, m = _language(args.language), _automaton(args.automaton)
    impl = ImplKind(get_settings().impl)
    clause = reg_witness(lang, m, impl, commutative=args.commutative, deterministic=args.deterministic)
    names = m.lattice.elem_names
    if args.format == 'table':
        lower, upper = witness_bounds(lang, m, impl, args.max_len)
        emit(f"clause  {names[clause]}\nlower   {names[lower]}\nupper   {names[upper]}", args.output)
    else:
        emit(names[clause], args.output)
    return EXIT_OK


def cmd_to_regex(args: argparse.Namespace, logger: logging.Logger) -> int:
    m = _automaton(args.automaton)
    rep = kleene_representation(m)
    logger.info(f"Pivot order: {', '.join(rep.pivot_order)}")
    if args.format == 'table':
        emit(rep.regex.to_text(), args.output)
    else:
        text = write_json(regex_document(rep.regex), args.output)
        if not args.output:
            print(text)
    return EXIT_OK


def cmd_regex_eval(args: argparse.Namespace, logger: logging.Logger) -> int:
    lat = _require_orthomodular(load_lattice(args.lattice))
    factory = RegexFactory(lat, Alphabet(tuple(args.alphabet.split())))
    r = load_regex(args.regex, factory)
    rows = [(' '.join(w), r.evaluate(w)) for w in _words(args.word, factory.alphabet)]
    emit(_value_lines(lat, rows, args.format), args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, logger: logging.Logger) -> int:
    lat = load_lattice(args.lattice)
    engine = VerificationEngine(lat, seed=args.seed, max_len=args.max_len, samples=args.samples,
                                max_pump=args.max_pump, workers=args.workers)
    reports = engine.run_suite(args.suite)
    emit(format_reports(reports, args.format), args.output)
    if all_passed(reports):
        logger.info("✓ All checks passed")
        return EXIT_OK
    logger.warning(f"{engine.get_stats()['failed']} check(s) failed")
    return EXIT_FAILED


HANDLERS = {
    'lattice': cmd_lattice,
    'rec': cmd_rec,
    'determinize': cmd_determinize,
    'eps-reduce': cmd_eps_reduce,
    'compose': cmd_compose,
    'equiv': cmd_equiv,
    'witness': cmd_witness,
    'to-regex': cmd_to_regex,
    'regex-eval': cmd_regex_eval,
    'verify': cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = parse_arguments(argv)

    setup_logging(args.verbose)
    logger = logging.getLogger(__name__)

    try:
        configure(build_settings(args))
        return HANDLERS[args.command](args, logger)

    except FileNotFoundError as e:
        logger.error(f"File not found: {str(e)}")
        return EXIT_USAGE

    except (OmlqError, ValueError) as e:
        logger.error(f"{e.__class__.__name__}: {str(e)}")
        return EXIT_USAGE

    except KeyboardInterrupt:
        logger.warning("\n\nInterrupted by user")
        return EXIT_INTERRUPTED

    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}", exc_info=args.verbose)
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
