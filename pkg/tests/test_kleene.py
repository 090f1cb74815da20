"""Tests for regular expressions, their syntax and Kleene representations."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as strat

from automata import make_automaton
from config import Settings, configure
from errors import AlphabetMismatch, CrossLattice, DocumentError, ValidationError
from generators import random_automaton, random_regex
from kleene import (
    RegexFactory,
    delta_gamma,
    format_regex,
    kleene_representation,
    lambda_closure,
    lambda_set,
    parse_regex,
    regex_from_ast,
    regex_hom,
    regex_language,
    regex_to_ast,
    regex_to_dag,
    resolve_pivot_order,
)
from languages import Alphabet, words_up_to
from lattice import builtin

from conftest import elems

MO2 = builtin('mo2')
AB = Alphabet(('a', 'b'))


@pytest.fixture
def rf():
    return RegexFactory(MO2, AB)


class TestFactory:
    def test_hash_consing(self, rf):
        assert rf.sym('a') is rf.sym('a')
        assert rf.concat(rf.sym('a'), rf.sym('b')) is rf.concat(rf.sym('a'), rf.sym('b'))
        size = len(rf)
        rf.union(rf.sym('a'), rf.sym('b'))
        rf.union(rf.sym('a'), rf.sym('b'))
        assert len(rf) == size + 1

    def test_unknown_symbol(self, rf):
        with pytest.raises(AlphabetMismatch):
            rf.sym('c')

    def test_factories_do_not_mix(self, rf):
        other = RegexFactory(MO2, AB)
        with pytest.raises(CrossLattice):
            rf.union(rf.sym('a'), other.sym('a'))

    def test_word_and_union_all(self, rf):
        assert rf.word(()) is rf.eps()
        assert rf.word(('a', 'b')).to_text() == 'a.b'
        assert rf.union_all([]) is rf.empty()


class TestEvaluation:
    def test_atoms(self, rf):
        assert rf.empty().evaluate(()) == MO2.zero
        assert rf.eps().evaluate(()) == MO2.one
        assert rf.eps().evaluate(('a',)) == MO2.zero
        assert rf.sym('a').evaluate(('a',)) == MO2.one
        assert rf.sym('a').evaluate(('b',)) == MO2.zero

    def test_scalar_and_star(self, rf):
        x = MO2.elem('x')
        r = parse_regex(rf, '(<x>a)*')
        assert r.evaluate(()) == MO2.one
        assert r.evaluate(('a', 'a')) == x
        assert r.evaluate(('b',)) == MO2.zero

    def test_union_and_concat(self, rf):
        r = parse_regex(rf, "<x>a.b + <y>a b")
        assert r.evaluate(('a', 'b')) == MO2.one
        assert r.evaluate(('a',)) == MO2.zero

    def test_star_over_non_distributive_values(self, rf):
        r = parse_regex(rf, '(<x>a + <y>a a)*')
        assert r.evaluate(('a', 'a')) == MO2.one
        assert regex_language(r)(('a',)) == MO2.elem('x')

    def test_word_outside_alphabet(self, rf):
        with pytest.raises(AlphabetMismatch):
            rf.sym('a').evaluate(('c',))


class TestSyntax:
    def test_juxtaposition_is_concat(self, rf):
        assert parse_regex(rf, 'a b') is parse_regex(rf, 'a.b')

    def test_precedence(self, rf):
        r = parse_regex(rf, '<x>a* + b')
        assert r.op == 'union'
        assert r.children[0].op == 'scalar'
        assert r.children[0].children[0].op == 'star'
        assert format_regex(r) == '<x>a* + b'

    def test_special_atoms(self, rf):
        assert parse_regex(rf, '@') is rf.eps()
        assert parse_regex(rf, '%0') is rf.empty()
        assert format_regex(rf.concat(rf.sym('a'), rf.union(rf.sym('b'), rf.eps()))) == 'a.(b + @)'

    @pytest.mark.parametrize('text', ['a +', 'c', '<z>a', '(a', 'a)', '<x a', '*', ''])
    def test_errors(self, rf, text):
        with pytest.raises(DocumentError):
            parse_regex(rf, text)

    def test_error_reports_column(self, rf):
        with pytest.raises(DocumentError, match='column 5'):
            parse_regex(rf, 'a + c')


class TestDocuments:
    def test_ast(self, rf):
        r = parse_regex(rf, '<x>(a + b)*.a')
        doc = regex_to_ast(r)
        assert doc['op'] == 'concat'
        assert doc['left']['op'] == 'scalar' and doc['left']['value'] == 'x'
        assert regex_from_ast(rf, doc) is r

    def test_dag_shares_nodes(self, rf):
        a = rf.sym('a')
        r = rf.union(rf.concat(a, a), a)
        dag = regex_to_dag(r)
        assert len(dag['nodes']) == 3
        assert regex_from_ast(rf, dag) is r

    def test_bad_documents(self, rf):
        with pytest.raises(DocumentError, match=r'\$\.left'):
            regex_from_ast(rf, {'op': 'concat', 'left': {'op': 'sym', 'symbol': 'z'}, 'right': {'op': 'eps'}})
        with pytest.raises(DocumentError):
            regex_from_ast(rf, {'op': 'plus'})
        with pytest.raises(DocumentError, match='defined before'):
            regex_from_ast(rf, {'root': 1, 'nodes': [{'id': 0, 'op': 'star', 'children': [1]},
                                                     {'id': 1, 'op': 'eps'}]})
        with pytest.raises(DocumentError, match='children'):
            regex_from_ast(rf, {'root': 0, 'nodes': [{'id': 0, 'op': 'union', 'children': []}]})


class TestStructure:
    def test_lambda_sets(self, rf):
        x, y = elems(MO2, 'x', 'y')
        r = parse_regex(rf, '<x>a + <y>b')
        assert lambda_set(r) == tuple(sorted((x, y)))
        assert delta_gamma(r) == MO2.zero
        assert lambda_closure(parse_regex(rf, '<x>a')) == tuple(sorted((MO2.zero, x, MO2.one)))
        assert delta_gamma(rf.sym('a')) == MO2.one

    def test_regex_hom(self, rf):
        target = RegexFactory(MO2, Alphabet(('c', 'd')))
        r = parse_regex(rf, '<x>a.b')
        image = regex_hom({'a': ('c', 'd'), 'b': ()}, r, target)
        assert image.evaluate(('c', 'd')) == MO2.elem('x')
        assert image.to_text() == '<x>(c.d).@'
        with pytest.raises(AlphabetMismatch):
            regex_hom({'a': ('c',)}, r, target)
        with pytest.raises(CrossLattice):
            regex_hom({'a': ('c',), 'b': ('d',)}, r, RegexFactory(builtin('bool2'), Alphabet(('c', 'd'))))


class TestKleeneRepresentation:
    def test_pivot_orders(self, fork):
        assert resolve_pivot_order(fork, 'decl') == ('q0', 'q1', 'q2')
        assert resolve_pivot_order(fork, 'q2, q0, q1') == ('q2', 'q0', 'q1')
        assert resolve_pivot_order(fork, ['q1', 'q0', 'q2']) == ('q1', 'q0', 'q2')
        with pytest.raises(ValidationError):
            resolve_pivot_order(fork, 'q0,q1')

    def test_pivot_order_from_settings(self, mo2, unary):
        m = make_automaton(mo2, unary, ['b', 'a'], {'b': mo2.one}, {'a': mo2.one}, [('b', 'a', 'a', mo2.one)])
        configure(Settings(pivot_order='lex'))
        assert resolve_pivot_order(m) == ('a', 'b')

    def test_stages(self, fork):
        rep = kleene_representation(fork)
        assert len(rep.stages) == len(fork.states) + 1
        assert rep.alpha('q0', 'q0', 0).evaluate(()) == fork.lattice.one
        assert rep.alpha('q0', 'q1').evaluate(('a',)) == fork.lattice.elem('x')
        with pytest.raises(ValueError):
            rep.alpha('q0', 'q0', 7)

    def test_fork_and_a_star(self, fork, a_star):
        for m in (fork, a_star):
            rep = kleene_representation(m)
            for word in words_up_to(m.alphabet, 4):
                assert rep.evaluate(word) == m.rec(word)

    def test_factory_must_match(self, fork):
        with pytest.raises(CrossLattice):
            kleene_representation(fork, factory=RegexFactory(MO2, AB))


@settings(max_examples=50, deadline=None)
@given(seed=strat.integers(0, 10 ** 6))
def test_format_parse_roundtrip(seed):
    rf = RegexFactory(MO2, AB)
    r = random_regex(random.Random(seed), rf)
    assert parse_regex(rf, format_regex(r)) is r


@settings(max_examples=30, deadline=None)
@given(seed=strat.integers(0, 10 ** 6), order=strat.sampled_from(['decl', 'lex']))
def test_kleene_matches_rec_on_boolean_values(seed, order):
    lat = builtin('boolN:3')
    m = random_automaton(random.Random(seed), lat)
    rep = kleene_representation(m, order)
    for word in words_up_to(m.alphabet, 3):
        assert rep.evaluate(word) == m.rec(word)
