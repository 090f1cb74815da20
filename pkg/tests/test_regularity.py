"""Tests for witness automata and witness-valued regularity clauses."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as strat

from automata import make_automaton
from errors import NotFiniteRange, ValidationError
from generators import random_automaton, random_table
from languages import Alphabet, Derived, FiniteTable, complement, thresholds, words_up_to
from lattice import builtin
from logic import ImplKind
from regularity import (
    decompose_by_range,
    equiv_with_witness,
    level_automaton,
    reg_lower_bound,
    reg_witness,
    scaled_automaton,
    scaled_witnesses,
    table_automaton,
    universal_automaton,
    witness_bounds,
)

MO2 = builtin('mo2')
SASAKI = ImplKind.SASAKI3


@pytest.fixture
def crisp_star(mo2, unary):
    one = mo2.one
    return make_automaton(mo2, unary, ['q'], {'q': one}, {'q': one}, [('q', 'a', 'q', one)])


@pytest.fixture
def single(mo2, unary):
    """The table {a: x}."""
    return FiniteTable(mo2, unary, {('a',): mo2.elem('x')})


class TestWitnessAutomata:
    def test_table_automaton(self, mo2, binary):
        x, y = mo2.elem('x'), mo2.elem('y')
        lang = FiniteTable(mo2, binary, {(): y, ('a', 'b'): x, ('a',): mo2.one})
        m = table_automaton(lang)
        for word in words_up_to(binary, 3):
            assert m.rec(word) == lang(word)

    def test_empty_table(self, mo2, unary):
        m = table_automaton(FiniteTable(mo2, unary, {}))
        assert m.states == ('empty',)
        assert m.rec(('a',)) == mo2.zero

    def test_scaled(self, crisp_star, mo2):
        x = mo2.elem('x')
        scaled = scaled_automaton(crisp_star, x)
        assert scaled.rec(()) == x
        assert scaled.rec(('a', 'a')) == x
        assert scaled_automaton(crisp_star, x, scale_terminal=False).rec(()) == mo2.one

    def test_scaling_needs_crisp(self, fork, mo2):
        with pytest.raises(ValidationError):
            scaled_automaton(fork, mo2.elem('x'))

    def test_universal(self, mo2, binary):
        y = mo2.elem('y')
        m = universal_automaton(mo2, binary, y)
        assert {m.rec(w) for w in words_up_to(binary, 3)} == {y}
        assert m.value_range() == frozenset({y})
        assert universal_automaton(mo2, binary, y, scale_terminal=False).value_range() == frozenset({y, mo2.one})

    def test_scaled_witnesses(self, crisp_star, mo2):
        assert len(scaled_witnesses(crisp_star, list(mo2.elements()))) == mo2.size

    def test_level_automaton(self, fork, mo2):
        level = level_automaton(fork, mo2.one)
        assert level.is_deterministic() and level.is_crisp()
        assert level.rec(('a',)) == mo2.one
        assert level.rec(()) == mo2.zero
        assert level.rec(('a', 'a')) == mo2.zero


class TestDecomposition:
    def test_table(self, mo2, binary):
        lang = FiniteTable(mo2, binary, {('a',): mo2.elem('x'), ('b', 'b'): mo2.elem('x'), (): mo2.elem('y')})
        m = decompose_by_range(lang)
        for word in words_up_to(binary, 3):
            assert m.rec(word) == lang(word)

    def test_automaton(self, fork):
        m = decompose_by_range(fork.language())
        for word in words_up_to(fork.alphabet, 3):
            assert m.rec(word) == fork.rec(word)

    def test_derived(self, single, mo2, unary):
        with pytest.raises(ValidationError):
            decompose_by_range(complement(single))
        with pytest.raises(NotFiniteRange):
            decompose_by_range(Derived(mo2, unary, lambda w: mo2.one, 'everything'))


class TestClauses:
    def test_own_witness(self, single):
        m = table_automaton(single)
        assert equiv_with_witness(single, m, SASAKI) == MO2.one
        assert reg_witness(single, m, SASAKI, commutative=True) == MO2.one
        assert reg_witness(single, m, SASAKI, deterministic=True) == MO2.zero

    def test_universal_witness(self, single, unary):
        xp = MO2.elem("x'")
        m = universal_automaton(MO2, unary, MO2.elem('x'))
        assert witness_bounds(single, m, SASAKI, max_len=3) == (xp, xp)
        assert equiv_with_witness(single, m, SASAKI) == xp

    def test_commutator_gate(self, single, unary):
        m = universal_automaton(MO2, unary, MO2.elem('y'))
        assert reg_witness(single, m, SASAKI) == MO2.zero
        assert reg_witness(single, m, SASAKI, commutative=True) == MO2.zero

    def test_lower_bound_joins_clauses(self, single, unary):
        witnesses = [universal_automaton(MO2, unary, MO2.elem('y')), table_automaton(single)]
        assert reg_lower_bound(single, witnesses, SASAKI) == MO2.one
        assert reg_lower_bound(single, [], SASAKI) == MO2.zero

    def test_derived_language_uses_certified_bound(self, single, unary):
        lang = Derived(MO2, unary, single.evaluate, 'copy of {a: x}', known_range=single.range_values())
        # every range value is paired with every rec value, not only the achieved pairs
        m = table_automaton(single)
        assert equiv_with_witness(lang, m, SASAKI) == MO2.elem("x'")


@settings(max_examples=40, deadline=None)
@given(seed=strat.integers(0, 10 ** 6))
def test_witness_bounds_bracket_the_exact_degree(seed):
    rng = random.Random(seed)
    alphabet = Alphabet(('a', 'b'))
    lang = random_table(rng, MO2, alphabet, max_len=2)
    m = random_automaton(rng, MO2, alphabet, n_states=2)
    lower, upper = witness_bounds(lang, m, SASAKI, max_len=4)
    exact = equiv_with_witness(lang, m, SASAKI)
    assert MO2.leq(lower, exact)
    assert MO2.leq(exact, upper)
    for word in words_up_to(alphabet, 3):
        assert table_automaton(lang).rec(word) == lang(word)


class TestThresholdClamp:
    def test_dropped_word_costs_its_level(self, binary):
        x = MO2.elem('x')
        lang = FiniteTable(MO2, binary, {('a',): x, ('b',): MO2.one})
        clamp = thresholds(lang, x).clamp
        assert clamp.entries == {('b',): MO2.one}
        assert reg_witness(lang, table_automaton(clamp), SASAKI) == MO2.ortho(x)

    def test_nothing_dropped_at_zero(self, binary):
        lang = FiniteTable(MO2, binary, {('a',): MO2.elem('y'), ('a', 'b'): MO2.one})
        clamp = thresholds(lang, MO2.zero).clamp
        assert reg_witness(lang, table_automaton(clamp), SASAKI) == MO2.one

    @settings(max_examples=40, deadline=None)
    @given(seed=strat.integers(0, 10 ** 6), name=strat.sampled_from(['mo2', 'chinese_lantern']),
           impl=strat.sampled_from(list(ImplKind)))
    def test_clamp_witness_reaches_ortho_level(self, seed, name, impl):
        lat = builtin(name)
        rng = random.Random(seed)
        lang = random_table(rng, lat, Alphabet(('a', 'b')), max_len=2)
        for level in range(lat.size):
            m = table_automaton(thresholds(lang, level).clamp)
            assert lat.leq(lat.ortho(level), reg_witness(lang, m, impl))
