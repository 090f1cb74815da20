"""Tests for lattice-valued automata and the automaton constructions."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as strat

from automata import (
    EpsAutomaton,
    LAutomaton,
    complement_det,
    concat_aut,
    determinize,
    eps_reduce,
    equiv_degree_exact,
    fold_aut,
    hom_image_aut,
    hom_preimage_aut,
    inverse_aut,
    joint_value_pairs,
    make_automaton,
    product_aut,
    union_aut,
)
from config import Settings, configure
from errors import (
    AlphabetMismatch,
    MalformedPath,
    NotDeterministic,
    StateBlowup,
    UnexpectedEpsilon,
    ValidationError,
)
from generators import random_automaton
from languages import EPSILON, Alphabet, concat, words_up_to
from lattice import builtin
from logic import ImplKind

from conftest import elems


@pytest.fixture
def merge(mo2, unary):
    """Two paths x and y that meet in q3 before a final x' edge; rec(aaa) = 0 but the vector gives x'."""
    one = mo2.one
    x, xp, y = elems(mo2, 'x', "x'", 'y')
    return make_automaton(mo2, unary, ['q0', 'q1', 'q2', 'q3', 'q4'], {'q0': one}, {'q4': one}, [
        ('q0', 'a', 'q1', x), ('q0', 'a', 'q2', y),
        ('q1', 'a', 'q3', one), ('q2', 'a', 'q3', one),
        ('q3', 'a', 'q4', xp),
    ])


@pytest.fixture
def chain(mo2, binary):
    """q0 -a/x-> q1 -b-> q2, recognising 'a b' to degree x."""
    one, x = mo2.one, mo2.elem('x')
    return make_automaton(mo2, binary, ['q0', 'q1', 'q2'], {'q0': one}, {'q2': one},
                          [('q0', 'a', 'q1', x), ('q1', 'b', 'q2', one)])


class TestConstruction:
    def test_duplicate_states(self, mo2, unary):
        with pytest.raises(ValidationError):
            LAutomaton(mo2, unary, ['q', 'q'], {}, {}, [])

    def test_unknown_symbol(self, mo2, unary):
        with pytest.raises(AlphabetMismatch):
            LAutomaton(mo2, unary, ['q'], {}, {}, [('q', 'b', 'q', mo2.one)])

    def test_unknown_state(self, mo2, unary):
        with pytest.raises(ValidationError):
            LAutomaton(mo2, unary, ['q'], {'r': mo2.one}, {}, [])

    def test_epsilon_needs_eps_automaton(self, mo2, unary):
        edge = ('q', EPSILON, 'r', mo2.one)
        with pytest.raises(UnexpectedEpsilon):
            LAutomaton(mo2, unary, ['q', 'r'], {}, {}, [edge])
        assert isinstance(make_automaton(mo2, unary, ['q', 'r'], {}, {}, [edge]), EpsAutomaton)

    def test_repeated_edges_join(self, mo2, unary):
        x, y = elems(mo2, 'x', 'y')
        m = LAutomaton(mo2, unary, ['q'], {}, {}, [('q', 'a', 'q', x), ('q', 'a', 'q', y)])
        assert m.value('q', 'a', 'q') == mo2.one
        assert m.edges() == [('q', 'a', 'q', mo2.one)]


class TestRecognition:
    def test_fork(self, fork, mo2):
        assert fork.rec(()) == mo2.zero
        assert fork.rec(('a',)) == mo2.one
        assert fork.rec(('a', 'a')) == mo2.zero
        assert fork.rec_table(2) == {(): mo2.zero, ('a',): mo2.one, ('a', 'a'): mo2.zero}

    def test_paths(self, fork, mo2):
        found = dict(fork.paths(('a',)))
        assert found == {('q0', 'q1'): mo2.elem('x'), ('q0', 'q2'): mo2.elem('y')}
        assert fork.rec_paths(('a',)) == mo2.one

    def test_rec_checks_alphabet(self, fork):
        with pytest.raises(AlphabetMismatch):
            fork.rec(('b',))

    def test_vector_recurrence_overshoots(self, merge, mo2):
        word = ('a', 'a', 'a')
        assert merge.rec(word) == mo2.zero
        assert merge.rec_paths(word) == mo2.zero
        assert merge.rec_vector(word) == mo2.elem("x'")

    def test_path_value(self, chain, mo2):
        assert chain.path_value(['q0', 'a', 'q1', 'b', 'q2']) == mo2.elem('x')
        assert chain.path_value(['q1']) == mo2.one
        assert chain.path_value(['q0', 'b', 'q1']) == mo2.zero

    @pytest.mark.parametrize('path', [
        ['q0', 'a'],
        ['q0', 'a', 'q9'],
        ['q0', 'c', 'q1'],
        ['q0', EPSILON, 'q1'],
    ])
    def test_malformed_paths(self, chain, path):
        with pytest.raises(MalformedPath):
            chain.path_value(path)

    def test_value_range(self, fork, mo2):
        assert fork.value_range() == frozenset({mo2.zero, mo2.one})

    def test_structure(self, fork, a_star, mo2):
        assert fork.atoms() == tuple(sorted({mo2.zero, mo2.one, *elems(mo2, 'x', 'y')}))
        assert fork.gamma_atoms() == mo2.zero
        assert not fork.is_deterministic()
        assert a_star.is_deterministic() and a_star.is_crisp()

    def test_to_dot(self, chain):
        source = chain.to_dot().source
        assert 'doublecircle' in source
        assert 'a/x' in source


class TestConstructions:
    def test_determinize_follows_vector(self, merge, mo2):
        d = determinize(merge)
        assert d.is_deterministic()
        assert d.rec(('a', 'a', 'a')) == mo2.elem("x'")
        assert d.rec(('a',)) == merge.rec(('a',))

    def test_determinize_state_cap(self, merge):
        configure(Settings(max_states=2))
        with pytest.raises(StateBlowup):
            determinize(merge)

    def test_eps_reduce(self, mo2, unary):
        one, x = mo2.one, mo2.elem('x')
        m = make_automaton(mo2, unary, ['q0', 'q1', 'q2'], {'q0': one}, {'q2': one},
                           [('q0', EPSILON, 'q1', x), ('q1', 'a', 'q2', one)])
        reduced = eps_reduce(m)
        assert not reduced.has_epsilon
        assert reduced.states == m.states
        assert m.rec(('a',)) == reduced.rec(('a',)) == x
        assert reduced.rec(()) == mo2.zero
        with pytest.raises(UnexpectedEpsilon):
            determinize(m)

    def test_union_and_product(self, fork, chain, mo2):
        x = mo2.elem('x')
        assert union_aut(fork, fork).rec(('a',)) == mo2.one
        assert union_aut(fork, fork).states[0] == '1.q0'
        single = make_automaton(mo2, fork.alphabet, ['p0', 'p1'], {'p0': mo2.one}, {'p1': mo2.one},
                                [('p0', 'a', 'p1', x)])
        assert product_aut(fork, single).rec(('a',)) == x
        with pytest.raises(AlphabetMismatch):
            union_aut(fork, chain)

    def test_concat_and_fold(self, a_star, bool2):
        both = concat_aut(a_star, a_star)
        assert both.rec(()) == bool2.one
        assert both.rec(('a', 'a')) == bool2.one
        folded = fold_aut(a_star)
        assert folded.states[0] == "q0'"
        assert folded.rec(()) == bool2.one
        assert folded.rec(('a', 'a', 'a')) == bool2.one

    def test_fold_of_fork(self, fork, mo2):
        folded = fold_aut(fork)
        assert folded.rec(()) == mo2.one
        assert folded.rec(('a',)) == mo2.one

    def test_inverse(self, chain, mo2):
        rev = inverse_aut(chain)
        assert rev.rec(('b', 'a')) == mo2.elem('x')
        assert rev.rec(('a', 'b')) == mo2.zero

    def test_complement_det(self, a_star, fork, bool2):
        comp = complement_det(a_star)
        assert comp.rec(()) == bool2.zero
        assert comp.rec(('a', 'a')) == bool2.zero
        with pytest.raises(NotDeterministic):
            complement_det(fork)

    def test_hom_preimage(self, a_star, bool2):
        pre = hom_preimage_aut({'c': ('a', 'a')}, a_star)
        assert list(pre.alphabet) == ['c']
        assert pre.rec(('c', 'c')) == bool2.one

    def test_hom_image(self, fork, mo2):
        img = hom_image_aut({'a': ('c', 'd')}, fork, Alphabet(('c', 'd')))
        assert img.rec(('c', 'd')) == mo2.one
        assert img.rec(('c',)) == mo2.zero
        with pytest.raises(AlphabetMismatch):
            hom_image_aut({'b': ('c',)}, fork, Alphabet(('c',)))

    def test_exact_equivalence(self, fork, merge, mo2):
        assert equiv_degree_exact(fork, fork, ImplKind.SASAKI3) == mo2.one
        pairs, depth = joint_value_pairs(merge, determinize(merge))
        assert (mo2.zero, mo2.elem("x'")) in pairs
        assert depth >= 3
        assert equiv_degree_exact(merge, determinize(merge), ImplKind.SASAKI3) != mo2.one


_seeds = strat.integers(0, 10 ** 6)


@settings(max_examples=40, deadline=None)
@given(seed=_seeds, lattice=strat.sampled_from(['mo2', 'chinese_lantern']))
def test_frontier_matches_paths_and_vector_bounds(seed, lattice):
    lat = builtin(lattice)
    m = random_automaton(random.Random(seed), lat)
    d = determinize(m)
    for word in words_up_to(m.alphabet, 3):
        value = m.rec(word)
        assert value == m.rec_paths(word)
        assert lat.leq(value, m.rec_vector(word))
        assert d.rec(word) == m.rec_vector(word)


@settings(max_examples=40, deadline=None)
@given(seed=_seeds)
def test_constructions_on_boolean_values(seed):
    lat = builtin('boolN:3')
    rng = random.Random(seed)
    m1 = random_automaton(rng, lat, Alphabet(('a', 'b')))
    m2 = random_automaton(rng, lat, Alphabet(('a', 'b')))
    union, product = union_aut(m1, m2), product_aut(m1, m2)
    joined = concat_aut(m1, m2)
    expected = concat(m1.language(), m2.language())
    for word in words_up_to(m1.alphabet, 3):
        assert union.rec(word) == lat.join(m1.rec(word), m2.rec(word))
        assert product.rec(word) == lat.meet(m1.rec(word), m2.rec(word))
        assert joined.rec(word) == expected(word)


@settings(max_examples=40, deadline=None)
@given(seed=_seeds)
def test_eps_reduce_never_lowers(seed):
    lat = builtin('mo2')
    m = random_automaton(random.Random(seed), lat, Alphabet(('a',)), epsilon=True)
    reduced = eps_reduce(m)
    for word in words_up_to(m.alphabet, 4):
        assert lat.leq(m.rec(word), reduced.rec(word))
