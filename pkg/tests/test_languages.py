"""Tests for ℓ-valued languages and their pointwise and rational operations."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as strat

from errors import AlphabetMismatch, ErasingImageUnbounded, NotFiniteRange, NotFiniteSupport, ValidationError
from languages import (
    Alphabet,
    Derived,
    FiniteTable,
    bounded_values,
    complement,
    concat,
    equiv_degree_bounded,
    format_word,
    image,
    intersect,
    kleene_star,
    membership_degree,
    parse_word,
    preimage,
    scalar,
    thresholds,
    union,
    words_up_to,
)
from lattice import builtin
from logic import ImplKind

from conftest import elems

MO2 = builtin('mo2')
AB = Alphabet(('a', 'b'))


def table(lat, alphabet, **entries):
    """Table from keyword entries; '_' separates symbols and 'eps' is the empty word."""
    words = {(): lat.elem(v) for k, v in entries.items() if k == 'eps'}
    words.update({tuple(k.split('_')): lat.elem(v) for k, v in entries.items() if k != 'eps'})
    return FiniteTable(lat, alphabet, words)


class TestWords:
    @pytest.mark.parametrize('symbols', [(), ('a', 'a'), ('@eps',), ('a b',), ('',)])
    def test_bad_alphabets(self, symbols):
        with pytest.raises(ValidationError):
            Alphabet(symbols)

    def test_parse_and_format(self, binary):
        assert parse_word('a b a', binary) == ('a', 'b', 'a')
        assert parse_word('') == ()
        assert format_word(('a', 'b')) == 'a b'
        with pytest.raises(AlphabetMismatch):
            parse_word('a c', binary)

    def test_words_up_to(self, binary):
        words = list(words_up_to(binary, 2))
        assert len(words) == 7
        assert words[0] == () and words[1] == ('a',) and words[-1] == ('b', 'b')
        assert len(list(words_up_to(binary, 2, min_len=1))) == 6

    def test_evaluate_checks_alphabet(self, binary):
        with pytest.raises(AlphabetMismatch):
            table(MO2, binary, a='x').evaluate(('c',))


class TestFiniteTable:
    def test_zero_entries_dropped(self, binary):
        lang = table(MO2, binary, a='x', b='0')
        assert lang.entries == {('a',): MO2.elem('x')}
        assert lang(('b', 'b')) == MO2.zero

    def test_range_contains_zero(self, binary):
        lang = table(MO2, binary, a='x', b_b='1')
        assert set(lang.range_values()) == {MO2.zero, MO2.elem('x'), MO2.one}

    def test_support_order(self, binary):
        lang = table(MO2, binary, b_a='x', b='y', eps='1')
        assert lang.support == ((), ('b',), ('b', 'a'))

    def test_derived_without_range(self, binary):
        lang = Derived(MO2, binary, lambda w: MO2.one, 'everything')
        with pytest.raises(NotFiniteRange):
            lang.range_values()


class TestPointwise:
    def test_scalar_and_complement(self, binary):
        x, xp, y = elems(MO2, 'x', "x'", 'y')
        lang = table(MO2, binary, a='x', b='1')
        assert scalar(y, lang)(('b',)) == y
        assert scalar(y, lang)(('a',)) == MO2.zero
        comp = complement(lang)
        assert comp(('a',)) == xp
        assert comp(()) == MO2.one
        assert set(comp.range_values()) == {MO2.one, xp, MO2.zero}

    def test_union_and_intersect(self, binary):
        x, y = elems(MO2, 'x', 'y')
        left = table(MO2, binary, a='x')
        right = table(MO2, binary, a='y', b='y')
        assert union(left, right)(('a',)) == MO2.one
        assert intersect(left, right)(('a',)) == MO2.zero
        assert union(left, right)(('b',)) == y

    def test_mismatched_operands(self, binary, unary, lantern):
        with pytest.raises(AlphabetMismatch):
            union(table(MO2, binary, a='x'), table(MO2, unary, a='x'))
        with pytest.raises(ValidationError):
            intersect(table(MO2, binary, a='x'), table(lantern, binary, a='p-'))


class TestRational:
    def test_concat(self, binary):
        x = MO2.elem('x')
        lang = concat(table(MO2, binary, a='x'), table(MO2, binary, b='x'))
        assert lang(('a', 'b')) == x
        assert lang(('a',)) == MO2.zero
        assert lang(('b', 'a')) == MO2.zero

    def test_star_empty_word_is_one(self, binary):
        assert kleene_star(table(MO2, binary))(()) == MO2.one

    def test_star_joins_factorizations(self, unary):
        x = MO2.elem('x')
        lang = kleene_star(table(MO2, unary, a='x', a_a='y'))
        assert lang(('a',)) == x
        assert lang(('a', 'a')) == MO2.one
        assert kleene_star(table(MO2, unary, a='x'))(('a', 'a', 'a')) == x


class TestHomomorphisms:
    def test_preimage(self, binary):
        lang = table(MO2, binary, a_b='x')
        pre = preimage({'c': ('a', 'b')}, lang)
        assert pre(('c',)) == MO2.elem('x')
        assert pre(('c', 'c')) == MO2.zero
        with pytest.raises(AlphabetMismatch):
            preimage({'c': ('z',)}, lang)

    def test_non_erasing_image(self, binary):
        target = Alphabet(('c',))
        img = image({'a': ('c',), 'b': ('c',)}, table(MO2, binary, a='x', b='y'), target)
        assert img(('c',)) == MO2.one
        assert img(()) == MO2.zero
        assert not img.approximate

    def test_erasing_image_is_approximate(self, binary):
        target = Alphabet(('c',))
        h = {'a': (), 'b': ('c',)}
        img = image(h, table(MO2, binary, a_b='x'), target)
        assert img(('c',)) == MO2.elem('x')
        assert img.approximate
        assert img.describe().endswith('(approximate from below)')
        with pytest.raises(ErasingImageUnbounded):
            image(h, table(MO2, binary, a_b='x'), target, exact=True)


class TestThresholds:
    def test_levels(self, binary):
        x = MO2.elem('x')
        cuts = thresholds(table(MO2, binary, a='x', b='1'), x)
        assert ('b',) in cuts.down and ('a',) not in cuts.down
        assert cuts.down.is_finite
        assert () in cuts.up and ('a',) not in cuts.up and ('b',) not in cuts.up
        assert not cuts.up.is_finite
        assert cuts.clamp.entries == {('b',): MO2.one}

    def test_needs_table(self, binary):
        lang = Derived(MO2, binary, lambda w: MO2.one, 'everything')
        with pytest.raises(NotFiniteSupport):
            thresholds(lang, MO2.one)


class TestDegrees:
    def test_equiv_degree(self, binary):
        left = table(MO2, binary, a='x')
        assert equiv_degree_bounded(left, left, ImplKind.SASAKI3, 3) == MO2.one
        assert equiv_degree_bounded(left, table(MO2, binary, a='y'), ImplKind.SASAKI3, 3) == MO2.zero
        assert equiv_degree_bounded(left, table(MO2, binary, a='x', b_b_b='1'), ImplKind.SASAKI3, 2) == MO2.one
        with pytest.raises(ValueError):
            equiv_degree_bounded(left, left, ImplKind.SASAKI3, -1)

    def test_bounded_values(self, binary):
        assert bounded_values(table(MO2, binary, a='x', a_a='y'), 1) == (MO2.zero, MO2.elem('x'))

    def test_membership_degree(self, binary):
        x, y = elems(MO2, 'x', 'y')
        lang = table(MO2, binary, a='x')
        assert membership_degree(lang, ('a',), x, ImplKind.SASAKI3) == MO2.one
        assert membership_degree(lang, ('a',), y, ImplKind.SASAKI3) == MO2.ortho(y)


_values = strat.sampled_from(MO2.elem_names)
_tables = strat.dictionaries(strat.sampled_from(['eps', 'a', 'b', 'a_b', 'b_b']), _values, max_size=4)


@settings(max_examples=50, deadline=None)
@given(left=_tables, right=_tables)
def test_union_and_intersect_commute(left, right):
    a, b = table(MO2, AB, **left), table(MO2, AB, **right)
    for word in words_up_to(AB, 2):
        assert union(a, b)(word) == union(b, a)(word)
        assert intersect(a, b)(word) == intersect(b, a)(word)
        assert complement(complement(a))(word) == a(word)
