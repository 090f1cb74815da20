"""Tests for JSON document loading and writing."""

import json

import pytest

from errors import BadOrthocomplement, DocumentError, UnknownBuiltin
from documents import (
    automaton_document,
    automaton_from_document,
    homomorphism_from_document,
    language_document,
    language_from_document,
    lattice_ref,
    load_automaton,
    load_language,
    load_lattice,
    load_regex,
    read_json,
    regex_document,
    regex_from_document,
    write_json,
)
from kleene import RegexFactory, parse_regex
from languages import EPSILON, Alphabet, FiniteTable
from lattice import builtin, product_lattice

MO2_DOC = {
    'lattice': 'builtin:mo2',
    'alphabet': ['a'],
    'states': ['q0', 'q1', 'q2'],
    'initial': {'q0': '1'},
    'terminal': {'q1': '1', 'q2': '1'},
    'delta': [['q0', 'a', 'q1', 'x'], ['q0', 'a', 'q2', 'y']],
}


def dump(path, doc):
    path.write_text(json.dumps(doc), encoding='utf-8')
    return str(path)


class TestFiles:
    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_json(tmp_path / 'absent.json')

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"lattice": ', encoding='utf-8')
        with pytest.raises(DocumentError, match='Invalid JSON'):
            read_json(path)

    def test_write_json(self, tmp_path):
        out = tmp_path / 'out.json'
        text = write_json({'a': 1}, str(out))
        assert json.loads(out.read_text(encoding='utf-8')) == {'a': 1}
        assert text == write_json({'a': 1})


class TestLattices:
    def test_builtin_ref(self):
        assert load_lattice('builtin:mo2') is builtin('mo2')
        with pytest.raises(UnknownBuiltin):
            load_lattice('builtin:nope')

    def test_inline_and_file(self, tmp_path, lantern):
        doc = lantern.to_document()
        assert load_lattice(doc) == lantern
        name = dump(tmp_path / 'lantern.json', doc)
        assert load_lattice(name) == lantern
        assert load_lattice('lantern.json', base=tmp_path) == lantern

    def test_bad_inline_lattice(self):
        doc = {'name': 'broken', 'elements': ['0', '1'], 'leq': [['0', '1']], 'ortho': {'0': '0', '1': '1'}}
        with pytest.raises(BadOrthocomplement, match=r'^\$\.lattice'):
            load_lattice(doc, where='$.lattice')
        with pytest.raises(DocumentError):
            load_lattice({'name': 'x', 'elements': ['0']})

    def test_lattice_ref(self, mo2):
        assert lattice_ref(mo2) == 'builtin:mo2'
        prod = product_lattice(builtin('bool2'), mo2, name='custom')
        assert lattice_ref(prod)['name'] == 'custom'


class TestLanguages:
    def test_entries(self, tmp_path, mo2):
        doc = {'lattice': 'builtin:mo2', 'alphabet': ['a', 'b'],
               'entries': [{'word': [], 'value': 'x'}, {'word': 'a b', 'value': "y'"}]}
        lang = load_language(dump(tmp_path / 'lang.json', doc))
        assert lang(()) == mo2.elem('x')
        assert lang(('a', 'b')) == mo2.elem("y'")
        assert language_document(lang)['entries'][1] == {'word': ['a', 'b'], 'value': "y'"}

    @pytest.mark.parametrize('entries, where', [
        ([{'word': ['c'], 'value': 'x'}], r'\$\.entries\[0\]\.word'),
        ([{'word': ['a'], 'value': 'z'}], r'\$\.entries\[0\]\.value'),
        ([{'word': ['a'], 'value': 'x'}, {'word': 'a', 'value': 'y'}], r'\$\.entries\[1\]\.word'),
        ([{'value': 'x'}], r'\$\.entries\[0\]'),
    ])
    def test_bad_entries(self, entries, where):
        doc = {'lattice': 'builtin:mo2', 'alphabet': ['a', 'b'], 'entries': entries}
        with pytest.raises(DocumentError, match=where):
            language_from_document(doc)

    def test_table_document_keeps_builtin_ref(self, mo2, unary):
        doc = language_document(FiniteTable(mo2, unary, {('a',): mo2.one}))
        assert doc['lattice'] == 'builtin:mo2'


class TestAutomata:
    def test_load(self, tmp_path, mo2):
        m = load_automaton(dump(tmp_path / 'fork.json', MO2_DOC))
        assert m.rec(('a',)) == mo2.one
        assert automaton_document(m)['delta'] == MO2_DOC['delta']

    def test_epsilon_document(self, mo2):
        doc = dict(MO2_DOC, delta=[['q0', EPSILON, 'q1', 'x']])
        m = automaton_from_document(doc)
        assert m.has_epsilon
        assert m.rec(()) == mo2.elem('x')

    @pytest.mark.parametrize('change, where', [
        ({'states': 'q0'}, r'\$\.states'),
        ({'initial': {'q9': '1'}}, r'\$\.initial\.q9'),
        ({'terminal': {'q1': 'z'}}, r'\$\.terminal\.q1'),
        ({'delta': [['q0', 'a', 'q9', 'x']]}, r'\$\.delta\[0\]\[2\]'),
        ({'delta': [['q0', 'b', 'q1', 'x']]}, r'\$\.delta\[0\]\[1\]'),
        ({'delta': [['q0', 'a', 'q1']]}, r'\$\.delta\[0\]'),
        ({'alphabet': []}, r'\$\.alphabet'),
        ({'states': ['q0', 'q0', 'q1', 'q2']}, r'^\$: '),
    ])
    def test_bad_documents(self, change, where):
        with pytest.raises(DocumentError, match=where):
            automaton_from_document(dict(MO2_DOC, **change))

    def test_lattice_override(self, lantern):
        doc = dict(MO2_DOC, lattice='builtin:chinese_lantern',
                   delta=[['q0', 'a', 'q1', 'p-']])
        assert automaton_from_document(doc, lattice=lantern).rec(('a',)) == lantern.elem('p-')


class TestHomomorphismsAndRegexes:
    def test_homomorphism(self):
        assert homomorphism_from_document({'a': ['c', 'd'], 'b': [], 'e': 'c c'}) == {
            'a': ('c', 'd'), 'b': (), 'e': ('c', 'c'),
        }
        with pytest.raises(DocumentError):
            homomorphism_from_document({})
        with pytest.raises(DocumentError, match=r'\$\.a'):
            homomorphism_from_document({'a': 3})

    def test_regex_document(self, mo2):
        factory = RegexFactory(mo2, Alphabet(('a', 'b')))
        r = parse_regex(factory, '<x>(a + b)*')
        doc = regex_document(r)
        assert doc['text'] == '<x>(a + b)*'
        again = regex_from_document(doc)
        assert again.to_text() == r.to_text()
        text_only = {key: doc[key] for key in ('lattice', 'alphabet', 'text')}
        assert regex_from_document(text_only).to_text() == r.to_text()

    def test_load_regex(self, tmp_path, mo2):
        factory = RegexFactory(mo2, Alphabet(('a', 'b')))
        r = parse_regex(factory, 'a.b*')
        path = dump(tmp_path / 'r.json', regex_document(r)['ast'])
        assert load_regex(path, factory) is r
        assert load_regex('a b*', factory) is r
