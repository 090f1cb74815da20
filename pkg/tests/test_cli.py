"""End-to-end tests for the omlq command line."""

import json

import pytest

from documents import load_automaton
from omlq import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main

FORK = {
    'lattice': 'builtin:mo2',
    'alphabet': ['a'],
    'states': ['q0', 'q1', 'q2'],
    'initial': {'q0': '1'},
    'terminal': {'q1': '1', 'q2': '1'},
    'delta': [['q0', 'a', 'q1', 'x'], ['q0', 'a', 'q2', 'y']],
}


@pytest.fixture
def fork_file(tmp_path):
    path = tmp_path / 'fork.json'
    path.write_text(json.dumps(FORK), encoding='utf-8')
    return str(path)


class TestLattice:

    def test_check_orthomodular(self, capsys):
        assert main(['lattice', 'check', 'builtin:mo2']) == EXIT_OK
        assert '6 elements, orthomodular' in capsys.readouterr().out

    def test_check_rejects_o6(self):
        assert main(['lattice', 'check', 'builtin:o6']) == EXIT_USAGE

    def test_unknown_builtin(self):
        assert main(['lattice', 'show', 'builtin:mo9']) == EXIT_USAGE

    def test_commutator(self, capsys):
        assert main(['lattice', 'commutator', 'builtin:mo2', '--elements', 'x', 'y']) == EXIT_OK
        assert capsys.readouterr().out.strip() == '0'

    def test_show(self, capsys):
        assert main(['lattice', 'show', 'builtin:chinese_lantern']) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert len(doc['elements']) == 6


class TestAutomata:

    def test_rec_single_word(self, fork_file, capsys):
        assert main(['rec', '--automaton', fork_file, '--word', 'a']) == EXIT_OK
        assert capsys.readouterr().out.strip() == '1'

    def test_rec_several_words(self, fork_file, capsys):
        assert main(['rec', '--automaton', fork_file, '--word', '', '--word', 'a']) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {'@': '0', 'a': '1'}

    def test_rec_bad_symbol(self, fork_file):
        assert main(['rec', '--automaton', fork_file, '--word', 'b']) == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        assert main(['rec', '--automaton', str(tmp_path / 'absent.json')]) == EXIT_USAGE

    def test_determinize_to_file(self, fork_file, tmp_path):
        out = tmp_path / 'det.json'
        assert main(['determinize', '--automaton', fork_file, '-o', str(out)]) == EXIT_OK
        det = load_automaton(str(out))
        assert det.rec(('a',)) == det.lattice.one

    def test_compose_union(self, fork_file, tmp_path):
        out = tmp_path / 'union.json'
        assert main(['compose', '--op', 'union', '--automaton', fork_file, '--other', fork_file,
                     '-o', str(out)]) == EXIT_OK
        assert len(load_automaton(str(out)).states) == 6

    def test_compose_needs_other(self, fork_file):
        assert main(['compose', '--op', 'product', '--automaton', fork_file]) == EXIT_USAGE

    def test_equiv_with_itself(self, fork_file, capsys):
        assert main(['equiv', '--left', fork_file, '--right', fork_file, '--exact']) == EXIT_OK
        assert capsys.readouterr().out.strip() == '1'

    def test_to_regex_text(self, fork_file, capsys):
        assert main(['to-regex', '--automaton', fork_file, '--format', 'table']) == EXIT_OK
        assert capsys.readouterr().out.strip()


class TestRegex:

    def test_regex_eval(self, capsys):
        assert main(['regex-eval', '--lattice', 'builtin:mo2', '--alphabet', 'a',
                     '--regex', '<x>a*', '--word', 'a a']) == EXIT_OK
        assert capsys.readouterr().out.strip() == 'x'

    def test_syntax_error(self):
        assert main(['regex-eval', '--lattice', 'builtin:mo2', '--alphabet', 'a',
                     '--regex', '(a']) == EXIT_USAGE


class TestVerify:

    def test_counterexamples_pass(self, capsys):
        assert main(['verify', '--suite', 'counterexamples', '--samples', '2', '--max-len', '3']) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines
        assert all(json.loads(line)['passed'] for line in lines)

    def test_o6_lemmas_fail(self, capsys):
        code = main(['verify', '--suite', 'lattice-lemmas', '--lattice', 'builtin:o6',
                     '--samples', '2', '--format', 'table'])
        assert code == EXIT_FAILED
        assert 'FAIL lattice.orthomodular' in capsys.readouterr().out

    def test_explicit_suite_on_o6(self):
        assert main(['verify', '--suite', 'automata-theorems', '--lattice', 'builtin:o6']) == EXIT_USAGE


class TestSettings:

    def test_bad_commutator_cap(self):
        assert main(['lattice', 'check', 'builtin:mo2', '--commutator-cap', '0']) == EXIT_USAGE

    def test_missing_config(self, tmp_path):
        assert main(['lattice', 'check', 'builtin:mo2', '--config', str(tmp_path / 'none.json')]) == EXIT_USAGE

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(['frobnicate'])
