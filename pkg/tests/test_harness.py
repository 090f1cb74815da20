"""Tests for suite planning, the runner and report rendering."""

import json

import pytest

from errors import NotOrthomodular, UnknownSuite
from harness import GROUPS, VerificationEngine, all_passed, format_reports, format_table, run_suite
from lattice import builtin
from models import CheckReport


def small_engine(lat, **kwargs):
    options = dict(seed=3, max_len=3, samples=2, max_pump=2, workers=2)
    options.update(kwargs)
    return VerificationEngine(lat, **options)


class TestPlan:

    def test_unknown_suite(self, mo2):
        with pytest.raises(UnknownSuite):
            small_engine(mo2).plan('everything')

    def test_explicit_suite_needs_orthomodular(self, o6):
        with pytest.raises(NotOrthomodular):
            small_engine(o6).plan('automata-theorems')

    def test_all_skips_groups_that_need_orthomodular(self, o6):
        groups = {task.group for task in small_engine(o6).plan('all')}
        assert 'automata-theorems' not in groups
        assert 'regex-theorems' not in groups
        assert 'lattice-lemmas' in groups

    def test_all_covers_every_group_on_mo2(self, mo2):
        groups = {task.group for task in small_engine(mo2).plan('all')}
        assert groups == set(GROUPS)

    def test_boolean_equalities_fall_back_to_boolean_lattice(self, mo2):
        tasks = small_engine(mo2).plan('boolean-equalities')
        assert tasks
        assert {task.lattice.name for task in tasks} == {builtin('boolN:3').name}

    def test_counterexamples_run_on_fixed_lattice(self, bool8):
        tasks = small_engine(bool8).plan('counterexamples')
        assert {task.lattice.name for task in tasks} == {builtin('mo2').name}


class TestRun:

    def test_o6_lattice_lemmas_report_orthomodular_failure(self, o6):
        engine = small_engine(o6)
        reports = engine.run_suite('lattice-lemmas')
        failed = [r for r in reports if not r.passed]
        assert [r.check_id for r in failed] == ['lattice.orthomodular']
        assert not all_passed(reports)

        stats = engine.get_stats()
        assert stats['reports'] == len(reports)
        assert stats['failed'] == 1
        assert stats['tasks_failed'] == 0

    def test_reports_are_sorted(self, mo2):
        reports = small_engine(mo2).run_suite('lattice-lemmas')
        assert reports == sorted(reports, key=CheckReport.sort_key)

    def test_counterexamples_pass(self, mo2):
        assert all_passed(small_engine(mo2).run_suite('counterexamples'))

    def test_result_does_not_depend_on_worker_count(self, mo2):
        one = run_suite('pumping', mo2, seed=11, max_len=3, samples=4, max_pump=2, workers=1)
        many = run_suite('pumping', mo2, seed=11, max_len=3, samples=4, max_pump=2, workers=4)
        assert [r.to_dict() for r in one] == [r.to_dict() for r in many]

    def test_same_seed_same_reports(self, mo2):
        first = small_engine(mo2, seed=5).run_suite('automata-theorems')
        second = small_engine(mo2, seed=5).run_suite('automata-theorems')
        assert [r.to_dict() for r in first] == [r.to_dict() for r in second]


class TestFormat:

    @pytest.fixture
    def reports(self, mo2):
        x, y = mo2.elem('x'), mo2.elem('y')
        return [
            CheckReport.compare('demo.ok', 'first', 0, mo2, x, mo2.one),
            CheckReport.compare('demo.bad', 'second', 1, mo2, x, y, witness='w=ab'),
        ]

    def test_table(self, reports):
        text = format_table(reports)
        lines = text.splitlines()
        assert lines[-1] == '1/2 passed'
        assert any(line.startswith('FAIL demo.bad#1 [second]: w=ab') for line in lines)
        assert lines[1].startswith('ok')

    def test_json_lines(self, reports):
        lines = format_reports(reports, 'json').splitlines()
        assert len(lines) == 2
        decoded = json.loads(lines[1])
        assert decoded['check_id'] == 'demo.bad'
        assert decoded['lhs'] == 'x' and decoded['rhs'] == 'y'
        assert decoded['passed'] is False

    def test_unknown_format(self, reports):
        with pytest.raises(ValueError):
            format_reports(reports, 'csv')

    def test_empty_table(self):
        assert format_table([]).splitlines()[-1] == '0/0 passed'
