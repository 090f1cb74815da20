"""Tests for the automaton and regex property checks."""

import dataclasses
import random

import pytest

from generators import palette_size, random_automaton
from lattice import builtin
from models import CheckContext
from theorems import AUTOMATA_CHECKS, BOOLEAN_CHECKS, REGEX_CHECKS, Claim, check_threshold_witness

SMALL = CheckContext(samples=3, max_len=3, zero_bias=0.5)


def failures(checks, lat, ctx):
    out = []
    for index, check in enumerate(checks):
        reports = check(lat, ctx, random.Random(f"test:{index}"))
        assert reports, check.__name__
        out.extend(f"{r.check_id}: {r.lhs_name} {r.relation} {r.rhs_name} ({r.witness})"
                   for r in reports if not r.passed)
    return out


class TestClaim:
    def test_two_sided(self, mo2):
        x = mo2.elem('x')
        claim = Claim('demo', 'inst', mo2, SMALL)
        claim.add(mo2.zero, x, mo2.zero, 'w')
        ids = [r.check_id for r in claim.reports()]
        assert ids == ['demo.upper-bound', 'demo.gated-lower-bound']
        assert all(r.passed for r in claim.reports())

    def test_gated_side_catches_gap(self, mo2):
        claim = Claim('demo', 'inst', mo2, SMALL)
        claim.add(mo2.zero, mo2.elem('x'), mo2.one, 'w')
        upper, gated = claim.reports()
        assert upper.passed and not gated.passed
        assert gated.witness == 'w'

    def test_equality_mode(self, bool8):
        claim = Claim('demo', 'inst', bool8, dataclasses.replace(SMALL, equalities=True))
        claim.add(bool8.zero, bool8.one, bool8.one, 'w')
        (report,) = claim.reports()
        assert report.check_id == 'demo.boolean-equality' and not report.passed


@pytest.mark.parametrize('name', ['mo2', 'chinese_lantern', 'free2'])
def test_automata_checks(name):
    assert failures(AUTOMATA_CHECKS, builtin(name), SMALL) == []


def test_regex_checks():
    assert failures(REGEX_CHECKS, builtin('mo2'), SMALL) == []


def test_boolean_equalities():
    ctx = dataclasses.replace(SMALL, equalities=True)
    assert failures(BOOLEAN_CHECKS, builtin('boolN:3'), ctx) == []


def test_free2_automata_stay_under_commutator_cap():
    free = builtin('free2')
    rng = random.Random('palette')
    for _ in range(10):
        m1 = random_automaton(rng, free, zero_bias=0.2)
        m2 = random_automaton(rng, free, m1.alphabet, zero_bias=0.2)
        inner = {v for v in m1.atoms() if v not in (free.zero, free.one)}
        assert len(inner) <= palette_size()
        free.commutator(set(m1.atoms()) | set(m2.atoms()))


@pytest.mark.parametrize('name', ['mo2', 'chinese_lantern', 'free2'])
def test_threshold_clamp_witness(name):
    (report,) = check_threshold_witness(builtin(name), SMALL, random.Random('clamp'))
    assert report.check_id == 'witness.threshold-clamp'
    assert report.passed, report.witness
    assert report.detail == f"{3 * builtin(name).size} cases"
