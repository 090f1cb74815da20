"""Shared fixtures: builtin lattices, settings reset and small canonical automata."""

import pytest
from hypothesis import HealthCheck, settings

from automata import make_automaton
from config import Settings, configure
from languages import Alphabet
from lattice import builtin

# default_settings only resets global config, so sharing it across examples is fine.
settings.register_profile('omlq', suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile('omlq')


@pytest.fixture(autouse=True)
def default_settings():
    configure(Settings())
    yield
    configure(Settings())


@pytest.fixture
def mo2():
    return builtin('mo2')


@pytest.fixture
def lantern():
    return builtin('chinese_lantern')


@pytest.fixture
def bool2():
    return builtin('bool2')


@pytest.fixture
def bool8():
    return builtin('boolN:3')


@pytest.fixture
def o6():
    return builtin('o6')


@pytest.fixture
def unary():
    return Alphabet(('a',))


@pytest.fixture
def binary():
    return Alphabet(('a', 'b'))


def elems(lat, *names):
    return tuple(lat.elem(n) for n in names)


@pytest.fixture
def a_star(bool2, unary):
    """Crisp two-state automaton accepting a*: q0 is initial and terminal, q1 is a dead sink."""
    one = bool2.one
    return make_automaton(bool2, unary, ['q0', 'q1'], {'q0': one}, {'q0': one},
                          [('q0', 'a', 'q0', one), ('q1', 'a', 'q1', one)])


@pytest.fixture
def fork(mo2, unary):
    """q0 -a/x-> q1 and q0 -a/y-> q2 with both ends terminal."""
    one = mo2.one
    x, y = elems(mo2, 'x', 'y')
    return make_automaton(mo2, unary, ['q0', 'q1', 'q2'], {'q0': one}, {'q1': one, 'q2': one},
                          [('q0', 'a', 'q1', x), ('q0', 'a', 'q2', y)])
