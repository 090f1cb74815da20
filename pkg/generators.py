"""
Seeded random instances for the property suites.

Every task draws from its own random.Random seeded by (seed, group, index),
so results do not depend on scheduling order or worker count.
"""

import random
from typing import Dict, List, Optional, Sequence, Tuple

from automata import LAutomaton, make_automaton
from config import get_settings
from kleene import Regex, RegexFactory
from languages import EPSILON, Alphabet, FiniteTable, Word, words_up_to
from lattice import ElemId, OrthoLattice

ALPHABETS = (Alphabet(('a',)), Alphabet(('a', 'b')))


def task_rng(seed: int, group: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{group}:{index}")


def random_value(rng: random.Random, lat: OrthoLattice, zero_bias: float = 0.5) -> ElemId:
    """0 with probability zero_bias, otherwise uniform over the whole lattice."""
    if rng.random() < zero_bias:
        return lat.zero
    return rng.randrange(lat.size)


def random_alphabet(rng: random.Random) -> Alphabet:
    return rng.choice(ALPHABETS)


def palette_size() -> int:
    """Distinct non-trivial values one automaton may use; two automata together stay under the commutator cap."""
    return max(get_settings().commutator_cap // 2, 1)


def random_palette(rng: random.Random, lat: OrthoLattice) -> Optional[Tuple[ElemId, ...]]:
    """A small value set for lattices too large to draw from directly, else None."""
    inner = [e for e in range(lat.size) if e not in (lat.zero, lat.one)]
    size = palette_size()
    if len(inner) <= size:
        return None
    return tuple(rng.sample(inner, size)) + (lat.one,)


def random_automaton(rng: random.Random, lat: OrthoLattice, alphabet: Optional[Alphabet] = None,
                     n_states: Optional[int] = None, zero_bias: float = 0.5,
                     epsilon: bool = False, crisp: bool = False) -> LAutomaton:
    """
    Random automaton with 2-4 states over a 1- or 2-symbol alphabet.

    Args:
        rng: Source of randomness
        lat: Value lattice
        alphabet: Fixed alphabet, or None to draw one
        n_states: Fixed state count, or None to draw from 2..4
        zero_bias: Probability that any single value is 0
        epsilon: Also draw ε-transitions
        crisp: Only use the values 0 and 1

    On lattices with more than palette_size() non-trivial elements the
    values come from a per-automaton palette.
    """
    alphabet = alphabet or random_alphabet(rng)
    n = n_states or rng.choice((2, 3, 4))
    states = [f"q{i}" for i in range(n)]
    palette = None if crisp else random_palette(rng, lat)

    def draw() -> ElemId:
        if crisp:
            return lat.zero if rng.random() < zero_bias else lat.one
        if palette is not None:
            return lat.zero if rng.random() < zero_bias else rng.choice(palette)
        return random_value(rng, lat, zero_bias)

    initial = {q: draw() for q in states}
    terminal = {q: draw() for q in states}
    symbols = list(alphabet) + ([EPSILON] if epsilon else [])
    delta = [(p, sym, q, draw()) for p in states for sym in symbols for q in states
             if not (sym == EPSILON and p == q)]
    return make_automaton(lat, alphabet, states, initial, terminal, delta)


def random_deterministic(rng: random.Random, lat: OrthoLattice, alphabet: Optional[Alphabet] = None,
                         zero_bias: float = 0.5) -> LAutomaton:
    """Crisp-transition deterministic automaton with random terminal values."""
    alphabet = alphabet or random_alphabet(rng)
    n = rng.choice((2, 3, 4))
    states = [f"d{i}" for i in range(n)]
    delta = [(p, sym, rng.choice(states), lat.one) for p in states for sym in alphabet]
    terminal = {q: random_value(rng, lat, zero_bias) for q in states}
    return LAutomaton(lat, alphabet, states, {states[0]: lat.one}, terminal, delta)


def random_table(rng: random.Random, lat: OrthoLattice, alphabet: Alphabet, max_len: int = 3,
                 size: Optional[int] = None, zero_bias: float = 0.0) -> FiniteTable:
    """Finite-support language on a random subset of the words up to max_len."""
    words = list(words_up_to(alphabet, max_len))
    size = rng.randint(0, min(4, len(words))) if size is None else min(size, len(words))
    chosen = rng.sample(words, size)
    return FiniteTable(lat, alphabet, {w: random_value(rng, lat, zero_bias) for w in chosen})


def random_regex(rng: random.Random, factory: RegexFactory, depth: int = 3) -> Regex:
    """Random expression tree of bounded depth; scalars drawn from the whole lattice."""
    lat = factory.lattice
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.1:
            return factory.eps()
        if roll < 0.15:
            return factory.empty()
        return factory.sym(rng.choice(factory.alphabet.symbols))
    op = rng.choice(('scalar', 'scalar', 'union', 'concat', 'star'))
    if op == 'scalar':
        return factory.scalar(rng.randrange(lat.size), random_regex(rng, factory, depth - 1))
    if op == 'star':
        return factory.star(random_regex(rng, factory, depth - 1))
    left = random_regex(rng, factory, depth - 1)
    right = random_regex(rng, factory, depth - 1)
    return factory.union(left, right) if op == 'union' else factory.concat(left, right)


def random_hom(rng: random.Random, source: Alphabet, target: Alphabet, max_image: int = 2,
               erasing: bool = False) -> Dict[str, Word]:
    """Symbol-to-word map; images have length 1..max_image (0..max_image when erasing)."""
    low = 0 if erasing else 1
    return {
        sym: tuple(rng.choice(target.symbols) for _ in range(rng.randint(low, max_image)))
        for sym in source
    }


def random_word(rng: random.Random, alphabet: Alphabet, max_len: int) -> Word:
    return tuple(rng.choice(alphabet.symbols) for _ in range(rng.randint(0, max_len)))


def sample_tuples(rng: random.Random, lat: OrthoLattice, arity: int, count: int) -> List[Tuple[ElemId, ...]]:
    return [tuple(rng.randrange(lat.size) for _ in range(arity)) for _ in range(count)]


def perturb(rng: random.Random, m: LAutomaton, zero_bias: float = 0.5) -> LAutomaton:
    """Copy of m with one terminal value and one transition value redrawn."""
    lat = m.lattice
    terminal = dict(zip(m.states, m.terminal))
    terminal[rng.choice(m.states)] = random_value(rng, lat, zero_bias)
    delta = [list(e) for e in m.edges()]
    if delta:
        pick = rng.randrange(len(delta))
        delta[pick][3] = random_value(rng, lat, zero_bias)
    return make_automaton(lat, m.alphabet, m.states, dict(zip(m.states, m.initial)), terminal,
                          [tuple(e) for e in delta])


def shuffled(rng: random.Random, items: Sequence) -> list:
    out = list(items)
    rng.shuffle(out)
    return out
