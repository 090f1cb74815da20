"""
Hand-built instances on MO2 and the Chinese lantern.

Every construction whose bound is strict on a non-distributive lattice has a
small fixed automaton (or regex) with free parameters a, b, c. Its values are
checked symbolically for every substitution, then one substitution on MO2
shows that the gap really opens. The lantern instances check the regularity
degree of the language {σⁿτⁿ} scaled by p-.
"""

import itertools
import logging
import random
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from automata import (LAutomaton, concat_aut, determinize, eps_reduce, fold_aut, make_automaton,
                      product_aut)
from generators import random_automaton
from kleene import RegexFactory, kleene_representation, regex_hom, regex_language
from languages import (EPSILON, Alphabet, Derived, FiniteTable, LValuedLanguage, Word, concat, format_word,
                       image, intersect, kleene_star, union)
from lattice import ElemId, OrthoLattice, builtin
from logic import ImplKind, biimplies
from models import CheckContext, CheckReport, Tally
from regularity import universal_automaton, witness_bounds

logger = logging.getLogger(__name__)

InstanceCheck = Callable[[OrthoLattice, CheckContext, random.Random], List[CheckReport]]

SIGMA, TAU = 's', 't'
UNARY = Alphabet((SIGMA,))
PAIR = Alphabet((SIGMA, TAU))
ERASED = Alphabet((TAU,))


def _triples(lat: OrthoLattice) -> Iterator[Tuple[ElemId, ElemId, ElemId]]:
    return itertools.product(range(lat.size), repeat=3)


def _abc(lat: OrthoLattice, a: ElemId, b: ElemId, c: ElemId) -> str:
    names = lat.elem_names
    return f"a={names[a]}, b={names[b]}, c={names[c]}"


def _distributed(lat: OrthoLattice, a: ElemId, b: ElemId, c: ElemId) -> ElemId:
    """(a ∧ b) ∨ (a ∧ c)"""
    meet = lat.meet_table
    return lat.join_table[meet[a][b]][meet[a][c]]


def _factored(lat: OrthoLattice, a: ElemId, b: ElemId, c: ElemId) -> ElemId:
    """a ∧ (b ∨ c)"""
    return lat.meet_table[a][lat.join_table[b][c]]


def _symbolic(check_id: str, lat: OrthoLattice,
              sides: Callable[[ElemId, ElemId, ElemId], Sequence[Tuple[ElemId, ElemId]]],
              instance: str) -> List[CheckReport]:
    """One '=' report per (computed, formula) pair, aggregated over every (a, b, c)."""
    tallies: List[Tally] = []
    for a, b, c in _triples(lat):
        pairs = sides(a, b, c)
        while len(tallies) < len(pairs):
            tallies.append(Tally(f"{check_id}.values", instance, len(tallies), lat, '='))
        for tally, (computed, formula) in zip(tallies, pairs):
            tally.add(computed, formula, _abc(lat, a, b, c))
    return [t.report() for t in tallies]


def _gap(check_id: str, lat: OrthoLattice, smaller: ElemId, larger: ElemId,
         instance: str, substitution: str) -> CheckReport:
    return CheckReport.compare(check_id, instance, 0, lat, smaller, larger, 'gap-strict',
                               witness=substitution)


def _mo2_names(lat: OrthoLattice, *names: str) -> Tuple[ElemId, ...]:
    return tuple(lat.elem(n) for n in names)


# -- fixed automata ---------------------------------------------------------------

def determinize_gap_automaton(lat: OrthoLattice, a: ElemId, b: ElemId, c: ElemId) -> LAutomaton:
    """u -σ/a-> u, u -σ/c-> w, v -σ/b-> u with I = {u, v} and T = {w}."""
    one = lat.one
    return make_automaton(lat, UNARY, ['u', 'v', 'w'], {'u': one, 'v': one}, {'w': one},
                          [('u', SIGMA, 'u', a), ('u', SIGMA, 'w', c), ('v', SIGMA, 'u', b)])


def eps_gap_automaton(lat: OrthoLattice, a: ElemId, b: ElemId, c: ElemId) -> LAutomaton:
    """q0 -σ/a-> q1, two crisp ε-branches q1 → q2, q3 joined at q4 by b and c, then q4 -σ-> q5."""
    one = lat.one
    states = [f"q{i}" for i in range(6)]
    delta = [
        ('q0', SIGMA, 'q1', a),
        ('q1', EPSILON, 'q2', one),
        ('q1', EPSILON, 'q3', one),
        ('q2', EPSILON, 'q4', b),
        ('q3', EPSILON, 'q4', c),
        ('q4', SIGMA, 'q5', one),
    ]
    return make_automaton(lat, UNARY, states, {'q0': one}, {'q5': one}, delta)


def single_loop_automaton(lat: OrthoLattice, a: ElemId) -> LAutomaton:
    one = lat.one
    return make_automaton(lat, UNARY, ['p'], {'p': one}, {'p': one}, [('p', SIGMA, 'p', a)])


def fork_automaton(lat: OrthoLattice, b: ElemId, c: ElemId, prefix: str = 'q') -> LAutomaton:
    """q -σ/b-> r and q -σ/c-> s, both r and s terminal."""
    one = lat.one
    q, r, s = f"{prefix}0", f"{prefix}1", f"{prefix}2"
    return make_automaton(lat, UNARY, [q, r, s], {q: one}, {r: one, s: one},
                          [(q, SIGMA, r, b), (q, SIGMA, s, c)])


def step_automaton(lat: OrthoLattice, a: ElemId) -> LAutomaton:
    one = lat.one
    return make_automaton(lat, UNARY, ['p0', 'p1'], {'p0': one}, {'p1': one}, [('p0', SIGMA, 'p1', a)])


def fold_automaton(lat: OrthoLattice, a: ElemId, b: ElemId, c: ElemId, first: str = SIGMA) -> LAutomaton:
    """
    Three initial states q1, q2, q3 all reaching q6: q2 in one step labelled
    `first` valued a, q1 and q3 in two σ-steps valued b and c.
    """
    one = lat.one
    states = [f"q{i}" for i in range(1, 7)]
    delta = [
        ('q1', SIGMA, 'q4', one),
        ('q3', SIGMA, 'q5', one),
        ('q2', first, 'q6', a),
        ('q4', SIGMA, 'q6', b),
        ('q5', SIGMA, 'q6', c),
    ]
    return make_automaton(lat, PAIR, states, {'q1': one, 'q2': one, 'q3': one}, {'q6': one}, delta)


def kleene_literal_automaton(lat: OrthoLattice, a: ElemId, b: ElemId, c: ElemId) -> LAutomaton:
    one = lat.one
    return make_automaton(lat, UNARY, ['u', 'v'], {'u': a}, {'u': one, 'v': one},
                          [('u', SIGMA, 'u', b), ('u', SIGMA, 'v', c)])


def kleene_gap_automaton(lat: OrthoLattice, a: ElemId, b: ElemId, c: ElemId) -> LAutomaton:
    """Two parallel two-step routes u → w1 → v and u → w2 → v valued b and c."""
    one = lat.one
    delta = [
        ('u', SIGMA, 'w1', b),
        ('u', SIGMA, 'w2', c),
        ('w1', SIGMA, 'v', one),
        ('w2', SIGMA, 'v', one),
    ]
    return make_automaton(lat, UNARY, ['u', 'w1', 'w2', 'v'], {'u': a}, {'v': one}, delta)


# -- gap checks -------------------------------------------------------------------

def check_determinize_gap(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """rec(σσ) = (a∧c) ∨ (b∧c) while the power-set automaton gives (a∨b) ∧ c."""
    lat = builtin('mo2')
    word = (SIGMA, SIGMA)
    instance = "determinize: u -σ/a-> u, u -σ/c-> w, v -σ/b-> u at σσ"

    def sides(a, b, c):
        m = determinize_gap_automaton(lat, a, b, c)
        meet, join = lat.meet_table, lat.join_table
        return [(m.rec(word), join[meet[a][c]][meet[b][c]]),
                (determinize(m).rec(word), meet[join[a][b]][c])]

    x, xp, y = _mo2_names(lat, 'x', "x'", 'y')
    m = determinize_gap_automaton(lat, x, xp, y)
    reports = _symbolic('gap.determinize', lat, sides, instance)
    reports.append(CheckReport.compare('gap.determinize.commutator', instance, 0, lat,
                                       m.gamma_atoms(), lat.zero, '=', witness=_abc(lat, x, xp, y)))
    reports.append(_gap('gap.determinize', lat, m.rec(word), determinize(m).rec(word),
                        instance, _abc(lat, x, xp, y)))
    return reports


def check_eps_reduce_gap(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """ε-removal turns (a∧b) ∨ (a∧c) at σσ into a ∧ (b∨c)."""
    lat = builtin('mo2')
    word = (SIGMA, SIGMA)
    instance = "eps-reduce: q0 -σ/a-> q1, ε-branches valued b and c, q4 -σ-> q5 at σσ"

    def sides(a, b, c):
        m = eps_gap_automaton(lat, a, b, c)
        reduced = eps_reduce(m)
        return [
            (reduced.value('q0', SIGMA, 'q4'), _distributed(lat, a, b, c)),
            (reduced.value('q1', SIGMA, 'q5'), lat.join_table[b][c]),
            (m.rec(word), _distributed(lat, a, b, c)),
            (reduced.rec(word), _factored(lat, a, b, c)),
        ]

    x, y, yp = _mo2_names(lat, 'x', 'y', "y'")
    m = eps_gap_automaton(lat, x, y, yp)
    reports = _symbolic('gap.eps-reduce', lat, sides, instance)
    reports.append(_gap('gap.eps-reduce', lat, m.rec(word), eps_reduce(m).rec(word),
                        instance, _abc(lat, x, y, yp)))
    return reports


def check_product_gap(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """The product automaton gives (a∧b) ∨ (a∧c) at σ, the pointwise meet a ∧ (b∨c)."""
    lat = builtin('mo2')
    word = (SIGMA,)
    instance = "product: one a-loop against a fork valued b and c at σ"

    def values(a, b, c):
        loop, fork = single_loop_automaton(lat, a), fork_automaton(lat, b, c)
        return product_aut(loop, fork).rec(word), lat.meet_table[loop.rec(word)][fork.rec(word)]

    def sides(a, b, c):
        product, pointwise = values(a, b, c)
        return [(product, _distributed(lat, a, b, c)), (pointwise, _factored(lat, a, b, c))]

    x, y, yp = _mo2_names(lat, 'x', 'y', "y'")
    reports = _symbolic('gap.product', lat, sides, instance)
    reports.append(_gap('gap.product', lat, *values(x, y, yp), instance, _abc(lat, x, y, yp)))
    return reports


def check_concat_gap(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """The concatenation automaton gives (a∧b) ∨ (a∧c) at σσ, the language concatenation a ∧ (b∨c)."""
    lat = builtin('mo2')
    word = (SIGMA, SIGMA)
    instance = "concat: one a-step followed by a fork valued b and c at σσ"

    def values(a, b, c):
        first, second = step_automaton(lat, a), fork_automaton(lat, b, c)
        return (concat_aut(first, second).rec(word),
                concat(first.language(), second.language()).evaluate(word))

    def sides(a, b, c):
        automaton, language = values(a, b, c)
        return [(automaton, _distributed(lat, a, b, c)), (language, _factored(lat, a, b, c))]

    x, y, yp = _mo2_names(lat, 'x', 'y', "y'")
    reports = _symbolic('gap.concat', lat, sides, instance)
    reports.append(_gap('gap.concat', lat, *values(x, y, yp), instance, _abc(lat, x, y, yp)))
    return reports


def check_fold_gap(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    On the three-branch automaton read at σσσ the fold and the star both give
    a. Moving the a-branch onto τ and reading τσσ separates them: the fold
    gives (a∧b) ∨ (a∧c), the star a ∧ (b∨c).
    """
    lat = builtin('mo2')
    same, split = (SIGMA,) * 3, (TAU, SIGMA, SIGMA)
    literal = "fold: three branches into q6 at σσσ"
    variant = "fold: three branches into q6, a-branch on τ, at τσσ"

    def values(a, b, c, first, word):
        m = fold_automaton(lat, a, b, c, first)
        return fold_aut(m).rec(word), kleene_star(m.language()).evaluate(word)

    def literal_sides(a, b, c):
        folded, starred = values(a, b, c, SIGMA, same)
        return [(folded, a), (starred, a)]

    def variant_sides(a, b, c):
        folded, starred = values(a, b, c, TAU, split)
        return [(folded, _distributed(lat, a, b, c)), (starred, _factored(lat, a, b, c))]

    x, y, yp = _mo2_names(lat, 'x', 'y', "y'")
    reports = _symbolic('gap.fold-literal', lat, literal_sides, literal)
    reports += _symbolic('gap.fold', lat, variant_sides, variant)
    reports.append(_gap('gap.fold', lat, *values(x, y, yp, TAU, split), variant, _abc(lat, x, y, yp)))
    return reports


def check_kleene_gap(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    The two-state loop-and-exit automaton has k(σ) = rec(σ); the two parallel
    routes u → w1 → v, u → w2 → v have rec(σσ) = (a∧b) ∨ (a∧c) strictly below
    k(σσ) = a ∧ (b∨c).
    """
    lat = builtin('mo2')
    literal = "kleene: u -σ/b-> u, u -σ/c-> v, I(u) = a at σ"
    variant = "kleene: parallel routes u → w1 → v and u → w2 → v, I(u) = a at σσ"

    def values(build, a, b, c, word):
        m = build(lat, a, b, c)
        return m.rec(word), kleene_representation(m, 'decl').evaluate(word)

    def literal_sides(a, b, c):
        recognised, represented = values(kleene_literal_automaton, a, b, c, (SIGMA,))
        return [(recognised, _distributed(lat, a, b, c)), (represented, _distributed(lat, a, b, c))]

    def variant_sides(a, b, c):
        recognised, represented = values(kleene_gap_automaton, a, b, c, (SIGMA, SIGMA))
        return [(recognised, _distributed(lat, a, b, c)), (represented, _factored(lat, a, b, c))]

    x, y, yp = _mo2_names(lat, 'x', 'y', "y'")
    reports = _symbolic('gap.kleene-literal', lat, literal_sides, literal)
    reports += _symbolic('gap.kleene', lat, variant_sides, variant)
    reports.append(_gap('gap.kleene', lat, *values(kleene_gap_automaton, x, y, yp, (SIGMA, SIGMA)),
                        variant, _abc(lat, x, y, yp)))
    return reports


def check_hom_image_gap(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    Erasing σ maps <a>σ · (<b>@ + <c>σ) to an expression worth a ∧ (b∨c) at
    the empty word, while the image of its language is (a∧b) ∨ (a∧c).
    """
    lat = builtin('mo2')
    h = {SIGMA: ()}
    instance = "hom image: <a>s (<b>@ + <c>s) with s erased, at the empty word"
    source, target = RegexFactory(lat, UNARY), RegexFactory(lat, ERASED)

    def values(a, b, c):
        r = source.concat(source.scalar(a, source.sym(SIGMA)),
                          source.union(source.scalar(b, source.eps()), source.scalar(c, source.sym(SIGMA))))
        mapped = regex_hom(h, r, target).evaluate(())
        imaged = image(h, regex_language(r), ERASED, bound=4).evaluate(())
        return imaged, mapped

    def sides(a, b, c):
        imaged, mapped = values(a, b, c)
        return [(imaged, _distributed(lat, a, b, c)), (mapped, _factored(lat, a, b, c))]

    x, y, yp = _mo2_names(lat, 'x', 'y', "y'")
    reports = _symbolic('gap.hom-image', lat, sides, instance)
    reports.append(_gap('gap.hom-image', lat, *values(x, y, yp), instance, _abc(lat, x, y, yp)))
    return reports


def check_language_distributivity_gap(lat: OrthoLattice, ctx: CheckContext,
                                      rng: random.Random) -> List[CheckReport]:
    """(A ∩ B) ∪ (A ∩ C) is strictly below A ∩ (B ∪ C) for single-word tables x, y, y'."""
    lat = builtin('mo2')
    x, y, yp = _mo2_names(lat, 'x', 'y', "y'")
    word = (SIGMA,)
    a, b, c = (FiniteTable(lat, UNARY, {word: v}) for v in (x, y, yp))
    distributed = union(intersect(a, b), intersect(a, c)).evaluate(word)
    factored = intersect(a, union(b, c)).evaluate(word)
    return [_gap('gap.language-distributivity', lat, distributed, factored,
                 "tables A, B, C on the word σ", _abc(lat, x, y, yp))]


COUNTEREXAMPLE_CHECKS: Tuple[InstanceCheck, ...] = (
    check_determinize_gap,
    check_eps_reduce_gap,
    check_product_gap,
    check_concat_gap,
    check_fold_gap,
    check_kleene_gap,
    check_hom_image_gap,
    check_language_distributivity_gap,
)


# -- Chinese lantern ----------------------------------------------------------------

def is_balanced(word: Word) -> bool:
    """Whether word is σⁿτⁿ for some n ≥ 0."""
    n = len(word) // 2
    return len(word) % 2 == 0 and word == (SIGMA,) * n + (TAU,) * n


def balanced_language(lat: Optional[OrthoLattice] = None, level: str = 'p-') -> LValuedLanguage:
    """1 on {σⁿτⁿ : n ≥ 0} and `level` everywhere else."""
    lat = lat or builtin('chinese_lantern')
    one, low = lat.one, lat.elem(level)

    def value(word: Word) -> ElemId:
        return one if is_balanced(word) else low

    return Derived(lat, PAIR, value, f"1 on s^n t^n, {level} elsewhere", known_range=(one, low))


def lantern_biimplications(lat: OrthoLattice) -> List[CheckReport]:
    """p- is Sasaki-equivalent to nothing but itself and 1: every other pairing is 0."""
    s3 = ImplKind.SASAKI3
    p = lat.elem('p-')
    expected: Dict[str, str] = {'p+': '0', 'pbar-': '0', 'pbar+': '0', '1': 'p-'}
    return [
        CheckReport.compare('lantern.biimplications', f"{lat.name}: p- <-> {other}", k, lat,
                            biimplies(lat, s3, p, lat.elem(other)), lat.elem(value), '=')
        for k, (other, value) in enumerate(expected.items())
    ]


def lantern_lower_bound(lat: OrthoLattice, max_len: int) -> CheckReport:
    """The Σ*-witness valued p- already certifies p- ≤ ⌈A ≡ rec⌉."""
    lang = balanced_language(lat)
    witness = universal_automaton(lat, PAIR, lat.elem('p-'), scale_terminal=False)
    lower, upper = witness_bounds(lang, witness, ImplKind.SASAKI3, max_len)
    return CheckReport.compare('lantern.lower-bound', f"{lat.name}: p-valued Σ*-witness", 0, lat,
                               lat.elem('p-'), lower, '≤',
                               detail=f"bounded degree up to length {max_len}: {lat.elem_names[upper]}")


def pumped_path(states: Sequence[str], n: int) -> Optional[Tuple[List[str], Word]]:
    """
    Repeat the first loop among the states read along σⁿ once more.

    Returns:
        The alternating state/symbol path of the pumped run and its label, or
        None if the first n + 1 states are pairwise distinct
    """
    seen: Dict[str, int] = {}
    for j, q in enumerate(states[:n + 1]):
        if q in seen:
            i = seen[q]
            run = list(states[:j + 1]) + list(states[i + 1:])
            label = (SIGMA,) * (n + j - i) + (TAU,) * n
            path: List[str] = [run[0]]
            for sym, q_next in zip(label, run[1:]):
                path += [sym, q_next]
            return path, label
        seen[q] = j
    return None


def lantern_automata(lat: OrthoLattice, rng: random.Random, count: int) -> List[LAutomaton]:
    """A fixed two-state automaton followed by `count` random two- and three-state ones."""
    one = lat.one
    fixed = make_automaton(lat, PAIR, ['r0', 'r1'], {'r0': one}, {'r1': one}, [
        ('r0', SIGMA, 'r0', one),
        ('r0', SIGMA, 'r1', lat.elem('p-')),
        ('r0', TAU, 'r1', lat.elem('pbar-')),
        ('r1', TAU, 'r1', one),
    ])
    randoms = [random_automaton(rng, lat, PAIR, n_states=rng.choice((2, 3)), zero_bias=0.3)
               for _ in range(count)]
    return [fixed] + randoms


def lantern_pumping_step(lat: OrthoLattice, automata: Sequence[LAutomaton]) -> CheckReport:
    """
    Every non-zero path along σⁿτⁿ (n = |Q|) revisits a state within its
    σ-prefix; repeating that loop keeps the path value, so the path also
    bounds rec on σ^(n+k)τⁿ, a word outside the language.
    """
    tally = Tally('lantern.pumping-step', f"{lat.name}: {len(automata)} automata, paths along s^n t^n",
                  0, lat)
    meet = lat.meet_table
    for k, m in enumerate(automata):
        n = len(m.states)
        word = (SIGMA,) * n + (TAU,) * n
        for states, value in m.paths(word):
            pumped = pumped_path(states, n)
            if pumped is None:
                tally.add(lat.one, lat.zero, f"automaton #{k}: no repeated state on {list(states)}")
                continue
            path, label = pumped
            witness = f"automaton #{k}: {' '.join(path)}"
            if m.path_value(path) != value:
                tally.add(lat.one, lat.zero, f"{witness} changed value")
                continue
            through = meet[meet[m.initial[m.index[states[0]]]][value]][m.terminal[m.index[states[-1]]]]
            tally.add(through, m.rec(label), f"{witness} on '{format_word(label)}'")
    return tally.report()


def lantern_regularity_check(ctx: Optional[CheckContext] = None,
                             rng: Optional[random.Random] = None) -> List[CheckReport]:
    """
    Regularity of the lantern language: the aggregate report first, then the
    three facets it is built from.

    Only the witnesses tried here are covered; the supremum over every
    automaton is not computed.
    """
    ctx = ctx or CheckContext()
    rng = rng or random.Random(ctx.seed)
    lat = builtin('chinese_lantern')
    facets = lantern_biimplications(lat)
    facets.append(lantern_lower_bound(lat, ctx.max_len))
    facets.append(lantern_pumping_step(lat, lantern_automata(lat, rng, min(ctx.samples, 20))))
    failed = [r.check_id for r in facets if not r.passed]
    if failed:
        logger.warning(f"Lantern facets failed: {', '.join(sorted(set(failed)))}")
    aggregate = CheckReport.flag('lantern.regularity', f"{lat.name}: s^n t^n scaled by p-", 0, lat,
                                 not failed, detail='witness-level only; the supremum over all automata '
                                                    'is out of scope')
    return [aggregate] + facets


def check_lantern(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    return lantern_regularity_check(ctx, rng)


LANTERN_CHECKS: Tuple[InstanceCheck, ...] = (check_lantern,)
