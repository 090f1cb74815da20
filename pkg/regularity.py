"""
Witness automata and witness-valued regularity.

The regularity predicates quantify over every automaton, so they are not
computable directly. What is computable is the clause a single witness
contributes, ⌈A ≡ rec_M⌉ (gated by a commutator in the commutative variants);
joining clauses over several witnesses gives a lower bound on the predicate.
"""

import collections
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from automata import LAutomaton, equiv_degree_exact, make_automaton
from config import get_settings
from errors import StateBlowup, ValidationError
from languages import Alphabet, AutomatonBacked, FiniteTable, LValuedLanguage, equiv_degree_bounded
from lattice import ElemId, OrthoLattice
from logic import ImplKind, biimplies

logger = logging.getLogger(__name__)


def table_automaton(table: FiniteTable) -> LAutomaton:
    """
    One chain of states per support word, every edge and the chain end valued
    A(w), so that rec equals the table at every word.
    """
    lat = table.lattice
    states: List[str] = []
    initial, terminal, delta = {}, {}, []
    for k, word in enumerate(table.support):
        value = table.entries[word]
        chain = [f"w{k}.{i}" for i in range(len(word) + 1)]
        states.extend(chain)
        initial[chain[0]] = lat.one
        terminal[chain[-1]] = value
        delta.extend((chain[i], sym, chain[i + 1], value) for i, sym in enumerate(word))
    if not states:
        states = ['empty']
    return LAutomaton(lat, table.alphabet, states, initial, terminal, delta)


def scaled_automaton(classical: LAutomaton, a: ElemId, scale_terminal: bool = True) -> LAutomaton:
    """
    Replace every transition of a crisp automaton by a-valued ones.

    rec is then a on every non-empty accepted word. With scale_terminal the
    terminal values are scaled too, so the empty word (if accepted) also gets a.

    Raises:
        ValidationError: If the given automaton is not crisp
    """
    lat = classical.lattice
    lat.check(a)
    if not classical.is_crisp():
        raise ValidationError("Scaling needs a crisp (two-valued) automaton")
    meet = lat.meet_table
    terminal = {q: (meet[a][t] if scale_terminal else t) for q, t in zip(classical.states, classical.terminal)}
    delta = [(p, sym, q, a) for p, sym, q, _ in classical.edges()]
    return make_automaton(lat, classical.alphabet, classical.states,
                          dict(zip(classical.states, classical.initial)), terminal, delta)


def universal_automaton(lat: OrthoLattice, alphabet: Alphabet, a: ElemId,
                        scale_terminal: bool = True) -> LAutomaton:
    """Single-state automaton over Σ* with every loop valued a."""
    crisp = LAutomaton(lat, alphabet, ['u'], {'u': lat.one}, {'u': lat.one},
                       [('u', sym, 'u', lat.one) for sym in alphabet])
    return scaled_automaton(crisp, a, scale_terminal=scale_terminal)


def level_automaton(m: LAutomaton, level: ElemId) -> LAutomaton:
    """
    Crisp deterministic automaton accepting {s : rec_M(s) = level}, built on
    the reachable frontiers of M.
    """
    lat = m.lattice
    cap = get_settings().max_states
    start = m.initial_frontier()
    order = [start]
    seen = {start: 0}
    delta = []
    queue = collections.deque([start])
    while queue:
        frontier = queue.popleft()
        for sym in m.alphabet:
            nxt = m.step(frontier, sym)
            if nxt not in seen:
                seen[nxt] = len(order)
                order.append(nxt)
                if len(order) > cap:
                    raise StateBlowup(f"Level automaton exceeded {cap} states")
                queue.append(nxt)
            delta.append((f"f{seen[frontier]}", sym, f"f{seen[nxt]}", lat.one))
    names = [f"f{i}" for i in range(len(order))]
    terminal = {name: lat.one for name, f in zip(names, order) if m.accept(f) == level}
    return LAutomaton(lat, m.alphabet, names, {names[0]: lat.one}, terminal, delta)


def _table_level(table: FiniteTable, level: ElemId) -> LAutomaton:
    crisp = FiniteTable(table.lattice, table.alphabet,
                        {w: table.lattice.one for w, v in table.entries.items() if v == level})
    return table_automaton(crisp)


def decompose_by_range(lang: LValuedLanguage) -> LAutomaton:
    """
    Union over the non-zero values λ of Range(A) of the classical level set
    {s : A(s) = λ}, scaled by λ. rec of the result equals A at every word.

    Raises:
        NotFiniteRange: If A has no known finite range
    """
    lat = lang.lattice
    levels = [v for v in lang.range_values() if v != lat.zero]
    states: List[str] = []
    initial, terminal, delta = {}, {}, []
    for k, level in enumerate(levels):
        if isinstance(lang, FiniteTable):
            crisp = _table_level(lang, level)
        elif isinstance(lang, AutomatonBacked):
            crisp = level_automaton(lang.automaton, level)
        else:
            raise ValidationError(f"No classical level sets for a {lang.backing} language")
        part = scaled_automaton(crisp, level)
        prefix = f"L{k}."
        states.extend(prefix + q for q in part.states)
        initial.update({prefix + q: v for q, v in zip(part.states, part.initial)})
        terminal.update({prefix + q: v for q, v in zip(part.states, part.terminal)})
        delta.extend((prefix + p, sym, prefix + q, v) for p, sym, q, v in part.edges())
    if not states:
        states = ['empty']
    logger.debug(f"Decomposed {lang.describe()} into {len(levels)} scaled level automata")
    return make_automaton(lat, lang.alphabet, states, initial, terminal, delta)


def witness_bounds(lang: LValuedLanguage, m: LAutomaton, impl: ImplKind,
                   max_len: Optional[int] = None) -> Tuple[ElemId, ElemId]:
    """
    Certified bounds on ⌈A ≡ rec_M⌉ for a language with known finite range.

    The lower bound meets a ↔ r over every a in Range(A) and every value r that
    rec_M takes; every word contributes one of those pairs. The upper bound is
    the meet over words up to max_len.
    """
    lat = m.lattice
    meet = lat.meet_table
    lower = lat.one
    for a in lang.range_values():
        for r in sorted(m.value_range()):
            lower = meet[lower][biimplies(lat, impl, a, r)]
    max_len = get_settings().verify.max_len if max_len is None else max_len
    upper = equiv_degree_bounded(lang, m.language(), impl, max_len)
    return lower, upper


def equiv_with_witness(lang: LValuedLanguage, m: LAutomaton, impl: ImplKind) -> ElemId:
    """⌈A ≡ rec_M⌉, exact for table and automaton backings, certified from below otherwise."""
    if isinstance(lang, FiniteTable):
        return equiv_degree_exact(table_automaton(lang), m, impl)
    if isinstance(lang, AutomatonBacked):
        return equiv_degree_exact(lang.automaton, m, impl)
    lower, _ = witness_bounds(lang, m, impl)
    return lower


def reg_witness(lang: LValuedLanguage, m: LAutomaton, impl: ImplKind,
                commutative: bool = False, deterministic: bool = False) -> ElemId:
    """
    Clause value of witness M in the (commutative, deterministic) regularity predicate.

    Args:
        lang: Language A
        m: Witness automaton
        impl: Implication used for ≡
        commutative: Gate with γ(atom(M) ∪ Range(A))
        deterministic: Only deterministic witnesses count; others contribute 0

    Returns:
        The witness clause value

    Raises:
        NotFiniteRange: If commutative and Range(A) is not known to be finite
        CommutatorSetTooLarge: From the commutator
    """
    lat = m.lattice
    if deterministic and not m.is_deterministic():
        return lat.zero
    value = equiv_with_witness(lang, m, impl)
    if commutative:
        gate = lat.commutator(set(m.atoms()) | set(lang.range_values()))
        value = lat.meet_table[gate][value]
    return value


def reg_lower_bound(lang: LValuedLanguage, witnesses: Iterable[LAutomaton], impl: ImplKind,
                    commutative: bool = False, deterministic: bool = False) -> ElemId:
    """Join of witness clause values: a lower bound on the regularity predicate."""
    lat = lang.lattice
    acc = lat.zero
    for m in witnesses:
        acc = lat.join_table[acc][reg_witness(lang, m, impl, commutative, deterministic)]
    return acc


def scaled_witnesses(classical: LAutomaton, values: Sequence[ElemId]) -> List[LAutomaton]:
    """The scaled automata of a classical automaton, one per value."""
    return [scaled_automaton(classical, a) for a in values]
