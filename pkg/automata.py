"""
Lattice-valued finite automata and their constructions.

Recognition is evaluated with per-state frontiers: for every state the
antichain of maximal values I(q0) ∧ path-value reaching it. Joining
x ∧ T(q) over a frontier gives exactly the join over paths, on any lattice,
without enumerating paths. The vector recurrence (one joined value per state)
is kept as rec_vector; it coincides with the power-set construction and can be
strictly larger on non-distributive lattices.
"""

import collections
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from config import get_settings
from errors import (
    AlphabetMismatch,
    MalformedPath,
    NotDeterministic,
    StateBlowup,
    UnexpectedEpsilon,
    ValidationError,
)
from languages import EPSILON, Alphabet, AutomatonBacked, Homomorphism, Word
from lattice import ElemId, OrthoLattice, same_lattice
from logic import ImplKind, biimplies

logger = logging.getLogger(__name__)

Frontier = Tuple[FrozenSet[ElemId], ...]
Edge = Tuple[str, str, str, ElemId]


class LAutomaton:
    """
    Automaton <Q, I, T, δ> with values in an orthomodular lattice.

    Args:
        lattice: Truth-value lattice
        alphabet: Input alphabet
        states: Distinct state names, in declaration order
        initial: State name to initial value (omitted states are 0)
        terminal: State name to terminal value (omitted states are 0)
        delta: (p, symbol, q, value) entries; repeated entries are joined
    """

    allows_epsilon = False

    def __init__(self, lattice: OrthoLattice, alphabet: Alphabet, states: Sequence[str],
                 initial: Mapping[str, ElemId], terminal: Mapping[str, ElemId],
                 delta: Iterable[Edge]):
        self.lattice = lattice
        self.alphabet = alphabet
        self.states: Tuple[str, ...] = tuple(states)
        if not self.states:
            raise ValidationError("Automaton needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise ValidationError(f"Duplicate state names in {list(self.states)}")
        self.index: Dict[str, int] = {q: i for i, q in enumerate(self.states)}
        zero = lattice.zero

        self.initial: Tuple[ElemId, ...] = self._state_values(initial, 'initial')
        self.terminal: Tuple[ElemId, ...] = self._state_values(terminal, 'terminal')

        join = lattice.join_table
        table: Dict[Tuple[int, str, int], ElemId] = {}
        for entry in delta:
            if len(entry) != 4:
                raise ValidationError(f"Transition {entry!r} must be (p, symbol, q, value)")
            p, sym, q, value = entry
            i, j = self._state(p), self._state(q)
            if sym == EPSILON:
                if not self.allows_epsilon:
                    raise UnexpectedEpsilon(f"Transition {p} -{EPSILON}-> {q} needs an epsilon automaton")
            elif sym not in alphabet:
                raise AlphabetMismatch(f"Transition symbol {sym!r} is not in the alphabet")
            lattice.check(value)
            if value != zero:
                key = (i, sym, j)
                table[key] = join[table.get(key, zero)][value]
        self.delta: Dict[Tuple[int, str, int], ElemId] = table

        succ: Dict[str, List[List[Tuple[int, ElemId]]]] = {}
        for (i, sym, j), value in sorted(table.items()):
            rows = succ.setdefault(sym, [[] for _ in self.states])
            rows[i].append((j, value))
        self._succ = {sym: tuple(tuple(row) for row in rows) for sym, rows in succ.items()}
        self._empty_rows = tuple(() for _ in self.states)

    def _state(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise ValidationError(f"Unknown state {name!r}") from None

    def _state_values(self, values: Mapping[str, ElemId], label: str) -> Tuple[ElemId, ...]:
        out = [self.lattice.zero] * len(self.states)
        for name, value in values.items():
            self.lattice.check(value)
            out[self._state(name)] = int(value)
        return tuple(out)

    def __repr__(self) -> str:
        return (f"{self.__class__.__name__}({len(self.states)} states, "
                f"alphabet={list(self.alphabet)}, lattice={self.lattice.name})")

    @property
    def has_epsilon(self) -> bool:
        return EPSILON in self._succ

    def successors(self, sym: str) -> Tuple[Tuple[Tuple[int, ElemId], ...], ...]:
        return self._succ.get(sym, self._empty_rows)

    def edges(self) -> List[Edge]:
        """Non-zero transitions as (p, symbol, q, value), in a canonical order."""
        return [(self.states[i], sym, self.states[j], v) for (i, sym, j), v in sorted(self.delta.items())]

    def value(self, p: str, sym: str, q: str) -> ElemId:
        return self.delta.get((self._state(p), sym, self._state(q)), self.lattice.zero)

    # -- frontier evaluation ---------------------------------------------

    def _closure(self, frontier: Frontier) -> Frontier:
        return frontier

    def point_frontier(self, state: int, value: Optional[ElemId] = None) -> Frontier:
        value = self.lattice.one if value is None else value
        frontier = [frozenset()] * len(self.states)
        if value != self.lattice.zero:
            frontier[state] = frozenset((value,))
        return self._closure(tuple(frontier))

    def initial_frontier(self) -> Frontier:
        zero = self.lattice.zero
        return self._closure(tuple(frozenset((v,)) if v != zero else frozenset() for v in self.initial))

    def step(self, frontier: Frontier, sym: str) -> Frontier:
        meet, zero = self.lattice.meet_table, self.lattice.zero
        rows = self.successors(sym)
        buckets: List[Set[ElemId]] = [set() for _ in self.states]
        for p, values in enumerate(frontier):
            if not values:
                continue
            for q, d in rows[p]:
                bucket = buckets[q]
                for x in values:
                    y = meet[x][d]
                    if y != zero:
                        bucket.add(y)
        maximal = self.lattice.maximal
        return self._closure(tuple(maximal(b) for b in buckets))

    def run(self, word: Sequence[str], frontier: Optional[Frontier] = None) -> Frontier:
        frontier = self.initial_frontier() if frontier is None else frontier
        for sym in word:
            frontier = self.step(frontier, sym)
        return frontier

    def accept(self, frontier: Frontier) -> ElemId:
        meet, join = self.lattice.meet_table, self.lattice.join_table
        acc = self.lattice.zero
        for q, values in enumerate(frontier):
            t = self.terminal[q]
            for x in values:
                acc = join[acc][meet[x][t]]
        return acc

    def rec(self, word: Sequence[str]) -> ElemId:
        """Degree to which the automaton recognises word (join over paths)."""
        word = self.alphabet.check_word(word)
        return self.accept(self.run(word))

    def rec_table(self, max_len: int) -> Dict[Word, ElemId]:
        """rec for every word up to max_len, sharing work between prefixes."""
        out: Dict[Word, ElemId] = {}
        stack: List[Tuple[Word, Frontier]] = [((), self.initial_frontier())]
        while stack:
            word, frontier = stack.pop()
            out[word] = self.accept(frontier)
            if len(word) < max_len:
                for sym in self.alphabet:
                    stack.append((word + (sym,), self.step(frontier, sym)))
        return out

    def language(self) -> AutomatonBacked:
        return AutomatonBacked(self)

    # -- oracles ----------------------------------------------------------

    def path_value(self, path: Sequence[str]) -> ElemId:
        """
        Meet of the transition values along q0 σ1 q1 ... σk qk.

        Raises:
            MalformedPath: If the sequence does not alternate states and symbols
        """
        path = list(path)
        if len(path) % 2 == 0:
            raise MalformedPath(f"Path {path} must alternate states and symbols and end in a state")
        meet = self.lattice.meet_table
        acc = self.lattice.one
        for k in range(0, len(path) - 1, 2):
            p, sym, q = path[k], path[k + 1], path[k + 2]
            if p not in self.index or q not in self.index:
                raise MalformedPath(f"Path {path} uses an undeclared state")
            if sym != EPSILON and sym not in self.alphabet:
                raise MalformedPath(f"Path {path} uses an undeclared symbol {sym!r}")
            if sym == EPSILON and not self.allows_epsilon:
                raise MalformedPath(f"Path {path} uses {EPSILON} on an epsilon-free automaton")
            acc = meet[acc][self.value(p, sym, q)]
        if path[-1] not in self.index:
            raise MalformedPath(f"Path {path} uses an undeclared state")
        return acc

    def paths(self, word: Sequence[str]) -> Iterator[Tuple[Tuple[str, ...], ElemId]]:
        """Paths labelled word with non-zero value, as (states, value)."""
        if self.has_epsilon:
            raise UnexpectedEpsilon("Path enumeration needs an epsilon-free automaton")
        word = self.alphabet.check_word(word)
        meet, zero = self.lattice.meet_table, self.lattice.zero

        def walk(k: int, trail: Tuple[int, ...], acc: ElemId):
            if k == len(word):
                yield tuple(self.states[i] for i in trail), acc
                return
            for q, d in self.successors(word[k])[trail[-1]]:
                value = meet[acc][d]
                if value != zero:
                    yield from walk(k + 1, trail + (q,), value)

        for start in range(len(self.states)):
            yield from walk(0, (start,), self.lattice.one)

    def rec_paths(self, word: Sequence[str]) -> ElemId:
        """rec by explicit path enumeration (the definition)."""
        meet, join = self.lattice.meet_table, self.lattice.join_table
        acc = self.lattice.zero
        for trail, value in self.paths(word):
            i, j = self.index[trail[0]], self.index[trail[-1]]
            acc = join[acc][meet[meet[self.initial[i]][value]][self.terminal[j]]]
        return acc

    def rec_vector(self, word: Sequence[str]) -> ElemId:
        """Forward vector recurrence v(q) = ∨p v(p) ∧ δ(p, σ, q)."""
        if self.has_epsilon:
            raise UnexpectedEpsilon("The vector recurrence needs an epsilon-free automaton")
        word = self.alphabet.check_word(word)
        vector = self.initial
        for sym in word:
            vector = self.vector_step(vector, sym)
        return self.vector_accept(vector)

    def vector_step(self, vector: Tuple[ElemId, ...], sym: str) -> Tuple[ElemId, ...]:
        meet, join, zero = self.lattice.meet_table, self.lattice.join_table, self.lattice.zero
        out = [zero] * len(self.states)
        for p, rows in enumerate(self.successors(sym)):
            x = vector[p]
            if x == zero:
                continue
            for q, d in rows:
                out[q] = join[out[q]][meet[x][d]]
        return tuple(out)

    def vector_accept(self, vector: Tuple[ElemId, ...]) -> ElemId:
        meet, join = self.lattice.meet_table, self.lattice.join_table
        acc = self.lattice.zero
        for q, x in enumerate(vector):
            acc = join[acc][meet[x][self.terminal[q]]]
        return acc

    # -- structure --------------------------------------------------------

    def atoms(self) -> Tuple[ElemId, ...]:
        """Distinct truth values used by I, T and δ."""
        values = set(self.initial) | set(self.terminal) | set(self.delta.values())
        return tuple(sorted(values))

    def gamma_atoms(self) -> ElemId:
        return self.lattice.commutator(self.atoms())

    def is_deterministic(self) -> bool:
        zero = self.lattice.zero
        if self.has_epsilon:
            return False
        if sum(1 for v in self.initial if v != zero) != 1:
            return False
        for sym in self.alphabet:
            rows = self.successors(sym)
            if any(len(rows[p]) != 1 for p in range(len(self.states))):
                return False
        return True

    def is_crisp(self) -> bool:
        return all(v in (self.lattice.zero, self.lattice.one) for v in self.atoms())

    def value_range(self) -> FrozenSet[ElemId]:
        """Every value rec takes over all words."""
        seen = {self.initial_frontier()}
        queue = collections.deque(seen)
        values = set()
        cap = get_settings().max_states
        while queue:
            frontier = queue.popleft()
            values.add(self.accept(frontier))
            for sym in self.alphabet:
                nxt = self.step(frontier, sym)
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise StateBlowup(f"More than {cap} frontier states while collecting rec values")
                    queue.append(nxt)
        return frozenset(values)

    def to_document(self) -> Dict:
        names = self.lattice.elem_names
        return {
            'lattice': self.lattice.name,
            'alphabet': list(self.alphabet),
            'states': list(self.states),
            'initial': {q: names[v] for q, v in zip(self.states, self.initial) if v != self.lattice.zero},
            'terminal': {q: names[v] for q, v in zip(self.states, self.terminal) if v != self.lattice.zero},
            'delta': [[p, sym, q, names[v]] for p, sym, q, v in self.edges()],
        }

    def to_dot(self):
        """Graphviz rendering: doubled circles for terminal states, values on edges."""
        import graphviz

        names = self.lattice.elem_names
        zero, one = self.lattice.zero, self.lattice.one
        g = graphviz.Digraph('omlq', graph_attr={'rankdir': 'LR', 'label': f"Σ: {{{','.join(self.alphabet)}}}"})
        for i, q in enumerate(self.states):
            label = q
            if self.initial[i] != zero:
                label += f"\nI={names[self.initial[i]]}"
            if self.terminal[i] != zero:
                label += f"\nT={names[self.terminal[i]]}"
            shape = 'doublecircle' if self.terminal[i] != zero else 'circle'
            style = 'bold' if self.initial[i] != zero else ''
            g.node(q, label=graphviz.nohtml(label), shape=shape, style=style)
        grouped: Dict[Tuple[str, str], List[str]] = collections.defaultdict(list)
        for p, sym, q, v in self.edges():
            shown = 'ε' if sym == EPSILON else sym
            grouped[(p, q)].append(shown if v == one else f"{shown}/{names[v]}")
        for (p, q), labels in sorted(grouped.items()):
            g.edge(p, q, label=graphviz.nohtml(', '.join(labels)))
        return g


class EpsAutomaton(LAutomaton):
    """Automaton that may also move on the empty word (symbol @eps)."""

    allows_epsilon = True

    def _closure(self, frontier: Frontier) -> Frontier:
        rows = self.successors(EPSILON)
        if not any(rows):
            return frontier
        meet, zero = self.lattice.meet_table, self.lattice.zero
        maximal = self.lattice.maximal
        current = list(frontier)
        changed = True
        while changed:
            changed = False
            for p in range(len(self.states)):
                if not current[p]:
                    continue
                for q, d in rows[p]:
                    pushed = {meet[x][d] for x in current[p]}
                    pushed.discard(zero)
                    if not pushed:
                        continue
                    merged = maximal(current[q] | pushed)
                    if merged != current[q]:
                        current[q] = merged
                        changed = True
        return tuple(current)

    def rec_eps(self, word: Sequence[str]) -> ElemId:
        return self.rec(word)


def make_automaton(lattice: OrthoLattice, alphabet: Alphabet, states: Sequence[str],
                   initial: Mapping[str, ElemId], terminal: Mapping[str, ElemId],
                   delta: Iterable[Edge]) -> LAutomaton:
    """Build an EpsAutomaton when some transition uses @eps, else an LAutomaton."""
    delta = list(delta)
    cls = EpsAutomaton if any(e[1] == EPSILON for e in delta) else LAutomaton
    return cls(lattice, alphabet, states, initial, terminal, delta)


def rec(m: LAutomaton, word: Sequence[str]) -> ElemId:
    return m.rec(word)


def rec_eps(m: LAutomaton, word: Sequence[str]) -> ElemId:
    return m.rec(word)


def _require_eps_free(m: LAutomaton, what: str) -> None:
    if m.has_epsilon:
        raise UnexpectedEpsilon(f"{what} needs an epsilon-free automaton; run eps-reduce first")


def _same_alphabet(m1: LAutomaton, m2: LAutomaton) -> None:
    if m1.alphabet != m2.alphabet:
        raise AlphabetMismatch(f"Alphabets differ: {list(m1.alphabet)} vs {list(m2.alphabet)}")


def _fresh(name: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    while name in taken:
        name += "'"
    return name


def vector_name(states: Sequence[str], vector: Sequence[ElemId], lat: OrthoLattice) -> str:
    parts = [f"{q}:{lat.elem_names[v]}" for q, v in zip(states, vector) if v != lat.zero]
    return '{' + ','.join(parts) + '}'


def determinize(m: LAutomaton) -> LAutomaton:
    """
    Power-set construction restricted to reachable lattice-valued subsets.

    Transitions are crisp, the initial state is the subset I, and each subset X
    is terminal to degree ∨q X(q) ∧ T(q).

    Raises:
        UnexpectedEpsilon: For epsilon automata
        StateBlowup: If more subsets are reachable than the configured cap
    """
    _require_eps_free(m, 'determinize')
    lat = m.lattice
    cap = get_settings().max_states
    start = m.initial
    order = [start]
    seen = {start: 0}
    edges = []
    queue = collections.deque([start])
    while queue:
        vector = queue.popleft()
        for sym in m.alphabet:
            nxt = m.vector_step(vector, sym)
            if nxt not in seen:
                seen[nxt] = len(order)
                order.append(nxt)
                if len(order) > cap:
                    raise StateBlowup(f"Power-set construction exceeded {cap} states")
                queue.append(nxt)
            edges.append((vector, sym, nxt))

    names = [vector_name(m.states, v, lat) for v in order]
    label = dict(zip(order, names))
    logger.debug(f"Determinized {len(m.states)} states into {len(order)} reachable subsets")
    return LAutomaton(
        lat, m.alphabet, names,
        initial={label[start]: lat.one},
        terminal={label[v]: m.vector_accept(v) for v in order},
        delta=[(label[x], sym, label[y], lat.one) for x, sym, y in edges],
    )


def eps_closure_table(m: LAutomaton) -> Tuple[Frontier, ...]:
    """For each state p, the antichains of ε-path values from p to every state."""
    return tuple(m.point_frontier(p) for p in range(len(m.states)))


def eps_reduce(m: LAutomaton) -> LAutomaton:
    """
    Remove ε-moves: δ'(p, σ, q) joins x ∧ δ(r, σ, t) ∧ y over ε-path values
    x from p to r and y from t to q; T'(p) joins x ∧ T(q) over ε-path values
    x from p to q; I is unchanged.
    """
    lat = m.lattice
    if not m.has_epsilon:
        return LAutomaton(lat, m.alphabet, m.states,
                          dict(zip(m.states, m.initial)), dict(zip(m.states, m.terminal)), m.edges())
    meet, join, zero = lat.meet_table, lat.join_table, lat.zero
    closure = eps_closure_table(m)
    n = len(m.states)

    terminal = {}
    for p in range(n):
        acc = zero
        for q, values in enumerate(closure[p]):
            for x in values:
                acc = join[acc][meet[x][m.terminal[q]]]
        terminal[m.states[p]] = acc

    delta = []
    for sym in m.alphabet:
        rows = m.successors(sym)
        for p in range(n):
            out = [zero] * n
            for r, xs in enumerate(closure[p]):
                for t, d in rows[r]:
                    for x in xs:
                        xd = meet[x][d]
                        if xd == zero:
                            continue
                        for q, ys in enumerate(closure[t]):
                            for y in ys:
                                out[q] = join[out[q]][meet[xd][y]]
            delta.extend((m.states[p], sym, m.states[q], v) for q, v in enumerate(out) if v != zero)

    return LAutomaton(lat, m.alphabet, m.states, dict(zip(m.states, m.initial)), terminal, delta)


def _prefixed(m: LAutomaton, prefix: str) -> Tuple[List[str], Dict[str, ElemId], Dict[str, ElemId], List[Edge]]:
    states = [f"{prefix}{q}" for q in m.states]
    initial = {f"{prefix}{q}": v for q, v in zip(m.states, m.initial)}
    terminal = {f"{prefix}{q}": v for q, v in zip(m.states, m.terminal)}
    delta = [(f"{prefix}{p}", sym, f"{prefix}{q}", v) for p, sym, q, v in m.edges()]
    return states, initial, terminal, delta


def union_aut(m1: LAutomaton, m2: LAutomaton) -> LAutomaton:
    """Disjoint union; states are renamed '1.q' and '2.q'."""
    lat = same_lattice(m1.lattice, m2.lattice)
    _same_alphabet(m1, m2)
    s1, i1, t1, d1 = _prefixed(m1, '1.')
    s2, i2, t2, d2 = _prefixed(m2, '2.')
    return make_automaton(lat, m1.alphabet, s1 + s2, {**i1, **i2}, {**t1, **t2}, d1 + d2)


def product_aut(m1: LAutomaton, m2: LAutomaton) -> LAutomaton:
    """Synchronous product with pointwise meets of I, T and δ."""
    lat = same_lattice(m1.lattice, m2.lattice)
    _same_alphabet(m1, m2)
    _require_eps_free(m1, 'product')
    _require_eps_free(m2, 'product')
    meet = lat.meet_table
    pairs = [(p, q) for p in range(len(m1.states)) for q in range(len(m2.states))]
    name = {pq: f"({m1.states[pq[0]]},{m2.states[pq[1]]})" for pq in pairs}
    initial = {name[(p, q)]: meet[m1.initial[p]][m2.initial[q]] for p, q in pairs}
    terminal = {name[(p, q)]: meet[m1.terminal[p]][m2.terminal[q]] for p, q in pairs}
    delta = []
    for sym in m1.alphabet:
        rows1, rows2 = m1.successors(sym), m2.successors(sym)
        for p, q in pairs:
            for p2, d1 in rows1[p]:
                for q2, d2 in rows2[q]:
                    delta.append((name[(p, q)], sym, name[(p2, q2)], meet[d1][d2]))
    return LAutomaton(lat, m1.alphabet, [name[pq] for pq in pairs], initial, terminal, delta)


def concat_aut(m1: LAutomaton, m2: LAutomaton) -> EpsAutomaton:
    """Concatenation: ε-edges from every p in M1 to every q in M2 valued T1(p) ∧ I2(q)."""
    lat = same_lattice(m1.lattice, m2.lattice)
    _same_alphabet(m1, m2)
    meet = lat.meet_table
    s1, i1, _, d1 = _prefixed(m1, '1.')
    s2, _, t2, d2 = _prefixed(m2, '2.')
    links = [
        (f"1.{p}", EPSILON, f"2.{q}", meet[tp][iq])
        for p, tp in zip(m1.states, m1.terminal)
        for q, iq in zip(m2.states, m2.initial)
    ]
    return EpsAutomaton(lat, m1.alphabet, s1 + s2, i1, t2, d1 + d2 + links)


def fold_aut(m: LAutomaton) -> EpsAutomaton:
    """
    Fold (star) construction: a fresh crisp initial and terminal state with
    ε-edges valued I(q) into M, plus back-edges p → q valued T(p) ∧ I(q).
    """
    lat = m.lattice
    meet = lat.meet_table
    start = _fresh('q0', m.states)
    delta = list(m.edges())
    delta += [(start, EPSILON, q, iq) for q, iq in zip(m.states, m.initial)]
    delta += [
        (p, EPSILON, q, meet[tp][iq])
        for p, tp in zip(m.states, m.terminal)
        for q, iq in zip(m.states, m.initial)
    ]
    terminal = dict(zip(m.states, m.terminal))
    terminal[start] = lat.one
    return EpsAutomaton(lat, m.alphabet, [start] + list(m.states), {start: lat.one}, terminal, delta)


def inverse_aut(m: LAutomaton) -> LAutomaton:
    """Reverse every transition and swap I with T; recognises reversed words."""
    delta = [(q, sym, p, v) for p, sym, q, v in m.edges()]
    return type(m)(m.lattice, m.alphabet, m.states,
                   dict(zip(m.states, m.terminal)), dict(zip(m.states, m.initial)), delta)


def complement_det(m: LAutomaton) -> LAutomaton:
    """
    Orthocomplement the terminal values of a crisp deterministic automaton.

    Raises:
        NotDeterministic: Unless M is deterministic with crisp initial and transition values
    """
    lat = m.lattice
    if not m.is_deterministic():
        raise NotDeterministic("Complement needs a deterministic automaton (determinize first)")
    if any(v not in (lat.zero, lat.one) for v in m.initial) or any(v != lat.one for v in m.delta.values()):
        raise NotDeterministic("Complement needs crisp initial and transition values")
    terminal = {q: lat.ortho_table[t] for q, t in zip(m.states, m.terminal)}
    return LAutomaton(lat, m.alphabet, m.states, dict(zip(m.states, m.initial)), terminal, m.edges())


def string_values(m: LAutomaton, p: int, word: Sequence[str]) -> Tuple[ElemId, ...]:
    """δ(p, word, q) for every q: join over paths labelled word of their meets."""
    frontier = m.point_frontier(p)
    for sym in word:
        frontier = m.step(frontier, sym)
    return tuple(m.lattice.big_join(values) for values in frontier)


def hom_preimage_aut(h: Homomorphism, m: LAutomaton, source: Optional[Alphabet] = None) -> LAutomaton:
    """
    Pre-image automaton over the domain of h: δ'(p, σ, q) = δ(p, h(σ), q).
    """
    _require_eps_free(m, 'hom-preimage')
    source = source or Alphabet(tuple(h))
    lat = m.lattice
    delta = []
    for sym in source:
        if sym not in h:
            raise AlphabetMismatch(f"Homomorphism is not defined on {sym!r}")
        image = m.alphabet.check_word(h[sym])
        for p in range(len(m.states)):
            if not image:
                delta.append((m.states[p], sym, m.states[p], lat.one))
                continue
            for q, v in enumerate(string_values(m, p, image)):
                if v != lat.zero:
                    delta.append((m.states[p], sym, m.states[q], v))
    return LAutomaton(lat, source, m.states, dict(zip(m.states, m.initial)),
                      dict(zip(m.states, m.terminal)), delta)


def hom_image_aut(h: Homomorphism, m: LAutomaton, target: Alphabet) -> EpsAutomaton:
    """
    Automaton for the image h(rec_M): every σ-edge becomes a chain reading
    h(σ) whose first edge carries the value and the rest are crisp; erased
    symbols become ε-edges.
    """
    lat = m.lattice
    states = list(m.states)
    delta: List[Edge] = []
    for count, (p, sym, q, v) in enumerate(m.edges()):
        if sym == EPSILON:
            delta.append((p, sym, q, v))
            continue
        if sym not in h:
            raise AlphabetMismatch(f"Homomorphism is not defined on {sym!r}")
        image = target.check_word(h[sym])
        if not image:
            delta.append((p, EPSILON, q, v))
            continue
        chain = [p]
        for k in range(1, len(image)):
            mid = _fresh(f"{p}~{sym}~{q}#{count}.{k}", states)
            states.append(mid)
            chain.append(mid)
        chain.append(q)
        for k, out in enumerate(image):
            delta.append((chain[k], out, chain[k + 1], v if k == 0 else lat.one))
    return EpsAutomaton(lat, target, states, dict(zip(m.states, m.initial)),
                        dict(zip(m.states, m.terminal)), delta)


def joint_value_pairs(m1: LAutomaton, m2: LAutomaton) -> Tuple[FrozenSet[Tuple[ElemId, ElemId]], int]:
    """
    Every pair (rec1(s), rec2(s)) over all words s, and the length of the
    longest word needed to reach a new joint frontier.
    """
    same_lattice(m1.lattice, m2.lattice)
    _same_alphabet(m1, m2)
    cap = get_settings().max_states
    start = (m1.initial_frontier(), m2.initial_frontier())
    seen = {start}
    layer = [start]
    pairs = set()
    depth = 0
    while layer:
        nxt_layer = []
        for f1, f2 in layer:
            pairs.add((m1.accept(f1), m2.accept(f2)))
            for sym in m1.alphabet:
                nxt = (m1.step(f1, sym), m2.step(f2, sym))
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise StateBlowup(f"Joint exploration exceeded {cap} frontier pairs")
                    nxt_layer.append(nxt)
        if nxt_layer:
            depth += 1
        layer = nxt_layer
    return frozenset(pairs), depth


def equiv_degree_exact(m1: LAutomaton, m2: LAutomaton, impl: ImplKind) -> ElemId:
    """⌈rec_M1 ≡ rec_M2⌉: meet of biimplications over every achieved value pair."""
    lat = m1.lattice
    pairs, _ = joint_value_pairs(m1, m2)
    meet = lat.meet_table
    acc = lat.one
    for a, b in sorted(pairs):
        acc = meet[acc][biimplies(lat, impl, a, b)]
    return acc
