"""
Finite ortholattices, orthomodular lattices and Boolean algebras.

A lattice is given by its order relation and orthocomplement. Meets and joins
are derived by exhaustive glb/lub search and stored as lookup tables; elements
are plain integer ids that are only meaningful inside their own lattice.
"""

import functools
import itertools
import logging
import threading
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from config import get_settings
from errors import (
    BadOrthocomplement,
    CommutatorSetTooLarge,
    CrossLattice,
    NotALattice,
    UnknownBuiltin,
    ValidationError,
)

logger = logging.getLogger(__name__)

ElemId = int
ElemSet = Tuple[ElemId, ...]

BUILTIN_NAMES = ('bool2', 'boolN:<k>', 'mo2', 'chinese_lantern', 'o6', 'free2')


class OrthoLattice:
    """
    A validated finite ortholattice.

    Instances are immutable once built by validate_lattice(); every operation is
    a table lookup or a fold over lookups, so sharing across threads is safe.
    """

    def __init__(self, name: str, elem_names: Sequence[str], leq: np.ndarray,
                 meet: np.ndarray, join: np.ndarray, ortho: np.ndarray,
                 zero: ElemId, one: ElemId,
                 orthomodular_violation: Optional[Tuple[ElemId, ElemId]],
                 distributive_violation: Optional[Tuple[ElemId, ElemId, ElemId]]):
        self.name = name
        self.elem_names: Tuple[str, ...] = tuple(elem_names)
        self.size = len(self.elem_names)
        self.zero = int(zero)
        self.one = int(one)

        self.leq_array = leq
        self.meet_array = meet
        self.join_array = join
        self.ortho_array = ortho
        for array in (leq, meet, join, ortho):
            array.setflags(write=False)

        # Tuple mirrors of the arrays for scalar lookups
        self.leq_table: Tuple[Tuple[bool, ...], ...] = tuple(tuple(row) for row in leq.tolist())
        self.meet_table: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in meet.tolist())
        self.join_table: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in join.tolist())
        self.ortho_table: Tuple[int, ...] = tuple(ortho.tolist())

        self.orthomodular_violation = orthomodular_violation
        self.distributive_violation = distributive_violation
        self.is_orthomodular = orthomodular_violation is None
        self.is_boolean = distributive_violation is None

        self._index: Dict[str, ElemId] = {n: i for i, n in enumerate(self.elem_names)}
        self._commutes: Optional[np.ndarray] = None
        self._commutator_cache: Dict[frozenset, ElemId] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"OrthoLattice({self.name!r}, {self.size} elements)"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, OrthoLattice):
            return NotImplemented
        return (self.elem_names == other.elem_names
                and self.ortho_table == other.ortho_table
                and self.leq_table == other.leq_table)

    def __hash__(self) -> int:
        return hash((self.elem_names, self.ortho_table))

    # -- element naming -------------------------------------------------

    def elem(self, name: str) -> ElemId:
        """Look up an element id by name."""
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError(f"Unknown element {name!r} in lattice {self.name}") from None

    def name_of(self, a: ElemId) -> str:
        self.check(a)
        return self.elem_names[a]

    def names(self, elems: Iterable[ElemId]) -> List[str]:
        return [self.name_of(a) for a in elems]

    def check(self, *elems: ElemId) -> None:
        """Raise CrossLattice unless every id belongs to this lattice."""
        for a in elems:
            if not isinstance(a, (int, np.integer)) or not 0 <= a < self.size:
                raise CrossLattice(f"Element id {a!r} does not belong to lattice {self.name}")

    def elements(self) -> range:
        return range(self.size)

    # -- basic operations -----------------------------------------------

    def meet(self, a: ElemId, b: ElemId) -> ElemId:
        self.check(a, b)
        return self.meet_table[a][b]

    def join(self, a: ElemId, b: ElemId) -> ElemId:
        self.check(a, b)
        return self.join_table[a][b]

    def ortho(self, a: ElemId) -> ElemId:
        self.check(a)
        return self.ortho_table[a]

    def leq(self, a: ElemId, b: ElemId) -> bool:
        self.check(a, b)
        return self.leq_table[a][b]

    def big_meet(self, elems: Iterable[ElemId]) -> ElemId:
        """Meet of a finite family; the empty meet is one."""
        meet = self.meet_table
        acc = self.one
        for a in elems:
            self.check(a)
            acc = meet[acc][a]
        return acc

    def big_join(self, elems: Iterable[ElemId]) -> ElemId:
        """Join of a finite family; the empty join is zero."""
        join = self.join_table
        acc = self.zero
        for a in elems:
            self.check(a)
            acc = join[acc][a]
        return acc

    def maximal(self, elems: Iterable[ElemId]) -> frozenset:
        """Antichain of the maximal members of elems, zero dropped."""
        leq = self.leq_table
        values = set(elems)
        values.discard(self.zero)
        if len(values) <= 1:
            return frozenset(values)
        return frozenset(a for a in values
                         if not any(b != a and leq[a][b] for b in values))

    # -- commutation ----------------------------------------------------

    def commutes_array(self) -> np.ndarray:
        """Boolean matrix C with C[a, b] iff a = (a∧b) ∨ (a∧b⊥)."""
        if self._commutes is None:
            with self._lock:
                if self._commutes is None:
                    M, J, O = self.meet_array, self.join_array, self.ortho_array
                    table = J[M, M[:, O]] == np.arange(self.size)[:, None]
                    table.setflags(write=False)
                    self._commutes = table
        return self._commutes

    def commutes(self, a: ElemId, b: ElemId) -> bool:
        self.check(a, b)
        return bool(self.commutes_array()[a, b])

    def commutator(self, elems: Iterable[ElemId], cap: Optional[int] = None) -> ElemId:
        """
        Commutator γ(S): join over all sign assignments of the signed meets.

        Zero, one and duplicates are removed first; they do not change the value.

        Args:
            elems: Finite family of elements
            cap: Largest family size to enumerate (defaults to the configured cap)

        Returns:
            The commutator element

        Raises:
            CommutatorSetTooLarge: If more than cap elements remain after stripping
        """
        members = set()
        for a in elems:
            self.check(a)
            if a != self.zero and a != self.one:
                members.add(int(a))

        cap = get_settings().commutator_cap if cap is None else cap
        if len(members) > cap:
            raise CommutatorSetTooLarge(
                f"Commutator over {len(members)} elements exceeds cap {cap} "
                f"(raise --commutator-cap or OMLQ_COMMUTATOR_CAP)"
            )

        key = frozenset(members)
        cached = self._commutator_cache.get(key)
        if cached is not None:
            return cached

        ordered = sorted(members)
        meet, join, ortho = self.meet_table, self.join_table, self.ortho_table
        zero, one = self.zero, self.one
        result = zero
        stack = [(0, one)]
        while stack and result != one:
            depth, acc = stack.pop()
            if depth == len(ordered):
                result = join[result][acc]
                continue
            a = ordered[depth]
            for signed in (a, ortho[a]):
                term = meet[acc][signed]
                if term != zero:
                    stack.append((depth + 1, term))

        with self._lock:
            self._commutator_cache[key] = result
        return result

    def strong_commutator(self, elems: Iterable[ElemId]) -> ElemId:
        """
        Strong commutator Γ(S), found by scanning every element b with bCa for
        all a in S and (a1∧b)C(a2∧b) for all a1, a2 in S.
        """
        members = sorted({int(a) for a in elems})
        self.check(*members)
        commutes = self.commutes_array()
        meet = self.meet_table
        result = self.zero
        for b in range(self.size):
            if not all(commutes[b, a] for a in members):
                continue
            cut = [meet[a][b] for a in members]
            if all(commutes[x, y] for x in cut for y in cut):
                result = self.join_table[result][b]
        return result

    def subalgebra(self, elems: Iterable[ElemId]) -> ElemSet:
        """Least subset containing elems, zero and one, closed under ∧, ∨ and ⊥."""
        closed = {self.zero, self.one}
        for a in elems:
            self.check(a)
            closed.add(int(a))
        meet, join, ortho = self.meet_table, self.join_table, self.ortho_table
        frontier = set(closed)
        while frontier:
            fresh = set()
            for a in frontier:
                fresh.add(ortho[a])
                for b in closed:
                    fresh.add(meet[a][b])
                    fresh.add(join[a][b])
            fresh -= closed
            closed |= fresh
            frontier = fresh
        return tuple(sorted(closed))

    # -- diagnostics ----------------------------------------------------

    def benzene_subalgebra(self) -> Optional[Tuple[ElemId, ElemId]]:
        """
        Find a < b (a ≠ 0, b ≠ 1) such that {0, a, b, a⊥, b⊥, 1} is a six-element
        subalgebra shaped like the benzene ring. Returns None when there is none,
        which happens exactly for orthomodular lattices.
        """
        leq, ortho = self.leq_table, self.ortho_table
        for a in range(self.size):
            if a in (self.zero, self.one):
                continue
            for b in range(self.size):
                if b == a or b == self.one or not leq[a][b]:
                    continue
                hexagon = {self.zero, a, b, ortho[a], ortho[b], self.one}
                if len(hexagon) == 6 and set(self.subalgebra(hexagon)) == hexagon:
                    return a, b
        return None

    def describe_violation(self) -> Optional[str]:
        if self.orthomodular_violation is None:
            return None
        a, b = self.orthomodular_violation
        return (f"orthomodular law violated at (a,b)=({self.elem_names[a]},{self.elem_names[b]}): "
                f"a ≤ b but a∨(a⊥∧b) = "
                f"{self.elem_names[self.join_table[a][self.meet_table[self.ortho_table[a]][b]]]}")

    def covering_pairs(self) -> List[Tuple[ElemId, ElemId]]:
        """Hasse diagram edges (a, b) with a ⋖ b."""
        strict = self.leq_array & ~np.eye(self.size, dtype=bool)
        s = strict.astype(np.int64)
        cover = strict & ~((s @ s) > 0)
        return [(int(a), int(b)) for a, b in np.argwhere(cover)]

    def to_document(self) -> Dict:
        return {
            'name': self.name,
            'elements': list(self.elem_names),
            'leq': [[self.elem_names[a], self.elem_names[b]] for a, b in self.covering_pairs()],
            'ortho': {self.elem_names[a]: self.elem_names[self.ortho_table[a]] for a in range(self.size)},
        }


def same_lattice(*lattices: OrthoLattice) -> OrthoLattice:
    """Return the common lattice, raising CrossLattice if they differ."""
    first = lattices[0]
    for other in lattices[1:]:
        if other is not first and other != first:
            raise CrossLattice(f"Lattice mismatch: {first.name} vs {other.name}")
    return first


def _bound_table(R: np.ndarray, upper: bool, names: Sequence[str]) -> np.ndarray:
    """Derive the glb (or lub) table from a partial order, checking uniqueness."""
    n = R.shape[0]
    if upper:
        # U[a, b, x]: x is an upper bound of a and b
        bounds = R[:, None, :] & R[None, :, :]
        # x is least iff no upper bound y lies strictly outside the up-set of x
        beats = ~R
    else:
        bounds = R.T[:, None, :] & R.T[None, :, :]
        beats = ~R.T
    flat = bounds.reshape(n * n, n).astype(np.int64)
    # blocked[p, x] counts bounds y of pair p with not (x ≤ y) (resp. not (y ≤ x))
    blocked = flat @ beats.astype(np.int64).T
    best = bounds & (blocked.reshape(n, n, n) == 0)
    counts = best.sum(axis=2)
    bad = np.argwhere(counts != 1)
    if len(bad):
        a, b = bad[0]
        kind = 'least upper bound' if upper else 'greatest lower bound'
        raise NotALattice(f"{names[a]} and {names[b]} have no unique {kind}")
    return best.argmax(axis=2)


def validate_lattice(name: str, elements: Sequence[str], leq: Iterable[Sequence[str]],
                     ortho: Mapping[str, str]) -> OrthoLattice:
    """
    Build and validate an ortholattice from an order relation and orthocomplement.

    Args:
        name: Lattice name
        elements: Distinct element names
        leq: Pairs [a, b] meaning a ≤ b; closed reflexively and transitively
        ortho: Mapping from every element name to its orthocomplement

    Returns:
        Fully tabulated OrthoLattice with orthomodular/Boolean flags set

    Raises:
        NotALattice: On bad names, order cycles, or a pair without unique glb/lub
        BadOrthocomplement: If ortho is partial, not involutive, not antitone,
            or not a complement
    """
    names = [str(e) for e in elements]
    if not names:
        raise NotALattice("Lattice has no elements")
    if len(set(names)) != len(names):
        dup = next(e for e in names if names.count(e) > 1)
        raise NotALattice(f"Duplicate element name {dup!r}")
    index = {e: i for i, e in enumerate(names)}
    n = len(names)

    R = np.eye(n, dtype=bool)
    for pair in leq:
        if len(pair) != 2:
            raise NotALattice(f"leq entry {list(pair)!r} is not a pair")
        a, b = pair
        for e in (a, b):
            if e not in index:
                raise NotALattice(f"leq pair references undeclared element {e!r}")
        R[index[a], index[b]] = True

    for k in range(n):
        R |= np.outer(R[:, k], R[k, :])

    cycle = np.argwhere(R & R.T & ~np.eye(n, dtype=bool))
    if len(cycle):
        a, b = cycle[0]
        raise NotALattice(f"Order has a cycle through {names[a]} and {names[b]}")

    bottoms = np.flatnonzero(R.all(axis=1))
    tops = np.flatnonzero(R.all(axis=0))
    if len(bottoms) != 1:
        raise NotALattice("Order has no least element")
    if len(tops) != 1:
        raise NotALattice("Order has no greatest element")
    zero, one = int(bottoms[0]), int(tops[0])

    M = _bound_table(R, upper=False, names=names)
    J = _bound_table(R, upper=True, names=names)

    missing = [e for e in names if e not in ortho]
    if missing:
        raise BadOrthocomplement(f"No orthocomplement given for {missing[0]!r}")
    for e, f in ortho.items():
        if e not in index or f not in index:
            raise BadOrthocomplement(f"Orthocomplement entry {e!r} -> {f!r} uses an undeclared element")
    O = np.array([index[ortho[e]] for e in names], dtype=np.int64)

    ar = np.arange(n)
    bad = np.flatnonzero(O[O] != ar)
    if len(bad):
        a = bad[0]
        raise BadOrthocomplement(f"Orthocomplement is not an involution at {names[a]}")
    bad = np.argwhere(R & ~R[np.ix_(O, O)].T)
    if len(bad):
        a, b = bad[0]
        raise BadOrthocomplement(f"Orthocomplement is not antitone at ({names[a]},{names[b]})")
    bad = np.flatnonzero((M[ar, O] != zero) | (J[ar, O] != one))
    if len(bad):
        a = bad[0]
        raise BadOrthocomplement(f"{names[a]} and its orthocomplement {names[O[a]]} are not complements")

    # a ≤ b implies a ∨ (a⊥ ∧ b) = b
    X = J[ar[:, None], M[O[:, None], ar[None, :]]]
    bad = np.argwhere(R & (X != ar[None, :]))
    om_violation = (int(bad[0][0]), int(bad[0][1])) if len(bad) else None

    lhs = M[ar[:, None, None], J[None, :, :]]
    rhs = J[M[:, :, None], M[:, None, :]]
    bad = np.argwhere(lhs != rhs)
    dist_violation = tuple(int(v) for v in bad[0]) if len(bad) else None

    lattice = OrthoLattice(name, names, R, M, J, O, zero, one, om_violation, dist_violation)
    logger.debug(f"Validated lattice {name}: {n} elements, "
                 f"orthomodular={lattice.is_orthomodular}, boolean={lattice.is_boolean}")
    return lattice


def product_lattice(l1: OrthoLattice, l2: OrthoLattice, name: Optional[str] = None) -> OrthoLattice:
    """Componentwise product; element names are joined as 'a|b'."""
    pairs = list(itertools.product(range(l1.size), range(l2.size)))
    label = {p: f"{l1.elem_names[p[0]]}|{l2.elem_names[p[1]]}" for p in pairs}
    leq = [
        (label[p], label[q]) for p in pairs for q in pairs
        if l1.leq_table[p[0]][q[0]] and l2.leq_table[p[1]][q[1]]
    ]
    ortho = {label[p]: label[(l1.ortho_table[p[0]], l2.ortho_table[p[1]])] for p in pairs}
    return validate_lattice(name or f"{l1.name}x{l2.name}", [label[p] for p in pairs], leq, ortho)


def _boolean_algebra(k: int, name: str) -> OrthoLattice:
    atoms = 'abcdefgh'[:k]
    subsets = [frozenset(c) for r in range(k + 1) for c in itertools.combinations(atoms, r)]

    def label(s):
        if not s:
            return '0'
        if len(s) == k:
            return '1'
        return ''.join(sorted(s))

    full = frozenset(atoms)
    leq = [(label(s), label(t)) for s in subsets for t in subsets if s < t]
    ortho = {label(s): label(full - s) for s in subsets}
    return validate_lattice(name, [label(s) for s in subsets], leq, ortho)


def _hexagon_free(name: str, atoms: Sequence[Tuple[str, str]]) -> OrthoLattice:
    """Horizontal sum of two four-element Boolean blocks (MO2 shape)."""
    elements = ['0'] + [e for pair in atoms for e in pair] + ['1']
    leq = [('0', e) for pair in atoms for e in pair] + [(e, '1') for pair in atoms for e in pair]
    ortho = {'0': '1', '1': '0'}
    for a, b in atoms:
        ortho[a], ortho[b] = b, a
    return validate_lattice(name, elements, leq, ortho)


@functools.lru_cache(maxsize=None)
def builtin(name: str) -> OrthoLattice:
    """
    Return a named builtin lattice. The same name always yields the same object.

    Raises:
        UnknownBuiltin: If the name is not recognised
    """
    if name == 'bool2':
        return validate_lattice('bool2', ['0', '1'], [('0', '1')], {'0': '1', '1': '0'})
    if name.startswith('boolN:'):
        try:
            k = int(name.split(':', 1)[1])
        except ValueError:
            raise UnknownBuiltin(f"Bad Boolean algebra size in {name!r}") from None
        if not 1 <= k <= 6:
            raise UnknownBuiltin(f"boolN:<k> supports 1 <= k <= 6, got {k}")
        return _boolean_algebra(k, name)
    if name == 'mo2':
        return _hexagon_free('mo2', [('x', "x'"), ('y', "y'")])
    if name == 'chinese_lantern':
        return _hexagon_free('chinese_lantern', [('p-', 'p+'), ('pbar-', 'pbar+')])
    if name == 'o6':
        elements = ['0', 'a', 'b', "b'", "a'", '1']
        leq = [('0', 'a'), ('a', 'b'), ('b', '1'), ('0', "b'"), ("b'", "a'"), ("a'", '1')]
        ortho = {'0': '1', '1': '0', 'a': "a'", "a'": 'a', 'b': "b'", "b'": 'b'}
        return validate_lattice('o6', elements, leq, ortho)
    if name == 'free2':
        return product_lattice(builtin('boolN:4'), builtin('mo2'), name='free2')
    raise UnknownBuiltin(f"Unknown builtin lattice {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")
