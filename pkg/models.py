"""
Records produced by the verification harness.
"""

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from lattice import ElemId, OrthoLattice

RELATIONS = ('≤', '=', 'gap-strict')


def relation_holds(lat: OrthoLattice, relation: str, lhs: ElemId, rhs: ElemId) -> bool:
    if relation == '≤':
        return lat.leq_table[lhs][rhs]
    if relation == '=':
        return lhs == rhs
    if relation == 'gap-strict':
        return lat.leq_table[lhs][rhs] and lhs != rhs
    raise ValueError(f"Unknown relation {relation!r}; expected one of {', '.join(RELATIONS)}")


@dataclass
class CheckReport:
    """Outcome of one check: both sides, the asserted relation, and whether it held."""

    check_id: str
    instance: str
    index: int
    lattice: str
    lhs: ElemId
    rhs: ElemId
    lhs_name: str
    rhs_name: str
    relation: str
    passed: bool
    witness: Optional[str] = None
    detail: Optional[str] = None

    @classmethod
    def compare(cls, check_id: str, instance: str, index: int, lat: OrthoLattice,
                lhs: ElemId, rhs: ElemId, relation: str = '≤',
                witness: Optional[str] = None, detail: Optional[str] = None) -> 'CheckReport':
        return cls(
            check_id=check_id,
            instance=instance,
            index=index,
            lattice=lat.name,
            lhs=int(lhs),
            rhs=int(rhs),
            lhs_name=lat.elem_names[lhs],
            rhs_name=lat.elem_names[rhs],
            relation=relation,
            passed=relation_holds(lat, relation, lhs, rhs),
            witness=witness,
            detail=detail,
        )

    @classmethod
    def flag(cls, check_id: str, instance: str, index: int, lat: OrthoLattice,
             observed: bool, expected: bool = True, witness: Optional[str] = None,
             detail: Optional[str] = None) -> 'CheckReport':
        """Boolean property encoded as 1/0 in the lattice, compared with '='."""
        def value(b: bool) -> ElemId:
            return lat.one if b else lat.zero

        return cls.compare(check_id, instance, index, lat, value(observed), value(expected), '=',
                           witness=witness, detail=detail)

    @classmethod
    def errored(cls, check_id: str, instance: str, index: int, lat: OrthoLattice,
                error: str) -> 'CheckReport':
        """A check that raised; recorded as 0 = 1 so it always fails."""
        return cls.flag(check_id, instance, index, lat, False, True, detail=f"error: {error}")

    def sort_key(self):
        return (self.check_id, self.index, self.instance, self.lattice)

    def to_dict(self) -> Dict[str, Any]:
        """Convert report to dictionary."""
        return {
            'check_id': self.check_id,
            'instance': self.instance,
            'index': self.index,
            'lattice': self.lattice,
            'lhs': self.lhs_name,
            'rhs': self.rhs_name,
            'relation': self.relation,
            'passed': self.passed,
            'witness': self.witness,
            'detail': self.detail,
        }


class Tally:
    """
    Accumulates one aggregated report over many tuples: the first violation
    wins, otherwise the last pair checked is recorded.
    """

    def __init__(self, check_id: str, instance: str, index: int, lat: OrthoLattice, relation: str = '≤'):
        self.check_id = check_id
        self.instance = instance
        self.index = index
        self.lat = lat
        self.relation = relation
        self.checked = 0
        self._last: Optional[tuple] = None
        self._failure: Optional[tuple] = None

    @property
    def failed(self) -> bool:
        return self._failure is not None

    def add(self, lhs: ElemId, rhs: ElemId, witness: Optional[str] = None) -> bool:
        """Record one pair; returns whether the relation held."""
        self.checked += 1
        ok = relation_holds(self.lat, self.relation, lhs, rhs)
        if not ok and self._failure is None:
            self._failure = (lhs, rhs, witness)
        self._last = (lhs, rhs, witness)
        return ok

    def report(self) -> CheckReport:
        chosen = self._failure or self._last
        if chosen is None:
            lat = self.lat
            return CheckReport.compare(self.check_id, self.instance, self.index, lat, lat.zero, lat.zero,
                                       '=' if self.relation != 'gap-strict' else self.relation,
                                       detail='no cases')
        lhs, rhs, witness = chosen
        return CheckReport.compare(self.check_id, self.instance, self.index, self.lat, lhs, rhs,
                                   self.relation, witness=witness if self._failure else None,
                                   detail=f"{self.checked} cases")


@dataclass
class CheckTask:
    """Unit of work for the suite worker."""

    group: str
    index: int
    run: Callable[[], List[CheckReport]]
    lattice: OrthoLattice
    description: str = ''
    status: str = 'pending'  # pending, queued, running, completed, failed
    error_message: Optional[str] = None
    reports: List[CheckReport] = field(default_factory=list)


@dataclass
class CheckContext:
    """Parameters shared by every check of a suite run."""

    seed: int = 7
    max_len: int = 5
    samples: int = 100
    max_pump: int = 3
    zero_bias: float = 0.5
    impl: int = 3
    equalities: bool = False
    exhaustive_limit: int = 4096
    sampled_tuples: int = 1000

    def tuples(self, lat: OrthoLattice, arity: int, rng) -> Iterable[Tuple[ElemId, ...]]:
        """Every tuple when the lattice is small enough, else a seeded sample."""
        if lat.size ** arity <= self.exhaustive_limit:
            return itertools.product(range(lat.size), repeat=arity)
        count = max(self.sampled_tuples, self.samples)
        return [tuple(rng.randrange(lat.size) for _ in range(arity)) for _ in range(count)]
