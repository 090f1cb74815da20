"""
Implication connectives over orthomodular lattices.

Kind 0 is the material conditional; kinds 1-5 are the five polynomial
implications satisfying the Birkhoff-von Neumann requirement, with kind 3
(the Sasaki hook) as the default everywhere.
"""

import enum
import itertools
from typing import Optional, Tuple

from lattice import ElemId, OrthoLattice


class ImplKind(enum.IntEnum):
    MATERIAL0 = 0
    IMPL1 = 1
    IMPL2 = 2
    SASAKI3 = 3
    IMPL4 = 4
    IMPL5 = 5

    @classmethod
    def parse(cls, value) -> 'ImplKind':
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise ValueError(f"Implication kind must be an integer 0-5, got {value!r}") from None


DEFAULT_IMPL = ImplKind.SASAKI3

BVN_KINDS = (ImplKind.IMPL1, ImplKind.IMPL2, ImplKind.SASAKI3, ImplKind.IMPL4, ImplKind.IMPL5)


def implies(lat: OrthoLattice, kind: ImplKind, a: ElemId, b: ElemId) -> ElemId:
    """
    Evaluate a →kind b.

    Args:
        lat: Lattice hosting both operands
        kind: Which implication polynomial
        a: Antecedent
        b: Consequent

    Returns:
        The implication value
    """
    lat.check(a, b)
    m, j, o = lat.meet_table, lat.join_table, lat.ortho_table
    na, nb = o[a], o[b]
    if kind == ImplKind.MATERIAL0:
        return j[na][b]
    if kind == ImplKind.IMPL1:
        # (a⊥∧b) ∨ (a⊥∧b⊥) ∨ (a∧(a⊥∨b))
        return j[j[m[na][b]][m[na][nb]]][m[a][j[na][b]]]
    if kind == ImplKind.IMPL2:
        # (a⊥∧b) ∨ (a∧b) ∨ ((a⊥∨b)∧b⊥)
        return j[j[m[na][b]][m[a][b]]][m[j[na][b]][nb]]
    if kind == ImplKind.SASAKI3:
        return j[na][m[a][b]]
    if kind == ImplKind.IMPL4:
        # b ∨ (a⊥∧b⊥)
        return j[b][m[na][nb]]
    if kind == ImplKind.IMPL5:
        # (a⊥∧b) ∨ (a∧b) ∨ (a⊥∧b⊥)
        return j[j[m[na][b]][m[a][b]]][m[na][nb]]
    raise ValueError(f"Unknown implication kind {kind!r}")


def biimplies(lat: OrthoLattice, kind: ImplKind, a: ElemId, b: ElemId) -> ElemId:
    """a ↔ b as the meet of both directions."""
    return lat.meet_table[implies(lat, kind, a, b)][implies(lat, kind, b, a)]


def point_membership(lat: OrthoLattice, kind: ImplKind, height: ElemId, value: ElemId) -> ElemId:
    """Degree to which the point with the given height belongs to a set valued `value` there."""
    if height == lat.zero:
        raise ValueError("A point must have non-zero height")
    return implies(lat, kind, height, value)


def check_bvn(lat: OrthoLattice, kind: ImplKind) -> bool:
    """True iff a → b = 1 exactly when a ≤ b, for all pairs."""
    for a, b in itertools.product(lat.elements(), repeat=2):
        if (implies(lat, kind, a, b) == lat.one) != lat.leq_table[a][b]:
            return False
    return True


def sasaki_residual(lat: OrthoLattice, a: ElemId, b: ElemId) -> ElemId:
    """Join of all x with x C a and x ∧ a ≤ b, by scanning the lattice."""
    lat.check(a, b)
    commutes = lat.commutes_array()
    result = lat.zero
    for x in lat.elements():
        if commutes[x, a] and lat.leq_table[lat.meet_table[x][a]][b]:
            result = lat.join_table[result][x]
    return result


def import_export_violation(lat: OrthoLattice, kind: ImplKind,
                            compatible_only: bool = False) -> Optional[Tuple[ElemId, ElemId, ElemId]]:
    """
    Search for (a, b, c) breaking  a ∧ b ≤ c  ⇔  a ≤ b → c.

    Args:
        lat: Lattice to scan
        kind: Implication under test
        compatible_only: Only consider commuting a, b

    Returns:
        The first violating triple, or None
    """
    leq, meet = lat.leq_table, lat.meet_table
    commutes = lat.commutes_array() if compatible_only else None
    for a, b in itertools.product(lat.elements(), repeat=2):
        if compatible_only and not commutes[a, b]:
            continue
        for c in lat.elements():
            if leq[meet[a][b]][c] != leq[a][implies(lat, kind, b, c)]:
                return a, b, c
    return None
