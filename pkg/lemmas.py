"""
Algebraic law checks over a single finite ortholattice.

Two batteries: lattice laws (orthomodularity and its equivalents, commuting
and commutator laws) and logic laws (the implication connectives). Each
check returns its CheckReports; tuples are enumerated exhaustively on small
lattices and sampled otherwise.
"""

import logging
import random
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from lattice import ElemId, OrthoLattice
from logic import BVN_KINDS, ImplKind, biimplies, check_bvn, implies, import_export_violation, sasaki_residual
from models import CheckContext, CheckReport, Tally

logger = logging.getLogger(__name__)

LemmaCheck = Callable[[OrthoLattice, CheckContext, random.Random], List[CheckReport]]


def _names(lat: OrthoLattice, elems: Sequence[ElemId]) -> str:
    return '(' + ','.join(lat.elem_names[a] for a in elems) + ')'


def _instance(lat: OrthoLattice, ctx: CheckContext, arity: int) -> str:
    mode = 'exhaustive' if lat.size ** arity <= ctx.exhaustive_limit else 'sampled'
    return f"{lat.name} {arity}-tuples ({mode})"


def _first(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def _flag(lat: OrthoLattice, check_id: str, holds: bool, expected: bool,
          witness: Optional[Tuple[int, ...]]) -> CheckReport:
    return CheckReport.flag(check_id, lat.name, 0, lat, holds, expected,
                            witness=_names(lat, witness) if witness else None,
                            detail=f"law {'holds' if holds else 'fails'}; "
                                   f"lattice is {'' if lat.is_orthomodular else 'not '}orthomodular")


def _bit(lat: OrthoLattice, b: bool) -> ElemId:
    return lat.one if b else lat.zero


# -- orthomodularity ---------------------------------------------------------

def check_orthomodular(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """The lattice itself is orthomodular."""
    violation = lat.orthomodular_violation
    return [CheckReport.flag('lattice.orthomodular', lat.name, 0, lat, violation is None,
                             witness=_names(lat, violation) if violation else None,
                             detail=lat.describe_violation())]


def check_orthomodular_equivalents(lat: OrthoLattice, ctx: CheckContext,
                                   rng: random.Random) -> List[CheckReport]:
    """
    Each law below holds exactly when the lattice is orthomodular, so every
    report compares the law's truth with orthomodularity.
    """
    n = lat.size
    L = lat.leq_array
    M, J, O = lat.meet_array, lat.join_array, lat.ortho_array
    C = lat.commutes_array()
    eye = np.eye(n, dtype=bool)
    om = lat.is_orthomodular

    # a ≤ b and a⊥ ∧ b = 0 force a = b
    cancel = L & (M[O, :] == lat.zero) & ~eye
    # commuting is symmetric
    asym = C & ~C.T
    # a C b gives a⊥ C b
    ortho = C & ~C[O, :]
    # a C b gives a ∨ (a⊥ ∧ b) = a ∨ b
    rows = np.arange(n)[:, None]
    join_form = C & (J[rows, M[O, :]] != J)

    reports = []
    for check_id, mask in (('lattice.complement-cancels', cancel),
                           ('lattice.commutes-symmetric', asym),
                           ('lattice.commutes-ortho', ortho),
                           ('lattice.commuting-join', join_form)):
        witness = _first(mask)
        reports.append(_flag(lat, check_id, witness is None, om, witness))

    witness = _non_boolean_interval(lat)
    reports.append(_flag(lat, 'lattice.comparable-pairs-boolean', witness is None, om, witness))

    benzene = lat.benzene_subalgebra()
    reports.append(_flag(lat, 'lattice.benzene-free', benzene is None, om, benzene))
    return reports


def _non_boolean_interval(lat: OrthoLattice) -> Optional[Tuple[int, int]]:
    """First a ≤ b whose generated subalgebra is not distributive."""
    leq, meet, join = lat.leq_table, lat.meet_table, lat.join_table
    for a in lat.elements():
        for b in lat.elements():
            if a == b or not leq[a][b]:
                continue
            sub = lat.subalgebra((a, b))
            for x in sub:
                for y in sub:
                    for z in sub:
                        if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                            return a, b
    return None


# -- commuting -----------------------------------------------------------------

def check_commute_closure(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """If a commutes with b1 and b2 it commutes with their meet and join."""
    C = lat.commutes_array()
    meet, join = lat.meet_table, lat.join_table
    tally = Tally('lattice.commute-closure', _instance(lat, ctx, 3), 0, lat, '=')
    for a, b1, b2 in ctx.tuples(lat, 3, rng):
        if not (C[a, b1] and C[a, b2]):
            continue
        closed = bool(C[a, meet[b1][b2]] and C[a, join[b1][b2]])
        tally.add(_bit(lat, closed), lat.one, _names(lat, (a, b1, b2)))
    return [tally.report()]


def check_commute_distributes(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """If a commutes with b1 and b2, meets and joins with a distribute over them."""
    C = lat.commutes_array()
    meet, join = lat.meet_table, lat.join_table
    meets = Tally('lattice.commute-distributes', _instance(lat, ctx, 3), 0, lat, '=')
    joins = Tally('lattice.commute-distributes', _instance(lat, ctx, 3), 1, lat, '=')
    for a, b1, b2 in ctx.tuples(lat, 3, rng):
        if not (C[a, b1] and C[a, b2]):
            continue
        witness = _names(lat, (a, b1, b2))
        meets.add(meet[a][join[b1][b2]], join[meet[a][b1]][meet[a][b2]], witness)
        joins.add(join[a][meet[b1][b2]], meet[join[a][b1]][join[a][b2]], witness)
    return [meets.report(), joins.report()]


# -- commutators ---------------------------------------------------------------

def check_commutator_bounds(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """The strong commutator equals the commutator on finite sets of two and three elements."""
    reports = []
    for arity in (2, 3):
        tally = Tally('lattice.commutator-bounds', _instance(lat, ctx, arity), arity, lat, '=')
        for elems in ctx.tuples(lat, arity, rng):
            tally.add(lat.strong_commutator(elems), lat.commutator(elems), _names(lat, elems))
        reports.append(tally.report())
    return reports


def check_commutator_one(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """γ(S) = 1 exactly when S is pairwise commuting."""
    C = lat.commutes_array()
    tally = Tally('lattice.commutator-one-iff-pairwise', _instance(lat, ctx, 3), 0, lat, '=')
    for elems in ctx.tuples(lat, 3, rng):
        pairwise = all(C[x, y] for x in elems for y in elems)
        tally.add(_bit(lat, lat.commutator(elems) == lat.one), _bit(lat, pairwise), _names(lat, elems))
    return [tally.report()]


def check_gated_distributivity(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    γ(a, b1, b2) ∧ a ∧ (b1 ∨ b2) ≤ (a ∧ b1) ∨ (a ∧ b2), and dually
    γ(a, b1, b2) ∧ (a ∨ b1) ∧ (a ∨ b2) ≤ a ∨ (b1 ∧ b2).
    """
    meet, join = lat.meet_table, lat.join_table
    meets = Tally('lattice.gated-distributivity', _instance(lat, ctx, 3), 0, lat)
    joins = Tally('lattice.gated-distributivity', _instance(lat, ctx, 3), 1, lat)
    for a, b1, b2 in ctx.tuples(lat, 3, rng):
        gamma = lat.commutator((a, b1, b2))
        witness = _names(lat, (a, b1, b2))
        meets.add(meet[gamma][meet[a][join[b1][b2]]], join[meet[a][b1]][meet[a][b2]], witness)
        joins.add(meet[gamma][meet[join[a][b1]][join[a][b2]]], join[a][meet[b1][b2]], witness)
    return [meets.report(), joins.report()]


def check_subalgebra_commutator(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """For B drawn from the subalgebra generated by {a, b}: γ(a, b) ≤ γ(B)."""
    tally = Tally('lattice.subalgebra-commutator', _instance(lat, ctx, 2), 0, lat)
    for a, b in ctx.tuples(lat, 2, rng):
        gamma = lat.commutator((a, b))
        sub = lat.subalgebra((a, b))
        if len(sub) ** 2 <= 64:
            subsets = [(x, y) for x in sub for y in sub]
        else:
            subsets = [(rng.choice(sub), rng.choice(sub)) for _ in range(16)]
        for subset in subsets:
            tally.add(gamma, lat.commutator(subset), f"{_names(lat, (a, b))} ⊇ {_names(lat, subset)}")
    return [tally.report()]


# -- implications --------------------------------------------------------------

def check_bvn_kinds(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """Kinds 1-5 meet the Birkhoff-von Neumann requirement; the material one only on Boolean lattices."""
    reports = []
    for kind in ImplKind:
        expected = kind != ImplKind.MATERIAL0 or lat.is_boolean
        reports.append(CheckReport.flag('logic.bvn', f"{lat.name} →{int(kind)}", int(kind), lat,
                                        check_bvn(lat, kind), expected))
    return reports


def check_material_agreement(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """a →i b equals a⊥ ∨ b exactly when a and b commute."""
    C = lat.commutes_array()
    reports = []
    for kind in BVN_KINDS:
        tally = Tally('logic.material-agreement-iff-commute', f"{_instance(lat, ctx, 2)} →{int(kind)}",
                      int(kind), lat, '=')
        for a, b in ctx.tuples(lat, 2, rng):
            agree = implies(lat, kind, a, b) == implies(lat, ImplKind.MATERIAL0, a, b)
            tally.add(_bit(lat, agree), _bit(lat, bool(C[a, b])), _names(lat, (a, b)))
        reports.append(tally.report())
    return reports


def check_sasaki_residual(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """a →3 b is the join of every x commuting with a whose meet with a lies below b."""
    tally = Tally('logic.sasaki-residual', _instance(lat, ctx, 2), 0, lat, '=')
    for a, b in ctx.tuples(lat, 2, rng):
        tally.add(implies(lat, ImplKind.SASAKI3, a, b), sasaki_residual(lat, a, b), _names(lat, (a, b)))
    return [tally.report()]


def check_compatible_import_export(lat: OrthoLattice, ctx: CheckContext,
                                   rng: random.Random) -> List[CheckReport]:
    """
    For commuting a, b:  a ∧ b ≤ c  ⇔  a ≤ b → c.  The Sasaki hook always
    satisfies it; every other kind breaks it somewhere unless the lattice is Boolean.
    """
    reports = []
    for kind in BVN_KINDS:
        violation = import_export_violation(lat, kind, compatible_only=True)
        expected = kind == ImplKind.SASAKI3 or lat.is_boolean
        reports.append(CheckReport.flag('logic.compatible-import-export', f"{lat.name} →{int(kind)}",
                                        int(kind), lat, violation is None, expected,
                                        witness=_names(lat, violation) if violation else None))
    return reports


def check_import_export_boolean(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """The unrestricted import-export law holds for kind i exactly on Boolean lattices."""
    reports = []
    for kind in BVN_KINDS:
        violation = import_export_violation(lat, kind)
        reports.append(CheckReport.flag('logic.import-export-iff-boolean', f"{lat.name} →{int(kind)}",
                                        int(kind), lat, violation is None, lat.is_boolean,
                                        witness=_names(lat, violation) if violation else None))
    return reports


def check_sasaki_gated(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    γ(a1, a2, b1, b2) ∧ (a1 →3 b1) ∧ (a2 →3 b2) lies below both
    (a1 ∧ a2) →3 (b1 ∧ b2) and (a1 ∨ a2) →3 (b1 ∨ b2).
    """
    meet, join = lat.meet_table, lat.join_table
    s3 = ImplKind.SASAKI3
    meets = Tally('logic.sasaki-gated-meet', _instance(lat, ctx, 4), 0, lat)
    joins = Tally('logic.sasaki-gated-join', _instance(lat, ctx, 4), 0, lat)
    for a1, a2, b1, b2 in ctx.tuples(lat, 4, rng):
        gamma = lat.commutator((a1, a2, b1, b2))
        lhs = meet[gamma][meet[implies(lat, s3, a1, b1)][implies(lat, s3, a2, b2)]]
        witness = _names(lat, (a1, a2, b1, b2))
        meets.add(lhs, implies(lat, s3, meet[a1][a2], meet[b1][b2]), witness)
        joins.add(lhs, implies(lat, s3, join[a1][a2], join[b1][b2]), witness)
    return [meets.report(), joins.report()]


def check_sasaki_contraposition(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """γ(a, b) ∧ (a →3 b) ≤ b⊥ →3 a⊥."""
    meet, ortho = lat.meet_table, lat.ortho_table
    s3 = ImplKind.SASAKI3
    tally = Tally('logic.sasaki-contraposition', _instance(lat, ctx, 2), 0, lat)
    for a, b in ctx.tuples(lat, 2, rng):
        lhs = meet[lat.commutator((a, b))][implies(lat, s3, a, b)]
        tally.add(lhs, implies(lat, s3, ortho[b], ortho[a]), _names(lat, (a, b)))
    return [tally.report()]


def check_sasaki_transitivity(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """γ(a, b, c) ∧ (a →3 b) ∧ (b →3 c) ≤ a →3 c."""
    meet = lat.meet_table
    s3 = ImplKind.SASAKI3
    tally = Tally('logic.sasaki-transitivity', _instance(lat, ctx, 3), 0, lat)
    for a, b, c in ctx.tuples(lat, 3, rng):
        lhs = meet[lat.commutator((a, b, c))][meet[implies(lat, s3, a, b)][implies(lat, s3, b, c)]]
        tally.add(lhs, implies(lat, s3, a, c), _names(lat, (a, b, c)))
    return [tally.report()]


def check_biimplication_diagonal(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """a ↔ a = 1 for kinds 1-5."""
    reports = []
    for kind in BVN_KINDS:
        tally = Tally('logic.biimplication-diagonal', f"{lat.name} →{int(kind)}", int(kind), lat, '=')
        for a in lat.elements():
            tally.add(biimplies(lat, kind, a, a), lat.one, lat.elem_names[a])
        reports.append(tally.report())
    return reports


# Checks that apply to every ortholattice; the rest presuppose orthomodularity.
GENERAL_LATTICE_CHECKS: Tuple[LemmaCheck, ...] = (
    check_orthomodular,
    check_orthomodular_equivalents,
)

LATTICE_CHECKS: Tuple[LemmaCheck, ...] = (
    check_commute_closure,
    check_commute_distributes,
    check_commutator_bounds,
    check_commutator_one,
    check_gated_distributivity,
    check_subalgebra_commutator,
)

LOGIC_CHECKS: Tuple[LemmaCheck, ...] = (
    check_bvn_kinds,
    check_material_agreement,
    check_sasaki_residual,
    check_compatible_import_export,
    check_import_export_boolean,
    check_sasaki_gated,
    check_sasaki_contraposition,
    check_sasaki_transitivity,
    check_biimplication_diagonal,
)


def lattice_checks(lat: OrthoLattice) -> Tuple[LemmaCheck, ...]:
    if not lat.is_orthomodular:
        logger.warning(f"{lat.name} is not orthomodular; only the orthomodularity checks apply")
        return GENERAL_LATTICE_CHECKS
    return GENERAL_LATTICE_CHECKS + LATTICE_CHECKS


def logic_checks(lat: OrthoLattice) -> Tuple[LemmaCheck, ...]:
    if not lat.is_orthomodular:
        logger.warning(f"{lat.name} is not orthomodular; skipping the implication laws")
        return ()
    return LOGIC_CHECKS
