"""
Property checks for the automaton constructions and regular expressions.

Every check draws ctx.samples seeded random instances and compares both sides
of a claim at every word up to a length bound. On a general orthomodular
lattice a construction is checked from both directions: it bounds rec from
above, and gating it by the commutator of the atoms bounds it from below. In
equality mode (Boolean lattices) the two sides must coincide.
"""

import itertools
import logging
import random
from typing import Callable, Dict, List, Sequence, Tuple

from automata import (LAutomaton, complement_det, concat_aut, determinize, eps_reduce, equiv_degree_exact,
                      fold_aut, hom_preimage_aut, inverse_aut, joint_value_pairs, product_aut, union_aut)
from errors import CommutatorSetTooLarge
from generators import (perturb, random_alphabet, random_automaton, random_deterministic, random_hom,
                        random_regex, random_table)
from kleene import (RegexFactory, delta_gamma, kleene_representation, lambda_closure, lambda_set, regex_hom,
                    regex_language)
from languages import (Alphabet, Word, concat, equiv_degree_bounded, format_word, hom_apply, image,
                       kleene_star, preimage, thresholds, words_up_to)
from lattice import ElemId, OrthoLattice
from logic import ImplKind
from models import CheckContext, CheckReport, Tally
from regularity import decompose_by_range, reg_witness, table_automaton

logger = logging.getLogger(__name__)

TheoremCheck = Callable[[OrthoLattice, CheckContext, random.Random], List[CheckReport]]

TARGET = Alphabet(('c', 'd'))

# Words compared for the exact-vs-bounded equivalence check.
EQUIV_HORIZON = 12


def _witness(k: int, word: Sequence[str]) -> str:
    return f"instance #{k}, word '{format_word(word)}'"


def _instance(lat: OrthoLattice, ctx: CheckContext, what: str, max_len: int) -> str:
    return f"{lat.name}: {ctx.samples} random {what}, words up to length {max_len}"


def _table(m: LAutomaton, max_len: int) -> Dict[Word, ElemId]:
    return m.rec_table(max_len)


class Claim:
    """
    Both halves of a gated comparison between a small and a big side:

        small ≤ big        and        γ ∧ big ≤ small

    or, in equality mode, small = big.
    """

    def __init__(self, family: str, instance: str, lat: OrthoLattice, ctx: CheckContext, index: int = 0):
        self.lat = lat
        self.equalities = ctx.equalities
        if self.equalities:
            self.tallies = [Tally(f"{family}.boolean-equality", instance, index, lat, '=')]
        else:
            self.tallies = [Tally(f"{family}.upper-bound", instance, index, lat),
                            Tally(f"{family}.gated-lower-bound", instance, index, lat)]

    def add(self, small: ElemId, big: ElemId, gamma: ElemId, witness: str):
        if self.equalities:
            self.tallies[0].add(small, big, witness)
            return
        upper, gated = self.tallies
        upper.add(small, big, witness)
        gated.add(self.lat.meet_table[gamma][big], small, witness)

    def reports(self) -> List[CheckReport]:
        return [t.report() for t in self.tallies]


# -- evaluation -----------------------------------------------------------------

def check_rec_evaluators(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """Frontier evaluation matches path enumeration; the vector recurrence bounds it and equals determinized rec."""
    instance = _instance(lat, ctx, 'automata', ctx.max_len)
    paths = Tally('rec.frontier-vs-paths', instance, 0, lat, '=')
    vector = Claim('rec.vector', instance, lat, ctx)
    det = Tally('rec.vector-is-determinized', instance, 0, lat, '=')
    for k in range(ctx.samples):
        m = random_automaton(rng, lat, zero_bias=ctx.zero_bias)
        gamma = m.gamma_atoms()
        table = _table(m, ctx.max_len)
        dtable = _table(determinize(m), ctx.max_len)
        for word in words_up_to(m.alphabet, ctx.max_len):
            witness = _witness(k, word)
            value, by_vector = table[word], m.rec_vector(word)
            paths.add(value, m.rec_paths(word), witness)
            vector.add(value, by_vector, gamma, witness)
            det.add(by_vector, dtable[word], witness)
    return [paths.report(), *vector.reports(), det.report()]


# -- constructions --------------------------------------------------------------

def check_determinize(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    claim = Claim('determinize', _instance(lat, ctx, 'automata', ctx.max_len), lat, ctx)
    for k in range(ctx.samples):
        m = random_automaton(rng, lat, zero_bias=ctx.zero_bias)
        d = determinize(m)
        gamma = m.gamma_atoms()
        small, big = _table(m, ctx.max_len), _table(d, ctx.max_len)
        for word in words_up_to(m.alphabet, ctx.max_len):
            claim.add(small[word], big[word], gamma, _witness(k, word))
    return claim.reports()


def check_eps_reduce(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    claim = Claim('eps-reduce', _instance(lat, ctx, 'ε-automata', ctx.max_len), lat, ctx)
    for k in range(ctx.samples):
        m = random_automaton(rng, lat, zero_bias=ctx.zero_bias, epsilon=True)
        reduced = eps_reduce(m)
        gamma = m.gamma_atoms()
        small, big = _table(m, ctx.max_len), _table(reduced, ctx.max_len)
        for word in words_up_to(m.alphabet, ctx.max_len):
            claim.add(small[word], big[word], gamma, _witness(k, word))
    return claim.reports()


def check_inverse(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """The inverse automaton reads words backwards and preserves equivalence degrees."""
    impl = ImplKind(ctx.impl)
    reversal = Tally('inverse.reversal', _instance(lat, ctx, 'automata', ctx.max_len), 0, lat, '=')
    invariance = Tally('inverse.witness-invariance', f"{lat.name}: {ctx.samples} random automaton pairs",
                       0, lat, '=')
    for k in range(ctx.samples):
        m = random_automaton(rng, lat, zero_bias=ctx.zero_bias)
        inv = inverse_aut(m)
        forward, backward = _table(m, ctx.max_len), _table(inv, ctx.max_len)
        for word in words_up_to(m.alphabet, ctx.max_len):
            reversal.add(backward[word], forward[word[::-1]], _witness(k, word))
        other = perturb(rng, m, ctx.zero_bias)
        invariance.add(equiv_degree_exact(m, other, impl),
                       equiv_degree_exact(inv, inverse_aut(other), impl), f"instance #{k}")
    return [reversal.report(), invariance.report()]


def check_complement(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    Complementing a determinized automaton complements rec, and the
    commutative witness clause of A via M is carried to A⊥ via the complement
    of the power-set automaton of M.
    """
    ortho = lat.ortho_table
    s3 = ImplKind.SASAKI3
    pointwise = Tally('complement.orthocomplement', _instance(lat, ctx, 'automata', ctx.max_len), 0, lat, '=')
    involution = Tally('complement.involution', _instance(lat, ctx, 'automata', ctx.max_len), 0, lat, '=')
    chain = Tally('complement.degree-chain', f"{lat.name}: {ctx.samples} random (language, witness) pairs",
                  0, lat)
    for k in range(ctx.samples):
        m = random_automaton(rng, lat, zero_bias=ctx.zero_bias, n_states=rng.choice((2, 3)))
        d = determinize(m)
        c = complement_det(d)
        plain, flipped = _table(d, ctx.max_len), _table(c, ctx.max_len)
        restored = _table(complement_det(c), ctx.max_len)
        for word in words_up_to(m.alphabet, ctx.max_len):
            pointwise.add(flipped[word], ortho[plain[word]], _witness(k, word))
            involution.add(restored[word], plain[word], _witness(k, word))

        target = random_deterministic(rng, lat, m.alphabet, ctx.zero_bias)
        clause = reg_witness(target.language(), m, s3, commutative=True)
        carried = equiv_degree_exact(complement_det(target), c, s3)
        chain.add(clause, carried, f"instance #{k}")
    return [pointwise.report(), involution.report(), chain.report()]


def check_union(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    join = lat.join_table
    tally = Tally('union.exact', _instance(lat, ctx, 'automaton pairs', ctx.max_len), 0, lat, '=')
    for k in range(ctx.samples):
        alphabet = random_alphabet(rng)
        m1 = random_automaton(rng, lat, alphabet, zero_bias=ctx.zero_bias)
        m2 = random_automaton(rng, lat, alphabet, zero_bias=ctx.zero_bias)
        u = _table(union_aut(m1, m2), ctx.max_len)
        t1, t2 = _table(m1, ctx.max_len), _table(m2, ctx.max_len)
        for word in words_up_to(alphabet, ctx.max_len):
            tally.add(u[word], join[t1[word]][t2[word]], _witness(k, word))
    return [tally.report()]


def check_product(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    meet = lat.meet_table
    claim = Claim('product', _instance(lat, ctx, 'automaton pairs', ctx.max_len), lat, ctx)
    for k in range(ctx.samples):
        alphabet = random_alphabet(rng)
        m1 = random_automaton(rng, lat, alphabet, zero_bias=ctx.zero_bias, n_states=rng.choice((2, 3)))
        m2 = random_automaton(rng, lat, alphabet, zero_bias=ctx.zero_bias, n_states=rng.choice((2, 3)))
        gamma = lat.commutator(set(m1.atoms()) | set(m2.atoms()))
        p = _table(product_aut(m1, m2), ctx.max_len)
        t1, t2 = _table(m1, ctx.max_len), _table(m2, ctx.max_len)
        for word in words_up_to(alphabet, ctx.max_len):
            claim.add(p[word], meet[t1[word]][t2[word]], gamma, _witness(k, word))
    return claim.reports()


def check_concat(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    claim = Claim('concat', _instance(lat, ctx, 'automaton pairs', ctx.max_len), lat, ctx)
    for k in range(ctx.samples):
        alphabet = random_alphabet(rng)
        m1 = random_automaton(rng, lat, alphabet, zero_bias=ctx.zero_bias, n_states=rng.choice((2, 3)))
        m2 = random_automaton(rng, lat, alphabet, zero_bias=ctx.zero_bias, n_states=rng.choice((2, 3)))
        gamma = lat.commutator(set(m1.atoms()) | set(m2.atoms()))
        joined = _table(concat_aut(m1, m2), ctx.max_len)
        split = concat(m1.language(), m2.language())
        for word in words_up_to(alphabet, ctx.max_len):
            claim.add(joined[word], split.evaluate(word), gamma, _witness(k, word))
    return claim.reports()


def check_fold(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    claim = Claim('fold', _instance(lat, ctx, 'automata', ctx.max_len), lat, ctx)
    for k in range(ctx.samples):
        m = random_automaton(rng, lat, zero_bias=ctx.zero_bias, n_states=rng.choice((2, 3)))
        gamma = m.gamma_atoms()
        folded = _table(fold_aut(m), ctx.max_len)
        star = kleene_star(m.language())
        for word in words_up_to(m.alphabet, ctx.max_len):
            claim.add(folded[word], star.evaluate(word), gamma, _witness(k, word))
    return claim.reports()


def check_hom_preimage(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    rec(M, h(s)) ≤ rec(h⁻¹M, s), with the commutator-gated converse; exact
    when no symbol maps to a word longer than one.
    """
    max_len = max(ctx.max_len - 1, 1)
    claim = Claim('hom-preimage', _instance(lat, ctx, 'automata and homomorphisms', max_len), lat, ctx)
    exact = Tally('hom-preimage.letter-to-letter', _instance(lat, ctx, 'automata', max_len), 0, lat, '=')
    source = Alphabet(('a', 'b'))
    for k in range(ctx.samples):
        m = random_automaton(rng, lat, TARGET, zero_bias=ctx.zero_bias)
        gamma = m.gamma_atoms()
        h = random_hom(rng, source, TARGET, max_image=2, erasing=rng.random() < 0.3)
        pre = _table(hom_preimage_aut(h, m, source), max_len)
        letters = {sym: (rng.choice(TARGET.symbols),) for sym in source}
        pre_letters = _table(hom_preimage_aut(letters, m, source), max_len)
        for word in words_up_to(source, max_len):
            witness = _witness(k, word)
            claim.add(m.rec(hom_apply(h, word)), pre[word], gamma, witness)
            exact.add(pre_letters[word], m.rec(hom_apply(letters, word)), witness)
    return [*claim.reports(), exact.report()]


# -- equivalence and witnesses ------------------------------------------------------

def check_equiv_exact(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    The exact equivalence degree never exceeds a bounded one and equals it once
    the bound reaches the depth of the joint frontier exploration.
    """
    impl = ImplKind(ctx.impl)
    instance = f"{lat.name}: {ctx.samples} random 3-state automaton pairs, horizon {EQUIV_HORIZON}"
    matches = Tally('equiv.exact-matches-bounded', instance, 0, lat, '=')
    below = Tally('equiv.exact-below-bounded', instance, 0, lat)
    self_degree = Tally('equiv.self', instance, 0, lat, '=')
    for k in range(ctx.samples):
        m1 = random_automaton(rng, lat, n_states=3, zero_bias=ctx.zero_bias)
        m2 = perturb(rng, m1, ctx.zero_bias) if rng.random() < 0.5 else \
            random_automaton(rng, lat, m1.alphabet, n_states=3, zero_bias=ctx.zero_bias)
        exact = equiv_degree_exact(m1, m2, impl)
        _, depth = joint_value_pairs(m1, m2)
        horizon = min(depth, EQUIV_HORIZON)
        bounded = equiv_degree_bounded(m1.language(), m2.language(), impl, horizon)
        witness = f"instance #{k}, depth {depth}"
        below.add(exact, bounded, witness)
        if depth <= EQUIV_HORIZON:
            matches.add(exact, bounded, witness)
        self_degree.add(equiv_degree_exact(m1, m1, impl), lat.one, witness)
    return [matches.report(), below.report(), self_degree.report()]


def check_witnesses(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    Table automata and range decompositions reproduce their language; an
    automaton is a perfect witness for itself; determinizing a witness never
    lowers its (commutative) clause.
    """
    impl = ImplKind(ctx.impl)
    s3 = ImplKind.SASAKI3
    max_len = ctx.max_len
    tables = _instance(lat, ctx, 'tables', max_len)
    table_exact = Tally('witness.table-exact', tables, 0, lat, '=')
    decompose_exact = Tally('witness.decompose-exact', tables, 0, lat, '=')
    self_witness = Tally('witness.self', f"{lat.name}: {ctx.samples} random automata", 0, lat, '=')
    chain = Tally('witness.determinize-chain', f"{lat.name}: {ctx.samples} random (table, witness) pairs",
                  0, lat)
    for k in range(ctx.samples):
        alphabet = random_alphabet(rng)
        table = random_table(rng, lat, alphabet, max_len=3)
        built = _table(table_automaton(table), max_len)
        levels = _table(decompose_by_range(table), max_len)
        for word in words_up_to(alphabet, max_len):
            table_exact.add(built[word], table.evaluate(word), _witness(k, word))
            decompose_exact.add(levels[word], table.evaluate(word), _witness(k, word))

        m = random_automaton(rng, lat, alphabet, zero_bias=ctx.zero_bias, n_states=rng.choice((2, 3)))
        self_witness.add(reg_witness(m.language(), m, impl), lat.one, f"instance #{k}")
        if ctx.equalities:
            # Boolean lattices: plain regularity already transfers to the power-set witness.
            chain.add(reg_witness(table, m, s3), reg_witness(table, determinize(m), s3, deterministic=True),
                      f"instance #{k}")
        else:
            try:
                chain.add(reg_witness(table, m, s3, commutative=True),
                          reg_witness(table, determinize(m), s3, commutative=True, deterministic=True),
                          f"instance #{k}")
            except CommutatorSetTooLarge as e:
                # Power-set terminals are new lattice values; on large lattices they can outgrow the cap.
                logger.debug(f"witness.determinize-chain: skipped instance #{k}: {e}")
    return [table_exact.report(), decompose_exact.report(), self_witness.report(), chain.report()]


def check_threshold_witness(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    Clamping a table at λ, i.e. dropping the words whose value lies below λ,
    leaves a table automaton that still witnesses the table to degree λ⊥.
    """
    impl = ImplKind(ctx.impl)
    ortho = lat.ortho_table
    tally = Tally('witness.threshold-clamp',
                  f"{lat.name}: {ctx.samples} random tables, every level of the lattice", 0, lat)
    for k in range(ctx.samples):
        table = random_table(rng, lat, random_alphabet(rng), max_len=3)
        for level in range(lat.size):
            clamped = table_automaton(thresholds(table, level).clamp)
            tally.add(ortho[level], reg_witness(table, clamped, impl),
                      f"instance #{k}, level {lat.name_of(level)}")
    return [tally.report()]


def check_preimage_degree(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """⌈B ≡ B′⌉ ≤ ⌈h⁻¹B ≡ h⁻¹B′⌉ on word sets where h's images stay inside the bound."""
    impl = ImplKind(ctx.impl)
    max_image = 2
    source = Alphabet(('a', 'b'))
    pre_len = max(ctx.max_len // max_image, 1)
    target_len = pre_len * max_image
    tally = Tally('language.preimage-degree',
                  f"{lat.name}: {ctx.samples} random table pairs, words up to length {target_len}", 0, lat)
    for k in range(ctx.samples):
        b1 = random_table(rng, lat, TARGET, max_len=target_len)
        b2 = random_table(rng, lat, TARGET, max_len=target_len)
        h = random_hom(rng, source, TARGET, max_image=max_image, erasing=rng.random() < 0.3)
        tally.add(equiv_degree_bounded(b1, b2, impl, target_len),
                  equiv_degree_bounded(preimage(h, b1, source), preimage(h, b2, source), impl, pre_len),
                  f"instance #{k}")
    return [tally.report()]


# -- regular expressions -------------------------------------------------------------

def _regex_len(ctx: CheckContext) -> int:
    return min(ctx.max_len, 4)


def _pivot_orders(m: LAutomaton) -> List[Tuple[str, ...]]:
    if len(m.states) <= 3:
        return list(itertools.permutations(m.states))
    return [tuple(m.states)]


def check_kleene(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """rec versus a Kleene representation of the same automaton, for every pivot order on small automata."""
    max_len = _regex_len(ctx)
    claim = Claim('kleene', _instance(lat, ctx, 'automata', max_len), lat, ctx)
    orders = Claim('kleene.pivot-orders', _instance(lat, ctx, 'automata (all pivot orders)', max_len),
                   lat, ctx, index=1)
    for k in range(ctx.samples):
        m = random_automaton(rng, lat, zero_bias=ctx.zero_bias)
        gamma = m.gamma_atoms()
        table = _table(m, max_len)
        rep = kleene_representation(m, 'decl')
        for word in words_up_to(m.alphabet, max_len):
            claim.add(table[word], rep.evaluate(word), gamma, _witness(k, word))
        for order in _pivot_orders(m)[1:]:
            rep = kleene_representation(m, order, rep.factory)
            for word in words_up_to(m.alphabet, min(max_len, 3)):
                orders.add(table[word], rep.evaluate(word), gamma, f"{_witness(k, word)}, pivots {','.join(order)}")
    return [*claim.reports(), *orders.reports()]


def check_regex_values(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    Every value of a regex lies in the subalgebra generated by its scalars;
    on Boolean lattices even in their meet/join closure.
    """
    max_len = _regex_len(ctx)
    closure = Tally('regex.subalgebra-values', _instance(lat, ctx, 'regexes', max_len), 0, lat, '=')
    finite = Tally('regex.boolean-value-closure', _instance(lat, ctx, 'one-symbol regexes', 8), 0, lat, '=')
    unary = Alphabet(('a',))
    for k in range(ctx.samples):
        factory = RegexFactory(lat, random_alphabet(rng))
        r = random_regex(rng, factory)
        allowed = set(lat.subalgebra(lambda_set(r)))
        for word in words_up_to(factory.alphabet, max_len):
            inside = r.evaluate(word) in allowed
            closure.add(lat.one if inside else lat.zero, lat.one, f"{_witness(k, word)}, {r.to_text()}")
        if lat.is_boolean:
            s = random_regex(rng, RegexFactory(lat, unary))
            reachable = set(lambda_closure(s))
            for word in words_up_to(unary, 8):
                inside = s.evaluate(word) in reachable
                finite.add(lat.one if inside else lat.zero, lat.one, f"{_witness(k, word)}, {s.to_text()}")
    return [closure.report()] + ([finite.report()] if lat.is_boolean else [])


def check_regex_hom(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    image(h, L(α)) ≤ L(h(α)) for any h (the image is a lower bound when h
    erases), and γ(Δ(α)) ∧ L(h(α)) ≤ image(h, L(α)) for non-erasing h.
    """
    max_len = _regex_len(ctx)
    instance = _instance(lat, ctx, 'regexes and homomorphisms', max_len)
    upper = Tally('regex-hom.upper-bound', instance, 0, lat, '=' if ctx.equalities else '≤')
    gated = Tally('regex-hom.gated-lower-bound', instance, 0, lat)
    target_factory = RegexFactory(lat, TARGET)
    for k in range(ctx.samples):
        factory = RegexFactory(lat, random_alphabet(rng))
        r = random_regex(rng, factory)
        erasing = not ctx.equalities and rng.random() < 0.3
        h = random_hom(rng, factory.alphabet, TARGET, max_image=2, erasing=erasing)
        mapped = regex_language(regex_hom(h, r, target_factory))
        img = image(h, regex_language(r), TARGET)
        gamma = delta_gamma(r)
        for word in words_up_to(TARGET, max_len):
            witness = f"{_witness(k, word)}, {r.to_text()}"
            small, big = img.evaluate(word), mapped.evaluate(word)
            upper.add(small, big, witness)
            if not erasing and not ctx.equalities:
                gated.add(lat.meet_table[gamma][big], small, witness)
    return [upper.report()] if ctx.equalities else [upper.report(), gated.report()]


AUTOMATA_CHECKS: Tuple[TheoremCheck, ...] = (
    check_rec_evaluators,
    check_determinize,
    check_eps_reduce,
    check_inverse,
    check_complement,
    check_union,
    check_product,
    check_concat,
    check_fold,
    check_hom_preimage,
    check_equiv_exact,
    check_witnesses,
    check_threshold_witness,
    check_preimage_degree,
)

REGEX_CHECKS: Tuple[TheoremCheck, ...] = (
    check_kleene,
    check_regex_values,
    check_regex_hom,
)

# Equality mode reruns the constructions whose gap closes on Boolean lattices.
BOOLEAN_CHECKS: Tuple[TheoremCheck, ...] = (
    check_rec_evaluators,
    check_determinize,
    check_eps_reduce,
    check_product,
    check_concat,
    check_fold,
    check_hom_preimage,
    check_witnesses,
    check_threshold_witness,
    check_kleene,
    check_regex_values,
    check_regex_hom,
)
