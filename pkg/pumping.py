"""
Relaxed pumping bound for ℓ-valued languages.

A witness automaton with n states bounds how far A can be from pumpable:
for every word s with n ≤ |s| ≤ max_len, A(s) must Sasaki-imply that some
split s = uvw with |uv| ≤ n and |v| ≥ 1 keeps uvⁱw in A for 0 ≤ i ≤ max_pump.
The commutative witness clause of A via M is checked against the meet of
those implications.
"""

import logging
import random
from typing import Dict, List, Optional, Tuple

from automata import LAutomaton
from errors import ValidationError, WordTooLongForPump
from generators import random_automaton, random_table
from instances import PAIR, balanced_language
from languages import Alphabet, FiniteTable, LValuedLanguage, Word, format_word, words_up_to
from lattice import ElemId, OrthoLattice, builtin
from logic import ImplKind, implies
from models import CheckContext, CheckReport
from regularity import reg_witness, table_automaton, universal_automaton

logger = logging.getLogger(__name__)

# Longest word evaluated on a language that is not a finite table.
MAX_PUMPED_LENGTH = 64

PUMPING_LATTICES = ('mo2', 'boolN:3')


def _check_pumped_length(lang: LValuedLanguage, n: int, max_len: int, max_pump: int) -> None:
    if isinstance(lang, FiniteTable):
        return
    longest = max_len + max(max_pump - 1, 0) * n
    if longest > MAX_PUMPED_LENGTH:
        raise WordTooLongForPump(
            f"Pumping words of length {max_len} up to {max_pump} times reaches length {longest}, "
            f"beyond {MAX_PUMPED_LENGTH}"
        )


def relaxed_pumping_bound(lang: LValuedLanguage, n: int, max_len: int,
                          max_pump: int) -> Tuple[ElemId, Optional[Word]]:
    """
    Meet over n ≤ |s| ≤ max_len of A(s) → ∨_{uvw = s} ∧_{i ≤ max_pump} A(uvⁱw).

    Returns:
        The bound and the last word that lowered it (None if it stayed 1)
    """
    lat = lang.lattice
    meet, join = lat.meet_table, lat.join_table
    cache: Dict[Word, ElemId] = {}

    def value(word: Word) -> ElemId:
        if word not in cache:
            cache[word] = lang.evaluate(word)
        return cache[word]

    bound, lowered_by = lat.one, None
    for s in words_up_to(lang.alphabet, max_len, min_len=n):
        best = lat.zero
        for end in range(1, n + 1):
            for start in range(end):
                u, v, w = s[:start], s[start:end], s[end:]
                pumped = lat.one
                for i in range(max_pump + 1):
                    pumped = meet[pumped][value(u + v * i + w)]
                    if pumped == lat.zero:
                        break
                best = join[best][pumped]
        lowered = meet[bound][implies(lat, ImplKind.SASAKI3, value(s), best)]
        if lowered != bound:
            bound, lowered_by = lowered, s
    return bound, lowered_by


def pumping_check(lang: LValuedLanguage, witness: LAutomaton, impl: ImplKind = ImplKind.SASAKI3,
                  max_len: int = 8, max_pump: int = 3) -> CheckReport:
    """
    Compare the commutative witness clause of A via M with the relaxed pumping bound at n = |Q|.

    Args:
        lang: Language A with a known finite range
        witness: Automaton M
        impl: Must be the Sasaki hook
        max_len: Longest word s considered
        max_pump: Largest pumping exponent i

    Raises:
        ValidationError: If impl is not the Sasaki hook
        NotFiniteRange: If Range(A) is not known to be finite
        WordTooLongForPump: If pumped words would exceed MAX_PUMPED_LENGTH
    """
    if ImplKind(impl) != ImplKind.SASAKI3:
        raise ValidationError("The pumping bound is stated for the Sasaki hook only")
    lat = lang.lattice
    n = len(witness.states)
    _check_pumped_length(lang, n, max_len, max_pump)
    clause = reg_witness(lang, witness, ImplKind.SASAKI3, commutative=True)
    bound, lowered_by = relaxed_pumping_bound(lang, n, max_len, max_pump)
    return CheckReport.compare(
        'pumping.relaxed-bound', lang.describe(), 0, lat, clause, bound, '≤',
        witness=None if lowered_by is None else f"bound set by '{format_word(lowered_by)}'",
        detail=f"n={n}, words up to {max_len}, pumped up to {max_pump} times",
    )


def _random_pair(rng: random.Random, lat: OrthoLattice, zero_bias: float) -> Tuple[LValuedLanguage, LAutomaton]:
    """A finite table with its own witness or a random one, or a small automaton with a perturbed witness."""
    alphabet: Alphabet = rng.choice((Alphabet(('a',)), Alphabet(('a', 'b'))))
    roll = rng.random()
    if roll < 0.4:
        table = random_table(rng, lat, alphabet, max_len=2, size=rng.randint(0, 3))
        witness = table_automaton(table) if rng.random() < 0.5 else \
            random_automaton(rng, lat, alphabet, n_states=2, zero_bias=zero_bias)
        return table, witness
    m = random_automaton(rng, lat, alphabet, n_states=rng.choice((2, 3)), zero_bias=zero_bias)
    if roll < 0.7:
        return m.language(), m
    return m.language(), universal_automaton(lat, alphabet, rng.randrange(lat.size))


def check_pumping(lat: OrthoLattice, ctx: CheckContext, rng: random.Random) -> List[CheckReport]:
    """
    The lantern language with its Σ*-witness, then seeded random pairs spread
    over MO2 and the 8-element Boolean algebra.
    """
    lantern = builtin('chinese_lantern')
    fixed = pumping_check(balanced_language(lantern), universal_automaton(lantern, PAIR, lantern.elem('p-')),
                          max_len=ctx.max_len, max_pump=ctx.max_pump)
    reports = [fixed]
    for k in range(ctx.samples):
        pair_lat = builtin(PUMPING_LATTICES[k % len(PUMPING_LATTICES)])
        lang, witness = _random_pair(rng, pair_lat, ctx.zero_bias)
        report = pumping_check(lang, witness, max_len=ctx.max_len, max_pump=ctx.max_pump)
        report.index = k + 1
        report.instance = f"pair #{k}: {report.instance}"
        reports.append(report)
    failed = sum(1 for r in reports if not r.passed)
    logger.debug(f"Pumping: {len(reports)} pairs checked, {failed} failed")
    return reports


PUMPING_CHECKS = (check_pumping,)
