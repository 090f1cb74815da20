"""
Lattice-valued languages over a finite alphabet.

A language assigns a lattice element to every word. Four backings share one
evaluation interface: finite tables, automata, regular expressions, and
languages derived pointwise from others.
"""

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from config import get_settings
from errors import AlphabetMismatch, ErasingImageUnbounded, NotFiniteRange, NotFiniteSupport, ValidationError
from lattice import ElemId, OrthoLattice, same_lattice
from logic import ImplKind, biimplies, point_membership

logger = logging.getLogger(__name__)

EPSILON = '@eps'

Word = Tuple[str, ...]
Homomorphism = Mapping[str, Word]


@dataclass(frozen=True)
class Alphabet:
    symbols: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, 'symbols', tuple(self.symbols))
        if not self.symbols:
            raise ValidationError("Alphabet must not be empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValidationError(f"Alphabet has duplicate symbols: {list(self.symbols)}")
        for sym in self.symbols:
            if not isinstance(sym, str) or not sym or sym != sym.strip() or ' ' in sym:
                raise ValidationError(f"Invalid symbol {sym!r}: symbols are non-empty and contain no spaces")
            if sym == EPSILON:
                raise ValidationError(f"{EPSILON} is reserved for the empty word")

    def __contains__(self, sym) -> bool:
        return sym in self.symbols

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def check_word(self, word: Sequence[str]) -> Word:
        word = tuple(word)
        for sym in word:
            if sym not in self.symbols:
                raise AlphabetMismatch(f"Symbol {sym!r} is not in alphabet {{{', '.join(self.symbols)}}}")
        return word


def parse_word(text: str, alphabet: Optional[Alphabet] = None) -> Word:
    """Split a space-separated word; the empty string is the empty word."""
    word = tuple(text.split())
    if alphabet is not None:
        alphabet.check_word(word)
    return word


def format_word(word: Sequence[str]) -> str:
    return ' '.join(word)


def words_up_to(alphabet: Alphabet, max_len: int, min_len: int = 0) -> Iterator[Word]:
    """All words with min_len <= |s| <= max_len, shortest first then by alphabet order."""
    for n in range(min_len, max_len + 1):
        yield from itertools.product(alphabet.symbols, repeat=n)


class LValuedLanguage:
    """Base class: a total map from words to lattice elements."""

    backing = 'abstract'
    approximate = False

    def __init__(self, lattice: OrthoLattice, alphabet: Alphabet):
        self.lattice = lattice
        self.alphabet = alphabet

    def __call__(self, word: Sequence[str]) -> ElemId:
        return self.evaluate(word)

    def evaluate(self, word: Sequence[str]) -> ElemId:
        return self._value(self.alphabet.check_word(word))

    def _value(self, word: Word) -> ElemId:
        raise NotImplementedError

    def describe(self) -> str:
        return self.backing

    def range_values(self) -> Tuple[ElemId, ...]:
        """Range(A) when it is known to be finite.

        Raises:
            NotFiniteRange: If this backing cannot enumerate its range
        """
        raise NotFiniteRange(f"Range of {self.describe()} is not known to be finite")


class FiniteTable(LValuedLanguage):
    """Finite-support language; omitted words have value 0."""

    backing = 'table'

    def __init__(self, lattice: OrthoLattice, alphabet: Alphabet, entries: Mapping[Sequence[str], ElemId]):
        super().__init__(lattice, alphabet)
        table: Dict[Word, ElemId] = {}
        for word, value in entries.items():
            word = alphabet.check_word(word)
            lattice.check(value)
            if value != lattice.zero:
                table[word] = int(value)
        self.entries = table

    def _value(self, word: Word) -> ElemId:
        return self.entries.get(word, self.lattice.zero)

    @property
    def support(self) -> Tuple[Word, ...]:
        return tuple(sorted(self.entries, key=lambda w: (len(w), w)))

    def range_values(self) -> Tuple[ElemId, ...]:
        """Range(A); always contains 0 because the support is finite."""
        return tuple(sorted(set(self.entries.values()) | {self.lattice.zero}))

    def describe(self) -> str:
        return f"table with {len(self.entries)} entries"


class AutomatonBacked(LValuedLanguage):
    """rec of an automaton; results are memoised per word."""

    backing = 'automaton'

    def __init__(self, automaton):
        super().__init__(automaton.lattice, automaton.alphabet)
        self.automaton = automaton
        self._memo: Dict[Word, ElemId] = {}
        self._lock = threading.Lock()

    def _value(self, word: Word) -> ElemId:
        cached = self._memo.get(word)
        if cached is None:
            cached = self.automaton.rec(word)
            with self._lock:
                self._memo[word] = cached
        return cached

    def describe(self) -> str:
        return f"automaton with {len(self.automaton.states)} states"

    def range_values(self) -> Tuple[ElemId, ...]:
        return tuple(sorted(self.automaton.value_range()))


class RegexBacked(LValuedLanguage):
    """Language of a regular expression."""

    backing = 'regex'

    def __init__(self, regex):
        super().__init__(regex.ctx.lattice, regex.ctx.alphabet)
        self.regex = regex

    def _value(self, word: Word) -> ElemId:
        return self.regex.evaluate(word)

    def describe(self) -> str:
        return f"regex {self.regex.to_text()}"


class Derived(LValuedLanguage):
    """Pointwise language computed from other languages on demand."""

    backing = 'derived'

    def __init__(self, lattice: OrthoLattice, alphabet: Alphabet, fn: Callable[[Word], ElemId],
                 description: str, approximate: bool = False,
                 known_range: Optional[Iterable[ElemId]] = None):
        super().__init__(lattice, alphabet)
        self._fn = fn
        self.description = description
        self.approximate = approximate
        self.known_range = None if known_range is None else tuple(sorted(set(known_range)))

    def _value(self, word: Word) -> ElemId:
        return self._fn(word)

    def describe(self) -> str:
        return self.description + (' (approximate from below)' if self.approximate else '')

    def range_values(self) -> Tuple[ElemId, ...]:
        if self.known_range is None:
            return super().range_values()
        return self.known_range


def evaluate(lang: LValuedLanguage, word: Sequence[str]) -> ElemId:
    """Value of a language at a word."""
    return lang.evaluate(word)


def _compatible(a: LValuedLanguage, b: LValuedLanguage) -> OrthoLattice:
    lat = same_lattice(a.lattice, b.lattice)
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"Alphabets differ: {list(a.alphabet)} vs {list(b.alphabet)}")
    return lat


def _mapped_range(lang: LValuedLanguage, fn: Callable[[ElemId], ElemId]) -> Optional[Tuple[ElemId, ...]]:
    try:
        return tuple(fn(v) for v in lang.range_values())
    except NotFiniteRange:
        return None


def scalar(a: ElemId, lang: LValuedLanguage) -> LValuedLanguage:
    lat = lang.lattice
    lat.check(a)
    meet = lat.meet_table
    return Derived(lat, lang.alphabet, lambda w: meet[a][lang._value(w)],
                   f"{lat.elem_names[a]} * ({lang.describe()})", lang.approximate,
                   known_range=_mapped_range(lang, lambda v: meet[a][v]))


def complement(lang: LValuedLanguage) -> LValuedLanguage:
    ortho = lang.lattice.ortho_table
    return Derived(lang.lattice, lang.alphabet, lambda w: ortho[lang._value(w)],
                   f"complement({lang.describe()})",
                   known_range=_mapped_range(lang, lambda v: ortho[v]))


def intersect(a: LValuedLanguage, b: LValuedLanguage) -> LValuedLanguage:
    lat = _compatible(a, b)
    meet = lat.meet_table
    return Derived(lat, a.alphabet, lambda w: meet[a._value(w)][b._value(w)],
                   f"({a.describe()}) & ({b.describe()})", a.approximate or b.approximate)


def union(a: LValuedLanguage, b: LValuedLanguage) -> LValuedLanguage:
    lat = _compatible(a, b)
    join = lat.join_table
    return Derived(lat, a.alphabet, lambda w: join[a._value(w)][b._value(w)],
                   f"({a.describe()}) | ({b.describe()})", a.approximate or b.approximate)


def concat(a: LValuedLanguage, b: LValuedLanguage) -> LValuedLanguage:
    lat = _compatible(a, b)
    meet, join = lat.meet_table, lat.join_table

    def value(word: Word) -> ElemId:
        acc = lat.zero
        for i in range(len(word) + 1):
            acc = join[acc][meet[a._value(word[:i])][b._value(word[i:])]]
        return acc

    return Derived(lat, a.alphabet, value, f"({a.describe()}) . ({b.describe()})",
                   a.approximate or b.approximate)


def star_value(lat: OrthoLattice, factor: Callable[[int, int], ElemId], length: int) -> ElemId:
    """
    Join over compositions of positions [0, length) into non-empty factors of
    the meet of factor(i, j) values, with value 1 on the empty word.

    Each prefix position keeps the antichain of maximal accumulated meets, so
    the result is the exact join over compositions without assuming meets
    distribute over joins.
    """
    if length == 0:
        return lat.one
    meet = lat.meet_table
    frontier = [frozenset((lat.one,))] + [frozenset()] * length
    for end in range(1, length + 1):
        reached = set()
        for start in range(end):
            if not frontier[start]:
                continue
            v = factor(start, end)
            if v == lat.zero:
                continue
            for x in frontier[start]:
                reached.add(meet[x][v])
        frontier[end] = lat.maximal(reached)
    return lat.big_join(frontier[length])


def kleene_star(lang: LValuedLanguage) -> LValuedLanguage:
    lat = lang.lattice

    def value(word: Word) -> ElemId:
        return star_value(lat, lambda i, j: lang._value(word[i:j]), len(word))

    return Derived(lat, lang.alphabet, value, f"({lang.describe()})*", lang.approximate)


def _check_hom(h: Homomorphism, source: Alphabet, target: Alphabet) -> Dict[str, Word]:
    table = {}
    for sym in source:
        if sym not in h:
            raise AlphabetMismatch(f"Homomorphism is not defined on {sym!r}")
        table[sym] = target.check_word(h[sym])
    return table


def hom_apply(h: Homomorphism, word: Sequence[str]) -> Word:
    return tuple(itertools.chain.from_iterable(h[sym] for sym in word))


def hom_domain(h: Homomorphism) -> Alphabet:
    return Alphabet(tuple(h))


def hom_codomain(h: Homomorphism, fallback: Optional[Alphabet] = None) -> Alphabet:
    symbols = []
    for image in h.values():
        for sym in image:
            if sym not in symbols:
                symbols.append(sym)
    if not symbols:
        if fallback is None:
            raise ValidationError("Homomorphism erases every symbol; give the target alphabet explicitly")
        return fallback
    return Alphabet(tuple(symbols))


def is_erasing(h: Homomorphism) -> bool:
    return any(len(image) == 0 for image in h.values())


def preimage(h: Homomorphism, lang: LValuedLanguage, source: Optional[Alphabet] = None) -> LValuedLanguage:
    """h⁻¹(B)(s) = B(h(s))."""
    source = source or hom_domain(h)
    table = _check_hom(h, source, lang.alphabet)
    return Derived(lang.lattice, source, lambda w: lang._value(hom_apply(table, w)),
                   f"preimage({lang.describe()})", lang.approximate)


def preimage_words(table: Mapping[str, Word], target: Word, erase_budget: int) -> Iterator[Word]:
    """Every word s with h(s) = target using at most erase_budget erased symbols."""
    erasing = [sym for sym, image in table.items() if not image]
    productive = [(sym, image) for sym, image in table.items() if image]

    def walk(pos: int, budget: int, prefix: Tuple[str, ...]):
        if pos == len(target):
            yield prefix
        for sym, image in productive:
            if target[pos:pos + len(image)] == image:
                yield from walk(pos + len(image), budget, prefix + (sym,))
        if budget > 0:
            for sym in erasing:
                yield from walk(pos, budget - 1, prefix + (sym,))

    seen = set()
    for word in walk(0, erase_budget, ()):
        if word not in seen:
            seen.add(word)
            yield word


def image(h: Homomorphism, lang: LValuedLanguage, target: Optional[Alphabet] = None,
          bound: Optional[int] = None, exact: bool = False) -> LValuedLanguage:
    """
    h(A)(t) = ∨{A(s) : h(s) = t}.

    Exact for non-erasing h and for automaton-backed A. Otherwise preimages with
    more than `bound` erased symbols are skipped and the result is flagged as an
    approximation from below.

    Raises:
        ErasingImageUnbounded: If exact is requested but cannot be guaranteed
    """
    target = target or hom_codomain(h, fallback=None)
    table = _check_hom(h, lang.alphabet, target)

    if isinstance(lang, AutomatonBacked):
        from automata import hom_image_aut
        return AutomatonBacked(hom_image_aut(table, lang.automaton, target))

    lat = lang.lattice
    join = lat.join_table
    erasing = is_erasing(table)
    if erasing and exact:
        raise ErasingImageUnbounded(
            "Image under an erasing homomorphism is only exact for automaton-backed languages"
        )
    budget = 0 if not erasing else (get_settings().image_bound if bound is None else bound)

    def value(word: Word) -> ElemId:
        acc = lat.zero
        for pre in preimage_words(table, word, budget):
            acc = join[acc][lang._value(pre)]
        return acc

    return Derived(lat, target, value, f"image({lang.describe()})", approximate=erasing or lang.approximate)


@dataclass(frozen=True)
class WordSet:
    """Finite members, optionally together with every word outside a finite support."""
    members: frozenset
    includes_unsupported: bool = False
    support: frozenset = frozenset()

    def __contains__(self, word) -> bool:
        word = tuple(word)
        if word in self.members:
            return True
        return self.includes_unsupported and word not in self.support

    @property
    def is_finite(self) -> bool:
        return not self.includes_unsupported


@dataclass(frozen=True)
class Thresholds:
    down: WordSet
    up: WordSet
    clamp: FiniteTable


def thresholds(lang: LValuedLanguage, level: ElemId) -> Thresholds:
    """
    down = {s : A(s) ≰ λ}, up = {s : A(s) ≱ λ}, and clamp keeps A(s) only where A(s) ≰ λ.

    Raises:
        NotFiniteSupport: Unless A is a finite table
    """
    if not isinstance(lang, FiniteTable):
        raise NotFiniteSupport("Thresholds need a finite-support (table) language")
    lat = lang.lattice
    lat.check(level)
    leq = lat.leq_table
    support = frozenset(lang.entries)
    down = frozenset(w for w, v in lang.entries.items() if not leq[v][level])
    up = frozenset(w for w, v in lang.entries.items() if not leq[level][v])
    clamp = FiniteTable(lat, lang.alphabet, {w: lang.entries[w] for w in down})
    return Thresholds(
        down=WordSet(down),
        up=WordSet(up, includes_unsupported=not leq[level][lat.zero], support=support),
        clamp=clamp,
    )


def equiv_degree_bounded(a: LValuedLanguage, b: LValuedLanguage, impl: ImplKind, max_len: int) -> ElemId:
    """Meet of a(s) ↔ b(s) over |s| <= max_len; an upper bound on the exact degree."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    lat = _compatible(a, b)
    meet = lat.meet_table
    acc = lat.one
    for word in words_up_to(a.alphabet, max_len):
        acc = meet[acc][biimplies(lat, impl, a._value(word), b._value(word))]
        if acc == lat.zero:
            break
    return acc


def bounded_values(lang: LValuedLanguage, max_len: int) -> Tuple[ElemId, ...]:
    """Sorted distinct values taken on words up to max_len."""
    return tuple(sorted({lang._value(w) for w in words_up_to(lang.alphabet, max_len)}))


def membership_degree(lang: LValuedLanguage, word: Sequence[str], height: ElemId,
                      impl: ImplKind) -> ElemId:
    """Degree of the point word_height belonging to lang: height → A(word)."""
    return point_membership(lang.lattice, impl, height, lang.evaluate(word))


def table_from_language(lang: LValuedLanguage, words: Iterable[Sequence[str]]) -> FiniteTable:
    return FiniteTable(lang.lattice, lang.alphabet, {tuple(w): lang.evaluate(w) for w in words})
