"""
JSON documents for lattices, languages, automata, homomorphisms and regexes.

Every loader reports problems as DocumentError naming the JSON path of the
offending value. Lattice references are either `builtin:<name>`, a path to a
lattice document, or an inline lattice object.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from automata import LAutomaton, make_automaton
from errors import DocumentError, OmlqError, UnknownBuiltin, ValidationError
from kleene import Regex, RegexFactory, parse_regex, regex_from_ast, regex_to_ast, regex_to_dag
from languages import EPSILON, Alphabet, FiniteTable, Homomorphism
from lattice import OrthoLattice, builtin, validate_lattice

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = 'builtin:'

LatticeRef = Union[str, Mapping[str, Any]]


def read_json(path: Union[str, Path]) -> Any:
    """
    Read a JSON file.

    Raises:
        FileNotFoundError: If the file doesn't exist
        DocumentError: If it is not valid JSON
    """
    file = Path(path)
    if not file.exists():
        raise FileNotFoundError(f"Document not found: {path}")
    with open(file, 'r', encoding='utf-8') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise DocumentError(f"Invalid JSON in {path}: {e}") from e


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def write_json(doc: Any, output: Optional[str] = None) -> str:
    """Serialise doc; write it to output when given, and return the text."""
    text = dumps(doc)
    if output:
        Path(output).write_text(text + '\n', encoding='utf-8')
        logger.info(f"Wrote {output}")
    return text


def _require(doc: Mapping[str, Any], key: str, where: str) -> Any:
    if not isinstance(doc, Mapping):
        raise DocumentError(f"{where}: expected an object")
    if key not in doc:
        raise DocumentError(f"{where}: missing field {key!r}")
    return doc[key]


def _element(lat: OrthoLattice, name: Any, where: str) -> int:
    if not isinstance(name, str):
        raise DocumentError(f"{where}: element names are strings, got {name!r}")
    try:
        return lat.elem(name)
    except ValidationError:
        raise DocumentError(f"{where}: unknown element {name!r} in lattice {lat.name}") from None


# -- lattices ---------------------------------------------------------------

def lattice_from_document(doc: Mapping[str, Any], where: str = '$') -> OrthoLattice:
    name = _require(doc, 'name', where)
    elements = _require(doc, 'elements', where)
    leq = doc.get('leq', [])
    ortho = _require(doc, 'ortho', where)
    if not isinstance(elements, list) or not isinstance(leq, list) or not isinstance(ortho, Mapping):
        raise DocumentError(f"{where}: 'elements' and 'leq' must be lists and 'ortho' an object")
    try:
        return validate_lattice(str(name), elements, leq, ortho)
    except OmlqError as e:
        raise type(e)(f"{where}: {e}") from None


def load_lattice(ref: LatticeRef, base: Optional[Path] = None, where: str = '$') -> OrthoLattice:
    """
    Resolve a lattice reference.

    Args:
        ref: `builtin:<name>`, a file path, or an inline lattice document
        base: Directory that relative paths are resolved against
        where: JSON path used in error messages

    Raises:
        UnknownBuiltin, FileNotFoundError, DocumentError, NotALattice, BadOrthocomplement
    """
    if isinstance(ref, Mapping):
        return lattice_from_document(ref, where)
    if not isinstance(ref, str):
        raise DocumentError(f"{where}: lattice reference must be a string or an object")
    if ref.startswith(BUILTIN_PREFIX):
        return builtin(ref[len(BUILTIN_PREFIX):])
    path = Path(ref)
    if base is not None and not path.is_absolute() and not path.exists():
        path = base / path
    return lattice_from_document(read_json(path), str(path))


def lattice_ref(lat: OrthoLattice) -> LatticeRef:
    """`builtin:<name>` when lat is that builtin, else the inline document."""
    try:
        if builtin(lat.name) == lat:
            return BUILTIN_PREFIX + lat.name
    except UnknownBuiltin:
        pass
    return lat.to_document()


# -- languages --------------------------------------------------------------

def _alphabet(doc: Mapping[str, Any], where: str) -> Alphabet:
    symbols = _require(doc, 'alphabet', where)
    if not isinstance(symbols, list):
        raise DocumentError(f"{where}.alphabet: expected a list of symbols")
    try:
        return Alphabet(tuple(symbols))
    except ValidationError as e:
        raise DocumentError(f"{where}.alphabet: {e}") from None


def _word(raw: Any, alphabet: Alphabet, where: str):
    if isinstance(raw, str):
        raw = raw.split()
    if not isinstance(raw, list):
        raise DocumentError(f"{where}: a word is a list of symbols")
    try:
        return alphabet.check_word(raw)
    except ValidationError as e:
        raise DocumentError(f"{where}: {e}") from None


def language_from_document(doc: Mapping[str, Any], base: Optional[Path] = None,
                           lattice: Optional[OrthoLattice] = None) -> FiniteTable:
    lat = lattice or load_lattice(_require(doc, 'lattice', '$'), base, '$.lattice')
    alphabet = _alphabet(doc, '$')
    entries = _require(doc, 'entries', '$')
    if not isinstance(entries, list):
        raise DocumentError("$.entries: expected a list")
    table = {}
    for k, entry in enumerate(entries):
        where = f"$.entries[{k}]"
        word = _word(_require(entry, 'word', where), alphabet, where + '.word')
        if word in table:
            raise DocumentError(f"{where}.word: duplicate entry for {' '.join(word) or '@'}")
        table[word] = _element(lat, _require(entry, 'value', where), where + '.value')
    return FiniteTable(lat, alphabet, table)


def load_language(path: str) -> FiniteTable:
    return language_from_document(read_json(path), Path(path).parent)


def language_document(table: FiniteTable) -> Dict[str, Any]:
    names = table.lattice.elem_names
    return {
        'lattice': lattice_ref(table.lattice),
        'alphabet': list(table.alphabet),
        'entries': [{'word': list(w), 'value': names[table.entries[w]]} for w in table.support],
    }


# -- automata ---------------------------------------------------------------

def automaton_from_document(doc: Mapping[str, Any], base: Optional[Path] = None,
                            lattice: Optional[OrthoLattice] = None) -> LAutomaton:
    """
    Build an automaton; an EpsAutomaton when some transition uses @eps.

    Raises:
        DocumentError: With the JSON path of the first bad field
    """
    lat = lattice or load_lattice(_require(doc, 'lattice', '$'), base, '$.lattice')
    alphabet = _alphabet(doc, '$')
    states = _require(doc, 'states', '$')
    if not isinstance(states, list) or not all(isinstance(q, str) for q in states):
        raise DocumentError("$.states: expected a list of state names")
    declared = set(states)

    def state_map(key: str) -> Dict[str, int]:
        raw = doc.get(key, {})
        if not isinstance(raw, Mapping):
            raise DocumentError(f"$.{key}: expected an object from state to element")
        out = {}
        for q, name in raw.items():
            if q not in declared:
                raise DocumentError(f"$.{key}.{q}: undeclared state")
            out[q] = _element(lat, name, f"$.{key}.{q}")
        return out

    initial = state_map('initial')
    terminal = state_map('terminal')
    delta = []
    raw_delta = doc.get('delta', [])
    if not isinstance(raw_delta, list):
        raise DocumentError("$.delta: expected a list of [p, symbol, q, value]")
    for k, entry in enumerate(raw_delta):
        where = f"$.delta[{k}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise DocumentError(f"{where}: expected [p, symbol, q, value]")
        p, sym, q, name = entry
        for s, pos in ((p, 0), (q, 2)):
            if s not in declared:
                raise DocumentError(f"{where}[{pos}]: undeclared state {s!r}")
        if sym != EPSILON and sym not in alphabet:
            raise DocumentError(f"{where}[1]: symbol {sym!r} is not in the alphabet")
        delta.append((p, sym, q, _element(lat, name, f"{where}[3]")))
    try:
        return make_automaton(lat, alphabet, states, initial, terminal, delta)
    except DocumentError:
        raise
    except ValidationError as e:
        raise DocumentError(f"$: {e}") from None


def load_automaton(path: str, lattice: Optional[OrthoLattice] = None) -> LAutomaton:
    automaton = automaton_from_document(read_json(path), Path(path).parent, lattice)
    logger.debug(f"Loaded {automaton!r} from {path}")
    return automaton


def automaton_document(m: LAutomaton) -> Dict[str, Any]:
    doc = m.to_document()
    doc['lattice'] = lattice_ref(m.lattice)
    return doc


# -- homomorphisms ----------------------------------------------------------

def homomorphism_from_document(doc: Any, where: str = '$') -> Dict[str, tuple]:
    """{"σ": ["x", "y"], "τ": []} or {"σ": "x y"}; an empty image erases the symbol."""
    if not isinstance(doc, Mapping) or not doc:
        raise DocumentError(f"{where}: a homomorphism is a non-empty object from symbol to word")
    out = {}
    for sym, image in doc.items():
        if isinstance(image, str):
            image = image.split()
        if not isinstance(image, list) or not all(isinstance(s, str) for s in image):
            raise DocumentError(f"{where}.{sym}: image must be a list of symbols or a spaced string")
        out[str(sym)] = tuple(image)
    return out


def load_homomorphism(path: str) -> Homomorphism:
    return homomorphism_from_document(read_json(path))


def homomorphism_document(h: Homomorphism) -> Dict[str, list]:
    return {sym: list(image) for sym, image in h.items()}


# -- regexes ----------------------------------------------------------------

def load_regex(source: str, factory: RegexFactory) -> Regex:
    """Read a regex from a .json AST file or parse it as text."""
    if source.endswith('.json'):
        return regex_from_ast(factory, read_json(source))
    return parse_regex(factory, source)


def regex_document(r: Regex) -> Dict[str, Any]:
    return {
        'lattice': lattice_ref(r.ctx.lattice),
        'alphabet': list(r.ctx.alphabet),
        'text': r.to_text(),
        'ast': regex_to_ast(r),
        'dag': regex_to_dag(r),
    }


def regex_from_document(doc: Mapping[str, Any], base: Optional[Path] = None) -> Regex:
    """Inverse of regex_document; prefers the DAG table, then the AST, then text."""
    lat = load_lattice(_require(doc, 'lattice', '$'), base, '$.lattice')
    factory = RegexFactory(lat, _alphabet(doc, '$'))
    if 'dag' in doc:
        return regex_from_ast(factory, doc['dag'], '$.dag')
    if 'ast' in doc:
        return regex_from_ast(factory, doc['ast'], '$.ast')
    return parse_regex(factory, _require(doc, 'text', '$'))
