"""
Lattice-valued regular expressions and Kleene representations of automata.

Expressions are hash-consed: a RegexFactory interns every node, so equal
subterms are one shared object and a Kleene representation stays a DAG with
a cubic number of nodes instead of an exponential tree.

Text syntax:
    %0          empty language
    @           empty word
    name        symbol
    <elem> r    scalar (binds tighter than concatenation)
    r + s       union
    r . s, r s  concatenation
    r*          star
"""

import logging
import threading
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from automata import LAutomaton
from config import PIVOT_ORDERS, get_settings
from errors import AlphabetMismatch, CrossLattice, DocumentError, ValidationError
from languages import EPSILON, Alphabet, Homomorphism, RegexBacked, Word, star_value
from lattice import ElemId, OrthoLattice

logger = logging.getLogger(__name__)

OPS = ('empty', 'eps', 'sym', 'scalar', 'union', 'concat', 'star')

# Printing precedence: higher binds tighter.
_LEVEL = {'union': 0, 'concat': 1, 'scalar': 2, 'star': 3, 'empty': 4, 'eps': 4, 'sym': 4}

_SPECIAL = set('+.*()<>%@')


class Regex:
    """One interned expression node. Build nodes through a RegexFactory."""

    __slots__ = ('uid', 'op', 'symbol', 'value', 'children', 'ctx')

    def __init__(self, uid: int, op: str, symbol: Optional[str], value: Optional[ElemId],
                 children: Tuple['Regex', ...], ctx: 'RegexFactory'):
        self.uid = uid
        self.op = op
        self.symbol = symbol
        self.value = value
        self.children = children
        self.ctx = ctx

    def __repr__(self) -> str:
        return f"Regex({self.to_text()!r})"

    def evaluate(self, word: Sequence[str]) -> ElemId:
        """L(r)(word), memoised per (node, substring) for this word."""
        word = self.ctx.alphabet.check_word(word)
        return _Evaluator(self.ctx.lattice, word).value(self, 0, len(word))

    def to_text(self) -> str:
        return format_regex(self)

    def nodes(self) -> List['Regex']:
        """Distinct nodes reachable from this one, children before parents."""
        order: List[Regex] = []
        seen = set()
        stack: List[Tuple[Regex, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if node.uid in seen:
                continue
            if expanded:
                seen.add(node.uid)
                order.append(node)
                continue
            stack.append((node, True))
            for child in reversed(node.children):
                if child.uid not in seen:
                    stack.append((child, False))
        return order


class RegexFactory:
    """
    Intern table for expressions over one lattice and alphabet.

    Args:
        lattice: Lattice for scalar values
        alphabet: Alphabet for symbol nodes
    """

    def __init__(self, lattice: OrthoLattice, alphabet: Alphabet):
        self.lattice = lattice
        self.alphabet = alphabet
        self._table: Dict[tuple, Regex] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._table)

    def _intern(self, op: str, symbol: Optional[str] = None, value: Optional[ElemId] = None,
                children: Tuple[Regex, ...] = ()) -> Regex:
        for child in children:
            if child.ctx is not self:
                raise CrossLattice("Regex nodes from different factories cannot be combined")
        key = (op, symbol, value, tuple(c.uid for c in children))
        node = self._table.get(key)
        if node is None:
            with self._lock:
                node = self._table.get(key)
                if node is None:
                    node = Regex(len(self._table), op, symbol, value, children, self)
                    self._table[key] = node
        return node

    def empty(self) -> Regex:
        return self._intern('empty')

    def eps(self) -> Regex:
        return self._intern('eps')

    def sym(self, symbol: str) -> Regex:
        if symbol not in self.alphabet:
            raise AlphabetMismatch(f"Symbol {symbol!r} is not in alphabet {{{', '.join(self.alphabet)}}}")
        return self._intern('sym', symbol=symbol)

    def scalar(self, value: ElemId, child: Regex) -> Regex:
        self.lattice.check(value)
        return self._intern('scalar', value=int(value), children=(child,))

    def union(self, left: Regex, right: Regex) -> Regex:
        return self._intern('union', children=(left, right))

    def concat(self, left: Regex, right: Regex) -> Regex:
        return self._intern('concat', children=(left, right))

    def star(self, child: Regex) -> Regex:
        return self._intern('star', children=(child,))

    def word(self, word: Sequence[str]) -> Regex:
        """Concatenation of symbol nodes; the empty word gives @."""
        if not word:
            return self.eps()
        node = self.sym(word[0])
        for sym in word[1:]:
            node = self.concat(node, self.sym(sym))
        return node

    def union_all(self, terms: Sequence[Regex]) -> Regex:
        """Left-nested union; the empty sum is %0."""
        if not terms:
            return self.empty()
        node = terms[0]
        for term in terms[1:]:
            node = self.union(node, term)
        return node


class _Evaluator:
    def __init__(self, lat: OrthoLattice, word: Word):
        self.lat = lat
        self.word = word
        self.memo: Dict[Tuple[int, int, int], ElemId] = {}

    def value(self, node: Regex, i: int, j: int) -> ElemId:
        key = (node.uid, i, j)
        cached = self.memo.get(key)
        if cached is None:
            cached = self._compute(node, i, j)
            self.memo[key] = cached
        return cached

    def _compute(self, node: Regex, i: int, j: int) -> ElemId:
        lat = self.lat
        op = node.op
        if op == 'empty':
            return lat.zero
        if op == 'eps':
            return lat.one if i == j else lat.zero
        if op == 'sym':
            return lat.one if j == i + 1 and self.word[i] == node.symbol else lat.zero
        if op == 'scalar':
            return lat.meet_table[node.value][self.value(node.children[0], i, j)]
        if op == 'union':
            left, right = node.children
            return lat.join_table[self.value(left, i, j)][self.value(right, i, j)]
        if op == 'concat':
            left, right = node.children
            meet, join = lat.meet_table, lat.join_table
            acc = lat.zero
            for k in range(i, j + 1):
                a = self.value(left, i, k)
                if a != lat.zero:
                    acc = join[acc][meet[a][self.value(right, k, j)]]
            return acc
        if op == 'star':
            child = node.children[0]
            return star_value(lat, lambda a, b: self.value(child, i + a, i + b), j - i)
        raise ValueError(f"Unknown regex node {op!r}")


def regex_eval(r: Regex, word: Sequence[str]) -> ElemId:
    return r.evaluate(word)


# -- text syntax ------------------------------------------------------------

def format_regex(r: Regex) -> str:
    """Print with minimal parentheses; parse_regex(format_regex(r)) rebuilds r."""
    names = r.ctx.lattice.elem_names
    memo: Dict[Tuple[int, int], str] = {}

    def show(node: Regex, need: int) -> str:
        key = (node.uid, need)
        if key in memo:
            return memo[key]
        op = node.op
        if op == 'empty':
            text = '%0'
        elif op == 'eps':
            text = '@'
        elif op == 'sym':
            text = node.symbol
        elif op == 'scalar':
            text = f"<{names[node.value]}>{show(node.children[0], _LEVEL['scalar'])}"
        elif op == 'star':
            text = f"{show(node.children[0], _LEVEL['empty'])}*"
        elif op == 'concat':
            left, right = node.children
            text = f"{show(left, _LEVEL['concat'])}.{show(right, _LEVEL['scalar'])}"
        else:
            left, right = node.children
            text = f"{show(left, _LEVEL['union'])} + {show(right, _LEVEL['concat'])}"
        if _LEVEL[op] < need:
            text = f"({text})"
        memo[key] = text
        return text

    return show(r, 0)


class _Parser:
    def __init__(self, factory: RegexFactory, text: str):
        self.factory = factory
        self.text = text
        self.pos = 0

    def error(self, message: str) -> DocumentError:
        return DocumentError(f"Regex parse error at column {self.pos + 1}: {message} in {self.text!r}")

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def take(self, expected: str) -> None:
        if self.peek() != expected:
            raise self.error(f"expected {expected!r}")
        self.pos += 1

    def parse(self) -> Regex:
        node = self.expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return node

    def expr(self) -> Regex:
        node = self.term()
        while self.peek() == '+':
            self.pos += 1
            node = self.factory.union(node, self.term())
        return node

    def starts_factor(self) -> bool:
        c = self.peek()
        return bool(c) and c not in '+)*>.'

    def term(self) -> Regex:
        node = self.factor()
        while True:
            if self.peek() == '.':
                self.pos += 1
            elif not self.starts_factor():
                return node
            node = self.factory.concat(node, self.factor())

    def factor(self) -> Regex:
        if self.peek() == '<':
            self.pos += 1
            end = self.text.find('>', self.pos)
            if end < 0:
                raise self.error("unterminated scalar")
            name = self.text[self.pos:end].strip()
            self.pos = end + 1
            try:
                value = self.factory.lattice.elem(name)
            except ValidationError as e:
                raise self.error(str(e)) from None
            return self.factory.scalar(value, self.factor())
        return self.postfix()

    def postfix(self) -> Regex:
        node = self.atom()
        while self.peek() == '*':
            self.pos += 1
            node = self.factory.star(node)
        return node

    def atom(self) -> Regex:
        c = self.peek()
        if not c:
            raise self.error("unexpected end of input")
        if c == '(':
            self.pos += 1
            node = self.expr()
            self.take(')')
            return node
        if self.text.startswith('%0', self.pos):
            self.pos += 2
            return self.factory.empty()
        if c == '@':
            self.pos += 1
            return self.factory.eps()
        if c in _SPECIAL:
            raise self.error(f"unexpected {c!r}")
        start = self.pos
        while (self.pos < len(self.text) and not self.text[self.pos].isspace()
               and self.text[self.pos] not in _SPECIAL):
            self.pos += 1
        name = self.text[start:self.pos]
        if name not in self.factory.alphabet:
            self.pos = start
            raise self.error(f"unknown symbol {name!r}")
        return self.factory.sym(name)


def parse_regex(factory: RegexFactory, text: str) -> Regex:
    """
    Parse the text syntax.

    Raises:
        DocumentError: With the column of the first problem
    """
    return _Parser(factory, text).parse()


# -- JSON AST ---------------------------------------------------------------

def regex_to_ast(r: Regex) -> Dict[str, Any]:
    """Nested AST document (shared subterms are repeated)."""
    names = r.ctx.lattice.elem_names
    memo: Dict[int, Dict[str, Any]] = {}
    for node in r.nodes():
        if node.op in ('empty', 'eps'):
            doc = {'op': node.op}
        elif node.op == 'sym':
            doc = {'op': 'sym', 'symbol': node.symbol}
        elif node.op == 'scalar':
            doc = {'op': 'scalar', 'value': names[node.value], 'child': memo[node.children[0].uid]}
        elif node.op == 'star':
            doc = {'op': 'star', 'child': memo[node.children[0].uid]}
        else:
            doc = {'op': node.op, 'left': memo[node.children[0].uid], 'right': memo[node.children[1].uid]}
        memo[node.uid] = doc
    return memo[r.uid]


def regex_to_dag(r: Regex) -> Dict[str, Any]:
    """Node-table document: each shared node appears once."""
    names = r.ctx.lattice.elem_names
    ids: Dict[int, int] = {}
    table = []
    for node in r.nodes():
        ids[node.uid] = len(table)
        entry: Dict[str, Any] = {'id': len(table), 'op': node.op}
        if node.symbol is not None:
            entry['symbol'] = node.symbol
        if node.value is not None:
            entry['value'] = names[node.value]
        if node.children:
            entry['children'] = [ids[c.uid] for c in node.children]
        table.append(entry)
    return {'root': ids[r.uid], 'nodes': table}


def regex_from_ast(factory: RegexFactory, doc: Mapping[str, Any], path: str = '$') -> Regex:
    """
    Rebuild an expression from a nested AST or a node-table document.

    Raises:
        DocumentError: With the JSON path of the offending node
    """
    if not isinstance(doc, Mapping):
        raise DocumentError(f"{path}: regex node must be an object")
    if 'nodes' in doc and 'root' in doc:
        return _from_dag(factory, doc, path)
    op = doc.get('op')
    if op not in OPS:
        raise DocumentError(f"{path}.op: unknown regex operator {op!r}")
    try:
        if op == 'empty':
            return factory.empty()
        if op == 'eps':
            return factory.eps()
        if op == 'sym':
            return factory.sym(_field(doc, 'symbol', path))
        if op == 'scalar':
            value = factory.lattice.elem(_field(doc, 'value', path))
            return factory.scalar(value, regex_from_ast(factory, _field(doc, 'child', path), path + '.child'))
        if op == 'star':
            return factory.star(regex_from_ast(factory, _field(doc, 'child', path), path + '.child'))
        left = regex_from_ast(factory, _field(doc, 'left', path), path + '.left')
        right = regex_from_ast(factory, _field(doc, 'right', path), path + '.right')
        return factory.union(left, right) if op == 'union' else factory.concat(left, right)
    except DocumentError:
        raise
    except ValidationError as e:
        raise DocumentError(f"{path}: {e}") from None


def _field(doc: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in doc:
        raise DocumentError(f"{path}: missing field {key!r}")
    return doc[key]


def _from_dag(factory: RegexFactory, doc: Mapping[str, Any], path: str) -> Regex:
    built: Dict[int, Regex] = {}
    for k, entry in enumerate(doc['nodes']):
        where = f"{path}.nodes[{k}]"
        children = []
        for child in entry.get('children', []):
            if child not in built:
                raise DocumentError(f"{where}: child {child!r} must be defined before its parent")
            children.append(built[child])
        nested = {'op': entry.get('op')}
        if 'symbol' in entry:
            nested['symbol'] = entry['symbol']
        if 'value' in entry:
            nested['value'] = entry['value']
        op = entry.get('op')
        arity = {'scalar': 1, 'star': 1, 'union': 2, 'concat': 2}.get(op, 0)
        if len(children) != arity:
            raise DocumentError(f"{where}: {op!r} needs {arity} children")
        node = _rebuild(factory, nested, children, where)
        built[entry.get('id', k)] = node
    root = doc['root']
    if root not in built:
        raise DocumentError(f"{path}.root: unknown node {root!r}")
    return built[root]


def _rebuild(factory: RegexFactory, nested: Dict[str, Any], children: List[Regex], where: str) -> Regex:
    op = nested['op']
    if op not in OPS:
        raise DocumentError(f"{where}.op: unknown regex operator {op!r}")
    try:
        if op in ('empty', 'eps', 'sym'):
            return regex_from_ast(factory, nested, where)
        if op == 'scalar':
            return factory.scalar(factory.lattice.elem(_field(nested, 'value', where)), children[0])
        if op == 'star':
            return factory.star(children[0])
        if op == 'union':
            return factory.union(*children)
        return factory.concat(*children)
    except DocumentError:
        raise
    except ValidationError as e:
        raise DocumentError(f"{where}: {e}") from None


# -- structure --------------------------------------------------------------

def lambda_set(r: Regex) -> Tuple[ElemId, ...]:
    """Scalar values occurring in r."""
    return tuple(sorted({node.value for node in r.nodes() if node.op == 'scalar'}))


def delta_gamma(r: Regex) -> ElemId:
    """Commutator of the scalar values of r."""
    return r.ctx.lattice.commutator(lambda_set(r))


def lambda_closure(r: Regex) -> Tuple[ElemId, ...]:
    """Closure of the scalar values together with 0 and 1 under meet and join."""
    lat = r.ctx.lattice
    closed = set(lambda_set(r)) | {lat.zero, lat.one}
    meet, join = lat.meet_table, lat.join_table
    frontier = set(closed)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in closed:
                fresh.add(meet[a][b])
                fresh.add(join[a][b])
        fresh -= closed
        closed |= fresh
        frontier = fresh
    return tuple(sorted(closed))


def regex_hom(h: Homomorphism, r: Regex, target: RegexFactory) -> Regex:
    """
    Replace every symbol σ by the word h(σ) (@ when h(σ) is empty).

    Raises:
        AlphabetMismatch: If h misses a symbol of r or maps outside the target alphabet
    """
    if target.lattice != r.ctx.lattice:
        raise CrossLattice("Homomorphic image must use the same lattice")
    mapped: Dict[int, Regex] = {}
    for node in r.nodes():
        kids = [mapped[c.uid] for c in node.children]
        if node.op == 'empty':
            out = target.empty()
        elif node.op == 'eps':
            out = target.eps()
        elif node.op == 'sym':
            if node.symbol not in h:
                raise AlphabetMismatch(f"Homomorphism is not defined on {node.symbol!r}")
            out = target.word(target.alphabet.check_word(h[node.symbol]))
        elif node.op == 'scalar':
            out = target.scalar(node.value, kids[0])
        elif node.op == 'star':
            out = target.star(kids[0])
        elif node.op == 'union':
            out = target.union(*kids)
        else:
            out = target.concat(*kids)
        mapped[node.uid] = out
    return mapped[r.uid]


# -- Kleene representation --------------------------------------------------

def resolve_pivot_order(m: LAutomaton, order: Union[str, Sequence[str], None] = None) -> Tuple[str, ...]:
    """
    Turn 'decl', 'lex', a comma-separated list or a sequence into a state permutation.

    Raises:
        ValidationError: If an explicit order is not a permutation of the states
    """
    order = get_settings().pivot_order if order is None else order
    if order == 'decl':
        return m.states
    if order == 'lex':
        return tuple(sorted(m.states))
    if isinstance(order, str):
        order = [s.strip() for s in order.split(',') if s.strip()]
    order = tuple(order)
    if sorted(order) != sorted(m.states):
        raise ValidationError(
            f"Pivot order {list(order)} must be 'decl', 'lex' ({', '.join(PIVOT_ORDERS)}) "
            f"or a permutation of {list(m.states)}"
        )
    return order


@dataclass
class KleeneRep:
    """
    A Kleene representation: the expression Σ (I(u) ∧ T(v)) α_uv together
    with every stage α^k (after eliminating the first k pivots).
    """
    automaton: LAutomaton
    factory: RegexFactory
    pivot_order: Tuple[str, ...]
    stages: List[Tuple[Tuple[Regex, ...], ...]]
    regex: Regex

    def alpha(self, u: str, v: str, k: Optional[int] = None) -> Regex:
        k = len(self.pivot_order) if k is None else k
        if not 0 <= k < len(self.stages):
            raise ValueError(f"Stage {k} is outside 0..{len(self.stages) - 1}")
        m = self.automaton
        return self.stages[k][m._state(u)][m._state(v)]

    def evaluate(self, word: Sequence[str]) -> ElemId:
        return self.regex.evaluate(word)


def kleene_representation(m: LAutomaton, pivot_order: Union[str, Sequence[str], None] = None,
                          factory: Optional[RegexFactory] = None) -> KleeneRep:
    """
    Build k(M) by the pivot recursion
        α_uv ← α_uv + α_uq · (α_qq)* · α_qv
    over the chosen pivot order, starting from the one-step expressions.
    """
    lat = m.lattice
    factory = factory or RegexFactory(lat, m.alphabet)
    if factory.lattice != lat or factory.alphabet != m.alphabet:
        raise CrossLattice("Regex factory does not match the automaton's lattice and alphabet")
    order = resolve_pivot_order(m, pivot_order)
    n = len(m.states)
    one = lat.one

    def step_term(value: ElemId, node: Regex) -> Regex:
        return node if value == one else factory.scalar(value, node)

    base = []
    for u in range(n):
        row = []
        for v in range(n):
            terms = [factory.eps()] if u == v else []
            for sym in ((EPSILON,) if m.has_epsilon else ()) + m.alphabet.symbols:
                value = m.delta.get((u, sym, v))
                if value is None:
                    continue
                node = factory.eps() if sym == EPSILON else factory.sym(sym)
                terms.append(step_term(value, node))
            row.append(factory.union_all(terms))
        base.append(tuple(row))
    stages = [tuple(base)]

    current = base
    for pivot in order:
        q = m.index[pivot]
        loop = factory.star(current[q][q])
        nxt = []
        for u in range(n):
            into = factory.concat(current[u][q], loop)
            nxt.append(tuple(factory.union(current[u][v], factory.concat(into, current[q][v]))
                             for v in range(n)))
        current = nxt
        stages.append(tuple(current))

    meet = lat.meet_table
    terms = []
    for u in range(n):
        for v in range(n):
            coeff = meet[m.initial[u]][m.terminal[v]]
            if coeff != lat.zero:
                terms.append(step_term(coeff, current[u][v]))
    regex = factory.union_all(terms)
    logger.debug(f"Kleene representation over pivots {list(order)}: {len(regex.nodes())} shared nodes")
    return KleeneRep(m, factory, order, stages, regex)


def regex_language(r: Regex) -> RegexBacked:
    return RegexBacked(r)
