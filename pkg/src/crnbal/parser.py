"""Reading and writing the line-oriented ``.crn`` network format.

One statement per line, ``#`` starts a comment::

    X1 + 2 X2 -> X3 ; k = 3/2
    C1 <-> C2 ; kf = 2, kr = 3

Rate constants are decimals (optionally with an exponent) or ``p/q``
rationals; in exact mode decimals are read by place value, so ``1.5`` is
``3/2``. A reversible statement expands to the forward reaction followed by
the reverse one. Species and complexes are numbered by first appearance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from crnbal.errors import ParseError, StructuralError
from crnbal.model import EXACT, FLOAT, MODES, Reaction, ReactionNetwork, Species

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow><->|->)
  | (?P<punct>[+;=,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        mt = _TOKEN.match(line, pos)
        if mt is None:
            raise ParseError(f"unknown token {line[pos]!r}", lineno, pos + 1)
        kind = mt.lastgroup
        if kind != "ws":
            text = mt.group()
            toks.append(_Tok(text if kind in ("arrow", "punct") else kind, text, pos + 1))
        pos = mt.end()
    return toks


class _Cursor:
    def __init__(self, toks, lineno, line):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.end_col = len(line.rstrip()) + 1

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def col(self):
        t = self.peek()
        return t.col if t else self.end_col

    def fail(self, reason):
        raise ParseError(reason, self.lineno, self.col())

    def take(self, kind, what=None):
        t = self.peek()
        if t is None or t.kind != kind:
            found = "end of line" if t is None else repr(t.text)
            self.fail(f"expected {what or kind!r}, found {found}")
        self.i += 1
        return t

    def keyword(self, word):
        t = self.peek()
        if t is None or t.kind != "name" or t.text != word:
            found = "end of line" if t is None else repr(t.text)
            self.fail(f"expected {word!r}, found {found}")
        self.i += 1


def _number(text: str, mode: str, cur: _Cursor, col: int):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"invalid number {text!r}", cur.lineno, col) from None
    if value <= 0:
        raise ParseError(f"rate constant must be positive, got {text}", cur.lineno, col)
    return value if mode == EXACT else float(value)


def _complex(cur: _Cursor) -> list[tuple[str, int, int]]:
    """Parse ``term ('+' term)*`` into (species, coefficient, column) triples."""
    terms = []
    while True:
        t = cur.peek()
        coef = 1
        if t is not None and t.kind == "number":
            if not re.fullmatch(r"\d+", t.text) or int(t.text) == 0:
                cur.fail(f"coefficient must be a positive integer, got {t.text!r}")
            coef = int(t.text)
            cur.i += 1
        name = cur.take("name", "species name")
        if any(n == name.text for n, _, _ in terms):
            raise ParseError(
                f"species {name.text!r} repeated within one complex; combine the coefficients",
                cur.lineno,
                name.col,
            )
        terms.append((name.text, coef, name.col))
        t = cur.peek()
        if t is None or t.kind != "+":
            return terms
        cur.i += 1


@dataclass(frozen=True)
class NetworkDocument:
    """Parsed ``.crn`` text with the (line, column) at which each reaction was declared."""

    source: str
    network: ReactionNetwork
    provenance: tuple[tuple[int, int], ...]


def parse_document(text: str, arithmetic_mode: str = EXACT) -> NetworkDocument:
    if arithmetic_mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {arithmetic_mode!r}")
    species: dict[str, int] = {}
    statements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokenize(line, lineno)
        if not toks:
            continue
        cur = _Cursor(toks, lineno, line)
        lhs = _complex(cur)
        arrow = cur.peek()
        if arrow is None or arrow.kind not in ("->", "<->"):
            cur.fail("expected '->' or '<->'")
        cur.i += 1
        rhs = _complex(cur)
        cur.take(";", ";")
        if arrow.kind == "->":
            cur.keyword("k")
            cur.take("=", "=")
            t = cur.take("number", "positive number")
            rates = (_number(t.text, arithmetic_mode, cur, t.col),)
        else:
            cur.keyword("kf")
            cur.take("=", "=")
            t = cur.take("number", "positive number")
            kf = _number(t.text, arithmetic_mode, cur, t.col)
            cur.take(",", ",")
            cur.keyword("kr")
            cur.take("=", "=")
            t = cur.take("number", "positive number")
            rates = (kf, _number(t.text, arithmetic_mode, cur, t.col))
        if cur.peek() is not None:
            cur.fail(f"unexpected trailing token {cur.peek().text!r}")
        for name, _, _ in lhs + rhs:
            species.setdefault(name, len(species))
        statements.append((lineno, toks[0].col, lhs, rhs, rates))

    if not statements:
        raise ParseError("no reactions found; a network needs at least one reaction", 1, 1)

    m = len(species)
    complexes: dict[tuple[int, ...], int] = {}
    reactions = []
    provenance = []

    def index_of(terms):
        vec = [0] * m
        for name, coef, _ in terms:
            vec[species[name]] = coef
        return complexes.setdefault(tuple(vec), len(complexes))

    for lineno, col, lhs, rhs, rates in statements:
        s, p = index_of(lhs), index_of(rhs)
        if s == p:
            raise ParseError("substrate and product complexes are identical", lineno, col)
        reactions.append(Reaction(s, p, rates[0]))
        provenance.append((lineno, col))
        if len(rates) == 2:
            reactions.append(Reaction(p, s, rates[1]))
            provenance.append((lineno, col))

    try:
        net = ReactionNetwork(
            species=tuple(Species(n, i) for n, i in species.items()),
            complexes=tuple(complexes),
            reactions=tuple(reactions),
            arithmetic_mode=arithmetic_mode,
        )
    except StructuralError as exc:
        raise ParseError(str(exc), statements[0][0], 1) from exc
    return NetworkDocument(text, net, tuple(provenance))


def parse_network(text: str, arithmetic_mode: str = EXACT) -> ReactionNetwork:
    """Parse ``.crn`` text into a network.

    Raises:
        ParseError: with the 1-based line and column of the first problem.
    """
    return parse_document(text, arithmetic_mode).network


def load_network(path, arithmetic_mode: str = EXACT) -> ReactionNetwork:
    return parse_network(Path(path).read_text(encoding="utf-8"), arithmetic_mode)


def format_rate(k) -> str:
    if isinstance(k, Fraction):
        return str(k.numerator) if k.denominator == 1 else f"{k.numerator}/{k.denominator}"
    return repr(float(k))


def serialize_network(net: ReactionNetwork) -> str:
    """Canonical ``.crn`` text for ``net``.

    A reaction immediately followed by its exact reverse is written as one
    ``<->`` statement; everything else uses ``->``. Parsing the result gives
    back ``net`` whenever its species and complexes are numbered by first
    appearance, which holds for every network produced by :func:`parse_network`.
    """
    if net.r == 0:
        raise StructuralError("cannot serialize a network without reactions")
    lines = []
    rxs = net.reactions
    j = 0
    while j < len(rxs):
        rx = rxs[j]
        lhs, rhs = net.complex_label(rx.substrate), net.complex_label(rx.product)
        nxt = rxs[j + 1] if j + 1 < len(rxs) else None
        if nxt is not None and (nxt.substrate, nxt.product) == (rx.product, rx.substrate):
            lines.append(
                f"{lhs} <-> {rhs} ; kf = {format_rate(rx.rate_constant)}, "
                f"kr = {format_rate(nxt.rate_constant)}"
            )
            j += 2
        else:
            lines.append(f"{lhs} -> {rhs} ; k = {format_rate(rx.rate_constant)}")
            j += 1
    return "\n".join(lines) + "\n"


def save_network(net: ReactionNetwork, path) -> None:
    Path(path).write_text(serialize_network(net), encoding="utf-8", newline="\n")


__all__ = [
    "NetworkDocument",
    "parse_document",
    "parse_network",
    "load_network",
    "serialize_network",
    "save_network",
    "format_rate",
    "EXACT",
    "FLOAT",
]
