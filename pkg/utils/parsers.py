"""
Text grammar for manifold descriptions and pairing literals.

    manifold := "M(" INT ";" pair* ")"
              | "TB[" INT "," INT ";" INT "," INT "]"
              | "NU[" INT "," INT ";" INT "," INT "]"
              | "LS(" lens ("#" lens)* ")"
              | "SB(" INT ";" INT ")"
    pair     := "(" INT "," INT ")" [","]
    lens     := ["+" | "-"] "(" INT "," INT ")"

    pairing  := "lw(" rational ")" | "E0(" INT ")" | "E1(" INT ")"
              | "sum(" pairing ("," pairing)* ")"
              | "matrix(orders=[" INT,* "]; rows=[" row,* "])"
    row      := "[" rational,* "]"
    rational := INT ["/" INT]

Whitespace is ignored everywhere. Printers produce text the parser reads back.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

from services.linking_pairing import LinkingPairing, orthogonal_sum, pairing_e, pairing_lw
from services.manifolds import (
    LensSum,
    LensSummand,
    ManifoldDescription,
    SeifertManifold,
    SphereBundle,
    TorusBundle,
    UnionPhi,
)
from services.seifert import SeifertData
from services.seifert_pairing import GluingMatrix
from utils.errors import InputError, ParseError

logger = logging.getLogger(__name__)

TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<int>[+-]?\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<punct>[()\[\];,#/=+-]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "name" | "punct" | "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position == len(text):
            break
        match = TOKEN_PATTERN.match(text, position)
        if not match or match.end() == position:
            raise ParseError(f"unexpected character {text[position]!r}", text, position)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        found = token.text or "end of input"
        return ParseError(f"{message}, found {found!r}", self.text, token.position)

    def advance(self) -> Token:
        token = self.current
        if token.kind != "end":
            self.index += 1
        return token

    def peek_is(self, text: str) -> bool:
        return self.current.text == text

    def expect(self, text: str) -> Token:
        if not self.peek_is(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.peek_is(text):
            self.advance()
            return True
        return False

    def integer(self) -> int:
        token = self.current
        if token.kind != "int":
            raise self.error("expected an integer")
        self.advance()
        return int(token.text)

    def rational(self) -> Fraction:
        numerator = self.integer()
        if self.accept("/"):
            token = self.current
            denominator = self.integer()
            if denominator == 0:
                raise self.error("zero denominator", token)
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def finish(self) -> None:
        if self.current.kind != "end":
            raise self.error("unexpected trailing input")

    def build(self, token: Token, factory: Callable):
        """Run a constructor and re-raise its validation errors at token."""
        try:
            return factory()
        except ParseError:
            raise
        except InputError as e:
            raise ParseError(str(e), self.text, token.position) from e

    # ------------------------------------------------------------------
    # manifolds
    # ------------------------------------------------------------------

    def manifold(self) -> ManifoldDescription:
        token = self.current
        rules = {
            "M": self.seifert,
            "TB": self.torus_bundle,
            "NU": self.union,
            "LS": self.lens_sum,
            "SB": self.sphere_bundle,
        }
        if token.kind != "name" or token.text not in rules:
            raise self.error("expected one of M(...), TB[...], NU[...], LS(...), SB(...)")
        self.advance()
        return rules[token.text](token)

    def pair(self) -> tuple:
        start = self.expect("(")
        a = self.integer()
        self.expect(",")
        b = self.integer()
        self.expect(")")
        # validate the pair on its own so the error points at it
        self.build(start, lambda: SeifertData(0, ((a, b),)))
        return a, b

    def seifert(self, start: Token) -> SeifertManifold:
        self.expect("(")
        base = self.integer()
        self.expect(";")
        pairs = []
        while self.peek_is("("):
            pairs.append(self.pair())
            self.accept(",")
        self.expect(")")
        return SeifertManifold(self.build(start, lambda: SeifertData(base, tuple(pairs))))

    def _bracket_matrix(self) -> tuple:
        self.expect("[")
        a = self.integer()
        self.expect(",")
        b = self.integer()
        self.expect(";")
        c = self.integer()
        self.expect(",")
        d = self.integer()
        self.expect("]")
        return a, b, c, d

    def torus_bundle(self, start: Token) -> TorusBundle:
        entries = self._bracket_matrix()
        return self.build(start, lambda: TorusBundle(*entries))

    def union(self, start: Token) -> UnionPhi:
        entries = self._bracket_matrix()
        return UnionPhi(self.build(start, lambda: GluingMatrix(*entries)))

    def lens_summand(self) -> LensSummand:
        start = self.current
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        self.expect("(")
        p = self.integer()
        self.expect(",")
        q = self.integer()
        self.expect(")")
        return self.build(start, lambda: LensSummand(sign, p, q))

    def lens_sum(self, start: Token) -> LensSum:
        self.expect("(")
        summands = [self.lens_summand()]
        while self.accept("#"):
            summands.append(self.lens_summand())
        self.expect(")")
        return self.build(start, lambda: LensSum(tuple(summands)))

    def sphere_bundle(self, start: Token) -> SphereBundle:
        self.expect("(")
        base = self.integer()
        self.expect(";")
        euler = self.integer()
        self.expect(")")
        return SphereBundle(base, euler)

    # ------------------------------------------------------------------
    # pairings
    # ------------------------------------------------------------------

    def pairing(self) -> LinkingPairing:
        token = self.current
        if token.kind != "name":
            raise self.error("expected a pairing literal")
        self.advance()
        name = token.text
        self.expect("(")
        if name == "lw":
            w = self.rational()
            result = self.build(token, lambda: pairing_lw(w))
        elif name in ("E0", "E1"):
            k = self.integer()
            result = self.build(token, lambda: pairing_e(k, int(name[1])))
        elif name == "sum":
            parts = [self.pairing()]
            while self.accept(","):
                parts.append(self.pairing())
            result = orthogonal_sum(*parts)
        elif name == "matrix":
            result = self.matrix_body(token)
        else:
            raise self.error("unknown pairing literal", token)
        self.expect(")")
        return result

    def _list(self, item: Callable) -> list:
        self.expect("[")
        values = []
        if not self.peek_is("]"):
            values.append(item())
            while self.accept(","):
                values.append(item())
        self.expect("]")
        return values

    def matrix_body(self, start: Token) -> LinkingPairing:
        self.expect("orders")
        self.expect("=")
        orders = self._list(self.integer)
        self.expect(";")
        self.expect("rows")
        self.expect("=")
        rows = self._list(lambda: self._list(self.rational))
        return self.build(start, lambda: LinkingPairing(tuple(orders), tuple(tuple(r) for r in rows)))


def parse_manifold(text: str) -> ManifoldDescription:
    """
    Parse a manifold description.

    Raises:
        ParseError: Syntax errors and invalid values, with line and column
    """
    parser = Parser(text)
    result = parser.manifold()
    parser.finish()
    logger.debug("parsed %r as %s", text, result)
    return result


def parse_pairing(text: str) -> LinkingPairing:
    """
    Parse a pairing literal.

    Raises:
        ParseError: Syntax errors and invalid values, with line and column
    """
    parser = Parser(text)
    result = parser.pairing()
    parser.finish()
    return result


def format_manifold(m: ManifoldDescription) -> str:
    return str(m)


def format_pairing(pairing: LinkingPairing) -> str:
    orders = ",".join(str(o) for o in pairing.orders)
    rows = ",".join("[" + ",".join(str(v) for v in row) + "]" for row in pairing.matrix)
    return f"matrix(orders=[{orders}]; rows=[{rows}])"
