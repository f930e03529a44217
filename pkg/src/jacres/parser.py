"""Reader for system files, arc files and single expressions.

System file::

    # comment
    ring: Q[x,y]            # or F7[x,y]
    coeff: Q[u]/(u^2)       # optional; also Q[u] or Q[u,v]/apolar(u^2+v^2)
    f: x^2 - u
    f: y^3

Arc file: one ``arc: <expr in t>, <expr in t>, ...`` line per arc.

Expressions use integer and ``a/b`` literals, variables, ``+ - * / ^`` and
parentheses. ``^`` takes a nonnegative integer literal; ``/`` needs a nonzero
constant divisor.
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from sympy import isprime
from sympy.polys.rings import PolyElement, PolyRing

from .config import DEFAULT_LIMITS, ComputeLimits
from .errors import InvalidInputError, ParseError
from .poly import Arc, Field, Ring, arc_ring
from .relative import CoeffRingSpec, apolar_coefficient_ring

_TOKEN_RE = re.compile(
    r"(?P<number>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
    r"|(?P<space>\s+)"
    r"|(?P<bad>.)"
)
_RING_RE = re.compile(r"^\s*(?:(Q)|F(\d+))\s*\[([^\]]*)\]\s*")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_KEYWORDS = ("ring", "coeff", "f", "arc")


class Token(NamedTuple):
    kind: str
    value: str
    column: int


@dataclass(frozen=True)
class System:
    """A parsed system file."""
    ring: Ring
    generators: tuple[PolyElement, ...]
    coeff: CoeffRingSpec | None = None
    source: str = "<string>"

    @property
    def ambient(self) -> Ring:
        """The X variables followed by the coefficient variables."""
        if self.coeff is None or not self.coeff.variables:
            return self.ring
        return self.ring.extend(self.coeff.variables)

    @property
    def field(self) -> Field:
        return self.ring.field


def tokenize(text: str, line: int = 1, offset: int = 0) -> Iterator[Token]:
    for mo in _TOKEN_RE.finditer(text):
        kind = mo.lastgroup or "bad"
        column = offset + mo.start() + 1
        if kind == "space":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {mo.group()!r}", line, column)
        yield Token(kind, mo.group(), column)


class _ExpressionParser:
    """Recursive descent over the token stream, evaluating into a polynomial ring."""

    def __init__(
        self,
        tokens: Sequence[Token],
        ring: PolyRing,
        line: int,
        end_column: int,
        max_exponent: int = DEFAULT_LIMITS.max_exponent,
    ):
        self.tokens = list(tokens)
        self.max_exponent = max_exponent
        self.pos = 0
        self.ring = ring
        self.line = line
        self.end_column = end_column
        self.names = {str(s): g for s, g in zip(ring.symbols, ring.gens)}
        self.field = Field.of(ring.domain)

    def error(self, message: str, token: Token | None = None) -> ParseError:
        column = token.column if token is not None else self.end_column
        return ParseError(message, self.line, column)

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of expression")
        self.pos += 1
        return token

    def parse(self) -> PolyElement:
        if not self.tokens:
            raise self.error("empty expression")
        value = self.expression()
        token = self.peek()
        if token is not None:
            raise self.error(f"unexpected {token.value!r}", token)
        return value

    def expression(self) -> PolyElement:
        value = self.term()
        while (token := self.peek()) is not None and token.value in "+-" and token.kind == "op":
            self.advance()
            rhs = self.term()
            value = value + rhs if token.value == "+" else value - rhs
        return value

    def term(self) -> PolyElement:
        value = self.unary()
        while (token := self.peek()) is not None and token.kind == "op" and token.value in "*/":
            self.advance()
            rhs = self.unary()
            if token.value == "*":
                value = value * rhs
            else:
                value = value * self.reciprocal(rhs, token)
        return value

    def reciprocal(self, divisor: PolyElement, token: Token) -> PolyElement:
        if not divisor.is_ground:
            raise self.error("division is only allowed by a constant", token)
        c = divisor.LC if divisor else self.ring.domain.zero
        if not c:
            raise self.error("division by zero", token)
        return self.ring.ground_new(self.ring.domain.one / c)

    def unary(self) -> PolyElement:
        token = self.peek()
        if token is not None and token.kind == "op" and token.value in "+-":
            self.advance()
            value = self.unary()
            return -value if token.value == "-" else value
        return self.power()

    def power(self) -> PolyElement:
        base = self.atom()
        token = self.peek()
        if token is None or token.value != "^":
            return base
        self.advance()
        exponent = self.peek()
        if exponent is None or exponent.kind != "number":
            raise self.error("exponent must be a nonnegative integer literal", exponent)
        self.advance()
        value = int(exponent.value)
        if value > self.max_exponent:
            raise self.error(f"exponent {value} exceeds max_exponent={self.max_exponent}", exponent)
        return base ** value

    def atom(self) -> PolyElement:
        token = self.advance()
        if token.kind == "number":
            return self.ring.ground_new(self.field.element(int(token.value)))
        if token.kind == "name":
            gen = self.names.get(token.value)
            if gen is None:
                raise self.error(f"unknown variable {token.value!r}", token)
            return gen
        if token.value == "(":
            value = self.expression()
            closing = self.peek()
            if closing is None or closing.value != ")":
                raise self.error("expected ')'", closing)
            self.advance()
            return value
        raise self.error(f"unexpected {token.value!r}", token)


def parse_expression(
    text: str,
    ring: PolyRing,
    line: int = 1,
    offset: int = 0,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> PolyElement:
    """Parse one expression into ``ring``; exponents above ``limits.max_exponent`` are rejected."""
    tokens = list(tokenize(text, line, offset))
    end_column = offset + len(text.rstrip()) + 1
    return _ExpressionParser(tokens, ring, line, end_column, limits.max_exponent).parse()


def parse_polynomial(text: str, ring: Ring, limits: ComputeLimits = DEFAULT_LIMITS) -> PolyElement:
    """Parse a command-line polynomial such as ``--poly "9*x^2*y^2"``."""
    return parse_expression(text, ring.poly_ring, limits=limits)


def _split_top_level(text: str, line: int, offset: int) -> list[tuple[str, int]]:
    """Split on commas outside parentheses; returns (piece, offset) pairs."""
    pieces: list[tuple[str, int]] = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", line, offset + i + 1)
        elif ch == "," and depth == 0:
            pieces.append((text[start:i], offset + start))
            start = i + 1
    pieces.append((text[start:], offset + start))
    return pieces


def _logical_lines(text: str) -> Iterator[tuple[int, str, str, int]]:
    """Yield (line number, keyword, body, body offset) for each nonblank line."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        keyword, sep, body = content.partition(":")
        if not sep:
            column = len(content) - len(content.lstrip()) + 1
            raise ParseError("expected '<keyword>: ...'", number, column)
        name = keyword.strip()
        if name not in _KEYWORDS:
            column = len(keyword) - len(keyword.lstrip()) + 1
            raise ParseError(f"unknown keyword {name!r}", number, column)
        yield number, name, body, len(keyword) + 1


def _parse_ring_header(body: str, line: int, offset: int) -> tuple[Ring, str]:
    """``Q[x,y]`` or ``F7[x,y]``; returns the ring and the unparsed rest."""
    mo = _RING_RE.match(body)
    if mo is None:
        raise ParseError("expected Q[vars] or F<p>[vars]", line, offset + 1)
    if mo.group(2) is not None:
        p = int(mo.group(2))
        if not isprime(p):
            raise ParseError(f"{p} is not prime", line, offset + mo.start(2) + 1)
        field = Field(p)
    else:
        field = Field(0)
    names = [v.strip() for v in mo.group(3).split(",")] if mo.group(3).strip() else []
    if not names:
        raise ParseError("a ring needs at least one variable", line, offset + mo.start(3) + 1)
    for name in names:
        if not _NAME_RE.match(name):
            raise ParseError(f"invalid variable name {name!r}", line, offset + mo.start(3) + 1)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names", line, offset + mo.start(3) + 1)
    return Ring(tuple(names), field), body[mo.end():]


def _parse_coeff(
    body: str,
    line: int,
    offset: int,
    ring: Ring,
    limits: ComputeLimits,
) -> CoeffRingSpec:
    uring, rest = _parse_ring_header(body, line, offset)
    if uring.field != ring.field:
        raise ParseError("coefficient field differs from the ring field", line, offset + 1)
    clash = set(uring.variables) & set(ring.variables)
    if clash:
        raise ParseError(
            f"coefficient variable(s) {sorted(clash)} clash with ring variables", line, offset + 1
        )
    rest_offset = offset + len(body) - len(rest)
    stripped = rest.strip()
    try:
        if not stripped:
            return CoeffRingSpec(uring.field, uring.variables, ())
        inner_offset = rest_offset + len(rest) - len(rest.lstrip())
        if not stripped.startswith("/"):
            raise ParseError("expected '/' after the coefficient ring", line, inner_offset + 1)
        quotient = stripped[1:].strip()
        inner_offset += len(stripped) - len(quotient)
        if quotient.startswith("apolar(") and quotient.endswith(")"):
            delta = parse_expression(quotient[7:-1], uring.poly_ring, line, inner_offset + 7, limits)
            return apolar_coefficient_ring(uring, delta, limits=limits)
        if not (quotient.startswith("(") and quotient.endswith(")")):
            raise ParseError("expected (relations) or apolar(expr)", line, inner_offset + 1)
        relations = tuple(
            parse_expression(piece, uring.poly_ring, line, piece_offset, limits)
            for piece, piece_offset in _split_top_level(quotient[1:-1], line, inner_offset + 1)
        )
        spec = CoeffRingSpec(uring.field, uring.variables, relations)
        spec.validate(limits=limits)
        return spec
    except ParseError:
        raise
    except InvalidInputError as exc:
        raise ParseError(str(exc), line, offset + 1) from exc


def parse_system(
    text: str,
    source: str = "<string>",
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> System:
    """Parse a system file into its ring, generators and optional coefficient ring."""
    ring: Ring | None = None
    coeff: CoeffRingSpec | None = None
    pending: list[tuple[int, str, int]] = []
    for line, keyword, body, offset in _logical_lines(text):
        if keyword == "ring":
            if ring is not None:
                raise ParseError("duplicate ring line", line, 1)
            ring, rest = _parse_ring_header(body, line, offset)
            if rest.strip():
                raise ParseError("unexpected text after the ring", line, offset + len(body) - len(rest) + 1)
        elif ring is None:
            raise ParseError("the first line must declare the ring", line, 1)
        elif keyword == "coeff":
            if coeff is not None:
                raise ParseError("duplicate coeff line", line, 1)
            if pending:
                raise ParseError("coeff must come before the generators", line, 1)
            coeff = _parse_coeff(body, line, offset, ring, limits)
        elif keyword == "f":
            pending.append((line, body, offset))
        else:
            raise ParseError(f"{keyword!r} lines belong in arc files", line, 1)
    if ring is None:
        raise ParseError("missing ring line", 1, 1)
    if not pending:
        raise ParseError("expected at least one 'f:' line", len(text.splitlines()) or 1, 1)
    system = System(ring, (), coeff, source)
    ambient = system.ambient.poly_ring
    generators = tuple(
        parse_expression(body, ambient, line, offset, limits) for line, body, offset in pending
    )
    return System(ring, generators, coeff, source)


def load_system(path: Path, limits: ComputeLimits = DEFAULT_LIMITS) -> System:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    return parse_system(text, source=str(path), limits=limits)


def parse_arcs(text: str, field: Field, limits: ComputeLimits = DEFAULT_LIMITS) -> list[Arc]:
    """Parse an arc file; every component is a polynomial in t."""
    T = arc_ring(field)
    arcs: list[Arc] = []
    for line, keyword, body, offset in _logical_lines(text):
        if keyword != "arc":
            raise ParseError(f"expected 'arc:', got {keyword!r}", line, 1)
        components = tuple(
            parse_expression(piece, T, line, piece_offset, limits)
            for piece, piece_offset in _split_top_level(body, line, offset)
        )
        try:
            arcs.append(Arc(components))
        except ParseError:
            raise
        except InvalidInputError as exc:
            raise ParseError(str(exc), line, offset + 1) from exc
    if not arcs:
        raise ParseError("expected at least one 'arc:' line", 1, 1)
    return arcs


def load_arcs(path: Path, field: Field, limits: ComputeLimits = DEFAULT_LIMITS) -> list[Arc]:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    return parse_arcs(text, field, limits)
