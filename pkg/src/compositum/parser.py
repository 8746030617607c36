"""Expression parser for polynomials, field elements, and field strings.

Grammar: integer literals, the main variable (``x`` by default, ``t`` for
moduli), the extension generator ``w``, operators ``+ - * / ^`` and
parentheses.  Multiplication is always explicit (``2*x``, never ``2x``);
``^`` takes a nonnegative integer literal; ``/`` divides by a nonzero
constant.  ``to_text`` output always parses back to the same polynomial.
"""

from __future__ import annotations

import re

from .errors import DivideByZero, InvalidModulus, PolySyntaxError, UnknownSymbol
from .fields import GF, QQ, Field, FieldElement
from .poly import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            stripped = rest.strip()
            if not stripped:
                break
            bad = pos + rest.index(stripped[0])
            raise PolySyntaxError(f"unexpected character {stripped[0]!r}", bad)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, field, var):
        self.text = text
        self.field = field
        self.var = var
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolySyntaxError(f"expected {op!r}", pos)

    def parse(self):
        poly = self.sum()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {val!r}", pos)
        return poly

    def sum(self):
        acc = self.product()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.product()
                acc = acc + rhs if val == "+" else acc - rhs
            else:
                return acc

    def product(self):
        acc = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                if val == "*":
                    acc = acc * rhs
                else:
                    if rhs.degree > 0:
                        raise PolySyntaxError("division by a non-constant", pos)
                    if rhs.is_zero:
                        raise DivideByZero("division by zero in expression")
                    acc = acc * (self.field.one / rhs.constant_value())
            else:
                return acc

    def unary(self):
        # exponentiation binds tighter than the sign: -x^4 is -(x^4)
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.unary()
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            ekind, e, epos = self.take()
            if ekind != "int":
                raise PolySyntaxError("exponent must be an integer literal", epos)
            return base ** e
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return Polynomial.const(self.field, val)
        if kind == "name":
            if val == self.var:
                return Polynomial.x(self.field)
            if val == "w":
                if self.field.kind != "extension":
                    raise UnknownSymbol(
                        f"generator 'w' undefined over {self.field!r}", pos)
                return Polynomial.const(self.field, self.field.gen)
            raise UnknownSymbol(f"unknown symbol {val!r}", pos)
        if kind == "op" and val == "(":
            inner = self.sum()
            self.expect_op(")")
            return inner
        raise PolySyntaxError(f"unexpected {val!r}", pos)


def parse_poly(text: str, field: Field, var: str = "x") -> Polynomial:
    """Parse a polynomial expression over the given field."""
    return _Parser(text, field, var).parse()


def parse_element(text: str, field: Field) -> FieldElement:
    """Parse a constant expression (may use ``w``) as a field element."""
    poly = parse_poly(text, field, var="x")
    if poly.degree > 0:
        raise PolySyntaxError("expected a constant expression", 0)
    return poly.constant_value()


_FIELD_RE = re.compile(
    r"^GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?(?:;\s*m\s*=\s*([^)]+))?\)$")


def parse_field(text: str, modulus: str | None = None, seed: int = 0) -> Field:
    """Parse ``GF(p)``, ``GF(p^n)``, ``GF(p^n; m=<poly in t>)``, or ``QQ``.

    A modulus may also be supplied separately (as written in certificate
    files); ``-`` and empty mean none.
    """
    t = text.strip()
    if t == "QQ":
        return QQ
    m = _FIELD_RE.match(t)
    if not m:
        raise InvalidModulus(f"cannot parse field {text!r}")
    p = int(m.group(1))
    n = int(m.group(2)) if m.group(2) else 1
    mod_text = m.group(3)
    if mod_text is None and modulus and modulus.strip() not in ("", "-"):
        mod_text = modulus
    if mod_text is not None:
        mod_poly = parse_poly(mod_text.strip(), GF(p), var="t")
        coeffs = [c.val for c in mod_poly.coeffs]
        return GF(p, len(coeffs) - 1 if n == 1 else n, modulus=coeffs)
    if n == 1:
        return GF(p)
    return GF(p, n, seed=seed)


def field_text(field: Field) -> str:
    """Canonical field string (modulus serialized separately)."""
    if field.kind == "rationals":
        return "QQ"
    if field.kind == "prime":
        return f"GF({field.p})"
    return f"GF({field.p}^{field.degree})"


def modulus_text(field: Field) -> str:
    """The modulus as a polynomial in ``t``, or ``-`` for prime/Q fields."""
    if field.kind != "extension":
        return "-"
    return Polynomial(GF(field.p), list(field.modulus)).to_text(var="t")
