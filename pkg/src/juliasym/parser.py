"""Map and isometry specifications.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary | implicit)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := NUMBER ['i'] | 'i' | 'z' | 'pi' | '(' expr ')' | call
    call   := 'mcmullen(' INT ',' INT ',' expr ')' | 'newton(' expr ')'
            | 'exp(' expr ')' | 'mobius(a=' expr ',' 'b=' expr ')'

``exp`` and the arguments of ``mcmullen``/``mobius`` must be constants.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

from .errors import DegenerateInput, ParseError
from .isometry import Isometry
from .mcmullen import McMullenParams, make_mcmullen
from .rational import RationalMap, isometry_from_map, newton_map

_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>mcmullen|newton|mobius|exp|pi|[A-Za-z_])"
                    r"|(?P<op>[-+*/^(),=]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.pos, self.text)

    def take(self, text=None, kind=None) -> _Tok:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else {"num": "a number"}.get(kind, kind)
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise self.error(f"expected {want}, found {found}")
        self.i += 1
        return t

    def at(self, *texts) -> bool:
        return self.tok.kind in ("op", "name") and self.tok.text in texts

    # grammar ------------------------------------------------------------
    def parse(self) -> RationalMap:
        v = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return v

    def expr(self) -> RationalMap:
        v = self.term()
        while self.at("+", "-"):
            op = self.take().text
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("num", "name") or t.text == "("

    def term(self) -> RationalMap:
        v = self.unary()
        while True:
            if self.at("*", "/"):
                op = self.take()
                w = self.unary()
                if op.text == "*":
                    v = v * w
                else:
                    try:
                        v = v / w
                    except ZeroDivisionError:
                        raise self.error("division by zero", op) from None
            elif self._starts_atom():
                v = v * self.power()
            else:
                return v

    def unary(self) -> RationalMap:
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RationalMap:
        base = self.atom()
        if not self.at("^"):
            return base
        self.take("^")
        neg = False
        if self.at("-"):
            self.take()
            neg = True
        t = self.take(kind="num")
        if not t.text.isdigit():
            raise self.error("exponent must be a non-negative integer literal", t)
        k = int(t.text)
        try:
            return base ** (-k if neg else k)
        except ZeroDivisionError:
            raise self.error("zero raised to a negative power", t) from None

    def atom(self) -> RationalMap:
        t = self.tok
        if t.kind == "num":
            self.take()
            val = float(t.text)
            if self.tok.kind == "name" and self.tok.text == "i":
                self.take()
                return RationalMap.constant(1j * val)
            return RationalMap.constant(val)
        if t.text == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        if t.kind == "name":
            self.take()
            name = t.text
            if name == "z":
                return RationalMap.identity()
            if name == "i":
                return RationalMap.constant(1j)
            if name == "pi":
                return RationalMap.constant(math.pi)
            if name in ("mcmullen", "newton", "exp", "mobius"):
                return getattr(self, "_" + name)(t)
            raise self.error(f"unknown name {name!r}", t)
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise self.error(f"expected a value, found {found}")

    # functions ----------------------------------------------------------
    def _const(self, tok) -> complex:
        start = self.tok
        v = self.expr()
        if not v.is_constant():
            raise self.error(f"argument of {tok.text}() must be constant", start)
        return complex(v.num.coeffs[0] / v.den.coeffs[0])

    def _int(self) -> int:
        neg = False
        if self.at("-"):
            self.take()
            neg = True
        t = self.take(kind="num")
        if not t.text.isdigit():
            raise self.error("expected an integer", t)
        return -int(t.text) if neg else int(t.text)

    def _mcmullen(self, tok) -> RationalMap:
        self.take("(")
        m = self._int()
        self.take(",")
        d = self._int()
        self.take(",")
        lam = self._const(tok)
        self.take(")")
        try:
            return make_mcmullen(McMullenParams(m, d, lam))
        except ValueError as exc:
            raise self.error(str(exc), tok) from None

    def _newton(self, tok) -> RationalMap:
        self.take("(")
        start = self.tok
        p = self.expr()
        self.take(")")
        if p.den.degree != 0:
            raise self.error("newton() needs a polynomial", start)
        try:
            return newton_map(p.num * (1 / p.den.coeffs[0]))
        except DegenerateInput as exc:
            raise self.error(str(exc), start) from None

    def _exp(self, tok) -> RationalMap:
        self.take("(")
        w = self._const(tok)
        self.take(")")
        return RationalMap.constant(cmath.exp(w))

    def _mobius(self, tok) -> RationalMap:
        self.take("(")
        vals = {}
        for key in ("a", "b"):
            self.take(key)
            self.take("=")
            vals[key] = self._const(tok)
            if key == "a":
                self.take(",")
        self.take(")")
        try:
            sigma = Isometry(vals["a"], vals["b"])
        except ValueError as exc:
            raise self.error(str(exc), tok) from None
        return RationalMap.from_isometry(sigma)


def parse_map(text: str) -> RationalMap:
    """Parse a map specification such as ``"z^2 - 1"`` or ``"mcmullen(2,2,1)"``."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty map specification", 0, text if isinstance(text, str) else None)
    R = _Parser(text).parse()
    return R


def parse_isometry(text: str) -> Isometry:
    """Parse a degree-one map that is a rotation of the sphere, e.g. ``"i*z"`` or ``"1/z"``."""
    R = parse_map(text)
    sigma = isometry_from_map(R)
    if sigma is None:
        raise ParseError(f"{text!r} is not a sphere isometry (degree {R.degree})", 0, text)
    return sigma
