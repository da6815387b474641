"""Expression grammar: tokenizer, parser, and canonical printer.

Grammar (UTF-8 text): identifiers [A-Za-z][A-Za-z0-9]*; jet coordinates
name' / name'' for one independent variable or name_ab with sorted index
letters for several; integer literals; operators + - * / ^ with standard
precedence and integer exponents; parentheses. Printing is deterministic:
terms in descending graded-lex order, so parse(print(e)) reproduces e
byte for byte.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import OdesplitError, ParseError
from .expressions import Expression, _mono_key

_OPS = "+-*/^()"


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return "_Token(%r, %r, %d, %d)" % (self.kind, self.text, self.line, self.col)


def tokenize(text):
    """Split text into number / ident / op tokens with positions."""
    tokens = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and (text[j].isalpha() or text[j] == "."):
                raise ParseError("malformed number", line, start_col)
            tokens.append(_Token("num", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            if j < n and text[j] == "'":
                while j < n and text[j] == "'":
                    j += 1
            elif j < n and text[j] == "_":
                j += 1
                if j >= n or not text[j].isalpha():
                    raise ParseError("jet subscript needs index letters", line, start_col)
                while j < n and text[j].isalpha():
                    j += 1
            tokens.append(_Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _OPS:
            tokens.append(_Token("op", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError("unexpected character %r" % ch, line, start_col)
    tokens.append(_Token("end", "", line, col))
    return tokens


def _resolve_ident(tok, ctx):
    name = tok.text
    if "'" in name:
        base, primes = name.rstrip("'"), len(name) - len(name.rstrip("'"))
        if len(ctx.independents) != 1:
            raise ParseError(
                "prime notation needs a single independent variable", tok.line, tok.col
            )
        if base not in ctx.dependents:
            raise ParseError("unknown dependent: %r" % base, tok.line, tok.col)
        if primes > ctx.max_order:
            raise ParseError(
                "derivative order %d exceeds maximum %d" % (primes, ctx.max_order),
                tok.line,
                tok.col,
            )
        return name
    if "_" in name:
        base, _, idxs = name.partition("_")
        if base not in ctx.dependents:
            raise ParseError("unknown dependent: %r" % base, tok.line, tok.col)
        if len(ctx.independents) == 1:
            raise ParseError(
                "subscript notation needs several independent variables",
                tok.line,
                tok.col,
            )
        pos = {v: k for k, v in enumerate(ctx.independents)}
        for letter in idxs:
            if letter not in pos:
                raise ParseError("unknown index letter: %r" % letter, tok.line, tok.col)
        if list(idxs) != sorted(idxs, key=pos.get):
            raise ParseError("jet indices are not sorted: %r" % name, tok.line, tok.col)
        if len(idxs) > ctx.max_order:
            raise ParseError(
                "derivative order %d exceeds maximum %d" % (len(idxs), ctx.max_order),
                tok.line,
                tok.col,
            )
        return name
    if not ctx.has(name):
        raise ParseError("unknown identifier: %r" % name, tok.line, tok.col)
    if ctx.is_jet(name):
        # a bare identifier may not shadow a jet coordinate
        raise ParseError("unknown identifier: %r" % name, tok.line, tok.col)
    return name


class _Parser:
    __slots__ = ("tokens", "pos", "ctx")

    def __init__(self, tokens, ctx):
        self.tokens = tokens
        self.pos = 0
        self.ctx = ctx

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expression(self, min_prec=1):
        left = self.unary()
        while True:
            tok = self.peek()
            if tok.kind != "op" or tok.text not in "+-*/^":
                break
            prec = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}[tok.text]
            if prec < min_prec:
                break
            self.advance()
            if tok.text == "^":
                right = self.expression(4)
                if not right.is_constant():
                    raise ParseError("exponent must be an integer", tok.line, tok.col)
                k = right.constant_value()
                if k.denominator != 1:
                    raise ParseError("exponent must be an integer", tok.line, tok.col)
                left = self._apply(tok, lambda a: a ** int(k), left)
            else:
                right = self.expression(prec + 1)
                if tok.text == "+":
                    left = self._apply(tok, lambda a, b: a + b, left, right)
                elif tok.text == "-":
                    left = self._apply(tok, lambda a, b: a - b, left, right)
                elif tok.text == "*":
                    left = self._apply(tok, lambda a, b: a * b, left, right)
                else:
                    left = self._apply(tok, lambda a, b: a / b, left, right)
        return left

    @staticmethod
    def _apply(tok, fn, *args):
        try:
            return fn(*args)
        except ParseError:
            raise
        except OdesplitError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return -self.expression(3)
        if tok.kind == "op" and tok.text == "+":
            self.advance()
            return self.expression(3)
        return self.atom()

    def atom(self):
        tok = self.advance()
        if tok.kind == "num":
            return Expression.constant(self.ctx, Fraction(int(tok.text)))
        if tok.kind == "ident":
            name = _resolve_ident(tok, self.ctx)
            return Expression.symbol(self.ctx, name)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression(1)
            closing = self.advance()
            if closing.kind != "op" or closing.text != ")":
                raise ParseError("expected ')'", closing.line, closing.col)
            return inner
        raise ParseError("unexpected token %r" % (tok.text or "end of input"), tok.line, tok.col)


def parse(text, ctx):
    """Parse text into a canonical Expression over ctx."""
    parser = _Parser(tokenize(text), ctx)
    result = parser.expression(1)
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError("unexpected token %r" % tail.text, tail.line, tail.col)
    return result


# ----------------------------------------------------------------------
# printing


def _term_text(ctx, mono, coeff, lead):
    factors = []
    for idx, exp in mono:
        name = ctx.name(idx)
        factors.append(name if exp == 1 else "%s^%d" % (name, exp))
    mag = coeff if lead else abs(coeff)
    if not factors:
        body = str(mag)
    elif mag == 1:
        body = "*".join(factors)
    elif mag == -1:
        body = "-" + "*".join(factors)
    else:
        body = str(mag) + "*" + "*".join(factors)
    if lead:
        return body
    sign = " - " if coeff < 0 else " + "
    return sign + body


def _poly_text(ctx, poly):
    if not poly:
        return "0"
    out = []
    for k, mono in enumerate(sorted(poly, key=_mono_key)):
        out.append(_term_text(ctx, mono, poly[mono], k == 0))
    return "".join(out)


def _den_text(ctx, den):
    if len(den) == 1:
        ((mono, coeff),) = den.items()
        if coeff == 1 and len(mono) == 1:
            idx, exp = mono[0]
            name = ctx.name(idx)
            return name if exp == 1 else "%s^%d" % (name, exp)
    return "(" + _poly_text(ctx, den) + ")"


def to_text(e):
    """Canonical deterministic rendering; parse(to_text(e)) == e."""
    num = e.num
    den = e.den
    if not num:
        return "0"
    num_text = _poly_text(e.ctx, num)
    if len(den) == 1 and () in den and den[()] == 1:
        return num_text
    if len(num) > 1:
        num_text = "(" + num_text + ")"
    return num_text + "/" + _den_text(e.ctx, den)
