"""Recursive-descent readers and printers for the literal grammars.

    order  ::= "Fin(" nat ")" | "N" | "Z" | "Q" | "lex(" order "," order ")"
    elem   ::= int | rat | "(" elem "," elem ")"      (shape fixed by the order)
    tuple  ::= "[" [elem ("," elem)*] "]"
    extnat ::= nat | "inf"
    group  ::= "{" [elem ":" rat ("," elem ":" rat)*] "}"
    series ::= ["-"] term (("+" | "-") term)*
    term   ::= factor ("*" factor)*
    factor ::= rat | "x[" elem "]" ["^" ("{" rat "}" | int)]
    ring   ::= rterm (("+" | "-") rterm)*   rterm ::= rfact ("*" rfact)*
    rfact  ::= "-" rfact | int | "u" nat | "(" ring ")"
"""

from __future__ import annotations

from fractions import Fraction

from .orders import INF, INT, NAT, RAT, Fin, Int, Lex, Nat, OrderExpr, Rat, check_element
from .ordgroups import GroupElement
from .hahnfield import Add, Const, Mul, Neg, Series, Sub, Term, Var

__all__ = [
    "ParseError", "parse_order", "parse_element", "parse_tuple", "parse_extnat",
    "parse_extnat_list", "parse_group", "parse_series", "parse_term", "parse_support_map",
    "format_order", "format_element", "format_tuple", "format_extnat",
    "format_group", "format_series", "format_term", "format_rational",
]


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: str):
        self.text, self.pos, self.expected = text, pos, expected
        found = repr(text[pos]) if pos < len(text) else "end of input"
        super().__init__(f"at position {pos}: expected {expected}, found {found}")


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, lit: str) -> bool:
        self.ws()
        return self.text.startswith(lit, self.pos)

    def accept(self, lit: str) -> bool:
        if self.peek(lit):
            self.pos += len(lit)
            return True
        return False

    def expect(self, lit: str):
        if not self.accept(lit):
            self.fail(repr(lit))

    def fail(self, expected: str):
        raise ParseError(self.text, self.pos, expected)

    def end(self):
        self.ws()
        if self.pos != len(self.text):
            self.fail("end of input")

    def integer(self, signed: bool = True) -> int:
        self.ws()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.fail("an integer" if signed else "a natural number")
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        p = self.integer()
        if self.accept("/"):
            q_pos = self.pos
            q = self.integer(signed=False)
            if q == 0:
                self.pos = q_pos
                self.fail("a positive denominator")
            return Fraction(p, q)
        return Fraction(p)


def _run(text: str, fn):
    r = _Reader(text)
    value = fn(r)
    r.end()
    return value


# -- orders and elements ----------------------------------------------------

def _order(r: _Reader) -> OrderExpr:
    if r.accept("Fin("):
        pos = r.pos
        n = r.integer(signed=False)
        if n < 1:
            r.pos = pos
            r.fail("a positive size")
        r.expect(")")
        return Fin(n)
    if r.accept("lex("):
        a = _order(r)
        r.expect(",")
        b = _order(r)
        r.expect(")")
        return Lex(a, b)
    for lit, val in (("N", NAT), ("Z", INT), ("Q", RAT)):
        if r.accept(lit):
            return val
    r.fail("an order (Fin(n), N, Z, Q or lex(...))")


def parse_order(text: str) -> OrderExpr:
    return _run(text, _order)


def _element(r: _Reader, order: OrderExpr):
    if isinstance(order, Lex):
        r.expect("(")
        a = _element(r, order.left)
        r.expect(",")
        b = _element(r, order.right)
        r.expect(")")
        return (a, b)
    r.ws()
    pos = r.pos
    if isinstance(order, Rat):
        return r.rational()
    value = r.integer()
    try:
        check_element(order, value)
    except ValueError:
        r.pos = pos
        r.fail(f"an element of {format_order(order)}")
    return value


def parse_element(text: str, order: OrderExpr):
    return _run(text, lambda r: _element(r, order))


def _tuple(r: _Reader, order: OrderExpr) -> tuple:
    r.expect("[")
    items = []
    if not r.accept("]"):
        items.append(_element(r, order))
        while r.accept(","):
            items.append(_element(r, order))
        r.expect("]")
    return tuple(items)


def parse_tuple(text: str, order: OrderExpr) -> tuple:
    return _run(text, lambda r: _tuple(r, order))


def _extnat(r: _Reader):
    if r.accept("inf"):
        return INF
    return r.integer(signed=False)


def parse_extnat(text: str):
    return _run(text, _extnat)


def parse_extnat_list(text: str) -> tuple:
    """Comma-separated ExtNat values, optionally bracketed."""
    def read(r):
        bracket = r.accept("[")
        items = []
        r.ws()
        if not (r.peek("]") or r.pos == len(r.text)):
            items.append(_extnat(r))
            while r.accept(","):
                items.append(_extnat(r))
        if bracket:
            r.expect("]")
        return tuple(items)
    return _run(text, read)


# -- groups and series ------------------------------------------------------

def _group(r: _Reader, order: OrderExpr) -> GroupElement:
    r.expect("{")
    items = []
    if not r.accept("}"):
        while True:
            idx = _element(r, order)
            r.expect(":")
            items.append((idx, r.rational()))
            if not r.accept(","):
                break
        r.expect("}")
    return GroupElement(order, items)


def parse_group(text: str, order: OrderExpr) -> GroupElement:
    return _run(text, lambda r: _group(r, order))


def _monomial(r: _Reader, order: OrderExpr):
    coeff = Fraction(1)
    exponent: dict = {}
    while True:
        if r.accept("x["):
            idx = _element(r, order)
            r.expect("]")
            power = Fraction(1)
            if r.accept("^"):
                if r.accept("{"):
                    power = r.rational()
                    r.expect("}")
                else:
                    power = Fraction(r.integer())
            exponent[idx] = exponent.get(idx, 0) + power
        else:
            r.ws()
            if r.pos < len(r.text) and (r.text[r.pos].isdigit()):
                coeff *= r.rational()
            else:
                r.fail("a rational coefficient or x[...]")
        if not r.accept("*"):
            return GroupElement(order, exponent), coeff


def _series(r: _Reader, order: OrderExpr, prec: GroupElement) -> Series:
    terms: dict = {}
    negative = r.accept("-")
    while True:
        e, c = _monomial(r, order)
        terms[e] = terms.get(e, 0) + (-c if negative else c)
        if r.accept("+"):
            negative = False
        elif r.accept("-"):
            negative = True
        else:
            break
    return Series(order, terms, prec)


def parse_series(text: str, order: OrderExpr, prec: GroupElement) -> Series:
    return _run(text, lambda r: _series(r, order, prec))


# -- ring terms -------------------------------------------------------------

def _ring(r: _Reader) -> Term:
    t = _rterm(r)
    while True:
        if r.accept("+"):
            t = Add(t, _rterm(r))
        elif r.accept("-"):
            t = Sub(t, _rterm(r))
        else:
            return t


def _rterm(r: _Reader) -> Term:
    t = _rfact(r)
    while r.accept("*"):
        t = Mul(t, _rfact(r))
    return t


def _rfact(r: _Reader) -> Term:
    if r.accept("-"):
        return Neg(_rfact(r))
    if r.accept("("):
        t = _ring(r)
        r.expect(")")
        return t
    if r.accept("u"):
        pos = r.pos
        i = r.integer(signed=False)
        if i < 1:
            r.pos = pos
            r.fail("a variable index >= 1")
        return Var(i)
    r.ws()
    if r.pos < len(r.text) and r.text[r.pos].isdigit():
        return Const(r.integer(signed=False))
    r.fail("an integer, a variable u<k>, '-' or '('")


def parse_term(text: str) -> Term:
    return _run(text, _ring)


# -- printers ---------------------------------------------------------------

def format_order(order: OrderExpr) -> str:
    if isinstance(order, Fin):
        return f"Fin({order.n})"
    if isinstance(order, Nat):
        return "N"
    if isinstance(order, Int):
        return "Z"
    if isinstance(order, Rat):
        return "Q"
    return f"lex({format_order(order.left)},{format_order(order.right)})"


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_element(x) -> str:
    if isinstance(x, tuple):
        return f"({format_element(x[0])},{format_element(x[1])})"
    return format_rational(x)


def format_tuple(xs) -> str:
    return "[" + ",".join(format_element(x) for x in xs) + "]"


def format_extnat(d) -> str:
    return "inf" if d is INF else str(d)


def format_group(g: GroupElement) -> str:
    return "{" + ",".join(f"{format_element(k)}:{format_rational(v)}" for k, v in g.items) + "}"


def format_series(f: Series) -> str:
    if f.is_zero():
        return "0"
    out = []
    for e, c in f.sorted_terms():
        factors = [f"x[{format_element(k)}]" + ("" if q == 1 else f"^{{{format_rational(q)}}}")
                   for k, q in e.items]
        mag = abs(c)
        if not factors:
            body = format_rational(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_rational(mag)] + factors)
        sep = "-" if c < 0 else "+"
        out.append((sep, body))
    first_sep, first = out[0]
    text = ("-" if first_sep == "-" else "") + first
    for sep, body in out[1:]:
        text += f" {sep} {body}"
    return text


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"u{t.index}"
    if isinstance(t, Const):
        return str(t.value) if t.value >= 0 else f"(-{-t.value})"
    if isinstance(t, Neg):
        return f"-({format_term(t.arg)})"
    op = {Add: "+", Sub: "-", Mul: "*"}[type(t)]
    return f"({format_term(t.left)}{op}{format_term(t.right)})"


def parse_support_map(text: str, source: OrderExpr, target: OrderExpr) -> list:
    """``{a:b, ...}`` pairs with a in ``source`` and b in ``target``."""
    def read(r):
        r.expect("{")
        pairs = []
        if not r.accept("}"):
            while True:
                a = _element(r, source)
                r.expect(":")
                pairs.append((a, _element(r, target)))
                if not r.accept(","):
                    break
            r.expect("}")
        return pairs
    return _run(text, read)
