"""Truncated generalized power series with exponents in the ordered group.

A ``Series`` is a finite sum of monomials ``c * x^e`` with exponents ``e``
(``GroupElement`` values) strictly below a precision cutoff.  It stands for
every element of the valued field agreeing with it below the cutoff.
Precision follows the error terms honestly: a product ``f*g`` is known below
``min(P_f + v(g), P_g + v(f))`` and an inverse of ``f`` below ``P_f - 2 v(f)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .orders import OrderExpr, check_element
from .ordgroups import GroupElement, arch_class, group_compare, sign

__all__ = [
    "Series", "SupportMap", "HenselError", "PrecisionError",
    "invert", "hensel_lift", "defect", "substitute",
    "Term", "Var", "Const", "Add", "Sub", "Mul", "Neg", "evaluate_term",
    "term_degree", "term_variables", "random_term",
    "PasReport", "pas_check",
]


class PrecisionError(ArithmeticError):
    """The requested cutoff cannot be reached by a finite expansion."""


class HenselError(ValueError):
    """Hensel lifting preconditions fail."""


def _trunc(terms: dict, prec: GroupElement) -> dict:
    return {e: c for e, c in terms.items() if c and e < prec}


class Series:
    __slots__ = ("order", "terms", "prec")

    def __init__(self, order: OrderExpr, terms: Mapping, prec: GroupElement):
        if prec.order != order:
            raise ValueError("precision lives over a different index order")
        clean = {}
        for e, c in terms.items():
            if e.order != order:
                raise ValueError("exponent lives over a different index order")
            c = Fraction(c)
            if c and e < prec:
                clean[e] = clean.get(e, 0) + c
        self.order = order
        self.terms = {e: c for e, c in clean.items() if c}
        self.prec = prec

    @classmethod
    def _raw(cls, order, terms, prec):
        s = cls.__new__(cls)
        s.order = order
        s.terms = terms
        s.prec = prec
        return s

    # -- constructors --
    @classmethod
    def constant(cls, order: OrderExpr, c, prec: GroupElement) -> Series:
        return cls(order, {GroupElement.zero(order): c}, prec)

    @classmethod
    def monomial(cls, order: OrderExpr, exponent: Mapping, coeff, prec: GroupElement) -> Series:
        return cls(order, {GroupElement(order, exponent): coeff}, prec)

    @classmethod
    def x(cls, order: OrderExpr, idx, prec: GroupElement, power=1) -> Series:
        check_element(order, idx)
        return cls.monomial(order, {idx: power}, 1, prec)

    # -- valuation data --
    def is_zero(self) -> bool:
        return not self.terms

    def val(self) -> GroupElement:
        if not self.terms:
            raise ZeroDivisionError("the zero series has no valuation")
        return min(self.terms)

    def ang(self) -> Fraction:
        """Coefficient of the lowest exponent."""
        return self.terms[self.val()]

    def residue(self) -> Fraction:
        """Image in the residue field Q; requires val >= 0."""
        if self.terms and sign(self.val()) < 0:
            raise ValueError("residue of a non-integral series")
        return self.terms.get(GroupElement.zero(self.order), Fraction(0))

    def indices(self) -> set:
        idx = set(self.prec.support())
        for e in self.terms:
            idx.update(e.support())
        return idx

    # -- ring operations --
    def _same(self, other):
        if other.order != self.order:
            raise ValueError(f"index orders differ: {self.order!r} vs {other.order!r}")

    def _coerce(self, other):
        if isinstance(other, Series):
            self._same(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Series.constant(self.order, other, self.prec)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prec = min(self.prec, other.prec)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) + c
        return Series._raw(self.order, _trunc(acc, prec), prec)

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(self.order, {e: -c for e, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, q) -> Series:
        q = Fraction(q)
        if q == 0:
            return Series._raw(self.order, {}, self.prec)
        return Series._raw(self.order, {e: c * q for e, c in self.terms.items()}, self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._same(other)
        vf = self.val() if self.terms else self.prec
        vg = other.val() if other.terms else other.prec
        prec = min(self.prec + vg, other.prec + vf)
        return Series._raw(self.order, _mul_terms(self.terms, other.terms, prec), prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Series.constant(self.order, 1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(1 / Fraction(other))
        return self * invert(other)

    # -- comparison --
    def truncate(self, prec: GroupElement) -> Series:
        prec = min(prec, self.prec)
        return Series._raw(self.order, _trunc(self.terms, prec), prec)

    def congruent(self, other: Series, prec: GroupElement | None = None) -> bool:
        """Equality below the common precision (or ``prec`` if lower)."""
        self._same(other)
        p = min(self.prec, other.prec)
        if prec is not None:
            p = min(p, prec)
        return _trunc(self.terms, p) == _trunc(other.terms, p)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.prec == other.prec and self.terms == other.terms

    __hash__ = None

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def __repr__(self):
        return f"Series({self}, prec={self.prec})"

    def __str__(self):
        from .parsing import format_series
        return format_series(self)


def _mul_terms(a: Mapping, b: Mapping, cutoff: GroupElement) -> dict:
    acc: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            if e < cutoff:
                acc[e] = acc.get(e, 0) + c1 * c2
    return {e: c for e, c in acc.items() if c}


def _reachable(step: GroupElement, target: GroupElement) -> bool:
    """Whether k * step >= target for some natural k (step > 0)."""
    if sign(target) <= 0:
        return True
    return arch_class(step) >= arch_class(target)


def invert(f: Series) -> Series:
    """Multiplicative inverse: f = c x^g (1 + u) with v(u) > 0, so
    1/f = c^-1 x^-g * sum_k (-u)^k, summed until the terms pass the cutoff."""
    if f.is_zero():
        raise ZeroDivisionError("inverse of the zero series")
    order = f.order
    gamma, c = f.val(), f.ang()
    prec = f.prec - gamma - gamma
    target = f.prec - gamma  # cutoff for the normalized factor
    neg_u = {e - gamma: -coef / c for e, coef in f.terms.items() if e != gamma}
    if neg_u:
        step = min(neg_u)
        if not _reachable(step, target):
            raise PrecisionError(
                f"powers of an element of valuation {step} never pass the cutoff {target}")
    zero = GroupElement.zero(order)
    w = {zero: Fraction(1)} if zero < target else {}
    power = dict(w)
    while power:
        power = _mul_terms(power, neg_u, target)
        for e, coef in power.items():
            w[e] = w.get(e, 0) + coef
    terms = {e - gamma: coef / c for e, coef in w.items() if coef}
    return Series._raw(order, _trunc(terms, prec), prec)


def _horner(coeffs: Sequence[Series], z: Series) -> Series:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def _derivative(coeffs: Sequence[Series]) -> list:
    return [c.scale(i) for i, c in enumerate(coeffs)][1:] or [coeffs[0].scale(0)]


def defect(coeffs: Sequence[Series], z: Series) -> Series:
    """p(z) for p = sum coeffs[i] t^i."""
    return _horner(list(coeffs), z)


def hensel_lift(coeffs: Sequence[Series], r0, max_iter: int = 64) -> Series:
    """Lift a simple root ``r0`` of the residue polynomial to a root of
    p(t) = sum coeffs[i] t^i below the coefficients' common precision."""
    coeffs = list(coeffs)
    if not coeffs:
        raise HenselError("empty polynomial")
    order = coeffs[0].order
    prec = min(c.prec for c in coeffs)
    for c in coeffs:
        if c.order != order:
            raise ValueError("coefficients over different index orders")
        if not c.is_zero() and sign(c.val()) < 0:
            raise HenselError(f"coefficient {c} is not integral")
    r0 = Fraction(r0)
    res = [c.residue() for c in coeffs]
    if sum(a * r0 ** i for i, a in enumerate(res)) != 0:
        raise HenselError(f"{r0} is not a root of the residue polynomial")
    if sum(i * a * r0 ** (i - 1) for i, a in enumerate(res) if i) == 0:
        raise HenselError(f"{r0} is not a simple root of the residue polynomial")
    deriv = _derivative(coeffs)
    z = Series.constant(order, r0, prec)
    for _ in range(max_iter):
        d = _horner(coeffs, z).truncate(prec)
        if d.is_zero():
            return z.truncate(prec)
        if not _reachable(d.val(), prec):
            raise PrecisionError(f"defect {d.val()} cannot be pushed past {prec}")
        z = (z - d * invert(_horner(deriv, z))).truncate(prec)
    raise PrecisionError("Newton iteration did not reach the cutoff")


@dataclass(frozen=True)
class SupportMap:
    """Order-preserving injection from indices of ``source`` into ``target``."""

    source: OrderExpr
    target: OrderExpr
    mapping: tuple  # sorted pairs (a, b)

    def __init__(self, source: OrderExpr, target: OrderExpr, mapping):
        if isinstance(mapping, Mapping):
            mapping = mapping.items()
        pairs = tuple(sorted(mapping))
        for a, b in pairs:
            check_element(source, a)
            check_element(target, b)
        for (a1, b1), (a2, b2) in zip(pairs, pairs[1:]):
            if not b1 < b2:
                raise ValueError(f"support map is not strictly monotone at {a1!r} < {a2!r}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", pairs)

    @classmethod
    def identity(cls, order: OrderExpr, indices) -> SupportMap:
        return cls(order, order, {i: i for i in indices})

    def __call__(self, a):
        for k, v in self.mapping:
            if k == a:
                return v
        raise KeyError(f"support map does not cover {a!r}")

    def domain(self) -> set:
        return {k for k, _ in self.mapping}

    def relabel(self, g: GroupElement) -> GroupElement:
        if g.order != self.source:
            raise ValueError("group element over the wrong index order")
        return GroupElement(self.target, [(self(k), c) for k, c in g.items])


def substitute(f: Series, sigma: SupportMap) -> Series:
    """Replace every x_a by x_sigma(a)."""
    if f.order != sigma.source:
        raise ValueError("series and support map disagree on the index order")
    missing = f.indices() - sigma.domain()
    if missing:
        raise ValueError(f"support map does not cover indices {sorted(missing)!r}")
    return Series(sigma.target,
                  {sigma.relabel(e): c for e, c in f.terms.items()},
                  sigma.relabel(f.prec))


# -- ring terms -------------------------------------------------------------

class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    index: int  # 1-based, as in u1, u2, ...


@dataclass(frozen=True)
class Const(Term):
    value: int


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


def evaluate_term(t: Term, env: Sequence, one):
    """Evaluate a ring term; ``one`` supplies the ring's unit for constants."""
    if isinstance(t, Var):
        if not 1 <= t.index <= len(env):
            raise IndexError(f"u{t.index} is out of range for {len(env)} variables")
        return env[t.index - 1]
    if isinstance(t, Const):
        return one * t.value
    if isinstance(t, Neg):
        return -evaluate_term(t.arg, env, one)
    a = evaluate_term(t.left, env, one)
    b = evaluate_term(t.right, env, one)
    if isinstance(t, Add):
        return a + b
    if isinstance(t, Sub):
        return a - b
    return a * b


def term_degree(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, Const):
        return 0
    if isinstance(t, Neg):
        return term_degree(t.arg)
    if isinstance(t, Mul):
        return term_degree(t.left) + term_degree(t.right)
    return max(term_degree(t.left), term_degree(t.right))


def term_variables(t: Term) -> set:
    if isinstance(t, Var):
        return {t.index}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Neg):
        return term_variables(t.arg)
    return term_variables(t.left) | term_variables(t.right)


def random_term(rng: random.Random, nvars: int, max_degree: int = 3) -> Term:
    """A random sum of monomials of degree <= max_degree with small integer coefficients."""
    t: Term | None = None
    for _ in range(rng.randint(1, 3)):
        c = rng.randint(1, 3)
        mono: Term = Const(c) if rng.random() < 0.5 else Neg(Const(c))
        for _ in range(rng.randint(0, max_degree)):
            mono = Mul(mono, Var(rng.randint(1, nvars)))
        if t is None:
            t = mono
        else:
            t = rng.choice([Add, Sub])(t, mono)
    return t


# -- quantifier-free Pas checks ---------------------------------------------

@dataclass
class PasReport:
    rows: list = field(default_factory=list)
    pairwise_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.pairwise_ok and all(
            r["ring"] and r["valuation"] and r["angular"] for r in self.rows)


def pas_check(terms: Sequence[Term], xs: Sequence[Series], sigma: SupportMap) -> PasReport:
    """Compare the three quantifier-free formula classes on xs and its image under sigma.

    For each term t: (ring) t(xs) vanishes iff t(zs) does; (valuation) v(t(zs))
    is the relabelled v(t(xs)), and the order relations among all valuations
    agree on both sides; (angular) the angular components coincide.
    """
    zs = [substitute(x, sigma) for x in xs]
    report = PasReport()
    if not xs:
        for t in terms:
            if term_variables(t):
                raise IndexError("term uses variables but the tuple is empty")
        return report
    one_l = Series.constant(xs[0].order, 1, xs[0].prec)
    one_r = Series.constant(zs[0].order, 1, zs[0].prec)
    vals_l, vals_r = [], []
    for t in terms:
        fl = evaluate_term(t, xs, one_l)
        fr = evaluate_term(t, zs, one_r)
        zl, zr = fl.is_zero(), fr.is_zero()
        row = {"term": t, "zero_left": zl, "zero_right": zr, "ring": zl == zr}
        if zl or zr:
            row.update(valuation=zl and zr, angular=zl and zr,
                       val_left=None, val_right=None, ang_left=None, ang_right=None)
            vals_l.append(None)
            vals_r.append(None)
        else:
            vl, vr = fl.val(), fr.val()
            row.update(val_left=vl, val_right=vr, ang_left=fl.ang(), ang_right=fr.ang(),
                       valuation=sigma.relabel(vl) == vr, angular=fl.ang() == fr.ang())
            vals_l.append(vl)
            vals_r.append(vr)
        report.rows.append(row)
    for i in range(len(vals_l)):
        for j in range(len(vals_l)):
            if vals_l[i] is None or vals_l[j] is None or vals_r[i] is None or vals_r[j] is None:
                continue
            if group_compare(vals_l[i], vals_l[j]) != group_compare(vals_r[i], vals_r[j]):
                report.pairwise_ok = False
    return report
