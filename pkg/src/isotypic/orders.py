"""Countable total orders built from Fin(n), N, Z, Q and lexicographic products.

Elements are plain Python values: ``int`` for Fin/Nat/Int, ``Fraction`` for
Rat, and 2-tuples for Lex.  Because Python compares tuples lexicographically,
the native ordering of an element coincides with its order in the expression;
``compare`` still validates shapes before relying on that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

__all__ = [
    "OrderExpr", "Fin", "Nat", "Int", "Rat", "Lex", "NAT", "INT", "RAT",
    "INF", "ExtNat", "ShapeError", "LT", "EQ", "GT",
    "check_element", "belongs", "compare", "interval_size", "dist",
    "cardinality", "ray_above", "ray_below", "min_element", "max_element",
    "successor", "predecessor", "offset", "far_between",
    "enumerate_order", "enum_rank", "window", "is_dense", "is_discrete",
    "normalize",
]


class ShapeError(ValueError):
    """An element does not match the shape of its order expression."""


class _Infinity:
    """The value ``inf`` of N0 ∪ {∞}.  Saturates under + and ·, with 0·∞ = 0."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other == 0:
            return 0
        return self

    __rmul__ = __mul__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("inf")

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
ExtNat = Union[int, _Infinity]

LT, EQ, GT = -1, 0, 1


class OrderExpr:
    """Base class of the order-expression catalog."""

    __slots__ = ()

    def __str__(self) -> str:
        from .parsing import format_order
        return format_order(self)


@dataclass(frozen=True, repr=False)
class Fin(OrderExpr):
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError(f"Fin(n) requires an integer n >= 1, got {self.n!r}")

    def __repr__(self):
        return f"Fin({self.n})"


@dataclass(frozen=True, repr=False)
class Nat(OrderExpr):
    def __repr__(self):
        return "Nat()"


@dataclass(frozen=True, repr=False)
class Int(OrderExpr):
    def __repr__(self):
        return "Int()"


@dataclass(frozen=True, repr=False)
class Rat(OrderExpr):
    def __repr__(self):
        return "Rat()"


@dataclass(frozen=True, repr=False)
class Lex(OrderExpr):
    left: OrderExpr
    right: OrderExpr

    def __post_init__(self):
        if not isinstance(self.left, OrderExpr) or not isinstance(self.right, OrderExpr):
            raise TypeError("Lex factors must be order expressions")

    def __repr__(self):
        return f"Lex({self.left!r}, {self.right!r})"


NAT, INT, RAT = Nat(), Int(), Rat()


# -- membership -------------------------------------------------------------

def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def belongs(order: OrderExpr, x) -> bool:
    if isinstance(order, Lex):
        return (isinstance(x, tuple) and len(x) == 2
                and belongs(order.left, x[0]) and belongs(order.right, x[1]))
    if isinstance(order, Rat):
        return isinstance(x, (Fraction, int)) and not isinstance(x, bool)
    if not _is_int(x):
        return False
    if isinstance(order, Int):
        return True
    if isinstance(order, Nat):
        return x >= 0
    if isinstance(order, Fin):
        return 0 <= x < order.n
    raise TypeError(f"not an order expression: {order!r}")


def check_element(order: OrderExpr, x) -> None:
    if not belongs(order, x):
        raise ShapeError(f"{x!r} is not an element of {order!r}")


def compare(order: OrderExpr, x, y) -> int:
    """Return LT, EQ or GT."""
    check_element(order, x)
    check_element(order, y)
    return (x > y) - (x < y)


# -- counting ---------------------------------------------------------------

@lru_cache(maxsize=None)
def cardinality(order: OrderExpr) -> ExtNat:
    if isinstance(order, Fin):
        return order.n
    if isinstance(order, Lex):
        return cardinality(order.left) * cardinality(order.right)
    return INF


def ray_above(order: OrderExpr, x) -> ExtNat:
    """Number of elements strictly above ``x``."""
    if isinstance(order, Fin):
        return order.n - 1 - x
    if isinstance(order, Lex):
        a, b = x
        return ray_above(order.right, b) + ray_above(order.left, a) * cardinality(order.right)
    return INF


def ray_below(order: OrderExpr, x) -> ExtNat:
    """Number of elements strictly below ``x``."""
    if isinstance(order, (Fin, Nat)):
        return x
    if isinstance(order, Lex):
        a, b = x
        return ray_below(order.right, b) + ray_below(order.left, a) * cardinality(order.right)
    return INF


def _interval(order: OrderExpr, x, y) -> ExtNat:
    if isinstance(order, Lex):
        (a, b), (a2, b2) = x, y
        if a == a2:
            return _interval(order.right, b, b2)
        return (ray_above(order.right, b)
                + _interval(order.left, a, a2) * cardinality(order.right)
                + ray_below(order.right, b2))
    if isinstance(order, Rat):
        return INF
    return y - x - 1


def interval_size(order: OrderExpr, x, y) -> ExtNat:
    """|{z : x < z < y}| for x < y, or INF when the interval is infinite."""
    if compare(order, x, y) != LT:
        raise ValueError(f"interval_size needs x < y, got {x!r} >= {y!r}")
    return _interval(order, x, y)


@lru_cache(maxsize=1 << 20)
def _dist(order: OrderExpr, x, y) -> ExtNat:
    if x == y:
        return 0
    if y < x:
        x, y = y, x
    return _interval(order, x, y) + 1


def dist(order: OrderExpr, x, y) -> ExtNat:
    check_element(order, x)
    check_element(order, y)
    return _dist(order, x, y)


# -- local structure --------------------------------------------------------

@lru_cache(maxsize=None)
def min_element(order: OrderExpr):
    if isinstance(order, (Fin, Nat)):
        return 0
    if isinstance(order, Lex):
        a, b = min_element(order.left), min_element(order.right)
        return None if a is None or b is None else (a, b)
    return None


@lru_cache(maxsize=None)
def max_element(order: OrderExpr):
    if isinstance(order, Fin):
        return order.n - 1
    if isinstance(order, Lex):
        a, b = max_element(order.left), max_element(order.right)
        return None if a is None or b is None else (a, b)
    return None


def successor(order: OrderExpr, x):
    """Immediate successor of ``x`` or None."""
    if isinstance(order, Fin):
        return x + 1 if x + 1 < order.n else None
    if isinstance(order, (Nat, Int)):
        return x + 1
    if isinstance(order, Rat):
        return None
    a, b = x
    s = successor(order.right, b)
    if s is not None:
        return (a, s)
    lo = min_element(order.right)
    if b != max_element(order.right) or lo is None:
        return None
    a2 = successor(order.left, a)
    return None if a2 is None else (a2, lo)


def predecessor(order: OrderExpr, x):
    """Immediate predecessor of ``x`` or None."""
    if isinstance(order, (Fin, Nat)):
        return x - 1 if x > 0 else None
    if isinstance(order, Int):
        return x - 1
    if isinstance(order, Rat):
        return None
    a, b = x
    p = predecessor(order.right, b)
    if p is not None:
        return (a, p)
    hi = max_element(order.right)
    if b != min_element(order.right) or hi is None:
        return None
    a2 = predecessor(order.left, a)
    return None if a2 is None else (a2, hi)


def offset(order: OrderExpr, x, d: int):
    """The element at signed distance ``d`` from ``x``, if it exists."""
    step = successor if d > 0 else predecessor
    for _ in range(abs(d)):
        x = step(order, x)
        if x is None:
            return None
    return x


def far_between(order: OrderExpr, lo, hi, k: int):
    """Some z with lo < z < hi and dist(lo, z), dist(z, hi) > k.

    ``lo``/``hi`` may be None for an unbounded side (no distance constraint
    there).  Returns None when the construction finds no such element.
    """
    for z in _far_proposals(order, lo, hi, k):
        if z is None:
            continue
        if lo is not None and not (lo < z and _dist(order, lo, z) > k):
            continue
        if hi is not None and not (z < hi and _dist(order, z, hi) > k):
            continue
        return z
    return None


def _far_proposals(order, lo, hi, k):
    if isinstance(order, Rat):
        if lo is not None and hi is not None:
            yield (lo + hi) / 2
        elif lo is not None:
            yield Fraction(lo) + 1
        elif hi is not None:
            yield Fraction(hi) - 1
        else:
            yield Fraction(0)
        return
    if isinstance(order, Lex):
        A, B = order.left, order.right
        if lo is not None and hi is not None and lo[0] == hi[0]:
            z = far_between(B, lo[1], hi[1], k)
            yield None if z is None else (lo[0], z)
            return
        if lo is not None:
            z = far_between(B, lo[1], None, k)
            yield None if z is None else (lo[0], z)
        if hi is not None:
            z = far_between(B, None, hi[1], k)
            yield None if z is None else (hi[0], z)
        m = far_between(A, None if lo is None else lo[0], None if hi is None else hi[0], 0)
        if m is not None:
            yield (m, _middle(B))
        return
    # integer-valued orders
    if lo is not None and hi is not None:
        yield (lo + hi) // 2
        return
    first = min_element(order)
    if lo is not None:
        z = lo + k + 1
    elif hi is not None:
        z = hi - k - 1
    else:
        z = 0 if first is None else first
    if belongs(order, z):
        yield z


def _middle(order: OrderExpr):
    if isinstance(order, Fin):
        return order.n // 2
    if isinstance(order, Lex):
        return (_middle(order.left), _middle(order.right))
    if isinstance(order, Rat):
        return Fraction(0)
    return 0


# -- enumeration ------------------------------------------------------------

def _calkin_wilf() -> Iterator[Fraction]:
    q = Fraction(1)
    while True:
        yield q
        q = 1 / (2 * (q.numerator // q.denominator) - q + 1)


def _calkin_wilf_index(q: Fraction) -> int:
    """1-based position of a positive rational in the Calkin-Wilf sequence."""
    a, b = q.numerator, q.denominator
    bits = []
    while (a, b) != (1, 1):
        if a < b:
            bits.append(0)
            b -= a
        else:
            bits.append(1)
            a -= b
    idx = 1
    for bit in reversed(bits):
        idx = 2 * idx + bit
    return idx


class _Cached:
    """Memoizing view of an iterator, indexable; returns None past the end."""

    def __init__(self, it):
        self._it = it
        self._items = []
        self.done = False

    def get(self, i):
        while len(self._items) <= i and not self.done:
            try:
                self._items.append(next(self._it))
            except StopIteration:
                self.done = True
        return self._items[i] if i < len(self._items) else None

    def __len__(self):
        return len(self._items)


def enumerate_order(order: OrderExpr) -> Iterator:
    """Deterministic surjective enumeration.

    Fin/Nat count up; Int zig-zags 0, 1, -1, 2, -2, ...; Rat yields 0 and then
    q, -q for q along the Calkin-Wilf sequence; Lex walks Cantor diagonals
    s = i + j of the factor enumerations, i ascending, skipping indices past
    the end of a finite factor.
    """
    if isinstance(order, Fin):
        yield from range(order.n)
    elif isinstance(order, Nat):
        yield from itertools.count()
    elif isinstance(order, Int):
        yield 0
        for k in itertools.count(1):
            yield k
            yield -k
    elif isinstance(order, Rat):
        yield Fraction(0)
        for q in _calkin_wilf():
            yield q
            yield -q
    elif isinstance(order, Lex):
        left = _Cached(enumerate_order(order.left))
        right = _Cached(enumerate_order(order.right))
        for s in itertools.count():
            emitted = False
            for i in range(s + 1):
                a = left.get(i)
                if a is None:
                    break
                b = right.get(s - i)
                if b is None:
                    continue
                emitted = True
                yield (a, b)
            if not emitted and left.done and right.done and s > len(left) + len(right):
                return
    else:
        raise TypeError(f"not an order expression: {order!r}")


def enum_rank(order: OrderExpr, x) -> int:
    """A key increasing with the position of ``x`` in ``enumerate_order``."""
    if isinstance(order, (Fin, Nat)):
        return x
    if isinstance(order, Int):
        return 2 * x - 1 if x > 0 else -2 * x
    if isinstance(order, Rat):
        if x == 0:
            return 0
        q = Fraction(x)
        idx = _calkin_wilf_index(abs(q))
        return 2 * idx - 1 if q > 0 else 2 * idx
    i, j = enum_rank(order.left, x[0]), enum_rank(order.right, x[1])
    s = i + j
    return s * (s + 1) // 2 + i


def window(order: OrderExpr, w: int) -> list:
    """Elements whose coordinates lie in the first 2w+1 enumerated values of
    their base factor (for Int exactly -w..w), sorted ascending."""
    if isinstance(order, Lex):
        return [(a, b) for a in window(order.left, w) for b in window(order.right, w)]
    return sorted(itertools.islice(enumerate_order(order), 2 * w + 1))


# -- classification ---------------------------------------------------------

@lru_cache(maxsize=None)
def _shape(order: OrderExpr):
    """(has_min, has_max, dense, succ_closed, pred_closed, singleton)."""
    if isinstance(order, Fin):
        return True, True, order.n == 1, True, True, order.n == 1
    if isinstance(order, Nat):
        return True, False, False, True, True, False
    if isinstance(order, Int):
        return False, False, False, True, True, False
    if isinstance(order, Rat):
        return False, False, True, False, False, False
    amin, amax, adense, asucc, apred, asingle = _shape(order.left)
    bmin, bmax, bdense, bsucc, bpred, bsingle = _shape(order.right)
    # (a, max B) and (a+, min B) are adjacent whenever a has a successor in A
    dense = bdense and not (bmin and bmax and not adense)
    succ = bsucc and (not bmax or asingle or (asucc and bmin))
    pred = bpred and (not bmin or asingle or (apred and bmax))
    return amin and bmin, amax and bmax, dense, succ, pred, asingle and bsingle


def is_dense(order: OrderExpr) -> bool:
    """Between any two elements lies a third."""
    return _shape(order)[2]


def is_discrete(order: OrderExpr) -> bool:
    """Every non-maximal element has an immediate successor and every
    non-minimal element an immediate predecessor."""
    s = _shape(order)
    return s[3] and s[4]


# -- automorphism normal form -----------------------------------------------

def normalize(order: OrderExpr, xs) -> list:
    """Image of the elements ``xs`` under an automorphism of ``order`` chosen
    to depend only on their relative configuration.

    Int translates so the minimum is 0; Rat maps the sorted distinct values to
    0, 1, 2, ...; Lex normalizes each fiber in the right factor independently,
    then the left coordinates.  Fin and Nat are rigid.
    """
    xs = list(xs)
    if not xs:
        return xs
    if isinstance(order, Int):
        m = min(xs)
        return [x - m for x in xs]
    if isinstance(order, Rat):
        rank = {v: Fraction(i) for i, v in enumerate(sorted(set(xs)))}
        return [rank[x] for x in xs]
    if isinstance(order, Lex):
        fibers: dict = {}
        for i, (a, _) in enumerate(xs):
            fibers.setdefault(a, []).append(i)
        right = [None] * len(xs)
        for idx in fibers.values():
            for i, b in zip(idx, normalize(order.right, [xs[i][1] for i in idx])):
                right[i] = b
        left = normalize(order.left, [a for a, _ in xs])
        return list(zip(left, right))
    return xs
