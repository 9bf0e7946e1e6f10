"""Ehrenfeucht-Fraisse games on pairs of catalog orders with parameters.

A position pairs a tuple in each order with a number of remaining rounds.
Each round the spoiler picks an element on either side and the duplicator
answers on the other; the duplicator wins if the final tuples have the same
order and equality pattern.

The spoiler's move space is made finite by ``candidate_moves``; the game
value is computed by minimax over that space, with positions memoized up to
automorphisms of the two orders (``orders.normalize``).  With one round
left the value is decided exactly: the duplicator survives iff every gap
between consecutive parameters is empty on one side exactly when it is
empty on the other.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from .orders import (INF, Lex, OrderExpr, _dist, _far_proposals, _interval, belongs, check_element, enum_rank,
                     enumerate_order, far_between, max_element, min_element, normalize,
                     offset, ray_above, ray_below)

__all__ = [
    "LEFT", "RIGHT", "DUPLICATOR_WINS", "SPOILER_WINS",
    "GamePosition", "Round", "Transcript", "GameResult",
    "NoMatchingReply", "position_won", "violated_relation", "candidate_moves",
    "ef_decide", "duplicator_reply", "play_interactive", "scripted_source",
    "clear_cache",
]

LEFT, RIGHT = "left", "right"
DUPLICATOR_WINS, SPOILER_WINS = "duplicator-wins", "spoiler-wins"
_REL = {-1: "<", 0: "=", 1: ">"}


class NoMatchingReply(Exception):
    """The distance-matching strategy has no answer: the positions were not
    equivalent enough for the remaining rounds."""


@dataclass(frozen=True)
class GamePosition:
    left_order: OrderExpr
    left: tuple
    right_order: OrderExpr
    right: tuple
    rounds_left: int

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        if len(self.left) != len(self.right):
            raise ValueError(f"tuple lengths differ: {len(self.left)} vs {len(self.right)}")
        if self.rounds_left < 0:
            raise ValueError("rounds_left must be non-negative")
        for x in self.left:
            check_element(self.left_order, x)
        for y in self.right:
            check_element(self.right_order, y)

    def side(self, which: str):
        if which == LEFT:
            return self.left_order, self.left
        if which == RIGHT:
            return self.right_order, self.right
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}, got {which!r}")

    def extend(self, side: str, move, reply) -> GamePosition:
        l, r = (move, reply) if side == LEFT else (reply, move)
        return GamePosition(self.left_order, self.left + (l,), self.right_order,
                            self.right + (r,), self.rounds_left - 1)


def _other(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


def _sgn(x, y) -> int:
    return (x > y) - (x < y)


def _won(xs, ys) -> bool:
    k = len(xs)
    for i in range(k):
        for j in range(i + 1, k):
            if _sgn(xs[i], xs[j]) != _sgn(ys[i], ys[j]):
                return False
    return True


def position_won(p: GamePosition) -> bool:
    """Same order and equality pattern on both tuples."""
    return _won(p.left, p.right)


def violated_relation(p: GamePosition) -> Optional[dict]:
    k = len(p.left)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = _sgn(p.left[i], p.left[j]), _sgn(p.right[i], p.right[j])
            if a != b:
                return {"i": i, "j": j, "left": _REL[a], "right": _REL[b]}
    return None


# -- move generation --------------------------------------------------------

def _points(order: OrderExpr, anchors) -> list:
    pts = set(anchors)
    for e in (min_element(order), max_element(order)):
        if e is not None:
            pts.add(e)
    return sorted(pts)


_CAND_CACHE: dict = {}


def candidate_moves(order: OrderExpr, anchors, rounds_left: int) -> tuple:
    """Finite spoiler move set for ``rounds_left`` remaining rounds.

    The order's endpoints; around every anchor and endpoint all elements at
    distance 1..2^n on either side; in every gap one element farther than
    2^n from both ends (2^(n+1) where there is room); and for lexicographic
    orders representatives of fresh classes below, between and above the
    anchor classes.  Anchors are excluded.
    """
    key = (order, tuple(anchors), rounds_left)
    hit = _CAND_CACHE.get(key)
    if hit is None:
        hit = _CAND_CACHE[key] = _candidates(order, tuple(anchors), rounds_left)
    return hit


def _candidates(order, anchors, n):
    if n < 1:
        raise ValueError("candidate moves need at least one remaining round")
    reach = 2 ** n
    pts = _points(order, anchors)
    out = set(pts)  # endpoints are moves too; anchors are dropped below
    for p in pts:
        for step in (1, -1):
            x = p
            for _ in range(reach):
                x = offset(order, x, step)
                if x is None:
                    break
                out.add(x)
    bounds = [None] + pts + [None]
    for lo, hi in zip(bounds, bounds[1:]):
        # deep point: twice the reach when the gap allows it
        z = far_between(order, lo, hi, 2 * reach)
        if z is None:
            z = far_between(order, lo, hi, reach)
        if z is not None:
            out.add(z)
    if not pts:
        out.add(next(enumerate_order(order)))
    if isinstance(order, Lex) and pts:
        A, B = order.left, order.right
        fillers = {far_between(B, None, None, 0), min_element(B), max_element(B)} - {None}
        classes = sorted({p[0] for p in pts})
        cb = [None] + classes + [None]
        for c1, c2 in zip(cb, cb[1:]):
            for k in (0, reach):
                m = far_between(A, c1, c2, k)
                if m is not None:
                    out.update((m, b) for b in fillers)
    out.difference_update(anchors)
    return tuple(sorted(out))


def _signature(order, anchors, x) -> tuple:
    """Distances from x to each anchor, then to the bottom and top of the order
    (INF where the order has no endpoint)."""
    sig = [_dist(order, a, x) for a in anchors]
    lo, hi = min_element(order), max_element(order)
    sig.append(INF if lo is None else _dist(order, lo, x))
    sig.append(INF if hi is None else _dist(order, hi, x))
    return tuple(sig)


def _pattern(anchors, x) -> tuple:
    return tuple(_sgn(x, a) for a in anchors)


def _ranked_replies(so, st, oo, ot, move, n) -> list:
    """Pattern-preserving candidate replies, best first.

    A reply is *valid* when its distances agree with the spoiler's after
    truncation at 2^(n-1); valid exact matches come first, then other valid
    ones, then the remaining pattern-preserving candidates, each group in
    enumeration order.
    """
    pat = _pattern(st, move)
    if 0 in pat:
        i = pat.index(0)
        return [(ot[i], True)] if _pattern(ot, ot[i]) == pat else []
    cap = 2 ** (n - 1)
    sig = _signature(so, st, move)
    tsig = tuple(min(d, cap) for d in sig)
    ranked = []
    for r in candidate_moves(oo, ot, n):
        if _pattern(ot, r) != pat:
            continue
        rs = _signature(oo, ot, r)
        exact = rs == sig
        valid = exact or tuple(min(d, cap) for d in rs) == tsig
        ranked.append((not valid, not exact, enum_rank(oo, r), r))
    ranked.sort(key=lambda t: t[:3])
    return [(r, not bad) for bad, _, _, r in ranked]


# -- game value -------------------------------------------------------------

_MEMO: dict = {}


def clear_cache() -> None:
    _MEMO.clear()
    _CAND_CACHE.clear()


def _gap_profile(order, xs) -> tuple:
    pts = sorted(set(xs))
    if not pts:
        return ()
    prof = [ray_below(order, pts[0]) != 0]
    prof.extend(_interval(order, a, b) != 0 for a, b in zip(pts, pts[1:]))
    prof.append(ray_above(order, pts[-1]) != 0)
    return tuple(prof)


def _canonical(lo, lt, ro, rt):
    pairs = sorted(set(zip(lt, rt)))
    return (tuple(normalize(lo, [a for a, _ in pairs])),
            tuple(normalize(ro, [b for _, b in pairs])))


def _value(lo, lt, ro, rt, n) -> bool:
    """Duplicator wins n more rounds from a position whose pattern already matches."""
    if n == 0:
        return True
    if n == 1:
        return _gap_profile(lo, lt) == _gap_profile(ro, rt)
    cl, cr = _canonical(lo, lt, ro, rt)
    key = (lo, cl, ro, cr, n)
    hit = _MEMO.get(key)
    if hit is None:
        hit = _MEMO[key] = _search(lo, cl, ro, cr, n)
    return hit


def _search(lo, lt, ro, rt, n) -> bool:
    for flip in (False, True):
        so, st, oo, ot = (ro, rt, lo, lt) if flip else (lo, lt, ro, rt)
        for m in candidate_moves(so, st, n):
            if not _has_reply(so, st, oo, ot, m, n, flip):
                return False
    return True


def _direct_replies(so, st, oo, ot, move, n) -> list:
    """Replies built directly from the spoiler move's distances: the same
    offset from a corresponding anchor or endpoint, or a far point of the
    corresponding gap.  Only pattern-preserving, truncation-valid ones are kept."""
    pat = _pattern(st, move)
    if 0 in pat:
        return []
    cap = 2 ** (n - 1)
    sig = _signature(so, st, move)
    tsig = tuple(min(d, cap) for d in sig)
    src = list(st) + [min_element(so), max_element(so)]
    dst = list(ot) + [min_element(oo), max_element(oo)]
    props = []
    for p, q, d in zip(src, dst, sig):
        if d is not INF and p is not None and q is not None:
            props.append(offset(oo, q, d if move > p else -d))
    below = [i for i, a in enumerate(st) if a < move]
    above = [i for i, a in enumerate(st) if a > move]
    lo = max((ot[i] for i in below), default=None)
    hi = min((ot[i] for i in above), default=None)
    props.extend(_far_proposals(oo, lo, hi, cap - 1))
    out = []
    for r in dict.fromkeys(x for x in props if x is not None):
        if not belongs(oo, r) or _pattern(ot, r) != pat:
            continue
        rs = _signature(oo, ot, r)
        if rs == sig or tuple(min(d, cap) for d in rs) == tsig:
            out.append((rs != sig, enum_rank(oo, r), r))
    out.sort(key=lambda t: t[:2])
    return [r for _, _, r in out]


def _has_reply(so, st, oo, ot, move, n, flip) -> bool:
    tried = set()
    direct = _direct_replies(so, st, oo, ot, move, n)
    def ranked():
        for r, _ in _ranked_replies(so, st, oo, ot, move, n):
            yield r
    for r in itertools.chain(direct, ranked()):
        if r in tried:
            continue
        tried.add(r)
        if flip:
            ok = _value(oo, ot + (r,), so, st + (move,), n - 1)
        else:
            ok = _value(so, st + (move,), oo, ot + (r,), n - 1)
        if ok:
            return True
    return False


# -- strategy ---------------------------------------------------------------

def duplicator_reply(p: GamePosition, side: str, move):
    """Reply matching the spoiler move's order pattern and its distances to
    the parameters truncated at 2^(rounds_left-1); exact distance matches are
    preferred, ties broken by enumeration order.  Raises NoMatchingReply."""
    if p.rounds_left < 1:
        raise ValueError("no rounds left")
    so, st = p.side(side)
    oo, ot = p.side(_other(side))
    check_element(so, move)
    for r, valid in _ranked_replies(so, st, oo, ot, move, p.rounds_left):
        if valid:
            return r
        break
    raise NoMatchingReply(f"no reply on the {_other(side)} side matches {move!r}")


def _machine_reply(p: GamePosition, side: str, move):
    """Strategy reply, else the best pattern-preserving candidate, else any element."""
    try:
        return duplicator_reply(p, side, move), False
    except NoMatchingReply:
        pass
    so, st = p.side(side)
    oo, ot = p.side(_other(side))
    ranked = _ranked_replies(so, st, oo, ot, move, p.rounds_left)
    if ranked:
        return ranked[0][0], True
    cands = candidate_moves(oo, ot, p.rounds_left)
    if cands:
        return cands[0], True
    return (ot[0] if ot else next(enumerate_order(oo))), True


# -- transcripts ------------------------------------------------------------

@dataclass
class Round:
    side: str
    spoiler: object
    duplicator: object
    strategy_failure: bool = False


@dataclass
class Transcript:
    start: GamePosition
    rounds: list = field(default_factory=list)
    verdict: str = DUPLICATOR_WINS
    violated: Optional[dict] = None
    rejected: list = field(default_factory=list)

    def replay(self) -> GamePosition:
        p = self.start
        for r in self.rounds:
            p = p.extend(r.side, r.spoiler, r.duplicator)
        return p

    def to_json(self) -> dict:
        from .parsing import format_element, format_order
        s = self.start
        doc = {
            "game": {
                "left": {"order": format_order(s.left_order),
                         "tuple": [format_element(x) for x in s.left]},
                "right": {"order": format_order(s.right_order),
                          "tuple": [format_element(x) for x in s.right]},
                "rounds": s.rounds_left,
            },
            "rounds": [{"side": r.side, "spoiler": format_element(r.spoiler),
                        "duplicator": format_element(r.duplicator),
                        **({"strategy_failure": True} if r.strategy_failure else {})}
                       for r in self.rounds],
            "verdict": self.verdict,
        }
        if self.violated is not None:
            doc["violated_relation"] = self.violated
        if self.rejected:
            doc["rejected"] = self.rejected
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _finish(t: Transcript) -> Transcript:
    end = t.replay()
    if position_won(end):
        t.verdict, t.violated = DUPLICATOR_WINS, None
    else:
        t.verdict, t.violated = SPOILER_WINS, violated_relation(end)
    return t


@dataclass
class GameResult:
    duplicator_wins: bool
    transcript: Optional[Transcript] = None

    def __bool__(self):
        return self.duplicator_wins


def ef_decide(p: GamePosition) -> GameResult:
    """Decide the game by minimax; a spoiler win comes with a winning line."""
    if not position_won(p):
        return GameResult(False, _finish(Transcript(p)))
    if _value(p.left_order, p.left, p.right_order, p.right, p.rounds_left):
        return GameResult(True)
    return GameResult(False, _spoiler_line(p))


def _spoiler_line(p: GamePosition) -> Transcript:
    t = Transcript(p)
    cur = p
    while position_won(cur):
        if cur.rounds_left == 0:
            raise RuntimeError("spoiler line reached the end without breaking the pattern")
        choice = None
        for side in (LEFT, RIGHT):
            so, st = cur.side(side)
            oo, ot = cur.side(_other(side))
            for m in candidate_moves(so, st, cur.rounds_left):
                if not _has_reply(so, st, oo, ot, m, cur.rounds_left, side == RIGHT):
                    choice = side, m
                    break
            if choice:
                break
        if choice is None:
            raise RuntimeError("no winning spoiler move at a lost position")
        side, m = choice
        reply, failed = _machine_reply(cur, side, m)
        t.rounds.append(Round(side, m, reply, failed))
        cur = cur.extend(side, m, reply)
    return _finish(t)


# -- interactive play -------------------------------------------------------

MoveSource = Callable[[GamePosition, Optional[str]], Optional[tuple]]


def play_interactive(p: GamePosition, source: MoveSource, max_rejections: int = 100) -> Transcript:
    """Play the machine duplicator against ``source``.

    ``source(position, rejection)`` returns ``(side, element)`` or None to
    stop; after an illegal move it is called again with the rejection reason.
    """
    t = Transcript(p)
    cur = p
    rejection = None
    while cur.rounds_left > 0 and position_won(cur):
        move = source(cur, rejection)
        if move is None:
            break
        side, m = move
        if side not in (LEFT, RIGHT) or not belongs(cur.side(side)[0], m):
            rejection = f"illegal move {m!r} on side {side!r}"
            t.rejected.append(rejection)
            if len(t.rejected) >= max_rejections:
                break
            continue
        rejection = None
        reply, failed = _machine_reply(cur, side, m)
        t.rounds.append(Round(side, m, reply, failed))
        cur = cur.extend(side, m, reply)
    return _finish(t)


def scripted_source(moves) -> MoveSource:
    """A move source replaying ``moves`` in order, ignoring rejections."""
    it = iter(moves)

    def source(position, rejection):
        return next(it, None)
    return source
