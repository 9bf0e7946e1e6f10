"""Distance profiles of tuples in A x Z orders, realization of profiles,
type comparison, the quotient by finite distance, and the end-to-end report
certifying lex(Z,Z) and lex(Q,Z) as isotypic but not isomorphic."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .efgame import GamePosition, ef_decide, play_interactive, candidate_moves, LEFT, RIGHT
from .orders import (INF, Int, Lex, OrderExpr, _dist, cardinality, check_element,
                     enumerate_order, is_dense, is_discrete, window)

__all__ = [
    "DistanceProfile", "UnsupportedOrder", "profile", "types_equal",
    "realize_profile", "isotypy_report", "quotient", "class_of",
    "verify_quotient", "non_isomorphism_witness",
]


class UnsupportedOrder(ValueError):
    """The operation is only defined for lex(A, Z) with A infinite."""


@dataclass(frozen=True)
class DistanceProfile:
    length: int
    entries: tuple   # consecutive distances of the sorted tuple
    ranks: tuple     # dense rank of each position; encodes the permutation
    sorted: bool     # whether the input was already ascending


def profile(order: OrderExpr, t: Sequence) -> DistanceProfile:
    for x in t:
        check_element(order, x)
    s = sorted(t)
    entries = tuple(_dist(order, x, y) for x, y in zip(s, s[1:]))
    distinct = sorted(set(t))
    rank = {v: i for i, v in enumerate(distinct)}
    return DistanceProfile(len(t), entries, tuple(rank[x] for x in t), list(t) == s)


def _require_family(order: OrderExpr) -> None:
    if not (isinstance(order, Lex) and isinstance(order.right, Int)):
        raise UnsupportedOrder(f"expected lex(A,Z), got {order!r}")
    if cardinality(order.left) is not INF:
        raise UnsupportedOrder(f"left factor of {order!r} must be infinite")


def types_equal(A: OrderExpr, a: Sequence, B: OrderExpr, b: Sequence) -> bool:
    """Equal types in lex(A,Z) and lex(B,Z): same order pattern and same
    consecutive distances after sorting."""
    _require_family(A)
    _require_family(B)
    if len(a) != len(b):
        raise ValueError("tuples of different lengths")
    pa, pb = profile(A, a), profile(B, b)
    return pa.ranks == pb.ranks and pa.entries == pb.entries


def realize_profile(order: OrderExpr, entries: Sequence, max_search: int = 100_000) -> tuple:
    """Ascending tuple with the given consecutive distances.

    Starts at (first enumerated class, 0); an infinite step moves to the
    first enumerated class above the current one, a finite step d moves d
    along the current copy of Z.
    """
    _require_family(order)
    classes = enumerate_order(order.left)
    a = next(classes)
    seen = [a]
    k = 0
    out = [(a, k)]
    for d in entries:
        if d is INF:
            nxt = next((c for c in seen if c > a), None)
            while nxt is None:
                if len(seen) > max_search:
                    raise UnsupportedOrder(f"no class above {a!r} within the search bound")
                c = next(classes)
                seen.append(c)
                if c > a:
                    nxt = c
            a, k = nxt, 0
        else:
            if not isinstance(d, int) or d < 0:
                raise ValueError(f"profile entries must be naturals or INF, got {d!r}")
            k += d
        out.append((a, k))
    return tuple(out)


def _match_pattern(order: OrderExpr, t: Sequence, target: OrderExpr) -> tuple:
    """Realize the profile of ``t`` in ``target`` and arrange it in t's order."""
    s = realize_profile(target, profile(order, t).entries)
    perm = sorted(range(len(t)), key=lambda i: t[i])
    out = [None] * len(t)
    for k, i in enumerate(perm):
        out[i] = s[k]
    return tuple(out)


def quotient(order: OrderExpr) -> OrderExpr:
    """lex(A,Z) modulo finite distance is A."""
    if not (isinstance(order, Lex) and isinstance(order.right, Int)):
        raise UnsupportedOrder(f"expected lex(A,Z), got {order!r}")
    return order.left


def class_of(order: OrderExpr, x):
    quotient(order)
    check_element(order, x)
    return x[0]


def verify_quotient(order: OrderExpr, sample: Sequence) -> bool:
    """On the sample, finite distance is exactly equality of classes, and
    the class map is monotone for the quotient order."""
    quotient(order)
    for x in sample:
        for y in sample:
            same = class_of(order, x) == class_of(order, y)
            if (_dist(order, x, y) is not INF) != same:
                return False
            if not same and (x < y) != (x[0] < y[0]):
                return False
    return True


def non_isomorphism_witness(A: OrderExpr, B: OrderExpr) -> dict:
    """Certify lex(A,Z) and lex(B,Z) non-isomorphic when their quotients differ
    in being discrete versus dense."""
    from .parsing import format_order
    qa, qb = quotient(A), quotient(B)

    def kind(q):
        d, s = is_dense(q), is_discrete(q)
        return "dense" if d and not s else "discrete" if s and not d else None

    ka, kb = kind(qa), kind(qb)
    doc = {"left_quotient": format_order(qa), "right_quotient": format_order(qb)}
    if ka and kb and ka != kb:
        doc.update(status="witness", left_kind=ka, right_kind=kb,
                   property="forall x<y exists z (x<z<y)",
                   holds_in="left" if ka == "dense" else "right")
    else:
        doc["status"] = "inconclusive"
    return doc


def isotypy_report(A: OrderExpr, B: OrderExpr, max_len: int = 3, win: int = 5,
                   depth: int = 3, seed: int = 0, samples: int = 3) -> dict:
    """For every tuple of length <= max_len over the window of one order,
    realize its profile in the other and check type equality and the depth-N
    game, in both directions."""
    from .parsing import format_order, format_tuple
    _require_family(A)
    _require_family(B)
    rng = random.Random(seed)
    totals = {}
    failures = []
    sample_docs = []
    for name, X, Y in (("A->B", A, B), ("B->A", B, A)):
        elems = window(X, win)
        count = types_ok = games_ok = 0
        # types_equal and the game are invariant under permuting both tuples
        # the same way, so each sorted representative is evaluated once
        verdicts: dict = {}
        for n in range(1, max_len + 1):
            for t in itertools.product(elems, repeat=n):
                key = tuple(sorted(t))
                hit = verdicts.get(key)
                if hit is None:
                    u = _match_pattern(X, key, Y)
                    game = ef_decide(GamePosition(X, key, Y, u, depth))
                    hit = verdicts[key] = (types_equal(X, key, Y, u), game)
                te, game = hit
                count += 1
                types_ok += te
                games_ok += bool(game)
                if not (te and game):
                    failures.append({
                        "direction": name, "tuple": format_tuple(t),
                        "image": format_tuple(_match_pattern(X, t, Y)),
                        "types_equal": te, "game": bool(game),
                        **({"transcript": game.transcript.to_json()} if game.transcript else {}),
                    })
        totals[name] = {"tuples": count, "distinct_up_to_order": len(verdicts),
                        "types_equal": types_ok, "games_won": games_ok}
        for _ in range(samples):
            n = rng.randint(1, max_len)
            t = tuple(rng.choice(elems) for _ in range(n))
            u = _match_pattern(X, t, Y)
            p = GamePosition(X, t, Y, u, depth)
            sample_docs.append({"direction": name, "transcript": play_interactive(
                p, _random_spoiler(rng)).to_json()})
    return {
        "params": {"A": format_order(A), "B": format_order(B), "L": max_len,
                   "W": win, "N": depth, "seed": seed},
        "totals": totals,
        "failures": failures,
        "samples": sample_docs,
        "non_isomorphism": non_isomorphism_witness(A, B),
    }


def _random_spoiler(rng: random.Random):
    def source(position, rejection):
        side = rng.choice((LEFT, RIGHT))
        order, anchors = position.side(side)
        moves = candidate_moves(order, anchors, position.rounds_left)
        return (side, rng.choice(moves)) if moves else None
    return source
