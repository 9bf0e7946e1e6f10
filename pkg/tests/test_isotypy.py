import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from isotypic.efgame import GamePosition, ef_decide
from isotypic.isotypy import (UnsupportedOrder, class_of, isotypy_report,
                              non_isomorphism_witness, profile, quotient, realize_profile,
                              types_equal, verify_quotient)
from isotypic.orders import INF, INT, RAT, Fin, Lex, window

ZZ = Lex(INT, INT)
QZ = Lex(RAT, INT)


def test_profile_examples():
    p = profile(ZZ, ((0, 2), (0, 0), (5, 1)))
    assert p.entries == (2, INF) and p.ranks == (1, 0, 2) and not p.sorted
    assert profile(QZ, ((F(1, 2), -1), (F(1, 2), 1), (F(3), 9))).entries == (2, INF)
    assert profile(ZZ, ((4, 4),)).entries == ()
    assert profile(ZZ, ((0, 1), (0, 1))).ranks == (0, 0)


def test_types_equal_examples():
    a = ((0, 0), (0, 2), (5, 1))
    b = ((F(1, 2), -1), (F(1, 2), 1), (F(3), 9))
    assert types_equal(ZZ, a, QZ, b)
    assert not types_equal(ZZ, ((0, 0), (0, 1)), ZZ, ((0, 0), (0, 2)))
    assert types_equal(QZ, b, QZ, b)
    # same distances, different arrangement
    assert not types_equal(ZZ, ((0, 0), (0, 2)), ZZ, ((0, 2), (0, 0)))
    with pytest.raises(ValueError):
        types_equal(ZZ, ((0, 0),), QZ, ())
    with pytest.raises(UnsupportedOrder):
        types_equal(INT, (0,), INT, (0,))
    with pytest.raises(UnsupportedOrder):
        types_equal(Lex(Fin(3), INT), ((0, 0),), ZZ, ((0, 0),))


def test_realize_examples():
    assert realize_profile(QZ, (INF, 2, INF)) == ((0, 0), (1, 0), (1, 2), (2, 0))
    assert realize_profile(ZZ, ()) == ((0, 0),)
    assert realize_profile(ZZ, (0, 3)) == ((0, 0), (0, 0), (0, 3))
    with pytest.raises(ValueError):
        realize_profile(ZZ, (-1,))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([ZZ, QZ]), st.lists(st.sampled_from([0, 1, 2, 3, 7, INF]), max_size=5))
def test_realize_then_profile_is_identity(order, entries):
    t = realize_profile(order, entries)
    assert profile(order, t).entries == tuple(entries)
    assert list(t) == sorted(t)


def test_types_equal_is_decided_by_games():
    # both a matched profile and a mismatched one at quantifier depth covering the distance
    assert ef_decide(GamePosition(ZZ, ((0, 0), (0, 2)), QZ, ((F(1, 5), 0), (F(1, 5), 2)), 3))
    assert not ef_decide(GamePosition(ZZ, ((0, 0), (0, 2)), QZ, ((F(1, 5), 0), (F(1, 5), 3)), 3))
    assert not ef_decide(GamePosition(ZZ, ((0, 0), (0, 2)), QZ, ((F(1, 5), 0), (F(2), 0)), 3))


def test_quotient_examples():
    assert quotient(ZZ) == INT
    assert quotient(QZ) == RAT
    assert class_of(ZZ, (3, -7)) == 3
    assert verify_quotient(ZZ, window(ZZ, 3))
    assert verify_quotient(QZ, window(QZ, 3))
    with pytest.raises(UnsupportedOrder):
        quotient(Lex(INT, RAT))


def test_witness_examples():
    w = non_isomorphism_witness(ZZ, QZ)
    assert w["status"] == "witness"
    assert (w["left_quotient"], w["left_kind"]) == ("Z", "discrete")
    assert (w["right_quotient"], w["right_kind"]) == ("Q", "dense")
    assert w["holds_in"] == "right"
    assert non_isomorphism_witness(ZZ, ZZ)["status"] == "inconclusive"
    assert non_isomorphism_witness(QZ, QZ)["status"] == "inconclusive"


def test_small_report():
    r = isotypy_report(ZZ, QZ, max_len=2, win=2, depth=3, seed=1)
    assert r["params"] == {"A": "lex(Z,Z)", "B": "lex(Q,Z)", "L": 2, "W": 2, "N": 3, "seed": 1}
    assert r["failures"] == []
    n = len(window(ZZ, 2))
    assert r["totals"]["A->B"]["tuples"] == n + n * n
    assert r["totals"]["A->B"]["games_won"] == n + n * n
    assert r["non_isomorphism"]["status"] == "witness"
    assert len(r["samples"]) == 6
    assert all(s["transcript"]["verdict"] == "duplicator-wins" for s in r["samples"])


def test_report_degenerate_cases():
    r = isotypy_report(QZ, QZ, max_len=2, win=2, depth=2)
    assert r["failures"] == [] and r["non_isomorphism"]["status"] == "inconclusive"
    r = isotypy_report(ZZ, QZ, max_len=1, win=3, depth=3)
    assert r["failures"] == [] and r["totals"]["B->A"]["tuples"] == 49


def test_report_records_failures(monkeypatch):
    from isotypic import isotypy
    from isotypic.efgame import GameResult, Transcript

    def lose(p):
        return GameResult(False, Transcript(p))

    monkeypatch.setattr(isotypy, "ef_decide", lose)
    r = isotypy_report(ZZ, QZ, max_len=2, win=1, depth=1, samples=0)
    assert len(r["failures"]) == 2 * (9 + 81)
    f = r["failures"][0]
    assert f["direction"] == "A->B" and f["types_equal"] and not f["game"]
    assert f["tuple"] == "[(-1,-1)]" and f["image"] == "[(0,0)]"
    assert "transcript" in f


def test_report_rejects_orders_outside_the_family():
    with pytest.raises(UnsupportedOrder):
        isotypy_report(Lex(Fin(3), INT), ZZ)
    with pytest.raises(UnsupportedOrder):
        isotypy_report(ZZ, RAT)


def test_every_singleton_pair_is_equivalent():
    for x, y in itertools.product(window(ZZ, 2), window(QZ, 2)):
        assert types_equal(ZZ, (x,), QZ, (y,))
