"""One test per acceptance criterion; each records PASS/FAIL for the summary."""

import itertools
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction as F

from conftest import ACCEPTANCE
from isotypic import efgame
from isotypic.efgame import GamePosition, ef_decide, position_won
from isotypic.hahnfield import (PrecisionError, Series, SupportMap, defect, hensel_lift, invert,
                                pas_check, random_term, term_degree)
from isotypic.isotypy import non_isomorphism_witness, realize_profile, types_equal
from isotypic.orders import INF, INT, RAT, Fin, Lex, dist, enumerate_order, window
from isotypic.ordgroups import GroupElement, arch_equiv, arch_equiv_bruteforce, verify_class_order
from isotypic.parsing import parse_order
from oracles import GamePrefix, binomial_half, counted_dist, game_oracle, lex_prefix

ZZ = Lex(INT, INT)
QZ = Lex(RAT, INT)


def record(num, ok, elapsed, limit, detail=""):
    within = limit is None or elapsed < limit
    budget = "" if limit is None else f" (limit {limit:g}s)"
    ACCEPTANCE[num] = (ok and within, f"{elapsed:.2f}s{budget} {detail}".rstrip())
    assert ok, detail
    assert within, f"took {elapsed:.2f}s, limit {limit}s"


def _cli(*argv, hashseed="0"):
    env = dict(os.environ, PYTHONHASHSEED=hashseed)
    return subprocess.run([sys.executable, "-m", "isotypic", *argv], capture_output=True,
                          env=env, timeout=900)


# 1 ------------------------------------------------------------------------

def test_criterion_1_distance_oracle():
    t0 = time.perf_counter()
    pairs = bad = 0
    for order in (ZZ, QZ, Lex(INT, Fin(3))):
        prefix = lex_prefix(order)
        elems = window(order, 6)
        for x, y in itertools.product(elems, repeat=2):
            pairs += 1
            bad += dist(order, x, y) != counted_dist(prefix, x, y, cutoff=64)
    record(1, bad == 0, time.perf_counter() - t0, 10, f"{pairs} pairs, {bad} disagreements")


# 2 ------------------------------------------------------------------------

def _placement(order, entries, rng):
    """A random ascending tuple with the given profile."""
    if order.left == INT:
        c = rng.randint(-5, 5)

        def step(c):
            return c + rng.randint(1, 4)
    else:
        c = F(rng.randint(-9, 9), rng.randint(1, 5))

        def step(c):
            return c + F(rng.randint(1, 9), rng.randint(1, 7))
    k = rng.randint(-6, 6)
    out = [(c, k)]
    for d in entries:
        if d is INF:
            c, k = step(c), rng.randint(-6, 6)
        else:
            k += d
        out.append((c, k))
    return tuple(out)


def profile_matched_pairs(seed=0):
    rng = random.Random(seed)
    pairs = []
    for n in (1, 2, 3):
        for entries in itertools.product((0, 1, 2, 3, INF), repeat=n - 1):
            a, b = realize_profile(ZZ, entries), realize_profile(QZ, entries)
            for perm in sorted(set(itertools.permutations(range(n)))):
                pairs.append((tuple(a[i] for i in perm), tuple(b[i] for i in perm)))
            for _ in range(2):
                a, b = _placement(ZZ, entries, rng), _placement(QZ, entries, rng)
                perm = rng.sample(range(n), n)
                pairs.append((tuple(a[i] for i in perm), tuple(b[i] for i in perm)))
    return pairs


def test_criterion_2_profile_matched_pairs_are_3_equivalent():
    efgame.clear_cache()
    t0 = time.perf_counter()
    pairs = profile_matched_pairs()
    assert all(types_equal(ZZ, a, QZ, b) for a, b in pairs)
    fails = sum(not ef_decide(GamePosition(ZZ, a, QZ, b, 3)) for a, b in pairs)
    ok = len(pairs) >= 200 and fails == 0
    record(2, ok, time.perf_counter() - t0, 300, f"{len(pairs)} pairs, {fails} failures")


# 3 ------------------------------------------------------------------------

MIXED_ORDERS = ("Fin(2)", "Fin(3)", "Fin(4)", "N", "Z", "Q", "lex(Z,Z)", "lex(Q,Z)",
                "lex(Z,Fin(3))", "lex(Fin(2),Z)", "lex(N,Fin(2))")


def mixed_instances(count=120, seed=7):
    rng = random.Random(seed)
    orders = [parse_order(s) for s in MIXED_ORDERS]
    heads = {o: list(itertools.islice(enumerate_order(o), 12)) for o in orders}
    out = []
    while len(out) < count:
        a, b = rng.choice(orders), rng.choice(orders)
        if rng.random() < 0.3:
            b = a
        k, n = rng.randint(0, 2), rng.randint(1, 2)
        lt = tuple(rng.choice(heads[a]) for _ in range(k))
        rt = tuple(rng.choice(heads[b]) for _ in range(k))
        out.append(GamePosition(a, lt, b, rt, n))
    return out


def test_criterion_3_candidate_sets_are_adequate():
    efgame.clear_cache()
    t0 = time.perf_counter()
    prefixes = {}
    agree = positive = 0
    instances = mixed_instances()
    for p in instances:
        for o in (p.left_order, p.right_order):
            if o not in prefixes:
                prefixes[o] = GamePrefix(o, moves=500)
        expected = game_oracle(prefixes[p.left_order], p.left, prefixes[p.right_order], p.right,
                               p.rounds_left)
        agree += bool(ef_decide(p)) == expected
        positive += expected
    n = len(instances)
    ok = n >= 50 and agree == n and 0 < positive < n
    record(3, ok, time.perf_counter() - t0, 300,
           f"{agree}/{n} agree ({positive} positive, {n - positive} negative)")


# 4 ------------------------------------------------------------------------

HEADLINE = ("isotypy", "report", "--A", "lex(Z,Z)", "--B", "lex(Q,Z)",
            "--len", "3", "--window", "5", "--depth", "3")


def test_criterion_4_headline_report():
    t0 = time.perf_counter()
    proc = _cli(*HEADLINE)
    doc = json.loads(proc.stdout)
    totals = doc["totals"]
    both = all(t["tuples"] == t["types_equal"] == t["games_won"] > 0 for t in totals.values())
    w = non_isomorphism_witness(ZZ, QZ)
    witness = (w["status"] == "witness" and (w["left_quotient"], w["left_kind"]) == ("Z", "discrete")
               and (w["right_quotient"], w["right_kind"]) == ("Q", "dense")
               and doc["non_isomorphism"] == w)
    ok = proc.returncode == 0 and not doc["failures"] and both and witness
    record(4, ok, time.perf_counter() - t0, 600,
           f"{totals['A->B']['tuples']} tuples per direction, {len(doc['failures'])} failures")


# 5 ------------------------------------------------------------------------

def test_criterion_5_negative_control():
    efgame.clear_cache()
    t0 = time.perf_counter()
    r = ef_decide(GamePosition(INT, (), RAT, (), 3))
    elapsed = time.perf_counter() - t0
    ok = (not r and r.transcript.verdict == efgame.SPOILER_WINS
          and not position_won(r.transcript.replay()))
    record(5, ok, elapsed, 1, f"{len(r.transcript.rounds)} rounds to a broken pattern")


# 6 ------------------------------------------------------------------------

ARCH_COEFFS = (F(1), F(-1), F(1, 2), F(-1, 2), F(3), F(-3))


def arch_elements(indices=(0, 1, 2, 3), max_support=2):
    out = [GroupElement(INT, {})]
    for k in range(1, max_support + 1):
        for support in itertools.combinations(indices, k):
            for cs in itertools.product(ARCH_COEFFS, repeat=k):
                out.append(GroupElement(INT, dict(zip(support, cs))))
    return out


def test_criterion_6_archimedean_classes():
    t0 = time.perf_counter()
    elems = arch_elements()
    bad = sum(arch_equiv(g, h) != arch_equiv_bruteforce(g, h, bound=1000)
              for g in elems for h in elems)
    # supports of size 3 and 4 by sampling
    rng = random.Random(6)
    full = arch_elements(max_support=4)
    sampled = 3000
    for _ in range(sampled):
        g, h = rng.choice(full), rng.choice(full)
        bad += arch_equiv(g, h) != arch_equiv_bruteforce(g, h, bound=1000)
    order_ok = verify_class_order(INT, [0, 1, 2, 3])
    record(6, bad == 0 and order_ok, time.perf_counter() - t0, 10,
           f"{len(elems) ** 2} exhaustive + {sampled} sampled pairs, {bad} disagreements")


# 7 ------------------------------------------------------------------------

P7 = GroupElement(INT, {1: 4})


def _random_series(rng):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        e = GroupElement(INT, {0: F(rng.randint(-4, 4), rng.choice((1, 2))),
                               1: rng.randint(-1, 3)})
        terms[e] = F(rng.choice((-3, -2, -1, 1, 2, 3)), rng.choice((1, 2)))
    return Series(INT, terms, P7)


def _reachable_series(rng):
    """Leading monomial plus terms whose ratio to it lies in the cutoff's class."""
    lead = GroupElement(INT, {0: rng.randint(-3, 3), 1: rng.randint(-1, 2)})
    terms = {lead: F(rng.choice((-2, -1, 1, 3)))}
    for _ in range(rng.randint(0, 3)):
        e = lead + GroupElement(INT, {0: rng.randint(-3, 3), 1: F(rng.randint(1, 4), 2)})
        terms[e] = F(rng.randint(-3, 3), rng.choice((1, 2)))
    return Series(INT, terms, P7)


def test_criterion_7_hahn_field_self_checks():
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = inverted = refused = 0
    for _ in range(500):
        f, g = _random_series(rng), _random_series(rng)
        h, s = f * g, f + g
        bad += h.val() != f.val() + g.val() or h.ang() != f.ang() * g.ang()
        if not s.is_zero():
            bad += s.val() < min(f.val(), g.val())
            bad += f.val() != g.val() and s.val() != min(f.val(), g.val())
        for u in (f, g, _reachable_series(rng)):
            try:
                w = invert(u)
            except PrecisionError:
                refused += 1
                gamma = u.val()
                bad += not any((e - gamma)[1] == 0 for e in u.terms if e != gamma)
                continue
            inverted += 1
            prod = u * w
            bad += not prod.congruent(Series.constant(INT, 1, prod.prec))
    p8 = GroupElement(INT, {0: 8})
    one, x = Series.constant(INT, 1, p8), Series.x(INT, 0, p8)
    coeffs = [-(one + x), Series.constant(INT, 0, p8), one]
    z = hensel_lift(coeffs, 1)
    d = defect(coeffs, z)
    hensel_ok = ((d.is_zero() or d.val() >= p8)
                 and z.terms == {GroupElement(INT, {0: k}): binomial_half(k) for k in range(8)})
    record(7, bad == 0 and hensel_ok, time.perf_counter() - t0, 30,
           f"500 pairs, {inverted} inverses checked, {refused} refused, {bad} violations")


# 8 ------------------------------------------------------------------------

def test_criterion_8_pas_checks():
    t0 = time.perf_counter()
    rng = random.Random(8)
    prec = GroupElement(INT, {2: 3})
    passed = 0
    for _ in range(50):
        n = rng.randint(1, 3)
        xs = []
        for _ in range(n):
            f = Series.constant(INT, rng.choice((0, 1, -2)), prec)
            for _ in range(rng.randint(1, 2)):
                e = {i: F(rng.randint(0, 3), rng.choice((1, 2))) for i in rng.sample(range(3), 2)}
                f = f + Series.monomial(INT, e, rng.choice((1, -1, 2, F(1, 3))), prec)
            xs.append(f)
        targets = sorted(rng.sample(range(-20, 20), 3))
        sigma = SupportMap(INT, RAT, {i: F(t, 3) for i, t in enumerate(targets)})
        term = random_term(rng, n, max_degree=3)
        assert term_degree(term) <= 3
        passed += pas_check([term], xs, sigma).passed
    record(8, passed == 50, time.perf_counter() - t0, 30, f"{passed}/50 terms pass")


# 9 ------------------------------------------------------------------------

def test_criterion_9_determinism():
    t0 = time.perf_counter()
    commands = [
        ("isotypy", "report", "--A", "lex(Z,Z)", "--B", "lex(Q,Z)", "--len", "2", "--window", "3",
         "--depth", "3", "--seed", "11"),
        ("ef", "check", "--left", "Z", "--right", "Q", "--rounds", "3"),
        ("hahn", "pas", "--order", "Z", "--prec", "{2:3}", "--target", "Q", "--map",
         "{0:-1,1:1/2,2:5}", "--xi", "1 + x[0]", "--xi", "x[1]^{1/2}", "--random-terms", "20",
         "--seed", "4"),
    ]
    same = 0
    for argv in commands:
        a, b = _cli(*argv, hashseed="1"), _cli(*argv, hashseed="2")
        same += a.returncode == 0 and a.stdout == b.stdout and a.stdout != b""
    record(9, same == len(commands), time.perf_counter() - t0, None,
           f"{same}/{len(commands)} commands byte-identical")
