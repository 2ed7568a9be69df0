import itertools
import random

import pytest

from onerel.fsa import Fsa, any_of, literal
from onerel.pairs import (
    LEFT,
    PAD,
    RIGHT,
    Concat,
    DiagOf,
    IntersectPairs,
    OdotL,
    OdotR,
    PairConst,
    Plus,
    Star,
    async_reading,
    convolve,
    convolve_left,
    convolve_right,
    diagonal,
    eval_expr,
    odot_left,
    odot_right,
    pair_domain,
    pairs_product,
    resync,
    swap_side,
    unconvolve,
    wellformed,
)
from onerel.words import InvalidInputError

AB = frozenset("ab")


def words_upto(domain, k):
    for n in range(k + 1):
        for tup in itertools.product(sorted(domain), repeat=n):
            yield "".join(tup)


def test_convolutions_paper_cases():
    assert convolve_right("abb", "ba") == (("a", "b"), ("b", "a"), ("b", PAD))
    assert convolve_right("ab", "abc") == (("a", "a"), ("b", "b"), (PAD, "c"))
    assert convolve_right("ab", "ab") == (("a", "a"), ("b", "b"))
    assert convolve_left("abb", "ba") == (("a", PAD), ("b", "b"), ("b", "a"))
    assert convolve_left("ab", "abc") == ((PAD, "a"), ("a", "b"), ("b", "c"))
    assert convolve_left("a", "a") == (("a", "a"),)
    with pytest.raises(InvalidInputError):
        convolve_right("", "")


def test_unconvolve_roundtrip():
    for u in words_upto(AB, 4):
        for v in words_upto(AB, 4):
            if not u and not v:
                continue
            assert unconvolve(convolve_right(u, v), RIGHT) == (u, v)
            assert unconvolve(convolve_left(u, v), LEFT) == (u, v)
    assert len(convolve_right("abb", "b")) == 3
    with pytest.raises(InvalidInputError):
        unconvolve((), RIGHT)
    with pytest.raises(InvalidInputError):
        unconvolve((("a", PAD), ("b", "b")), RIGHT)  # padding at wrong end


def test_wellformed():
    wr = wellformed("ab", RIGHT)
    assert wr.accepts(convolve_right("ab", "b"))
    assert not wr.accepts((("a", PAD), ("b", "b")))
    wl = wellformed("ab", LEFT)
    assert wl.accepts(convolve_left("ab", "b"))
    assert not wl.accepts((("a", "b"), ("b", PAD)))


def test_diagonal():
    lang = any_of(AB, ["a", "ab"])
    d = diagonal(lang)
    assert d.accepts((("a", "a"),))
    assert d.accepts((("a", "a"), ("b", "b")))
    assert not d.accepts((("a", "b"),))
    for w in d.enumerate_words(6):
        u, v = unconvolve(w, RIGHT)
        assert u == v and lang.accepts(u)
    empty_diag = diagonal(any_of(AB, []))
    assert empty_diag.is_empty()
    full = diagonal(literal(AB, "b").union(literal(AB, "a")).plus())
    assert full.accepts((("b", "b"), ("a", "a")))


def pairs_as_fsa(pairs, side, letters="ab"):
    dom = pair_domain(letters)
    return any_of(dom, [convolve(u, v, side) for (u, v) in pairs])


def test_resync_brute_force():
    rng = random.Random(42)
    dom = pair_domain("ab")
    all_words_ab = [w for w in words_upto(AB, 3)]
    for _ in range(40):
        rel = set()
        for _ in range(rng.randrange(1, 5)):
            u = rng.choice(all_words_ab)
            v = rng.choice(all_words_ab)
            if u or v:
                rel.add((u, v))
        src_side = rng.choice([RIGHT, LEFT])
        dst_side = rng.choice([RIGHT, LEFT])
        m = pairs_as_fsa(rel, src_side)
        out = resync(m, dst_side, cap=4)
        expected = {convolve(u, v, dst_side) for (u, v) in rel}
        got = {tuple(w) for w in out.enumerate_words(5)}
        assert got == expected


def test_odot_right_singletons():
    m = pairs_as_fsa([("ab", "a")], RIGHT)
    n = pairs_as_fsa([("c", "c")], RIGHT, letters="abc")
    out = odot_right(m, n, bound=1)
    assert {tuple(w) for w in out.enumerate_words(4)} == {
        (("a", "a"), ("b", "c"), ("c", PAD))
    }
    m2 = pairs_as_fsa([("ab", "abc")], RIGHT, letters="abc")
    n2 = pairs_as_fsa([("b", "b")], RIGHT, letters="abc")
    out2 = odot_right(m2, n2, bound=1)
    assert {async_reading(w) for w in out2.enumerate_words(6)} == {("abb", "abcb")}
    out3 = odot_right(pairs_as_fsa([], RIGHT), n, bound=1)
    assert out3.is_empty()


def test_odot_left_singletons():
    m = pairs_as_fsa([("ab", "b")], LEFT)
    n = pairs_as_fsa([("a", "a")], LEFT)
    out = odot_left(m, n, 1, 0)
    assert {tuple(w) for w in out.enumerate_words(4)} == {convolve_left("aba", "ba")}
    d1 = diagonal(literal(AB, "ab"))
    d2 = diagonal(literal(AB, "b").star())
    out2 = odot_left(d1, d2, 0, 0)
    for w in out2.enumerate_words(5):
        u, v = unconvolve(w, LEFT)
        assert u == v and u.startswith("ab")


def test_odot_brute_force_random():
    rng = random.Random(2024)
    cases = 0
    while cases < 1000:
        c = rng.randrange(0, 4)
        rel1 = set()
        rel2 = set()
        for _ in range(rng.randrange(1, 4)):
            u = "".join(rng.choice("ab") for _ in range(rng.randrange(0, 5)))
            dv = rng.randrange(-min(c, len(u)), c + 1)
            v = "".join(rng.choice("ab") for _ in range(max(0, len(u) + dv)))
            if (u or v) and abs(len(u) - len(v)) <= c:
                rel1.add((u, v))
        for _ in range(rng.randrange(1, 4)):
            u = "".join(rng.choice("ab") for _ in range(rng.randrange(0, 5)))
            v = "".join(rng.choice("ab") for _ in range(rng.randrange(0, 5)))
            if u or v:
                rel2.add((u, v))
        if not rel1 or not rel2:
            continue
        cases += 1
        m = pairs_as_fsa(rel1, RIGHT)
        n = pairs_as_fsa(rel2, RIGHT)
        out = odot_right(m, n, bound=c)
        expected = {
            convolve_right(u1 + u2, v1 + v2)
            for (u1, v1) in rel1
            for (u2, v2) in rel2
            if u1 + u2 or v1 + v2
        }
        got = {tuple(w) for w in out.enumerate_words(8)}
        expected = {w for w in expected if len(w) <= 8}
        assert got == expected, (rel1, rel2, c)


def test_swap_side_roundtrip():
    m = pairs_as_fsa([("ab", "b")], RIGHT)
    out = swap_side(m, 1, RIGHT)
    assert {tuple(w) for w in out.enumerate_words(3)} == {convolve_left("ab", "b")}
    # diagonals are fixed points
    d = diagonal(any_of(AB, ["ab", "ba", "a"]))
    assert swap_side(d, 0, RIGHT).equivalent(d)
    # relation (a^n b, a^n) round trip
    rel = [("a" * n + "b", "a" * n) for n in range(5)]
    m2 = pairs_as_fsa(rel, RIGHT)
    there = swap_side(m2, 1, RIGHT)
    assert {tuple(w) for w in there.enumerate_words(6)} == {
        convolve_left(u, v) for (u, v) in rel if len(u) <= 6
    }
    back = swap_side(there, 1, LEFT)
    assert back.equivalent(m2.intersect(wellformed("ab", RIGHT)))


def test_pairs_product():
    l1 = any_of(AB, ["a", "ab"])
    l2 = any_of(AB, ["b", "ba"])
    got = {tuple(w) for w in pairs_product(l1, l2, RIGHT).enumerate_words(4)}
    expected = {
        convolve_right(u, v) for u in ("a", "ab") for v in ("b", "ba")
    }
    assert got == expected
    gotl = {tuple(w) for w in pairs_product(l1, l2, LEFT).enumerate_words(4)}
    assert gotl == {convolve_left(u, v) for u in ("a", "ab") for v in ("b", "ba")}
    assert pairs_product(any_of(AB, []), l2, RIGHT).is_empty()


def test_eval_expr_examples():
    lang = any_of(AB, ["a", "ab", "b"]).union(literal(AB, "ba"))
    # Δ_L · ($, a) equals {(α, αa)} on short words
    expr = Concat((DiagOf(lang), PairConst("", "a", RIGHT)))
    m = eval_expr(expr, "ab")
    expected = {convolve_right(w, w + "a") for w in ("a", "ab", "b", "ba")}
    assert {tuple(w) for w in m.enumerate_words(6)} == expected

    star = Star(PairConst("ac", "ac", RIGHT))
    ms = eval_expr(star, "abc")
    assert ms.accepts(convolve_right("acac", "acac"))
    assert not ms.accepts(convolve_right("ac", "ca"))

    guarded = IntersectPairs(
        Concat((DiagOf(lang, with_epsilon=True), PairConst("", "a", RIGHT))),
        any_of(AB, ["ab"]),
        any_of(AB, ["aba"]),
        RIGHT,
    )
    mg = eval_expr(guarded, "ab")
    assert {tuple(w) for w in mg.enumerate_words(5)} == {convolve_right("ab", "aba")}

    od = OdotR(DiagOf(lang), Plus(PairConst("a", "", RIGHT)), 0)
    mo = eval_expr(od, "ab")
    for w in mo.enumerate_words(6):
        u, v = unconvolve(w, RIGHT)
        assert u == v + "a" * (len(u) - len(v)) and lang.accepts(v)
