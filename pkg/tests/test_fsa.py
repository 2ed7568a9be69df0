import itertools
import random

import pytest

from onerel.fsa import (
    EPS,
    Fsa,
    Gsm,
    all_words,
    any_of,
    empty,
    epsilon,
    factor_free,
    gsm_image,
    literal,
    nonempty_words,
)
from onerel.words import InvalidInputError

AB = frozenset("ab")


def words_upto(domain, k):
    for n in range(k + 1):
        for tup in itertools.product(sorted(domain), repeat=n):
            yield "".join(tup)


def a_star_b():
    # a*b as an NFA
    return literal(AB, "b").union(literal(AB, "a").plus().concat(literal(AB, "b")))


def test_accepts_basic():
    m = a_star_b()
    assert m.accepts("aab")
    assert not m.accepts("ba")
    assert not m.accepts("")
    with pytest.raises(InvalidInputError):
        m.accepts("ax")


def test_boolean_ops():
    contains_aba = all_words(AB).concat(literal(AB, "aba")).concat(all_words(AB))
    m = nonempty_words(AB).difference(contains_aba)
    assert m.accepts("abba")
    assert not m.accepts("abab")
    assert literal(AB, "a").intersect(literal(AB, "b")).is_empty()
    assert empty(AB).star().accepts("")
    assert not empty(AB).star().accepts("a")


def test_determinize_minimize_agree():
    nfa = all_words(AB).concat(literal(AB, "aba")).concat(all_words(AB))
    det = nfa.determinize()
    mini = nfa.minimize()
    for w in words_upto(AB, 8):
        r = nfa.accepts(w)
        assert det.accepts(w) == r
        assert mini.accepts(w) == r


def brute_nerode_classes(accept, domain, probe_len, word_len):
    """Distinct residual signatures of words of length <= word_len."""
    probes = list(words_upto(domain, probe_len))
    sigs = set()
    for w in words_upto(domain, word_len):
        sigs.add(tuple(accept(w + p) for p in probes))
    return len(sigs)


def test_minimize_state_count_factor_language():
    lang = factor_free(AB, literal(AB, "aba"))
    mini = lang.minimize()
    expected = brute_nerode_classes(lang.accepts, AB, 4, 4)
    assert expected == 5
    assert mini.n == 5
    assert mini.minimize().n == mini.n


def test_enumerate():
    m = a_star_b()
    got = ["".join(w) for w in m.enumerate_words(2)]
    assert got == ["b", "ab"]
    assert empty(AB).enumerate_words(5) == []
    no_aa = factor_free(AB, literal(AB, "aa"))
    got = no_aa.enumerate_words(3)
    assert len(got) == 2 + 3 + 5


def direct_no_aa_count(n):
    # words over {a,b} of length n with no factor aa
    def rec(prev_a, k):
        if k == 0:
            return 1
        total = rec(False, k - 1)  # place b
        if not prev_a:
            total += rec(True, k - 1)  # place a
        return total

    return rec(False, n) - (1 if n == 0 else 0)


def test_no_aa_count_matches_recursion():
    no_aa = factor_free(AB, literal(AB, "aa"))
    counts = no_aa.count_words(6)
    for n in range(1, 7):
        assert counts[n] == direct_no_aa_count(n)


def test_equivalence_and_counterexample():
    m1 = all_words(AB)
    m2 = empty(AB).complement()
    assert m1.equivalent(m2)
    a_star = literal(AB, "a").star()
    a_star_b = a_star.concat(literal(AB, "b"))
    w = a_star.shortest_distinguisher(a_star_b)
    assert w is not None and "".join(w) in ("", "b")
    assert literal(AB, "a").plus().intersect(literal(AB, "b").plus()).is_empty()


def test_complement_partition():
    rng = random.Random(5)
    m = factor_free(AB, any_of(AB, ["ab", "bb"]))
    c = m.complement()
    for _ in range(200):
        w = "".join(rng.choice("ab") for _ in range(rng.randrange(0, 8)))
        assert m.accepts(w) != c.accepts(w)


def random_nfa(rng, domain, n_states=5):
    trans = {}
    syms = sorted(domain)
    for _ in range(rng.randrange(4, 14)):
        s = rng.randrange(n_states)
        t = rng.randrange(n_states)
        sym = rng.choice(syms + [EPS])
        trans.setdefault((s, sym), set()).add(t)
    initial = {rng.randrange(n_states)}
    accepting = {rng.randrange(n_states) for _ in range(rng.randrange(1, 3))}
    return Fsa(domain, n_states, initial, accepting, trans)


def test_random_nfa_conversions():
    rng = random.Random(99)
    for _ in range(60):
        m = random_nfa(rng, AB)
        det = m.determinize()
        mini = m.minimize()
        for w in words_upto(AB, 5):
            r = m.accepts(w)
            assert det.accepts(w) == r and mini.accepts(w) == r
        assert m.equivalent(mini)


def test_equivalent_iff_enumerations_match():
    rng = random.Random(123)
    for _ in range(150):
        m1 = random_nfa(rng, AB)
        m2 = random_nfa(rng, AB)
        same = m1.equivalent(m2)
        e1 = ["".join(w) for w in m1.enumerate_words(8)]
        e2 = ["".join(w) for w in m2.enumerate_words(8)]
        if same:
            assert e1 == e2
            assert m1.minimize().n == m2.minimize().n
        else:
            w = m1.shortest_distinguisher(m2)
            assert m1.accepts(w) != m2.accepts(w)


def test_reverse_language():
    m = literal(AB, "ab").concat(literal(AB, "b").star())
    r = m.reverse()
    for w in words_upto(AB, 6):
        assert r.accepts(w) == m.accepts(w[::-1])


def test_right_quotient():
    m = any_of(AB, ["ab", "aab", "b"])
    q = m.right_quotient("b")
    got = sorted("".join(w) for w in q.enumerate_words(4))
    assert got == ["", "a", "aa"]


def test_serialization_roundtrip():
    m = a_star_b()
    text = m.to_text()
    back = Fsa.from_text(text)
    assert back.equivalent(m)
    dot = m.to_dot()
    assert dot.startswith("digraph")


def test_gsm_identity_and_padding():
    dom = frozenset("ab")
    ident = Gsm(
        1,
        dom,
        dom,
        {(0, "a"): [(0, "a")], (0, "b"): [(0, "b")]},
        0,
        {0},
    )
    lang = any_of(dom, ["ab", "b"])
    assert sorted("".join(w) for w in gsm_image(ident, lang).enumerate_words(4)) == ["ab", "b"]

    out_dom = frozenset("abe")
    pad = Gsm(
        1,
        dom,
        out_dom,
        {(0, "a"): [(0, "a")], (0, "b"): [(0, "be")]},
        0,
        {0},
    )
    img = gsm_image(pad, lang)
    assert sorted("".join(w) for w in img.enumerate_words(5)) == ["abe", "be"]
    assert pad.apply("ab") == {"abe"}


def test_gsm_two_state_chain():
    dom = frozenset("x")
    out_dom = frozenset("xe")
    g = Gsm(
        2,
        dom,
        out_dom,
        {(0, "x"): [(1, "x")], (1, "x"): [(1, "xe")]},
        0,
        {0, 1},
    )
    img = gsm_image(g, literal(dom, "xx"))
    assert sorted("".join(w) for w in img.enumerate_words(5)) == ["xxe"]


def test_gsm_image_bounded_soundness():
    rng = random.Random(7)
    dom = frozenset("ab")
    out_dom = frozenset("abe")
    g = Gsm(
        2,
        dom,
        out_dom,
        {
            (0, "a"): [(0, "a"), (1, "ae")],
            (0, "b"): [(0, "b")],
            (1, "a"): [(1, "e")],
            (1, "b"): [(0, "ba")],
        },
        0,
        {0},
    )
    for _ in range(40):
        m = random_nfa(rng, dom, 4)
        img = gsm_image(g, m)
        expected = set()
        for w in words_upto(dom, 5):
            if m.accepts(w):
                for out in g.apply(w):
                    if out and len(out) <= 6:
                        expected.add(out)
        got = {"".join(w) for w in img.enumerate_words(6)}
        # img may contain longer outputs of longer inputs; compare both ways boundedly
        for w in expected:
            assert img.accepts(w)
        for w in got:
            produced = any(
                out == w
                for u in words_upto(dom, 8)
                if m.accepts(u)
                for out in g.apply(u)
            )
            assert produced
