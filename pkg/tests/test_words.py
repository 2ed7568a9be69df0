import random

import pytest

from onerel.words import (
    Alphabet,
    InvalidInputError,
    LESS,
    EQUAL,
    GREATER,
    con,
    deglex_compare,
    deglex_key,
    occ,
    parse_word,
    prefix_t,
    reverse,
    suffix_t,
)

AB = Alphabet(("a", "b"))
ABC = Alphabet(("a", "b", "c"))


def test_alphabet_validation():
    with pytest.raises(InvalidInputError):
        Alphabet(("a", "a"))
    with pytest.raises(InvalidInputError):
        Alphabet(("a", "B"))
    with pytest.raises(InvalidInputError):
        Alphabet(("a",), identity="e")
    ext = AB.with_identity()
    assert ext.letters == ("e", "a", "b")
    assert ext.identity == "e"


def test_deglex_examples():
    assert deglex_compare("aba", "ba", AB) == GREATER
    assert deglex_compare("ba", "ab", AB) == GREATER
    assert deglex_compare("a", "a", AB) == EQUAL
    with pytest.raises(InvalidInputError):
        deglex_compare("ax", "a", AB)


def test_deglex_total_order_and_monomial():
    rng = random.Random(17)
    words = [
        "".join(rng.choice("abc") for _ in range(rng.randrange(0, 5))) for _ in range(80)
    ]
    ordered = sorted(words, key=lambda w: deglex_key(w, ABC))
    for x, y in zip(ordered, ordered[1:]):
        assert deglex_compare(x, y, ABC) in (LESS, EQUAL)
    for _ in range(1000):
        u, v, w = (rng.choice(words) for _ in range(3))
        if deglex_compare(u, v, ABC) == LESS:
            assert deglex_compare(w + u, w + v, ABC) == LESS
            assert deglex_compare(u + w, v + w, ABC) == LESS


def test_prefix_suffix():
    assert prefix_t("abc", 2) == "ab"
    assert prefix_t("abc", 5) == "abc"
    assert prefix_t("abc", 0) == ""
    assert suffix_t("abc", 2) == "bc"
    assert suffix_t("abc", 9) == "abc"
    assert suffix_t("abc", 0) == ""
    assert suffix_t("", 3) == ""


def test_prefix_suffix_split():
    for w in ("", "a", "abba", "cabab"):
        for t in range(len(w) + 1):
            assert prefix_t(w, t) + suffix_t(w, len(w) - t) == w


def test_occ_con():
    assert occ("a", "abababb") == 3
    assert occ("b", "abababb") == 4
    assert occ("c", "") == 0
    assert con("abababbc") == {"a", "b", "c"}
    assert con("") == set()
    assert con("aaa") == {"a"}
    for w in ("abba", "cab", ""):
        assert sum(occ(c, w) for c in con(w)) == len(w)


def test_reverse():
    assert reverse("abc") == "cba"
    assert reverse("") == ""
    assert reverse("aba") == "aba"
    rng = random.Random(3)
    for _ in range(50):
        w = "".join(rng.choice("ab") for _ in range(rng.randrange(8)))
        assert reverse(reverse(w)) == w
        assert occ("a", reverse(w)) == occ("a", w)


def test_parse_word():
    assert parse_word("1") == ""
    assert parse_word("") == ""
    assert parse_word(" aba ") == "aba"
