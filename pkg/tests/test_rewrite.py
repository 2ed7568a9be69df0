import itertools
import random

import pytest

from onerel.fsa import any_of, literal
from onerel.rewrite import (
    BOUNDED,
    COMPLETE,
    RewriteSystem,
    Rule,
    RuleSchema,
    TrivialRelationError,
    compositions,
    congruence_closure,
    congruence_equal,
    embed_identity,
    orient,
    parse_presentation,
    shirshov_complete,
)
from onerel.words import Alphabet, InvalidInputError

CA = Alphabet(("c", "a"))  # c < a, so aa > cc
BA = Alphabet(("b", "a"))  # b < a
AB = Alphabet(("a", "b"))
XBA = Alphabet(("x", "b", "a"))
XA = Alphabet(("x", "a"))
AY = Alphabet(("a", "y"))


def words_upto(letters, k):
    for n in range(k + 1):
        for tup in itertools.product(letters, repeat=n):
            yield "".join(tup)


def test_orient():
    assert orient("ba", "ab", AB) == Rule("ba", "ab")
    assert orient("cc", "aa", CA) == Rule("aa", "cc")
    assert orient("b", "aab", AB) == Rule("aab", "b")
    with pytest.raises(TrivialRelationError):
        orient("ab", "ab", AB)
    with pytest.raises(InvalidInputError):
        orient("", "", AB)


def test_compositions_examples():
    r = Rule("aa", "cc")
    assert compositions(r, r) == [("aaa", "cca", "acc")]
    r2 = Rule("ab", "cd")
    assert compositions(r2, r2) == []
    r3 = Rule("aba", "ba")
    assert compositions(r3, r3) == [("ababa", "baba", "abba")]
    # inclusion
    big = Rule("abba", "x")
    small = Rule("bb", "c")
    assert compositions(big, small) == [("abba", "x", "aca")]


def test_reduce_examples_with_oracle():
    rs = RewriteSystem(CA, [Rule("aa", "cc"), Rule("acc", "cca")])
    rels = [("aa", "cc")]
    assert congruence_equal("aac", "ccc", rels, cap=8) == "equal"
    assert rs.reduce("aac") == "ccc"
    assert not rs.is_reducible("ccc")

    rs2 = RewriteSystem(BA, [Rule("aba", "ba")])
    assert rs2.reduce("abab") == "bab"
    assert congruence_equal("abab", "bab", [("aba", "ba")], cap=8) == "equal"
    assert not rs2.is_reducible("bab")
    assert rs2.reduce("bbb") == "bbb"


def test_schema_matching_in_reduce():
    schema = RuleSchema("a", "b", "a", "", "b", "a", 1)
    rs = RewriteSystem(BA, [], [schema])
    assert rs.reduce("abba") == "bba"
    # the redex at position 1 fires, then the whole prefix collapses
    assert rs.reduce("aabbba") == "bbba"
    assert rs.reduce("bab") == "bab"
    assert rs.reduce("abab") == "bab"


def complete_rules(rels, alphabet, **kw):
    rs = shirshov_complete(rels, alphabet, **kw)
    return rs, set(rs.rules), set(rs.schemas)


def test_completion_paper_bases_finite():
    rs, rules, schemas = complete_rules([("aa", "cc")], CA)
    assert rs.complete_flag == COMPLETE
    assert rules == {Rule("aa", "cc"), Rule("acc", "cca")} and not schemas

    rs, rules, schemas = complete_rules([("aaa", "bbb")], BA)
    assert rs.complete_flag == COMPLETE
    assert rules == {Rule("aaa", "bbb"), Rule("abbb", "bbba")} and not schemas

    rs, rules, schemas = complete_rules([("aba", "bb")], BA)
    assert rs.complete_flag == COMPLETE
    assert rules == {Rule("aba", "bb"), Rule("abbb", "bbba")} and not schemas

    rs, rules, schemas = complete_rules([("aba", "x")], XBA)
    assert rs.complete_flag == COMPLETE
    assert rules == {Rule("aba", "x"), Rule("abx", "xba")} and not schemas

    rs, rules, schemas = complete_rules([("aaa", "x")], XA)
    assert rs.complete_flag == COMPLETE
    assert rules == {Rule("aaa", "x"), Rule("ax", "xa")} and not schemas


def leading_words(rs, k):
    return {"".join(w) for w in rs.leading_language().enumerate_words(k)}


def test_completion_schema_families():
    # aba = ba : {a b^i a -> b^i a}
    rs, rules, schemas = complete_rules([("aba", "ba")], BA)
    assert rs.complete_flag == COMPLETE
    assert not rules
    assert schemas == {RuleSchema("a", "b", "a", "", "b", "a", 1)}

    # aba = ab : {a b^i a -> a b^i}
    rs, rules, schemas = complete_rules([("aba", "ab")], BA)
    assert rs.complete_flag == COMPLETE
    assert not rules
    assert schemas == {RuleSchema("a", "b", "a", "a", "b", "", 1)}

    # aba = ay : {a y^i b a -> a y^(i+1)}
    rs, rules, schemas = complete_rules([("aba", "ay")], Alphabet(("y", "b", "a")))
    assert rs.complete_flag == COMPLETE
    assert not rules
    assert schemas == {RuleSchema("a", "y", "ba", "ay", "y", "", 0)}

    # aaa = xa : {aaa -> xa} + {a x^i a -> x^i aa}
    rs, rules, schemas = complete_rules([("aaa", "xa")], XA)
    assert rs.complete_flag == COMPLETE
    assert rules == {Rule("aaa", "xa")}
    assert schemas == {RuleSchema("a", "x", "a", "", "x", "aa", 1)}

    # aaa = ay : {aaa -> ay} + {a y^i a -> aa y^i}
    rs, rules, schemas = complete_rules([("aaa", "ay")], AY)
    assert rs.complete_flag == COMPLETE
    assert rules == {Rule("aaa", "ay")}
    assert schemas == {RuleSchema("a", "y", "a", "aa", "y", "", 1)}

    # aba = bab : {aba -> bab} + the pumped tail family
    rs, rules, schemas = complete_rules([("aba", "bab")], BA)
    assert rs.complete_flag == COMPLETE
    assert rules == {Rule("aba", "bab")}
    lead = rs.leading_language()
    dom = frozenset("ab")
    expected = any_of(dom, ["aba"]).union(
        literal(dom, "ab").concat(literal(dom, "b").plus()).concat(literal(dom, "ab"))
    )
    assert lead.equivalent(expected)


def test_schema_instances_match_plain_completion():
    for rels, alphabet in [
        ([("aba", "ba")], BA),
        ([("aba", "ab")], BA),
        ([("aaa", "xa")], XA),
        ([("aaa", "ay")], AY),
    ]:
        rs = shirshov_complete(rels, alphabet)
        plain = shirshov_complete(rels, alphabet, max_rules=40, detect_schemas=False)
        assert plain.complete_flag == BOUNDED
        pool = set(plain.rules)
        for s in rs.schemas:
            for i in range(s.min_i, s.min_i + 9):
                assert s.instance(i) in pool, (s, i)


def test_leading_and_irr_languages():
    rs = RewriteSystem(BA, [Rule("aba", "ba")])
    assert leading_words(rs, 4) == {"aba"}
    schema_rs = RewriteSystem(BA, [], [RuleSchema("a", "b", "a", "", "b", "a", 1)])
    assert leading_words(schema_rs, 5) == {"aba", "abba", "abbba"}
    irr = schema_rs.irr_language()
    assert irr.accepts("bab")
    assert not irr.accepts("abba")
    assert not irr.accepts("")
    empty_rs = RewriteSystem(BA, [])
    assert empty_rs.leading_language().is_empty()
    assert empty_rs.irr_language().accepts("abab")


def test_irr_language_with_identity():
    rs = RewriteSystem(AB, [Rule("ab", "a")])
    lang = rs.irr_language(with_identity="e")
    assert lang.accepts("e")
    assert lang.accepts("ba")
    assert not lang.accepts("ab")
    assert not lang.accepts("ae")
    assert not lang.accepts("ee")


def test_embed_identity_monoid():
    ext, rels = embed_identity(AB, [("aba", "")])
    assert ext.letters == ("e", "a", "b")
    rs = shirshov_complete(rels, ext)
    assert rs.complete_flag == COMPLETE
    # interreduction drops aba->e (already joined through ba->ab, aab->e)
    assert set(rs.rules) == {
        Rule("aab", "e"),
        Rule("ba", "ab"),
        Rule("ae", "a"),
        Rule("ea", "a"),
        Rule("be", "b"),
        Rule("eb", "b"),
        Rule("ee", "e"),
    }
    assert rs.reduce("aba") == "e"
    # the normal-form language matches the redundant leading set as well
    dom = frozenset("eab")
    redundant = any_of(dom, ["aba", "aab", "ba", "ae", "ea", "be", "eb", "ee"])
    from onerel.fsa import factor_free

    assert rs.irr_language().equivalent(factor_free(dom, redundant))
    nf = {"".join(w) for w in rs.irr_language().enumerate_words(3)}
    assert "e" in nf and "ab" in nf and "abb" in nf
    assert "ba" not in nf and "aab" not in nf


def test_congruence_oracle():
    assert congruence_equal("w", "w", [("aba", "ba")], cap=10) == "equal"
    assert congruence_equal("a", "b", [("aba", "ba")], cap=10) == "distinct_up_to_cap"
    cls = congruence_closure("ba", [("aba", "ba")], cap=7)
    assert "aba" in cls and "aaba" in cls
    assert "ab" not in cls


def test_reduce_soundness_and_monotonicity():
    rng = random.Random(11)
    systems = [
        ([("aa", "cc")], CA),
        ([("aba", "ba")], BA),
        ([("aaa", "xa")], XA),
        ([("aba", "bab")], BA),
    ]
    for rels, alphabet in systems:
        rs = shirshov_complete(rels, alphabet)
        letters = alphabet.letters
        for _ in range(60):
            w = "".join(rng.choice(letters) for _ in range(rng.randrange(1, 7)))
            step = rs.rewrite_once(w)
            if step is not None:
                assert congruence_equal(w, step, rels, cap=14) == "equal"
                assert len(step) <= len(w)
            assert len(rs.reduce(w)) <= len(w)


def random_reduce(rs, word, rng):
    """Reduce with random redex choice; complete systems must not care."""
    while True:
        hits = []
        for pos in range(len(word)):
            for r in rs.rules:
                if word.startswith(r.lhs, pos):
                    hits.append((pos, len(r.lhs), r.rhs))
            for s in rs.schemas:
                if word.startswith(s.lhs_pre, pos):
                    p = pos + len(s.lhs_pre)
                    reps = 0
                    while word.startswith(s.lhs_pump, p):
                        p += len(s.lhs_pump)
                        reps += 1
                    for j in range(s.min_i, reps + 1):
                        end = pos + len(s.lhs_pre) + j * len(s.lhs_pump)
                        if word.startswith(s.lhs_suf, end):
                            hits.append(
                                (
                                    pos,
                                    len(s.lhs_pre) + j * len(s.lhs_pump) + len(s.lhs_suf),
                                    s.rhs_pre + s.rhs_pump * j + s.rhs_suf,
                                )
                            )
        if not hits:
            return word
        pos, length, repl = rng.choice(hits)
        word = word[:pos] + repl + word[pos + length:]


def test_confluence_of_complete_systems():
    rng = random.Random(23)
    for rels, alphabet in [
        ([("aa", "cc")], CA),
        ([("aba", "ba")], BA),
        ([("aba", "bab")], BA),
        ([("aaa", "ay")], AY),
    ]:
        rs = shirshov_complete(rels, alphabet)
        assert rs.complete_flag == COMPLETE
        for w in words_upto(alphabet.letters, 7):
            if not w:
                continue
            nf = rs.reduce(w)
            for _ in range(3):
                assert random_reduce(rs, w, rng) == nf


def test_class_count_matches_irr():
    # composition-diamond at desk scale
    for rels, alphabet in [
        ([("aa", "cc")], CA),
        ([("aba", "ba")], BA),
        ([("aba", "x")], XBA),
    ]:
        rs = shirshov_complete(rels, alphabet)
        letters = alphabet.letters
        depth = 5 if len(letters) == 3 else 6
        nfs = set()
        for w in words_upto(letters, depth):
            if w:
                nfs.add(rs.reduce(w))
        irr = {"".join(x) for x in rs.irr_language().enumerate_words(depth)}
        assert nfs == irr


def test_parse_presentation():
    alphabet, rels = parse_presentation("gens: a,b\nrel: aba = ba\nrel: bb=1\n")
    assert alphabet.letters == ("a", "b")
    assert rels == [("aba", "ba"), ("bb", "")]
    with pytest.raises(InvalidInputError):
        parse_presentation("rel: a=b")
