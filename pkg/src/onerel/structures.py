"""Automatic-structure data, the bounded verifier, and the Nerode estimator.

A structure is a normal-form acceptor plus one multiplier automaton per
(letter, flavor).  Flavors name the multiplication side and the convolution
side: "rr"/"rl" are right-convolution (padding at the end), "lr"/"ll" are
left-convolution; the first letter says which side multiplies ("r"ight
multiplication for rr/lr, "l"eft for rl/ll... see FLAVOR tables below).

Verification never trusts the construction: positives come from the
rewriting system (reduce), negatives are everything else in the bounded
universe, and the report carries concrete counterexample pairs.
"""

import os
from dataclasses import dataclass, field

from .fsa import Fsa, any_of, epsilon, literal
from .pairs import (
    LEFT,
    PAD,
    RIGHT,
    convolve,
    diagonal,
    pair_domain,
    swap_side,
    unconvolve,
)
from .words import InvalidInputError, reverse as reverse_word

FLAVORS = ("rr", "lr", "rl", "ll")

# convolution side of each flavor
FLAVOR_SIDE = {"rr": RIGHT, "rl": RIGHT, "lr": LEFT, "ll": LEFT}
# which side the letter multiplies on
FLAVOR_MULT = {"rr": "right", "lr": "right", "rl": "left", "ll": "left"}
# flavor swap under word reversal
FLAVOR_REV = {"rr": "ll", "ll": "rr", "rl": "lr", "lr": "rl"}
# flavor with the same relation, other convolution side
FLAVOR_OTHER_SIDE = {"rr": "lr", "lr": "rr", "rl": "ll", "ll": "rl"}

EPSILON_LETTER = ""


class AutomaticStructure:
    """Normal-form acceptor with per-letter multiplier automata."""

    def __init__(
        self,
        letters,
        language,
        multipliers,
        prefix_equality=None,
        uniqueness=True,
        case="",
        provenance="",
        canonical=None,
        relation=None,
        mode="semigroup",
    ):
        self.letters = tuple(letters)
        self.language = language
        self.multipliers = dict(multipliers)
        self.prefix_equality = prefix_equality
        self.uniqueness = uniqueness
        self.case = case
        self.provenance = provenance
        self.canonical = canonical
        self.relation = relation  # (u, v) as given, for round trips
        self.mode = mode
        dom = pair_domain(self.letters)
        for (letter, flavor), m in self.multipliers.items():
            if flavor not in FLAVORS:
                raise InvalidInputError("unknown flavor %r" % flavor)
            if letter != EPSILON_LETTER and letter not in self.letters:
                raise InvalidInputError("multiplier letter %r not in alphabet" % letter)
            if m.domain != dom:
                raise InvalidInputError("multiplier (%r,%s) has wrong pair domain" % (letter, flavor))

    def flavors(self):
        return sorted({flavor for (_l, flavor) in self.multipliers})

    def nf(self, word):
        if self.canonical is None:
            raise InvalidInputError("structure has no canonical-form map attached")
        return self.canonical(word)

    # ------------------------------------------------------------ persistence

    def save(self, path):
        os.makedirs(path, exist_ok=True)
        with open(os.path.join(path, "acceptor.fsa"), "w") as f:
            f.write(self.language.to_text())
        for (letter, flavor), m in sorted(self.multipliers.items()):
            name = "mult_%s_%s.fsa" % (letter if letter else "eps", flavor)
            with open(os.path.join(path, name), "w") as f:
                f.write(m.to_text())
        if self.prefix_equality is not None:
            with open(os.path.join(path, "prefix_eq.fsa"), "w") as f:
                f.write(self.prefix_equality.to_text())
        with open(os.path.join(path, "meta"), "w") as f:
            f.write("case=%s\n" % self.case)
            f.write("letters=%s\n" % ",".join(self.letters))
            if self.relation is not None:
                f.write("relation=%s=%s\n" % (self.relation[0] or "1", self.relation[1] or "1"))
            f.write("mode=%s\n" % self.mode)
            f.write("uniqueness=%s\n" % ("yes" if self.uniqueness else "no"))
            f.write("provenance=%s\n" % self.provenance)

    @staticmethod
    def load(path):
        with open(os.path.join(path, "meta")) as f:
            meta = dict(line.strip().split("=", 1) for line in f if "=" in line)
        # the relation value may itself contain '=': rejoin
        case = meta.get("case", "")
        letters = tuple(meta.get("letters", "").split(",")) if meta.get("letters") else ()
        relation = None
        with open(os.path.join(path, "meta")) as f:
            for line in f:
                line = line.strip()
                if line.startswith("relation="):
                    body = line[len("relation="):]
                    u, v = body.split("=", 1)
                    relation = ("" if u == "1" else u, "" if v == "1" else v)
        with open(os.path.join(path, "acceptor.fsa")) as f:
            language = Fsa.from_text(f.read())
        multipliers = {}
        for name in sorted(os.listdir(path)):
            if not name.startswith("mult_") or not name.endswith(".fsa"):
                continue
            stem = name[len("mult_"):-len(".fsa")]
            letter_part, flavor = stem.rsplit("_", 1)
            letter = "" if letter_part == "eps" else letter_part
            with open(os.path.join(path, name)) as f:
                multipliers[(letter, flavor)] = Fsa.from_text(f.read())
        prefix_eq = None
        peq_path = os.path.join(path, "prefix_eq.fsa")
        if os.path.exists(peq_path):
            with open(peq_path) as f:
                prefix_eq = Fsa.from_text(f.read())
        return AutomaticStructure(
            letters,
            language,
            multipliers,
            prefix_equality=prefix_eq,
            uniqueness=meta.get("uniqueness", "yes") == "yes",
            case=case,
            provenance=meta.get("provenance", ""),
            relation=relation,
            mode=meta.get("mode", "semigroup"),
        )


# ---------------------------------------------------------------- the oracle


class PairRelationSample:
    """Bounded sample of a multiplier relation.

    positive holds the true pairs for every first component of length up to
    depth; everything else over the acceptor language within the bounded
    universe is negative (materialize with negatives(); membership via
    status()).
    """

    def __init__(self, positive, depth, side, language_words):
        self.positive = frozenset(positive)
        self.depth = depth
        self.side = side
        self._lang_words = frozenset(language_words)
        self.positive_convs = frozenset(convolve(a, b, side) for (a, b) in positive if a or b)

    def status(self, pair_word):
        """'pos' / 'neg' for decided pair words, None beyond the universe."""
        if pair_word in self.positive_convs:
            return "pos"
        if len(pair_word) <= self.depth:
            return "neg"
        return None

    def negatives(self, max_len=None):
        cap = self.depth + 1 if max_len is None else max_len
        out = set()
        for a in self._lang_words:
            for b in self._lang_words:
                if not (a or b):
                    continue
                if max(len(a), len(b)) > cap:
                    continue
                if (a, b) not in self.positive:
                    out.add((a, b))
        return out


def multiplier_oracle(language, rs, letter, flavor, depth, canonical=None):
    """True multiplier pairs up to depth, from the rewriting system."""
    canon = canonical if canonical is not None else rs.reduce
    side = FLAVOR_SIDE[flavor]
    words = ["".join(w) for w in language.enumerate_words(depth + 1)]
    positive = set()
    for a in words:
        if len(a) > depth:
            continue
        if letter == EPSILON_LETTER:
            b = a
        elif FLAVOR_MULT[flavor] == "right":
            b = canon(a + letter)
        else:
            b = canon(letter + a)
        positive.add((a, b))
    return PairRelationSample(positive, depth, side, words)


@dataclass
class FlavorReport:
    status: str  # "pass" / "fail"
    missing: list = field(default_factory=list)
    spurious: list = field(default_factory=list)
    note: str = ""


@dataclass
class VerificationReport:
    depth: int
    entries: dict = field(default_factory=dict)  # (letter, flavor) -> FlavorReport
    prefix_status: str = "absent"
    prefix_missing: list = field(default_factory=list)
    prefix_spurious: list = field(default_factory=list)

    def ok(self):
        if any(e.status != "pass" for e in self.entries.values()):
            return False
        return self.prefix_status in ("pass", "absent")

    def render(self):
        lines = []
        for (letter, flavor), e in sorted(self.entries.items()):
            lines.append(
                "mult letter=%s flavor=%s status=%s missing=%d spurious=%d%s"
                % (
                    letter if letter else "eps",
                    flavor,
                    e.status,
                    len(e.missing),
                    len(e.spurious),
                    (" note=" + e.note) if e.note else "",
                )
            )
            for (a, b) in e.missing[:3]:
                lines.append("  missing (%s, %s)" % (a or "1", b or "1"))
            for (a, b) in e.spurious[:3]:
                lines.append("  spurious (%s, %s)" % (a or "1", b or "1"))
        lines.append("prefix_equality status=%s" % self.prefix_status)
        for (a, b) in self.prefix_missing[:3]:
            lines.append("  missing (%s, %s)" % (a or "1", b or "1"))
        for (a, b) in self.prefix_spurious[:3]:
            lines.append("  spurious (%s, %s)" % (a or "1", b or "1"))
        return "\n".join(lines)


def verify_structure(structure, rs=None, depth=8, enum_limit=400_000):
    """Check every declared multiplier against the rewriting oracle.

    For each flavor the multiplier language restricted to convolutions of
    length <= depth+1 must equal the oracle positives there; the prefix
    relation is checked against prefixes of the acceptor.
    """
    canon = structure.canonical if structure.canonical is not None else (
        rs.reduce if rs is not None else None
    )
    if canon is None:
        raise InvalidInputError("verification needs a canonical-form map or rewrite system")
    lang = structure.language
    bound = depth + 1
    words = ["".join(w) for w in lang.enumerate_words(bound)]
    word_set = set(words)
    report = VerificationReport(depth=depth)
    for (letter, flavor), mult in sorted(structure.multipliers.items()):
        side = FLAVOR_SIDE[flavor]
        positives = set()
        for a in words:
            if letter == EPSILON_LETTER:
                b = a
            elif FLAVOR_MULT[flavor] == "right":
                b = canon(a + letter)
            else:
                b = canon(letter + a)
            w = convolve(a, b, side)
            if len(w) <= bound:
                positives.add(w)
        accepted = set()
        overflow = False
        got = mult.enumerate_words(bound)
        if len(got) > enum_limit:
            overflow = True
        for w in got[:enum_limit]:
            if w:
                accepted.add(tuple(w))
        missing = sorted(positives - accepted, key=lambda w: (len(w), w))
        spurious = sorted(accepted - positives, key=lambda w: (len(w), w))

        def unpack(ws):
            out = []
            for w in ws[:10]:
                try:
                    out.append(unconvolve(w, side))
                except InvalidInputError:
                    out.append(("<malformed>", repr(w)))
            return out

        entry = FlavorReport(
            status="pass" if not missing and not spurious and not overflow else "fail",
            missing=unpack(missing),
            spurious=unpack(spurious),
            note="enumeration overflow" if overflow else "",
        )
        report.entries[(letter, flavor)] = entry
    if structure.prefix_equality is not None:
        pref_words = _prefix_words(lang, bound)
        positives = set()
        for b in pref_words:
            a = canon(b)
            if a in word_set:
                w = convolve(a, b, RIGHT)
                if len(w) <= bound:
                    positives.add(w)
        accepted = {tuple(w) for w in structure.prefix_equality.enumerate_words(bound) if w}
        missing = sorted(positives - accepted, key=lambda w: (len(w), w))
        spurious = sorted(accepted - positives, key=lambda w: (len(w), w))
        report.prefix_status = "pass" if not missing and not spurious else "fail"

        def unpack_r(ws):
            out = []
            for w in ws[:10]:
                try:
                    out.append(unconvolve(w, RIGHT))
                except InvalidInputError:
                    out.append(("<malformed>", repr(w)))
            return out

        report.prefix_missing = unpack_r(missing)
        report.prefix_spurious = unpack_r(spurious)
    return report


def _prefix_words(lang, bound):
    """Nonempty prefixes of acceptor words, up to the bound."""
    m = lang.eps_free().trim()
    if m.n == 0:
        return []
    pref = Fsa(m.domain, m.n, m.initial, set(range(m.n)), dict(m.trans))
    return ["".join(w) for w in pref.enumerate_words(bound) if w]


# ----------------------------------------------------- structure constructors


def construct_generic_nonoverlap(rs, want_biautomatic=None, case="nonoverlap-generic"):
    """Witness for complete systems whose rule sides never overlap end-on.

    Applicability: every rhs is nonempty and no rhs prefix coincides with a
    lhs suffix (gives prefix-automatic, rr); if additionally no rhs suffix
    coincides with a lhs prefix, all four flavors exist.
    """
    if rs.schemas:
        raise NotApplicableError("generic nonoverlap constructor needs a finite rule set")
    rules = list(rs.rules)
    for r in rules:
        if not r.rhs:
            raise NotApplicableError("rule %s has empty rhs" % r)
    viol = _overlap_violation(rules, right=True)
    if viol is not None:
        raise NotApplicableError(
            "rhs prefix equals lhs suffix: rules %d,%d at t=%d" % viol
        )
    both = _overlap_violation(rules, right=False) is None
    if want_biautomatic and not both:
        raise NotApplicableError("reversed-side condition fails; no biautomatic witness")

    letters = rs.alphabet.letters
    lang = rs.irr_language().minimize()
    dom = pair_domain(letters)
    slack = max([len(r.lhs) - len(r.rhs) for r in rules], default=0) + 1
    mults = {}
    mults[(EPSILON_LETTER, "rr")] = _final(diagonal(lang), dom)
    for c in letters:
        ending = [r for r in rules if r.lhs.endswith(c)]
        if not ending:
            m = diagonal(lang).concat(literal(dom, ((PAD, c),)))
        else:
            excl = _exclude_endings(lang, [r.lhs[:-1] for r in ending])
            m = diagonal(excl).concat(literal(dom, ((PAD, c),)))
            for r in ending:
                block = diagonal(lang, with_epsilon=True).concat(
                    literal(dom, convolve(r.lhs[:-1], r.rhs, RIGHT))
                )
                m = m.union(_guard(block, lang, lang, RIGHT))
        mults[(c, "rr")] = _final(m, dom)
    if both:
        mults[(EPSILON_LETTER, "ll")] = _final(diagonal(lang), dom)
        for c in letters:
            starting = [r for r in rules if r.lhs.startswith(c)]
            if not starting:
                m = literal(dom, ((PAD, c),)).concat(diagonal(lang))
            else:
                excl = _exclude_starts(lang, [r.lhs[1:] for r in starting])
                m = literal(dom, ((PAD, c),)).concat(diagonal(excl))
                for r in starting:
                    block = literal(dom, convolve(r.lhs[1:], r.rhs, LEFT)).concat(
                        diagonal(lang, with_epsilon=True)
                    )
                    m = m.union(_guard(block, lang, lang, LEFT))
            mults[(c, "ll")] = _final(m, dom)
        for c in list(letters) + [EPSILON_LETTER]:
            mults[(c, "lr")] = swap_side(mults[(c, "rr")], slack, RIGHT)
            mults[(c, "rl")] = swap_side(mults[(c, "ll")], slack, LEFT)
    prefix_eq = _final(diagonal(lang), dom)
    return AutomaticStructure(
        letters,
        lang,
        mults,
        prefix_equality=prefix_eq,
        case=case,
        provenance="suffix/prefix nonoverlap construction",
        canonical=rs.reduce,
    )


class NotApplicableError(RuntimeError):
    """The requested constructor does not cover this presentation."""


def _overlap_violation(rules, right=True):
    from .words import prefix_t, suffix_t

    for i, ri in enumerate(rules):
        for j, rj in enumerate(rules):
            v, u = ri.rhs, rj.lhs
            for t in range(1, max(len(v), len(u)) + 1):
                if right:
                    if prefix_t(v, t) == suffix_t(u, t):
                        return (i, j, t)
                else:
                    if suffix_t(v, t) == prefix_t(u, t):
                        return (i, j, t)
    return None


def _all(letters):
    from .fsa import all_words

    return all_words(frozenset(letters))


def _exclude_endings(lang, suffixes):
    """L minus words ending in any of the given suffixes."""
    dom = lang.domain
    bad = _all(sorted(dom)).concat(any_of(dom, suffixes))
    return lang.difference(bad)


def _exclude_starts(lang, prefixes):
    dom = lang.domain
    bad = any_of(dom, prefixes).concat(_all(sorted(dom)))
    return lang.difference(bad)


def _guard(m, l1, l2, side):
    from .pairs import pairs_product, _on_domain

    dom = m.domain
    return m.intersect(_on_domain(pairs_product(l1, l2, side), dom))


def _final(m, dom):
    """Finalize a multiplier: fixed domain, no empty word, minimal."""
    from .pairs import _on_domain

    out = _on_domain(m, dom).difference(epsilon(dom)).minimize().trim()
    return out


def extend_with_identity(structure, marker="e"):
    """Adjoin an identity: K = L ∪ {e}, multipliers gain the e-row pairs."""
    if marker in structure.letters:
        raise InvalidInputError("identity letter %r already present" % marker)
    letters = (marker,) + structure.letters
    dom = pair_domain(letters)
    base_dom = frozenset(letters)
    lang = Fsa(
        base_dom,
        structure.language.n,
        structure.language.initial,
        structure.language.accepting,
        dict(structure.language.trans),
    ).union(literal(base_dom, marker))
    canon = structure.canonical

    def canon_ext(word):
        stripped = word.replace(marker, "")
        if not stripped:
            return marker
        return canon(stripped)

    mults = {}
    for (letter, flavor), m in structure.multipliers.items():
        lifted = Fsa(dom, m.n, m.initial, m.accepting, dict(m.trans))
        if letter == EPSILON_LETTER:
            lifted = _final(diagonal(lang), dom)
        else:
            side = FLAVOR_SIDE[flavor]
            b = canon_ext(letter)
            lifted = lifted.union(literal(dom, convolve(marker, b, side)))
            lifted = _final(lifted, dom)
        mults[(letter, flavor)] = lifted
    for flavor in structure.flavors():
        mults[(marker, flavor)] = _final(diagonal(lang), dom)
        mults[(EPSILON_LETTER, flavor)] = _final(diagonal(lang), dom)
    prefix_eq = None
    if structure.prefix_equality is not None:
        prefix_eq = Fsa(
            dom,
            structure.prefix_equality.n,
            structure.prefix_equality.initial,
            structure.prefix_equality.accepting,
            dict(structure.prefix_equality.trans),
        ).union(literal(dom, ((marker, marker),)))
        prefix_eq = _final(prefix_eq, dom)
    return AutomaticStructure(
        letters,
        lang.minimize(),
        mults,
        prefix_equality=prefix_eq,
        uniqueness=structure.uniqueness,
        case=structure.case + "+identity",
        provenance=structure.provenance,
        canonical=canon_ext,
        relation=structure.relation,
        mode=structure.mode,
    )


def reverse_structure(structure):
    """Witness for the reversed semigroup: reverse all automata, swap flavors."""
    lang = structure.language.reverse().minimize()
    mults = {}
    for (letter, flavor), m in structure.multipliers.items():
        mults[(letter, FLAVOR_REV[flavor])] = m.reverse().minimize()
    canon = structure.canonical
    canon_rev = (lambda w: reverse_word(canon(reverse_word(w)))) if canon else None
    return AutomaticStructure(
        structure.letters,
        lang,
        mults,
        prefix_equality=None,
        uniqueness=structure.uniqueness,
        case=structure.case + "+reversed",
        provenance=structure.provenance,
        canonical=canon_rev,
        relation=(
            (reverse_word(structure.relation[0]), reverse_word(structure.relation[1]))
            if structure.relation
            else None
        ),
        mode=structure.mode,
    )


# ------------------------------------------------------------ nerode estimate


def nerode_lower_bound(sample, depths=None):
    """Pairwise-distinguishable convolution prefixes, per depth.

    Two prefixes are distinguishable when some extension completes exactly
    one of them to a positive and the other to a decided negative; any
    automaton consistent with the sample needs at least that many states.
    """
    if depths is None:
        depths = list(range(1, sample.depth + 1))
    out = []
    for d in depths:
        pos = {w for w in sample.positive_convs if len(w) <= d}
        exts = {}
        prefixes = set()
        for w in pos:
            for k in range(len(w) + 1):
                p = w[:k]
                prefixes.add(p)
                exts.setdefault(p, set()).add(w[k:])
        reps = []
        for p in sorted(prefixes, key=lambda w: (len(w), w)):
            ok = True
            for r in reps:
                if not _distinguishable(p, r, exts, sample, d):
                    ok = False
                    break
            if ok:
                reps.append(p)
        out.append((d, max(len(reps), 1)))
    return out


def _distinguishable(p, r, exts, sample, d):
    for e in exts.get(p, ()) | exts.get(r, ()):
        w1, w2 = p + e, r + e
        if len(w1) > d or len(w2) > d:
            continue
        s1, s2 = sample.status(w1), sample.status(w2)
        if s1 is not None and s2 is not None and s1 != s2:
            return True
    return False
