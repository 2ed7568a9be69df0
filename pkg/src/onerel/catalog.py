"""Witness catalog: per-case constructions of automatic structures.

Each builder transcribes one displayed construction as data: multiplier
languages are unions of branches, each branch a concatenation of
asynchronous blocks (diagonals, constant pairs, pumped stars)
re-synchronized to the flavor's convolution side and guarded by
(L x L)-membership where the displayed range can leave the language.
The bounded verifier is the safety net for every transcription.
"""

from .fsa import Fsa, all_words, any_of, epsilon, literal, gsm_image, Gsm
from .pairs import (
    LEFT,
    PAD,
    RIGHT,
    diagonal,
    pair_domain,
    pairs_product,
    resync,
    swap_side,
    convolve,
    _on_domain,
)
from .rewrite import (
    COMPLETE,
    RewriteSystem,
    Rule,
    RuleSchema,
    embed_identity,
    shirshov_complete,
)
from .structures import (
    EPSILON_LETTER,
    AutomaticStructure,
    NotApplicableError,
    construct_generic_nonoverlap,
)
from .words import Alphabet, InvalidInputError, con, prefix_t, suffix_t

ALL_FLAVORS = ("rr", "lr", "rl", "ll")
RR_ONLY = ("rr",)


# ------------------------------------------------------------- the block DSL


class _Blocks:
    """Asynchronous pair-language blocks over a fixed base alphabet."""

    def __init__(self, letters):
        self.letters = tuple(letters)
        self.dom = pair_domain(self.letters)
        self.base = frozenset(self.letters)

    # language helpers -----------------------------------------------------

    def lit(self, w):
        return literal(self.base, w)

    def anyof(self, ws):
        return any_of(self.base, ws)

    def allw(self):
        return all_words(self.base)

    def minus_ending(self, lang, tails):
        """lang minus words ending in any word of the given language/list."""
        t = tails if isinstance(tails, Fsa) else self.anyof(tails)
        return lang.difference(self.allw().concat(t))

    def minus_starting(self, lang, heads):
        h = heads if isinstance(heads, Fsa) else self.anyof(heads)
        return lang.difference(h.concat(self.allw()))

    # pair blocks ----------------------------------------------------------

    def D(self, lang, eps=False):
        return _on_domain(diagonal(lang, with_epsilon=eps), self.dom)

    def C(self, u, v):
        """Constant pair block (u, v); empty pair is the concat identity."""
        if not u and not v:
            return epsilon(self.dom)
        return literal(self.dom, convolve(u, v, RIGHT))

    def pad(self, letter, side_of_letter="right"):
        """The single padded symbol ($, letter) or (letter, $)."""
        sym = (PAD, letter) if side_of_letter == "right" else (letter, PAD)
        return literal(self.dom, (sym,))

    def cat(self, *items):
        out = epsilon(self.dom)
        for it in items:
            out = out.concat(it)
        return out

    def alt(self, *items):
        out = None
        for it in items:
            out = it if out is None else out.union(it)
        return out

    def star(self, item):
        return item.star()

    def plus(self, item):
        return item.plus()

    def rep(self, item, n):
        out = epsilon(self.dom)
        for _ in range(n):
            out = out.concat(item)
        return out

    # assembly -------------------------------------------------------------

    def sync(self, m, side, cap):
        return resync(m, side, cap)

    def guard(self, m, l1, l2, side):
        return m.intersect(_on_domain(pairs_product(l1, l2, side), self.dom))

    def branch(self, side, cap, *items, guard=None):
        m = self.sync(self.cat(*items), side, cap)
        if guard is not None:
            l1, l2 = guard
            m = self.guard(m, l1, l2, side)
        return m

    def finalize(self, *branches):
        out = None
        for b in branches:
            out = b if out is None else out.union(b)
        out = _on_domain(out, self.dom).difference(epsilon(self.dom))
        return out.minimize().trim()


def _structure(letters, rs, lang, mults, flavors, case, provenance, prefix=True,
               canonical=None, relation=None, mode="semigroup"):
    B = _Blocks(letters)
    full = {}
    for (letter, flavor), m in mults.items():
        if flavor in flavors:
            full[(letter, flavor)] = m
    # epsilon multipliers for every declared flavor
    for fl in flavors:
        full.setdefault((EPSILON_LETTER, fl), B.finalize(B.D(lang)))
    prefix_eq = B.finalize(B.D(lang)) if prefix is True else (prefix or None)
    return AutomaticStructure(
        letters,
        lang,
        full,
        prefix_equality=prefix_eq,
        case=case,
        provenance=provenance,
        canonical=canonical if canonical is not None else (rs.reduce if rs else None),
        relation=relation,
        mode=mode,
    )


def _swaps(mults, letters, bound):
    """Derive the opposite-convolution flavors from rr/ll by side swap."""
    out = dict(mults)
    for (letter, flavor), m in list(mults.items()):
        if flavor == "rr":
            out[(letter, "lr")] = swap_side(m, bound, RIGHT)
        elif flavor == "ll":
            out[(letter, "rl")] = swap_side(m, bound, LEFT)
    return out


# ----------------------------------------------------------- simple builders


def build_free(letters, relation=None):
    """Free semigroup witness: all multipliers are padded diagonals."""
    rs = shirshov_complete([], Alphabet(tuple(letters)))
    s = construct_generic_nonoverlap(rs, case="free")
    s.relation = relation
    s.provenance = "free semigroup"
    return s


def build_nonoverlap(rs, relation=None, want_biautomatic=None):
    s = construct_generic_nonoverlap(rs, want_biautomatic=want_biautomatic)
    s.relation = relation
    return s


def build_square_square(x, y, extra=(), relation=None):
    """xx = yy over two letters: four flavors with the pumping families."""
    letters = tuple(sorted(extra)) + (y, x)
    alphabet = Alphabet(letters)
    rs = shirshov_complete([(x + x, y + y)], alphabet)
    assert set(rs.rules) == {Rule(x + x, y + y), Rule(x + y + y, y + y + x)}
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    Lp = L.union(epsilon(B.base))
    xy, xx, yy = x + y, x + x, y + y
    mults = {}
    # right multiplication by x: append, or absorb into the square
    base = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [x])), B.pad(x))
    pump = B.branch(
        RIGHT,
        4,
        B.D(B.minus_ending(Lp, [xy, x])),
        B.C("", yy),
        B.star(B.C(xy, xy)),
        B.C(x, ""),
        guard=(L, L),
    )
    mults[(x, "rr")] = B.finalize(base, pump)
    base = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [xy])), B.pad(y))
    pump = B.branch(
        RIGHT,
        4,
        B.D(B.minus_ending(Lp, [xy, x])),
        B.C("", y),
        B.plus(B.C(xy, y + x)),
        guard=(L, L),
    )
    mults[(y, "rr")] = B.finalize(base, pump)
    # left multiplication
    t = B.minus_starting(L, [x, yy])
    tp = t.union(epsilon(B.base))
    b1 = B.branch(LEFT, 2, B.C("", x), B.D(t))
    b2 = B.branch(LEFT, 3, B.C(x, yy), B.D(tp), guard=(L, L))
    b3 = B.branch(LEFT, 3, B.plus(B.C(yy, yy)), B.C("", x), B.D(tp), guard=(L, L))
    b4 = B.branch(LEFT, 3, B.plus(B.C(yy, yy)), B.C(x, yy), B.D(tp), guard=(L, L))
    mults[(x, "ll")] = B.finalize(b1, b2, b3, b4)
    mults[(y, "ll")] = B.finalize(B.branch(LEFT, 2, B.C("", y), B.D(L)))
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "square-square",
        "square relator pumping construction", relation=relation,
    )


def build_cube_cube(x, y, extra=(), relation=None):
    """xxx = yyy: four flavors via the cube-absorption families."""
    letters = tuple(sorted(extra)) + (y, x)
    alphabet = Alphabet(letters)
    rs = shirshov_complete([(x * 3, y * 3)], alphabet)
    assert set(rs.rules) == {Rule(x * 3, y * 3), Rule(x + y * 3, y * 3 + x)}
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    mults = {}
    # appending x to ...xx fires the cube and the yyy block tunnels to the
    # front of the word: (g·xx)·x = yyy·g; likewise for ...xyy plus y
    base = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [x + x])), B.pad(x))
    tunnel = B.branch(
        RIGHT,
        5,
        B.C("", y * 3),
        B.D(B.minus_ending(L, [x]), eps=True),
        B.C(x + x, ""),
        guard=(L, L),
    )
    mults[(x, "rr")] = B.finalize(base, tunnel)
    base = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [x + y + y])), B.pad(y))
    tunnel = B.branch(
        RIGHT,
        5,
        B.C("", y * 3),
        B.D(B.minus_ending(L, [x + x]), eps=True),
        B.C(x + y + y, x),
        guard=(L, L),
    )
    mults[(y, "rr")] = B.finalize(base, tunnel)
    t1 = B.minus_starting(L, [x + x, y * 3])
    t2 = B.minus_starting(L, [x, y * 3])
    b1 = B.branch(LEFT, 2, B.C("", x), B.D(t1))
    b2 = B.branch(LEFT, 3, B.C(x + x, y * 3), B.D(t2.union(epsilon(B.base))), guard=(L, L))
    b3 = B.branch(
        LEFT, 3, B.plus(B.C(y * 3, y * 3)), B.C("", x), B.D(t1.union(epsilon(B.base))),
        guard=(L, L),
    )
    b4 = B.branch(
        LEFT, 3, B.plus(B.C(y * 3, y * 3)), B.C(x + x, y * 3),
        B.D(t2.union(epsilon(B.base))), guard=(L, L),
    )
    mults[(x, "ll")] = B.finalize(b1, b2, b3, b4)
    mults[(y, "ll")] = B.finalize(B.branch(LEFT, 2, B.C("", y), B.D(L)))
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "cube-cube",
        "cube relator absorption construction", relation=relation,
    )

# ---------------------------------------------------- homogeneous length-k


def homogeneous_conditions(u, v):
    """Which of the five applicability tests hold for a homogeneous relator."""
    k = len(u)
    conds = []
    ok1 = all(
        prefix_t(v, t) != suffix_t(u, t) and suffix_t(v, t) != prefix_t(u, t)
        for t in range(1, k + 1)
    )
    if ok1:
        conds.append(1)
    if len(con(u)) == k:
        conds.append(2)
    if k == 2:
        conds.append(3)
    if not con(u) <= con(v):
        conds.append(4)
    if not _has_border(u) and not _has_border(v):
        conds.append(5)
    return conds


def _has_border(w):
    return any(w[:j] == w[-j:] for j in range(1, len(w) // 2 + 1))


def build_homogeneous(u, v, letters, relation=None):
    """Single-rule homogeneous relator (|u| = |v|), all four flavors.

    The right/left absorption families pump the overlap prefixes/suffixes;
    when no end of v matches the opposite end of u the one-step sets
    suffice (the generic nonoverlap shapes).
    """
    alphabet = Alphabet(tuple(letters))
    k = len(u)
    rs = shirshov_complete([(u, v)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(u, v)}:
        raise NotApplicableError("relator %s=%s is not a one-rule basis" % (u, v))
    if not homogeneous_conditions(u, v):
        raise NotApplicableError("no homogeneous applicability condition holds")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    T = [t for t in range(1, k) if prefix_t(v, t) == suffix_t(u, t)]
    S = [s for s in range(1, k) if suffix_t(v, s) == prefix_t(u, s)]
    mults = {}
    for c in letters:
        if c != u[-1]:
            mults[(c, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(c)))
        else:
            plain = B.branch(
                RIGHT, 2, B.D(B.minus_ending(L, [u[: k - 1]])), B.pad(c)
            )
            if not T:
                absorb = B.branch(
                    RIGHT, k + 1, B.D(L, eps=True), B.C(u[: k - 1], v), guard=(L, L)
                )
            else:
                heads = [u[: k - t] for t in T]
                middle = B.star(
                    B.cat(*[B.star(B.C(u[: k - t], suffix_t(v, k - t))) for t in T])
                )
                absorb = B.branch(
                    RIGHT,
                    k + 2,
                    B.D(B.minus_ending(L, heads), eps=True),
                    B.C("", v),
                    middle,
                    B.C(u[: k - 1], ""),
                    guard=(L, L),
                )
            mults[(c, "rr")] = B.finalize(plain, absorb)
        if c != u[0]:
            mults[(c, "ll")] = B.finalize(B.branch(LEFT, 2, B.C("", c), B.D(L)))
        else:
            plain = B.branch(
                LEFT, 2, B.C("", c), B.D(B.minus_starting(L, [u[1:]]))
            )
            if not S:
                absorb = B.branch(
                    LEFT, k + 1, B.C(u[1:], v), B.D(L, eps=True), guard=(L, L)
                )
            else:
                tails = [u[s:] for s in S]
                middle = B.star(
                    B.cat(*[B.star(B.C(u[s:], prefix_t(v, k - s))) for s in S])
                )
                absorb = B.branch(
                    LEFT,
                    2 * k + 2,
                    B.C(u[1:], ""),
                    middle,
                    B.C("", v),
                    B.D(B.minus_starting(L, tails), eps=True),
                    guard=(L, L),
                )
            mults[(c, "ll")] = B.finalize(plain, absorb)
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "homogeneous-generic",
        "homogeneous relator overlap-pumping construction", relation=relation,
    )


# --------------------------------------------------------- length-1 right side


def build_absorb_last(u, letters, relation=None):
    """u = x where x is the last letter of u: appending x swallows copies of
    the rest of u (prefix-automatic, right flavor only)."""
    alphabet = Alphabet(tuple(letters))
    x = u[-1]
    pre = u[:-1]
    rs = shirshov_complete([(u, x)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(u, x)}:
        raise NotApplicableError("absorb-last needs {%s=%s} to be a one-rule basis" % (u, x))
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    mults = {}
    for c in letters:
        if c != x:
            mults[(c, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(c)))
        else:
            plain = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [pre])), B.pad(c))
            pump = B.branch(
                RIGHT,
                len(u) + 2,
                B.D(B.minus_ending(L, [pre]), eps=True),
                B.C("", x),
                B.plus(B.C(pre, "")),
                guard=(L, L),
            )
            mults[(c, "rr")] = B.finalize(plain, pump)
    return _structure(
        letters, rs, L, mults, RR_ONLY, "absorb-last",
        "trailing-letter absorption construction", relation=relation,
    )


def build_mid_single(a, b, x, letters, relation=None):
    """aba = x with x != a: basis {aba=x, abx=xba}."""
    alphabet = Alphabet(tuple(letters))
    u = a + b + a
    rs = shirshov_complete([(u, x)], alphabet)
    if set(rs.rules) != {Rule(u, x), Rule(a + b + x, x + b + a)} or rs.schemas:
        raise NotApplicableError("mid-single basis mismatch for %s=%s" % (u, x))
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    ab = a + b
    mults = {}
    for c in letters:
        if c not in (a, x):
            mults[(c, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(c)))
    plain_a = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [ab])), B.pad(a))
    step_a = B.branch(
        RIGHT, 4, B.D(B.minus_ending(L, [ab]), eps=True), B.C(ab, x), guard=(L, L)
    )
    mults[(a, "rr")] = B.finalize(plain_a, step_a)
    plain_x = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [ab])), B.pad(x))
    if x != b:
        step_x = B.branch(
            RIGHT, 4, B.D(B.minus_ending(L, [ab]), eps=True), B.C(ab, x + b + a),
            guard=(L, L),
        )
    else:
        step_x = B.branch(
            RIGHT,
            4,
            B.D(B.minus_ending(L, [a]), eps=True),
            B.C("", x + b),
            B.star(B.C(a, a)),
            B.C(a + b, a),
            guard=(L, L),
        )
    mults[(x, "rr")] = B.finalize(plain_x, step_x)
    return _structure(
        letters, rs, L, mults, RR_ONLY, "mid-single",
        "middle-relator single-letter construction", relation=relation,
    )


def build_cube_single(a, x, letters, relation=None):
    """aaa = x with x != a: basis {aaa=x, ax=xa}."""
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(a * 3, x)], alphabet)
    if set(rs.rules) != {Rule(a * 3, x), Rule(a + x, x + a)} or rs.schemas:
        raise NotApplicableError("cube-single basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    mults = {}
    for c in letters:
        if c not in (a, x):
            mults[(c, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(c)))
    plain_a = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a + a])), B.pad(a))
    step_a = B.branch(
        RIGHT, 3, B.D(B.minus_ending(L, [a]), eps=True), B.C(a + a, x), guard=(L, L)
    )
    mults[(a, "rr")] = B.finalize(plain_a, step_a)
    plain_x = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a])), B.pad(x))
    sx1 = B.branch(
        RIGHT, 3, B.D(B.minus_ending(L, [a]), eps=True), B.C(a, x + a), guard=(L, L)
    )
    sx2 = B.branch(
        RIGHT, 3, B.D(B.minus_ending(L, [a]), eps=True), B.C(a + a, x + a + a),
        guard=(L, L),
    )
    mults[(x, "rr")] = B.finalize(plain_x, sx1, sx2)
    return _structure(
        letters, rs, L, mults, RR_ONLY, "cube-single",
        "cube-relator single-letter construction", relation=relation,
    )

# ------------------------------------------------------------ identity relator


def build_identity_relator(u, base_letters, relation=None, marker="e"):
    """u = ε via the adjoined-identity embedding, when {u→e} + absorption
    completes without extra rules (biautomatic, all four flavors)."""
    base = Alphabet(tuple(base_letters))
    ext, rels = embed_identity(base, [(u, "")], marker)
    rs = shirshov_complete(rels, ext)
    if rs.complete_flag != COMPLETE or rs.schemas:
        raise NotApplicableError("identity embedding did not complete")
    allowed = {Rule(u, marker), Rule(marker * 2, marker)}
    for c in base.letters:
        allowed.add(Rule(c + marker, c))
        allowed.add(Rule(marker + c, c))
    if not set(rs.rules) <= allowed:
        raise NotApplicableError("identity embedding produced extra rules")
    letters = ext.letters
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    Lne = L.difference(B.lit(marker))
    k = len(u)
    mults = {}
    if k == 1:
        # the single generator is the identity itself
        for c in base.letters:
            if c == u:
                mults[(c, "rr")] = B.finalize(B.D(L))
                mults[(c, "ll")] = B.finalize(B.D(L))
            else:
                mults[(c, "rr")] = B.finalize(
                    B.C(marker, c),
                    B.branch(RIGHT, 2, B.D(Lne), B.pad(c)),
                )
                mults[(c, "ll")] = B.finalize(
                    B.C(marker, c),
                    B.branch(LEFT, 2, B.C("", c), B.D(Lne)),
                )
    else:
        pre, suf = u[:-1], u[1:]
        for c in base.letters:
            if c != u[-1]:
                mults[(c, "rr")] = B.finalize(
                    B.C(marker, c), B.branch(RIGHT, 2, B.D(Lne), B.pad(c))
                )
            else:
                mults[(c, "rr")] = B.finalize(
                    B.C(marker, c),
                    B.branch(RIGHT, 2, B.D(B.minus_ending(Lne, [pre])), B.pad(c)),
                    B.branch(RIGHT, k + 1, B.D(L, eps=True), B.C(pre, ""), guard=(L, L)),
                    B.C(pre, marker),
                )
            if c != u[0]:
                mults[(c, "ll")] = B.finalize(
                    B.branch(LEFT, 2, B.C(marker, c)),
                    B.branch(LEFT, 2, B.C("", c), B.D(Lne)),
                )
            else:
                mults[(c, "ll")] = B.finalize(
                    B.branch(LEFT, 2, B.C(marker, c)),
                    B.branch(LEFT, 2, B.C("", c), B.D(B.minus_starting(Lne, [suf]))),
                    B.branch(LEFT, k + 1, B.C(suf, ""), B.D(L, eps=True), guard=(L, L)),
                    B.branch(LEFT, k + 1, B.C(suf, marker)),
                )
    mults = _swaps(mults, letters, k + 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "identity-relator",
        "adjoined-identity relator construction", relation=relation, mode="monoid",
    )


def build_identity_mid(a, b, base_letters, relation=None, marker="e"):
    """aba = ε: the embedding completes to {aab=e, ba=ab, absorption}."""
    base = Alphabet(tuple(base_letters))
    ext, rels = embed_identity(base, [(a + b + a, "")], marker)
    rs = shirshov_complete(rels, ext)
    if rs.complete_flag != COMPLETE or rs.schemas:
        raise NotApplicableError("aba=1 embedding did not complete")
    letters = ext.letters
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    e = marker
    arun = B.lit(a).plus()  # a^+
    brun = B.lit(b).plus()
    abrun = B.lit(a).concat(B.lit(b).plus())  # a b^j
    # right multiplication by a: a^i -> a^(i+1); b^j -> a b^j; a b^j -> b^(j-1)
    rr_a = B.finalize(
        B.C(e, a),
        B.branch(RIGHT, 2, B.D(arun), B.pad(a)),
        B.branch(RIGHT, 2, B.C("", a), B.D(brun)),
        B.branch(RIGHT, 2, B.C(a, ""), B.plus(B.C(b, b)), B.C(b, "")),
        B.C(a + b, e),
    )
    # right multiplication by b: a^i -> a^(i-2) (i>=2); else append b
    rr_b = B.finalize(
        B.C(e, b),
        B.branch(RIGHT, 2, B.D(B.minus_ending(Lne_ident(B, L, e), [a + a])), B.pad(b)),
        B.branch(RIGHT, 2, B.C(a + a, ""), B.plus(B.C(a, a))),
        B.C(a + a, e),
    )
    # left multiplication by a (right-convolved): a.a^i, a.b^j = a b^j,
    # a.(a b^j) = b^(j-1)
    rl_a = B.finalize(
        B.C(e, a),
        B.branch(RIGHT, 2, B.C("", a), B.D(arun.union(brun))),
        B.branch(RIGHT, 2, B.C(a, ""), B.plus(B.C(b, b)), B.C(b, "")),
        B.C(a + b, e),
    )
    # left multiplication by b: b.a^i = a^(i-2) (i>=2), b.a = ab,
    # b.(a b^j) = a b^(j+1), b.b^j = b^(j+1)
    rl_b = B.finalize(
        B.C(e, b),
        B.branch(RIGHT, 2, B.C("", b), B.D(brun)),
        B.branch(RIGHT, 3, B.D(B.lit(a)), B.pad(b)),
        B.branch(RIGHT, 2, B.D(abrun), B.pad(b)),
        B.branch(RIGHT, 2, B.C(a + a, ""), B.plus(B.C(a, a))),
        B.C(a + a, e),
    )
    mults = {
        (a, "rr"): rr_a,
        (b, "rr"): rr_b,
        (a, "rl"): rl_a,
        (b, "rl"): rl_b,
        (a, "lr"): swap_side(rr_a, 3, RIGHT),
        (b, "lr"): swap_side(rr_b, 3, RIGHT),
        (a, "ll"): swap_side(rl_a, 3, RIGHT),
        (b, "ll"): swap_side(rl_b, 3, RIGHT),
    }
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "identity-mid",
        "middle identity relator construction", relation=relation, mode="monoid",
    )


def Lne_ident(B, L, marker):
    return L.difference(B.lit(marker))

# ----------------------------------------------- length-3 homogeneous displays


def build_hom3_double_head(u, v, letters, relation=None):
    """u = aac-shaped (first two letters equal, third different), any v of
    length 3; {u=v} is always a one-rule basis."""
    a, c = u[0], u[2]
    if u[1] != a or c == a:
        raise NotApplicableError("relator is not aac-shaped")
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(u, v)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(u, v)}:
        raise NotApplicableError("aac-shaped relator did not give a one-rule basis")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    x, y, z = v[0], v[1], v[2]
    mults = {}
    for letter in letters:
        if letter != c:
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
        if letter != a:
            mults[(letter, "ll")] = B.finalize(B.branch(LEFT, 2, B.C("", letter), B.D(L)))
    plain = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a + a])), B.pad(c))
    if x != c and v[:2] != a + c:
        absorb = [
            B.branch(RIGHT, 4, B.D(L, eps=True), B.C(a + a, v), guard=(L, L))
        ]
    elif x != c and v[:2] == a + c:
        absorb = [
            B.branch(
                RIGHT, 4,
                B.D(B.minus_ending(L, [a]), eps=True),
                B.C(a + a, v),
                B.star(B.C(a, z)),
                guard=(L, L),
            )
        ]
    else:  # x == c
        absorb = [
            B.branch(
                RIGHT, 4,
                B.D(B.minus_ending(L, [a + a]), eps=True),
                B.C("", x),
                B.plus(B.C(a + a, y + z)),
                guard=(L, L),
            )
        ]
    mults[(c, "rr")] = B.finalize(plain, *absorb)
    plain = B.branch(LEFT, 2, B.C("", a), B.D(B.minus_starting(L, [a + c])))
    if z == a:
        absorb = [
            B.branch(
                LEFT, 4,
                B.plus(B.C(a + c, v[:2])),
                B.C("", z),
                B.D(B.minus_starting(L, [a + c]), eps=True),
                guard=(L, L),
            )
        ]
    else:
        absorb = [
            B.branch(LEFT, 4, B.C(a + c, v), B.D(L, eps=True), guard=(L, L))
        ]
    mults[(a, "ll")] = B.finalize(plain, *absorb)
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "double-head",
        "doubled-head relator construction", relation=relation,
    )


def build_hom3_double_tail(u, v, letters, relation=None):
    """u = abb-shaped (last two letters equal, first different)."""
    a, b = u[0], u[1]
    if u[2] != b or a == b:
        raise NotApplicableError("relator is not abb-shaped")
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(u, v)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(u, v)}:
        raise NotApplicableError("abb-shaped relator did not give a one-rule basis")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    x, y, z = v[0], v[1], v[2]
    mults = {}
    for letter in letters:
        if letter != b:
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
        if letter != a:
            mults[(letter, "ll")] = B.finalize(B.branch(LEFT, 2, B.C("", letter), B.D(L)))
    plain = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a + b])), B.pad(b))
    if x != b:
        absorb = [B.branch(RIGHT, 4, B.D(L, eps=True), B.C(a + b, v), guard=(L, L))]
    elif v[:2] != b + b:
        absorb = [
            B.branch(
                RIGHT, 4,
                B.D(B.minus_ending(L, [a + b]), eps=True),
                B.C("", x),
                B.plus(B.C(a + b, y + z)),
                guard=(L, L),
            )
        ]
    else:  # v starts bb
        absorb = [
            B.branch(
                RIGHT, 5,
                B.D(B.minus_ending(L, [a + b, a]), eps=True),
                B.C("", x + y),
                B.star(B.alt(B.C(a, z), B.C(a + b, z + y))),
                B.C(a + b, z),
                guard=(L, L),
            )
        ]
    mults[(b, "rr")] = B.finalize(plain, *absorb)
    plain = B.branch(LEFT, 2, B.C("", a), B.D(B.minus_starting(L, [b + b])))
    if z == a:
        absorb = [
            B.branch(
                LEFT, 4,
                B.plus(B.C(b + b, v[:2])),
                B.C("", z),
                B.D(B.minus_starting(L, [b + b]), eps=True),
                guard=(L, L),
            )
        ]
    elif z == b and y == a:
        absorb = [
            B.branch(
                LEFT, 4,
                B.star(B.C(b, x)),
                B.C(b + b, x + y + z),
                B.D(B.minus_starting(L, [b]), eps=True),
                guard=(L, L),
            )
        ]
    else:
        absorb = [B.branch(LEFT, 4, B.C(b + b, v), B.D(L, eps=True), guard=(L, L))]
    mults[(a, "ll")] = B.finalize(plain, *absorb)
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "double-tail",
        "doubled-tail relator construction", relation=relation,
    )


def build_hom3_sandwich(u, v, letters, relation=None):
    """u = aba-shaped, v = xyx-shaped with x outside {a,b}:
    basis {aba=v, ab·v=v·ba}."""
    a, b = u[0], u[1]
    x, y = v[0], v[1]
    if u[2] != a or v[2] != x or a == b or x in (a, b):
        raise NotApplicableError("relator is not the sandwich shape")
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(u, v)], alphabet)
    expected = {Rule(u, v), Rule(a + b + v, v + b + a)}
    if rs.schemas or set(rs.rules) != expected:
        raise NotApplicableError("sandwich relator basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    ab = a + b
    abxy = ab + x + y
    mults = {}
    for letter in letters:
        if letter not in (a, x):
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
        if letter != a:
            mults[(letter, "ll")] = B.finalize(B.branch(LEFT, 2, B.C("", letter), B.D(L)))
    mults[(a, "rr")] = B.finalize(
        B.branch(RIGHT, 2, B.D(B.minus_ending(L, [ab])), B.pad(a)),
        B.branch(
            RIGHT, 5,
            B.D(B.minus_ending(L, [ab, abxy]), eps=True),
            B.C("", v),
            B.star(B.C(abxy, b + a + y + x)),
            B.C(ab, ""),
            guard=(L, L),
        ),
    )
    mults[(x, "rr")] = B.finalize(
        B.branch(RIGHT, 2, B.D(B.minus_ending(L, [abxy])), B.pad(x)),
        B.branch(
            RIGHT, 5,
            B.D(B.minus_ending(L, [ab, abxy]), eps=True),
            B.C("", x),
            B.plus(B.C(abxy, y + x + b + a)),
            guard=(L, L),
        ),
    )
    bv = b + v
    vb = v + b
    mults[(a, "ll")] = B.finalize(
        B.branch(
            LEFT, 6,
            B.star(B.C(bv, vb)),
            B.C(b + a, v),
            B.D(B.minus_starting(L, [b + a, bv]), eps=True),
            guard=(L, L),
        ),
        B.branch(
            LEFT, 6,
            B.star(B.C(bv, vb)),
            B.C("", a),
            B.D(B.minus_starting(L, [b + a, bv]), eps=True),
            guard=(L, L),
        ),
    )
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "sandwich",
        "sandwich relator pumping construction", relation=relation,
    )

def build_mid_cube(a, b, letters, relation=None):
    """aba = bbb over two letters: basis {aba=b³, ab⁴=b⁴a}; the emitted
    b-blocks tunnel to the front of the word."""
    alphabet = Alphabet(tuple(letters))
    u, v = a + b + a, b * 3
    rs = shirshov_complete([(u, v)], alphabet)
    expected = {Rule(u, v), Rule(a + b * 4, b * 4 + a)}
    if rs.schemas or set(rs.rules) != expected:
        raise NotApplicableError("mid-cube basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    ab = a + b
    b4 = b * 4
    arunend = B.allw().concat(B.lit(a)).concat(B.lit(b).plus())  # ...a b^+
    mults = {}
    # rr by a: plain / one-step absorb / tunnel when the b-cube merges
    plain = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [ab])), B.pad(a))
    onestep = B.branch(
        RIGHT, 4, B.D(L.difference(arunend), eps=True), B.C(ab, v), guard=(L, L)
    )
    tunnels = [
        B.branch(
            RIGHT, 6,
            B.C("", b4),
            B.D(L, eps=True),
            B.C(a + b * j + a + b, a + b * (j - 1)),
            guard=(L, L),
        )
        for j in (1, 2, 3)
    ]
    mults[(a, "rr")] = B.finalize(plain, onestep, *tunnels)
    # rr by b: plain / tunnel from ...ab³ + b
    plain = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a + b * 3])), B.pad(b))
    tunnel = B.branch(
        RIGHT, 6, B.C("", b4), B.D(L, eps=True), B.C(a + b * 3, a), guard=(L, L)
    )
    mults[(b, "rr")] = B.finalize(plain, tunnel)
    # ll by a: leading b-runs absorb in blocks of four
    t1 = B.minus_starting(L, [b + a, b4])
    t2 = L
    star4 = B.star(B.C(b4, b4))
    br1 = B.branch(LEFT, 6, star4, B.C("", a), B.D(t1, eps=True), guard=(L, L))
    br2 = B.branch(LEFT, 6, star4, B.C(b + a, v), B.D(t2, eps=True), guard=(L, L))
    mults[(a, "ll")] = B.finalize(br1, br2)
    mults[(b, "ll")] = B.finalize(B.branch(LEFT, 2, B.C("", b), B.D(L)))
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "mid-cube",
        "middle relator cube-tunnel construction", relation=relation,
    )

def build_mid_swap(a, b, letters, relation=None):
    """aba = bab over two letters: basis {aba=bab} plus the pumped tail
    family {ab^i ab = babb a^(i-1)}; the left multiplier needs the full
    sub-case analysis of the pumped prefixes."""
    alphabet = Alphabet(tuple(letters))
    u, v = a + b + a, b + a + b
    rs = shirshov_complete([(u, v)], alphabet)
    if set(rs.rules) != {Rule(u, v)} or set(rs.schemas) != {
        RuleSchema(a + b, b, a + b, b + a + b + b, a, "", 1)
    }:
        raise NotApplicableError("mid-swap basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    Lg = (L, L)
    ab, ba, bb = a + b, b + a, b + b

    def W(spec):
        return "".join(a if ch == "a" else b for ch in spec)

    def E(*bad_prefixes):
        out = L
        for p in bad_prefixes:
            out = B.minus_starting(out, p if isinstance(p, Fsa) else [p])
        return out

    bb_plus_ab = B.lit(b).concat(B.lit(b).plus()).concat(B.lit(ab))  # b b^+ ab
    b_plus_ab = B.lit(b).plus().concat(B.lit(ab))  # b^+ ab
    group = B.cat(
        B.star(B.C(a, b)), B.C(ab, bb), B.C(b, a), B.star(B.C(b, a)), B.C(a, a)
    )
    # ---- right multiplication by a
    rr_a = B.finalize(
        B.branch(RIGHT, 2, B.D(B.minus_ending(L, [ab])), B.pad(a)),
        B.branch(
            RIGHT, 5,
            B.D(B.minus_ending(L, [a, ab]), eps=True),
            B.C("", ba), B.star(group), B.star(B.C(a, b)), B.C(ab, b),
            guard=Lg,
        ),
    )
    # ---- right multiplication by b
    end_abba = B.allw().concat(B.lit(ab)).concat(B.lit(b).plus()).concat(B.lit(a))
    rr_b = B.finalize(
        B.branch(RIGHT, 2, B.D(L.difference(end_abba)), B.pad(b)),
        B.branch(
            RIGHT, 5,
            B.D(B.minus_ending(L, [a, ab]), eps=True),
            B.C("", ba), B.star(group), B.star(B.C(a, b)),
            B.C(ab, bb), B.plus(B.C(b, a)), B.C(a, ""),
            guard=Lg,
        ),
    )
    # ---- left multiplication by a: the thirteen prefix sub-cases
    branches = [
        (2, [B.C("", a), B.D(E(ba, bb_plus_ab), eps=True)]),
        (3, [B.C(b, ""), B.plus(B.C(a, b)), B.C("", ab), B.D(E(ba, a, bb_plus_ab), eps=True)]),
        (4, [B.C(W("bbb"), W("babb")), B.star(B.C(b, a)), B.C(ab, W("aa")), B.D(E(ba, a, b_plus_ab), eps=True)]),
        (6, [B.C(W("bbab"), W("babba")), B.D(E(a, b), eps=True)]),
        (6, [B.C(W("bbab"), ""), B.plus(B.C(b, b)), B.C("", W("babba")), B.D(E(b, ab), eps=True)]),
        (7, [B.C(W("bbabb"), W("bbabbaa")), B.rep(B.C(a, a), 2), B.star(B.C(a, a)), B.C(a, ""), B.D(E(ba, a, bb_plus_ab), eps=True)]),
        (7, [B.C(bb, W("bbabbaa")), B.rep(B.C(b, b), 2), B.star(B.C(b, b)), B.C(W("abb"), ""), B.rep(B.C(a, a), 2), B.star(B.C(a, a)), B.C(a, ""), B.D(E(ba, a, bb_plus_ab), eps=True)]),
        (7, [B.C(W("bbbabb"), b), B.rep(B.C(a, b), 3), B.star(B.C(a, b)), B.C("", W("abbaab")), B.D(E(ba, a, bb_plus_ab), eps=True)]),
        (7, [B.C(bb, W("bbabbaa")), B.star(B.C(b, b)), B.C(W("abba"), ""), B.D(E(ba, a, bb_plus_ab), eps=True)]),
        (2, [B.C(W("bbbabbaa"), W("bbbabbaab")), B.D(E(ba, a, bb_plus_ab), eps=True)]),
        (2, [B.C(W("bbabbaa"), W("bbabbaaa")), B.D(E(ba, a, bb_plus_ab), eps=True)]),
        (7, [B.C(bb, W("bbabbaa")), B.rep(B.C(b, b), 2), B.star(B.C(b, b)), B.C(W("abbaa"), a), B.D(E(a, b), eps=True)]),
        (8, [B.C(W("bbbbb"), W("bbbabbaabbaa")), B.star(B.C(b, a)), B.C(W("abbaab"), ""), B.D(E(a, b_plus_ab), eps=True)]),
        (8, [B.C(W("bbbbabbaa"), bb), B.plus(B.C(b, b)), B.C("", W("abbaabba")), B.D(E(b, ab), eps=True)]),
    ]
    ll_a = B.finalize(
        *[B.branch(LEFT, cap, *items, guard=Lg) for (cap, items) in branches]
    )
    ll_b = B.finalize(B.branch(LEFT, 2, B.C("", b), B.D(L)))
    mults = {
        (a, "rr"): rr_a,
        (b, "rr"): rr_b,
        (a, "ll"): ll_a,
        (b, "ll"): ll_b,
    }
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "mid-swap",
        "swapped middle relator pumping construction", relation=relation,
    )

# --------------------------------------------------------- length-2 right side


def build_prefix_step(u, v, letters, relation=None, case="prefix-step"):
    """Single-rule relator where appending u's last letter rewrites the
    trailing u-prefix in place: pairs (γ·u(k-1), γ·v) with γ·v normal.
    Covers the aba=aa / aab=ab-free shapes and similar."""
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(u, v)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(u, v)}:
        raise NotApplicableError("prefix-step needs a one-rule basis")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    c = u[-1]
    pre = u[:-1]
    mults = {}
    for letter in letters:
        if letter == c:
            continue
        m = B.branch(RIGHT, 2, B.D(B.minus_ending(L, _blockers(rs, letter))), B.pad(letter))
        extra = _onestep_families(B, L, rs, letter)
        if extra is None:
            raise NotApplicableError("letter %r needs a pump family" % letter)
        mults[(letter, "rr")] = B.finalize(m, *extra)
    m = B.branch(RIGHT, 2, B.D(B.minus_ending(L, [pre])), B.pad(c))
    fam = B.branch(
        RIGHT, len(u) + 2, B.D(L, eps=True), B.C(pre, v), guard=(L, L)
    )
    mults[(c, "rr")] = B.finalize(m, fam)
    return _structure(
        letters, rs, L, mults, RR_ONLY, case,
        "one-step trailing rewrite construction", relation=relation,
    )


def _blockers(rs, letter):
    """lhs-minus-last for rules whose lhs ends with the letter."""
    return [r.lhs[:-1] for r in rs.rules if r.lhs.endswith(letter)] + [
        s.lhs_pre + s.lhs_pump * i + s.lhs_suf[:-1]
        for s in rs.schemas
        if s.lhs_suf.endswith(letter)
        for i in range(s.min_i, s.min_i + 1)
    ]


def _onestep_families(B, L, rs, letter):
    """One-step absorb branches for additional rules ending in the letter."""
    out = []
    for r in rs.rules:
        if r.lhs.endswith(letter):
            out.append(
                B.branch(
                    RIGHT, len(r.lhs) + 2,
                    B.D(L, eps=True), B.C(r.lhs[:-1], r.rhs), guard=(L, L),
                )
            )
    if any(s.lhs_suf.endswith(letter) for s in rs.schemas):
        return None
    return out


def build_mid_absorb(a, b, letters, relation=None):
    """aba = ab: schema basis {a b^i a = a b^i}; right-multiplying by a is
    the identity on words ending a b^i."""
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(a + b + a, a + b)], alphabet)
    if set(rs.rules) or set(rs.schemas) != {RuleSchema(a, b, a, a, b, "", 1)}:
        raise NotApplicableError("mid-absorb basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    tail = B.allw().concat(B.lit(a)).concat(B.lit(b).plus())  # ...a b^+
    mults = {}
    for letter in letters:
        if letter == a:
            m = B.branch(RIGHT, 2, B.D(L.difference(tail)), B.pad(a))
            fixed = B.D(L.intersect(tail))
            mults[(a, "rr")] = B.finalize(m, fixed)
        else:
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
    return _structure(
        letters, rs, L, mults, RR_ONLY, "mid-absorb",
        "absorbing middle relator construction", relation=relation,
    )


def build_mid_square(a, b, letters, relation=None):
    """aba = bb: basis {aba=bb, ab³=b³a}; two one-step families plus the
    propagated square."""
    alphabet = Alphabet(tuple(letters))
    u = a + b + a
    rs = shirshov_complete([(u, b + b)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(u, b + b), Rule(a + b * 3, b * 3 + a)}:
        raise NotApplicableError("mid-square basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    ab = a + b
    b3 = b * 3
    mults = {}
    # the emitted square merges with a b-run and the cube tunnels frontward
    mults[(a, "rr")] = B.finalize(
        B.branch(RIGHT, 2, B.D(B.minus_ending(L, [ab])), B.pad(a)),
        B.branch(
            RIGHT, 4, B.D(B.minus_ending(L, [ab]), eps=True),
            B.C(a + ab, a + b + b), guard=(L, L),
        ),
        B.branch(
            RIGHT, 6, B.C("", b3),
            B.D(B.minus_ending(L, [a, ab + b]), eps=True),
            B.C(b + ab, ""), guard=(L, L),
        ),
        B.branch(RIGHT, 4, B.C(ab, b + b), guard=(L, L)),
    )
    mults[(b, "rr")] = B.finalize(
        B.branch(RIGHT, 2, B.D(B.minus_ending(L, [ab + b])), B.pad(b)),
        B.branch(
            RIGHT, 6, B.C("", b3),
            B.D(B.minus_ending(L, [ab]), eps=True),
            B.C(ab + b, a), guard=(L, L),
        ),
    )
    return _structure(
        letters, rs, L, mults, RR_ONLY, "mid-square",
        "squared middle relator construction", relation=relation,
    )


def build_head_absorb(a, b, letters, relation=None):
    """aab = ab: basis {aab=ab}; a-runs before the final b collapse."""
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(a + a + b, a + b)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(a + a + b, a + b)}:
        raise NotApplicableError("head-absorb basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    mults = {}
    mults[(a, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(a)))
    mults[(b, "rr")] = B.finalize(
        B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a + a])), B.pad(b)),
        B.branch(
            RIGHT, 4,
            B.D(B.minus_ending(L, [a]), eps=True),
            B.C(a + a, a + b), B.star(B.C(a, "")),
            guard=(L, L),
        ),
    )
    for letter in letters:
        if letter not in (a, b):
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
    return _structure(
        letters, rs, L, mults, RR_ONLY, "head-absorb",
        "collapsing head run construction", relation=relation,
    )


def build_cube_pair(a, x, y, letters, relation=None):
    """aaa = xy with x,y both different from a: basis {aaa=xy, axy=xya}."""
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(a * 3, x + y)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(a * 3, x + y), Rule(a + x + y, x + y + a)}:
        raise NotApplicableError("cube-pair basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    mults = {}
    mults[(a, "rr")] = B.finalize(
        B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a + a])), B.pad(a)),
        B.branch(
            RIGHT, 3, B.D(B.minus_ending(L, [a]), eps=True), B.C(a + a, x + y),
            guard=(L, L),
        ),
    )
    if x == y:
        fams = [
            B.branch(
                RIGHT, 4, B.D(B.minus_ending(L, [a]), eps=True),
                B.C(a * i + x, x + x + a * i), guard=(L, L),
            )
            for i in (1, 2)
        ]
        mults[(x, "rr")] = B.finalize(
            B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a + x])), B.pad(x)), *fams
        )
    else:
        mults[(x, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(x)))
        fams = [
            B.branch(
                RIGHT, 4, B.D(B.minus_ending(L, [a]), eps=True),
                B.C(a * i + x, x + y + a * i), guard=(L, L),
            )
            for i in (1, 2)
        ]
        mults[(y, "rr")] = B.finalize(
            B.branch(RIGHT, 2, B.D(B.minus_ending(L, [a + x])), B.pad(y)), *fams
        )
    for letter in letters:
        if letter not in (a, x, y):
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
    return _structure(
        letters, rs, L, mults, RR_ONLY, "cube-pair",
        "cube relator two-letter image construction", relation=relation,
    )


def build_cube_shift(a, x, letters, relation=None, side="right"):
    """aaa = xa (side=right) or aaa = ax (side=left mirror), x != a:
    basis {aaa=xa, a x^i a = x^i aa} (resp. {aaa=ax, a y^i a = aa y^i})."""
    alphabet = Alphabet(tuple(letters))
    if side == "right":
        rel = (a * 3, x + a)
        schema = RuleSchema(a, x, a, "", x, a + a, 1)
    else:
        rel = (a * 3, a + x)
        schema = RuleSchema(a, x, a, a + a, x, "", 1)
    rs = shirshov_complete([rel], alphabet)
    if set(rs.rules) != {Rule(a * 3, rel[1])} or set(rs.schemas) != {schema}:
        raise NotApplicableError("cube-shift basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    runend = B.allw().concat(B.lit(a)).concat(B.lit(x).plus())  # ...a x^+
    T = B.minus_ending(L.difference(runend), [a + a])
    Tp = B.minus_ending(L.difference(runend), [a])
    mults = {}
    if side == "right":
        fams = [
            B.branch(RIGHT, 3, B.D(Tp, eps=True), B.C(a + a, x + a), guard=(L, L)),
            B.branch(
                RIGHT, 4, B.D(Tp, eps=True), B.C(a, ""), B.plus(B.C(x, x)),
                B.C("", a + a), guard=(L, L),
            ),
            B.branch(
                RIGHT, 4, B.D(Tp, eps=True), B.C(a + a, x), B.plus(B.C(x, x)),
                B.C("", a), guard=(L, L),
            ),
        ]
    else:
        fams = [
            B.branch(RIGHT, 3, B.D(Tp, eps=True), B.C(a + a, a + x), guard=(L, L)),
            B.branch(
                RIGHT, 4, B.D(Tp, eps=True), B.C(a, a + a), B.plus(B.C(x, x)),
                guard=(L, L),
            ),
            B.branch(
                RIGHT, 4, B.D(Tp, eps=True), B.C(a + a, a + x), B.star(B.C(x, x)),
                B.C(x, x + x), guard=(L, L),
            ),
        ]
    mults[(a, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(T), B.pad(a)), *fams)
    mults[(x, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(x)))
    for letter in letters:
        if letter not in (a, x):
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
    return _structure(
        letters, rs, L, mults, RR_ONLY, "cube-shift",
        "cube relator run-shift construction", relation=relation,
    )


def build_cube_drop(a, letters, relation=None):
    """aaa = aa: appending a to a doubled tail is the identity."""
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(a * 3, a * 2)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(a * 3, a * 2)}:
        raise NotApplicableError("cube-drop basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    tail = B.allw().concat(B.lit(a + a))
    mults = {(a, "rr"): B.finalize(
        B.branch(RIGHT, 2, B.D(L.difference(tail)), B.pad(a)),
        B.D(L.intersect(tail)),
    )}
    for letter in letters:
        if letter != a:
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
    return _structure(
        letters, rs, L, mults, RR_ONLY, "cube-drop",
        "stabilized cube construction", relation=relation,
    )


def build_idempotent(a, letters, relation=None):
    """aa = a: the letter is idempotent; all four flavors."""
    alphabet = Alphabet(tuple(letters))
    rs = shirshov_complete([(a + a, a)], alphabet)
    if rs.schemas or set(rs.rules) != {Rule(a + a, a)}:
        raise NotApplicableError("idempotent basis mismatch")
    B = _Blocks(letters)
    L = rs.irr_language().minimize()
    tail = B.allw().concat(B.lit(a))
    head = B.lit(a).concat(B.allw())
    mults = {}
    mults[(a, "rr")] = B.finalize(
        B.branch(RIGHT, 2, B.D(L.difference(tail)), B.pad(a)),
        B.D(L.intersect(tail)),
    )
    mults[(a, "ll")] = B.finalize(
        B.branch(LEFT, 2, B.C("", a), B.D(L.difference(head))),
        B.D(L.intersect(head)),
    )
    for letter in letters:
        if letter != a:
            mults[(letter, "rr")] = B.finalize(B.branch(RIGHT, 2, B.D(L), B.pad(letter)))
            mults[(letter, "ll")] = B.finalize(B.branch(LEFT, 2, B.C("", letter), B.D(L)))
    mults = _swaps(mults, letters, 1)
    return _structure(
        letters, rs, L, mults, ALL_FLAVORS, "idempotent",
        "idempotent generator construction", relation=relation,
    )
