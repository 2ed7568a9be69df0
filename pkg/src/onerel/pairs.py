"""The padded pair alphabet, both convolutions, and the pair-language combinators.

A pair symbol is a 2-tuple over A ∪ {"$"} minus ("$","$").  A word over pair
symbols carries two tracks; reading the non-pad letters of each track (its
"asynchronous reading") yields a pair of words.  The right convolution pads
the shorter word at its end, the left convolution at its start.

Everything here reduces to one primitive, `resync`: re-express the pairs
denoted by an automaton over pair symbols in the synchronized form of a
chosen side, tracking at most `cap` pending letters per track.  Products of
bounded-difference relations (odot), side swaps, and the compilation of
displayed set expressions are all resync instances.
"""

from dataclasses import dataclass, field

from .fsa import EPS, Fsa, empty, epsilon, literal, _skey
from .words import InvalidInputError

PAD = "$"

RIGHT = "R"
LEFT = "L"


class ContractError(RuntimeError):
    """A declared bound or structural contract was violated."""


def pair_domain(letters):
    ext = tuple(letters) + (PAD,)
    return frozenset(
        (x, y) for x in ext for y in ext if not (x == PAD and y == PAD)
    )


def letters_of(domain):
    out = set()
    for (x, y) in domain:
        if x != PAD:
            out.add(x)
        if y != PAD:
            out.add(y)
    return frozenset(out)


def convolve_right(u, v):
    """Letterwise pairing, trailing padding on the shorter side."""
    if not u and not v:
        raise InvalidInputError("cannot convolve the empty pair (would need ($,$))")
    n = max(len(u), len(v))
    return tuple(
        (u[i] if i < len(u) else PAD, v[i] if i < len(v) else PAD) for i in range(n)
    )


def convolve_left(u, v):
    """Letterwise pairing, leading padding on the shorter side."""
    if not u and not v:
        raise InvalidInputError("cannot convolve the empty pair (would need ($,$))")
    n = max(len(u), len(v))
    du, dv = n - len(u), n - len(v)
    return tuple(
        (u[i - du] if i >= du else PAD, v[i - dv] if i >= dv else PAD)
        for i in range(n)
    )


def convolve(u, v, side):
    return convolve_right(u, v) if side == RIGHT else convolve_left(u, v)


def unconvolve(pairs, side):
    """Inverse of convolve for well-formed padded words."""
    pairs = tuple(pairs)
    if not pairs:
        raise InvalidInputError("empty pair word denotes (ε,ε), which is not a convolution")
    u = "".join(x for (x, y) in pairs if x != PAD)
    v = "".join(y for (x, y) in pairs if y != PAD)
    if convolve(u, v, side) != pairs:
        raise InvalidInputError("malformed %s-convolution: %r" % (side, pairs))
    return (u, v)


def async_reading(pairs):
    """The two track words, ignoring padding placement."""
    u = "".join(x for (x, y) in pairs if x != PAD)
    v = "".join(y for (x, y) in pairs if y != PAD)
    return (u, v)


def wellformed(letters, side):
    """Automaton of well-formed convolutions for the side (empty word included)."""
    dom = pair_domain(letters)
    sync = {(x, y) for (x, y) in dom if x != PAD and y != PAD}
    padl = {(x, y) for (x, y) in dom if y == PAD}  # letters only on left track
    padr = {(x, y) for (x, y) in dom if x == PAD}
    trans = {}
    # states: 0 sync-zone, 1 left-track-only, 2 right-track-only
    for s in (0,):
        for p in sync:
            trans[(0, p)] = {0}
    if side == RIGHT:
        for p in padl:
            trans.setdefault((0, p), set()).add(1)
            trans[(1, p)] = {1}
        for p in padr:
            trans.setdefault((0, p), set()).add(2)
            trans[(2, p)] = {2}
        return Fsa(dom, 3, {0}, {0, 1, 2}, trans)
    # LEFT: padding first, then sync
    trans = {}
    for p in padl:
        trans.setdefault((1, p), set()).add(1)
    for p in padr:
        trans.setdefault((2, p), set()).add(2)
    for p in sync:
        for s in (0, 1, 2):
            trans.setdefault((s, p), set()).add(0)
    m = Fsa(dom, 3, {0, 1, 2}, {0, 1, 2}, trans)
    return m


def diagonal(lang, side=RIGHT, with_epsilon=False):
    """Δ_L: the synchronized pairs (α, α) for α in L; same for both sides."""
    dom = pair_domain(sorted(lang.domain))
    m = lang.map_symbols(lambda a: (a, a), dom)
    if with_epsilon:
        m = m.union(epsilon(dom))
    return m


def resync(m, side, cap, max_configs=500_000):
    """Synchronized convolutions (for the side) of the pairs denoted by m.

    m is any automaton over pair symbols; a pair word denotes its
    asynchronous reading.  The construction simulates m with a FIFO buffer
    per track holding letters that have been read from the synchronized
    stream ahead of m's own consumption; runs needing more than `cap`
    pending letters on a track are dropped (callers pass the declared
    length-difference bound plus slack, which the bound makes complete).
    """
    m = m.eps_free().trim()
    letters = letters_of(m.domain)
    dom = pair_domain(sorted(letters))
    if m.n == 0:
        return empty(dom)
    by_state = {}
    for (src, sym), dsts in m.trans.items():
        by_state.setdefault(src, []).append((sym, dsts))

    def classify(q, bl, br):
        """Consumption steps applicable now, plus whether some transition waits.

        A transition waits when it is blocked only by a letter that has not
        arrived yet (an empty buffer); transitions blocked by a wrong frozen
        front are dead.
        """
        steps = []
        waiting = False
        for (sym, dsts) in by_state.get(q, ()):
            px, py = sym
            if px == PAD:
                okl = True
            elif bl:
                if bl[0] != px:
                    continue
                okl = True
            else:
                okl = False
            if py == PAD:
                okr = True
            elif br:
                if br[0] != py:
                    continue
                okr = True
            else:
                okr = False
            if okl and okr:
                bl2 = bl[1:] if px != PAD else bl
                br2 = br[1:] if py != PAD else br
                for d in dsts:
                    steps.append((d, bl2, br2))
            else:
                waiting = True
        return steps, waiting

    closure_cache = {}

    def persist_closure(seed):
        """Configs reachable by consuming that must survive to the next symbol.

        A config persists when some transition is waiting on an arrival, or
        when it can accept (both buffers empty, accepting state).  Configs
        whose consumptions are all applicable now are pass-through: taking
        them before the next append commutes with taking them after.
        """
        hit = closure_cache.get(seed)
        if hit is not None:
            return hit
        seen = {seed}
        stack = [seed]
        keep = []
        while stack:
            c = stack.pop()
            q, bl, br = c
            steps, waiting = classify(q, bl, br)
            if waiting or (not bl and not br and q in m.accepting):
                keep.append(c)
            for c2 in steps:
                if c2 not in seen:
                    seen.add(c2)
                    stack.append(c2)
        keep = tuple(sorted(keep))
        closure_cache[seed] = keep
        return keep

    init = sorted(
        {c for q in m.initial for c in persist_closure((q, (), ()))}
    )
    index = {}
    order = []
    for c in init:
        index[c] = len(order)
        order.append(c)
    trans = {}
    syms = sorted(dom, key=_skey)
    i = 0
    while i < len(order):
        q, bl, br = order[i]
        for (x, y) in syms:
            bl2 = bl + (x,) if x != PAD else bl
            br2 = br + (y,) if y != PAD else br
            # transient +1 over the cap is fine; sustained buffers are capped
            if len(bl2) > cap + 1 or len(br2) > cap + 1:
                continue
            dests = [
                c2
                for c2 in persist_closure((q, bl2, br2))
                if len(c2[1]) <= cap and len(c2[2]) <= cap
            ]
            if not dests:
                continue
            here = set()
            for c2 in dests:
                j = index.get(c2)
                if j is None:
                    if len(order) >= max_configs:
                        raise ContractError(
                            "resync exceeded %d configurations (cap %d)" % (max_configs, cap)
                        )
                    j = len(order)
                    index[c2] = j
                    order.append(c2)
                here.add(j)
            trans[(i, (x, y))] = here
        i += 1
    accepting = {
        i for i, (q, bl, br) in enumerate(order) if not bl and not br and q in m.accepting
    }
    out = Fsa(dom, len(order), set(range(len(init))), accepting, trans, _trusted=True)
    out = out.intersect(wellformed(sorted(letters), side))
    return out.minimize().trim()


def _audit_bound(m, side, bound, depth, what):
    for w in m.enumerate_words(depth):
        if not w:
            continue
        u, v = async_reading(w)
        if abs(len(u) - len(v)) > bound:
            raise ContractError(
                "%s: pair (%r, %r) violates declared bound %d" % (what, u, v, bound)
            )


def odot_right(m, n, bound, audit_depth=10):
    """Pairwise concatenation of two right-convolution relations (M ⊙ N).

    The left operand must have length differences bounded by `bound`;
    audited up to audit_depth, violations are contract errors.
    """
    letters = sorted(letters_of(m.domain) | letters_of(n.domain))
    dom = pair_domain(letters)
    wf = wellformed(letters, RIGHT)
    m1 = _on_domain(m, dom).intersect(wf)
    n1 = _on_domain(n, dom).intersect(wf)
    _audit_bound(m1, RIGHT, bound, audit_depth, "odot_right left operand")
    return resync(m1.concat(n1), RIGHT, bound + 2)


def odot_left(m, n, bound_left, bound_right, audit_depth=10):
    """Pairwise concatenation under left convolution (M ⊙′ N).

    Follows the swap-to-right route: both operands are re-synchronized to
    the right side, concatenated there, and the result swapped back with
    the combined bound.
    """
    letters = sorted(letters_of(m.domain) | letters_of(n.domain))
    dom = pair_domain(letters)
    wf = wellformed(letters, LEFT)
    m1 = _on_domain(m, dom).intersect(wf)
    n1 = _on_domain(n, dom).intersect(wf)
    _audit_bound(m1, LEFT, bound_left, audit_depth, "odot_left left operand")
    _audit_bound(n1, LEFT, bound_right, audit_depth, "odot_left right operand")
    mr = resync(m1, RIGHT, bound_left + 2)
    nr = resync(n1, RIGHT, bound_right + 2)
    both = resync(mr.concat(nr), RIGHT, bound_left + 2)
    return resync(both, LEFT, bound_left + bound_right + 2)


def swap_side(m, bound, from_side, audit_depth=10):
    """The same pair relation convolved on the other side."""
    letters = sorted(letters_of(m.domain))
    wf = wellformed(letters, from_side)
    m1 = m.intersect(wf)
    _audit_bound(m1, from_side, bound, audit_depth, "swap_side operand")
    return resync(m1, LEFT if from_side == RIGHT else RIGHT, bound + 2)


def _on_domain(m, dom):
    if m.domain == dom:
        return m
    if not m.domain <= dom:
        extra = m.domain - dom
        raise InvalidInputError("pair symbols %r outside target domain" % (sorted(extra),))
    return Fsa(dom, m.n, m.initial, m.accepting, dict(m.trans))


def pairs_product(l1, l2, side):
    """(L1 × L2)δ^side: all convolutions of pairs from L1 × L2."""
    letters = sorted(l1.domain | l2.domain)
    dom = pair_domain(letters)
    a = _with_domain_letters(l1, letters).eps_free()
    b = _with_domain_letters(l2, letters).eps_free()
    return _pairs_product_full(a, b, side, letters, dom)


def _with_domain_letters(m, letters):
    dom = frozenset(letters)
    if m.domain == dom:
        return m
    return Fsa(dom, m.n, m.initial, m.accepting, dict(m.trans))


def _pairs_product_full(a, b, side, letters, dom):
    index = {}
    order = []

    def intern(key):
        if key not in index:
            index[key] = len(order)
            order.append(key)
        return index[key]

    # phase meanings: "s" sync allowed next (left side: padding done),
    # for RIGHT: "s" sync zone, "l" left-pad zone, "r" right-pad zone
    for sa in sorted(a.initial):
        for sb in sorted(b.initial):
            intern((sa, sb, "s" if side == RIGHT else "p"))
    trans = {}
    i = 0
    while i < len(order):
        sa, sb, ph = order[i]
        for x in letters:
            da = sorted(a.trans.get((sa, x), frozenset()))
            db = sorted(b.trans.get((sb, x), frozenset()))
            if side == RIGHT:
                if ph == "s":
                    for y in letters:
                        dby = sorted(b.trans.get((sb, y), frozenset()))
                        for ta in da:
                            for tb in dby:
                                trans.setdefault((i, (x, y)), set()).add(intern((ta, tb, "s")))
                if ph in ("s", "l"):
                    for ta in da:
                        trans.setdefault((i, (x, PAD)), set()).add(intern((ta, sb, "l")))
                if ph in ("s", "r"):
                    for tb in db:
                        trans.setdefault((i, (PAD, x)), set()).add(intern((sa, tb, "r")))
            else:
                if ph == "p":
                    for ta in da:
                        trans.setdefault((i, (x, PAD)), set()).add(intern((ta, sb, "pl")))
                    for tb in db:
                        trans.setdefault((i, (PAD, x)), set()).add(intern((sa, tb, "pr")))
                if ph == "pl":
                    for ta in da:
                        trans.setdefault((i, (x, PAD)), set()).add(intern((ta, sb, "pl")))
                if ph == "pr":
                    for tb in db:
                        trans.setdefault((i, (PAD, x)), set()).add(intern((sa, tb, "pr")))
                # entering / staying in the sync zone
                if ph in ("p", "pl", "pr", "s"):
                    for y in letters:
                        dby = sorted(b.trans.get((sb, y), frozenset()))
                        for ta in da:
                            for tb in dby:
                                trans.setdefault((i, (x, y)), set()).add(intern((ta, tb, "s")))
        i += 1
    accepting = {
        i
        for i, (sa, sb, ph) in enumerate(order)
        if sa in a.accepting and sb in b.accepting
    }
    inits = {
        index[k]
        for k in index
        if k[0] in a.initial and k[1] in b.initial and k[2] in ("s", "p")
    }
    return Fsa(dom, max(len(order), 1), inits, accepting, trans).trim()


# ------------------------------------------------------------ expression trees


class Expr:
    """Combinator tree denoting a regular language of pair words."""


@dataclass(frozen=True)
class DiagOf(Expr):
    lang: Fsa
    with_epsilon: bool = False


@dataclass(frozen=True)
class PairConst(Expr):
    u: str
    v: str
    side: str = RIGHT


@dataclass(frozen=True)
class Concat(Expr):
    items: tuple


@dataclass(frozen=True)
class Union(Expr):
    items: tuple


@dataclass(frozen=True)
class Star(Expr):
    item: Expr


@dataclass(frozen=True)
class Plus(Expr):
    item: Expr


@dataclass(frozen=True)
class OdotR(Expr):
    left: Expr
    right: Expr
    bound: int


@dataclass(frozen=True)
class OdotL(Expr):
    left: Expr
    right: Expr
    bound_left: int
    bound_right: int


@dataclass(frozen=True)
class IntersectPairs(Expr):
    item: Expr
    lang1: Fsa
    lang2: Fsa
    side: str


@dataclass(frozen=True)
class Sync(Expr):
    """Resynchronize an asynchronous block concatenation to one side."""

    item: Expr
    side: str
    cap: int


@dataclass(frozen=True)
class Raw(Expr):
    fsa: Fsa


def eval_expr(expr, letters):
    """Compile a combinator tree to an automaton over the pair alphabet."""
    dom = pair_domain(letters)

    def ev(e):
        if isinstance(e, Raw):
            return _on_domain(e.fsa, dom)
        if isinstance(e, DiagOf):
            return _on_domain(diagonal(e.lang, with_epsilon=e.with_epsilon), dom)
        if isinstance(e, PairConst):
            if not e.u and not e.v:
                return epsilon(dom)
            return literal(dom, convolve(e.u, e.v, e.side))
        if isinstance(e, Concat):
            out = epsilon(dom)
            for it in e.items:
                out = out.concat(ev(it))
            return out
        if isinstance(e, Union):
            out = empty(dom)
            for it in e.items:
                out = out.union(ev(it))
            return out
        if isinstance(e, Star):
            return ev(e.item).star()
        if isinstance(e, Plus):
            return ev(e.item).plus()
        if isinstance(e, OdotR):
            return odot_right(ev(e.left), ev(e.right), e.bound)
        if isinstance(e, OdotL):
            return odot_left(ev(e.left), ev(e.right), e.bound_left, e.bound_right)
        if isinstance(e, IntersectPairs):
            guard = pairs_product(e.lang1, e.lang2, e.side)
            return ev(e.item).intersect(_on_domain(guard, dom))
        if isinstance(e, Sync):
            return resync(ev(e.item), e.side, e.cap)
        raise InvalidInputError("unknown expression node %r" % (e,))

    return ev(expr)


def format_pairs(pairs):
    return " ".join("%s|%s" % p for p in pairs)
