"""Finite automata over a generic symbol domain, plus gsm machines.

Symbols may be single-character strings (letters) or 2-tuples (padded pair
symbols); automata never care.  Nondeterministic with epsilon moves and a
set of initial states; deterministic automata are the restricted form.
"""

from .words import InvalidInputError


class _Eps:
    __slots__ = ()

    def __repr__(self):
        return "EPS"


EPS = _Eps()


def _skey(sym):
    """Total order on symbols of mixed shape, for deterministic iteration."""
    if isinstance(sym, tuple):
        return (1, sym)
    return (0, (str(sym),))


class Fsa:
    """Immutable NFA: states are 0..n-1, transitions a dict keyed by (state, symbol)."""

    __slots__ = ("domain", "n", "initial", "accepting", "trans", "deterministic")

    def __init__(self, domain, n, initial, accepting, trans, deterministic=False, _trusted=False):
        self.domain = frozenset(domain)
        self.n = n
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        tidy = {}
        if _trusted:
            for key, dsts in trans.items():
                if dsts:
                    tidy[key] = frozenset(dsts)
        else:
            for (src, sym), dsts in trans.items():
                if not (0 <= src < n):
                    raise InvalidInputError("transition source %r out of range" % src)
                if sym is not EPS and sym not in self.domain:
                    raise InvalidInputError("transition symbol %r not in domain" % (sym,))
                ds = frozenset(dsts)
                for d in ds:
                    if not (0 <= d < n):
                        raise InvalidInputError("transition target %r out of range" % d)
                if ds:
                    tidy[(src, sym)] = ds
        self.trans = tidy
        if deterministic:
            if len(self.initial) != 1:
                raise InvalidInputError("DFA needs exactly one initial state")
            for (src, sym), dsts in tidy.items():
                if sym is EPS or len(dsts) > 1:
                    raise InvalidInputError("DFA cannot have EPS moves or branching")
        self.deterministic = deterministic

    # ------------------------------------------------------------------ core

    def _closure(self, states):
        seen = set(states)
        stack = list(states)
        while stack:
            s = stack.pop()
            for t in self.trans.get((s, EPS), ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def step(self, states, sym):
        out = set()
        for s in states:
            out |= self.trans.get((s, sym), frozenset())
        return self._closure(out)

    def accepts(self, word):
        for sym in word:
            if sym not in self.domain:
                raise InvalidInputError("symbol %r not in automaton domain" % (sym,))
        cur = self._closure(self.initial)
        for sym in word:
            cur = self.step(cur, sym)
            if not cur:
                return False
        return bool(cur & self.accepting)

    def has_eps(self):
        return any(sym is EPS for (_, sym) in self.trans)

    def eps_free(self):
        """Equivalent automaton without EPS moves."""
        if not self.has_eps():
            return self
        closures = [self._closure({s}) for s in range(self.n)]
        by_state = {}
        for (src, sym), dsts in self.trans.items():
            if sym is not EPS:
                by_state.setdefault(src, {}).setdefault(sym, set()).update(dsts)
        trans = {}
        accepting = set()
        for s in range(self.n):
            cl = closures[s]
            if cl & self.accepting:
                accepting.add(s)
            merged = {}
            for c in cl:
                for sym, dsts in by_state.get(c, {}).items():
                    merged.setdefault(sym, set()).update(dsts)
            for sym, dsts in merged.items():
                full = set()
                for d in dsts:
                    full |= closures[d]
                trans[(s, sym)] = full
        return Fsa(self.domain, self.n, self.initial, accepting, trans)

    # ------------------------------------------------------------ conversions

    def determinize(self):
        """Subset construction; result is a (possibly partial) DFA."""
        if self.deterministic:
            return self
        m = self.eps_free()
        start = m._closure(m.initial)
        index = {start: 0}
        order = [start]
        trans = {}
        accepting = set()
        syms = sorted(m.domain, key=_skey)
        i = 0
        while i < len(order):
            cur = order[i]
            if cur & m.accepting:
                accepting.add(i)
            for sym in syms:
                nxt = set()
                for s in cur:
                    nxt |= m.trans.get((s, sym), frozenset())
                if not nxt:
                    continue
                nxt = frozenset(nxt)
                if nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                trans[(i, sym)] = {index[nxt]}
            i += 1
        return Fsa(m.domain, len(order), {0}, accepting, trans, deterministic=True)

    def complete(self):
        """Deterministic and total: every (state, symbol) has a successor."""
        d = self.determinize()
        syms = sorted(d.domain, key=_skey)
        missing = [(s, sym) for s in range(d.n) for sym in syms if (s, sym) not in d.trans]
        if not missing:
            return d
        sink = d.n
        trans = dict(d.trans)
        for key in missing:
            trans[key] = {sink}
        for sym in syms:
            trans[(sink, sym)] = {sink}
        return Fsa(d.domain, d.n + 1, d.initial, d.accepting, trans, deterministic=True)

    def trim(self):
        """Drop states that are unreachable or cannot reach acceptance."""
        fwd = set(self.initial)
        stack = list(fwd)
        succ = {}
        pred = {}
        for (src, sym), dsts in self.trans.items():
            succ.setdefault(src, set()).update(dsts)
            for d in dsts:
                pred.setdefault(d, set()).add(src)
        while stack:
            s = stack.pop()
            for t in succ.get(s, ()):
                if t not in fwd:
                    fwd.add(t)
                    stack.append(t)
        bwd = set(self.accepting)
        stack = list(bwd)
        while stack:
            s = stack.pop()
            for t in pred.get(s, ()):
                if t not in bwd:
                    bwd.add(t)
                    stack.append(t)
        keep = sorted(fwd & bwd)
        if len(keep) == self.n:
            return self
        remap = {s: i for i, s in enumerate(keep)}
        trans = {}
        for (src, sym), dsts in self.trans.items():
            if src in remap:
                ds = {remap[d] for d in dsts if d in remap}
                if ds:
                    trans[(remap[src], sym)] = ds
        return Fsa(
            self.domain,
            len(keep),
            {remap[s] for s in self.initial if s in remap},
            {remap[s] for s in self.accepting if s in remap},
            trans,
        )

    def minimize(self):
        """Unique minimal complete DFA (Moore refinement); the sink is kept."""
        d = self.complete()
        # drop unreachable states first
        reach = set(d.initial)
        stack = list(reach)
        while stack:
            s = stack.pop()
            for sym in d.domain:
                for t in d.trans.get((s, sym), ()):
                    if t not in reach:
                        reach.add(t)
                        stack.append(t)
        order = sorted(reach)
        remap = {s: i for i, s in enumerate(order)}
        syms = sorted(d.domain, key=_skey)
        nxt = {
            (remap[s], sym): remap[next(iter(d.trans[(s, sym)]))]
            for s in order
            for sym in syms
        }
        n = len(order)
        accepting = {remap[s] for s in d.accepting if s in remap}
        block = [1 if s in accepting else 0 for s in range(n)]
        while True:
            sigs = {}
            newblock = [0] * n
            for s in range(n):
                sig = (block[s],) + tuple(block[nxt[(s, sym)]] for sym in syms)
                if sig not in sigs:
                    sigs[sig] = len(sigs)
                newblock[s] = sigs[sig]
            if newblock == block:
                break
            block = newblock
        classes = sorted(set(block))
        cmap = {c: i for i, c in enumerate(classes)}
        init = cmap[block[remap[next(iter(d.initial))]]]
        trans = {}
        for s in range(n):
            for sym in syms:
                trans[(cmap[block[s]], sym)] = {cmap[block[nxt[(s, sym)]]]}
        acc = {cmap[block[s]] for s in range(n) if s in accepting}
        return Fsa(d.domain, len(classes), {init}, acc, trans, deterministic=True)

    # ------------------------------------------------------------- operations

    def _disjoint(self, other, pad):
        trans = {}
        for (src, sym), dsts in other.trans.items():
            trans[(src + pad, sym)] = {d + pad for d in dsts}
        return trans

    def union(self, other):
        _same_domain(self, other)
        trans = dict(self.trans)
        trans.update(self._disjoint(other, self.n))
        return Fsa(
            self.domain,
            self.n + other.n,
            self.initial | {s + self.n for s in other.initial},
            self.accepting | {s + self.n for s in other.accepting},
            trans,
        )

    def concat(self, other):
        _same_domain(self, other)
        trans = dict(self.trans)
        trans.update(self._disjoint(other, self.n))
        for s in self.accepting:
            cur = set(trans.get((s, EPS), frozenset()))
            cur |= {i + self.n for i in other.initial}
            trans[(s, EPS)] = cur
        return Fsa(
            self.domain,
            self.n + other.n,
            self.initial,
            {s + self.n for s in other.accepting},
            trans,
        )

    def star(self):
        trans = {}
        for (src, sym), dsts in self.trans.items():
            trans[(src + 1, sym)] = {d + 1 for d in dsts}
        trans[(0, EPS)] = {s + 1 for s in self.initial}
        for s in self.accepting:
            cur = set(trans.get((s + 1, EPS), frozenset()))
            cur.add(0)
            trans[(s + 1, EPS)] = cur
        return Fsa(self.domain, self.n + 1, {0}, {0}, trans)

    def plus(self):
        return self.concat(self.star())

    def intersect(self, other):
        _same_domain(self, other)
        a = self.eps_free()
        b = other.eps_free()
        ta_sorted = {k: sorted(v) for k, v in a.trans.items()}
        tb_sorted = {k: sorted(v) for k, v in b.trans.items()}
        index = {}
        order = []
        for sa in sorted(a.initial):
            for sb in sorted(b.initial):
                if (sa, sb) not in index:
                    index[(sa, sb)] = len(order)
                    order.append((sa, sb))
        trans = {}
        i = 0
        syms = sorted(self.domain, key=_skey)
        empty_list = []
        while i < len(order):
            sa, sb = order[i]
            for sym in syms:
                da = ta_sorted.get((sa, sym), empty_list)
                if not da:
                    continue
                db = tb_sorted.get((sb, sym), empty_list)
                if not db:
                    continue
                dests = set()
                for ta in da:
                    for tb in db:
                        key = (ta, tb)
                        j = index.get(key)
                        if j is None:
                            j = len(order)
                            index[key] = j
                            order.append(key)
                        dests.add(j)
                trans[(i, sym)] = dests
            i += 1
        accepting = {
            i for i, (sa, sb) in enumerate(order) if sa in a.accepting and sb in b.accepting
        }
        init = {index[p] for p in index if p[0] in a.initial and p[1] in b.initial}
        return Fsa(
            self.domain, max(len(order), 1), init, accepting, trans, _trusted=True
        ).trim()

    def complement(self):
        d = self.complete()
        return Fsa(
            d.domain, d.n, d.initial, set(range(d.n)) - set(d.accepting), d.trans, True
        )

    def difference(self, other):
        return self.intersect(other.complement())

    def reverse(self):
        """Accepts the letter-reversals of the language."""
        trans = {}
        for (src, sym), dsts in self.trans.items():
            for d in dsts:
                trans.setdefault((d, sym), set()).add(src)
        return Fsa(self.domain, self.n, self.accepting, self.initial, trans)

    def map_symbols(self, fn, domain):
        """Relabel transition symbols (EPS is preserved)."""
        trans = {}
        for (src, sym), dsts in self.trans.items():
            key = EPS if sym is EPS else fn(sym)
            trans.setdefault((src, key), set()).update(dsts)
        return Fsa(domain, self.n, self.initial, self.accepting, trans)

    def right_quotient(self, word):
        """Language of w with w·word accepted."""
        m = self.eps_free()
        target = set(m.accepting)
        for sym in reversed(list(word)):
            target = {
                s for s in range(m.n) if m.trans.get((s, sym), frozenset()) & target
            }
            closed = set(target)
            # epsilon-free already; nothing else to do
            target = closed
        return Fsa(m.domain, m.n, m.initial, target, m.trans)

    def is_empty(self):
        t = self.trim()
        return t.n == 0 or not t.accepting

    def num_states(self):
        return self.n

    # -------------------------------------------------------------- analysis

    def enumerate_words(self, max_len, order=None):
        """Accepted words of length <= max_len, shortest first then by symbol order."""
        d = self.determinize().trim()
        if d.n == 0 or not d.accepting:
            return []
        syms = sorted(d.domain, key=_skey) if order is None else list(order)
        start = next(iter(d.initial))
        out = []
        frontier = [((), start)]
        if start in d.accepting:
            out.append(())
        for _ in range(max_len):
            nxt = []
            for word, s in frontier:
                for sym in syms:
                    ds = d.trans.get((s, sym))
                    if not ds:
                        continue
                    t = next(iter(ds))
                    w2 = word + (sym,)
                    nxt.append((w2, t))
                    if t in d.accepting:
                        out.append(w2)
            frontier = nxt
            if not frontier:
                break
        return out

    def count_words(self, max_len):
        """Number of accepted words of each length 0..max_len."""
        d = self.complete()
        vec = {s: 0 for s in range(d.n)}
        for s in d.initial:
            vec[s] = 1
        counts = [sum(vec[s] for s in d.accepting)]
        syms = sorted(d.domain, key=_skey)
        for _ in range(max_len):
            nxt = {s: 0 for s in range(d.n)}
            for s, c in vec.items():
                if not c:
                    continue
                for sym in syms:
                    t = next(iter(d.trans[(s, sym)]))
                    nxt[t] += c
            vec = nxt
            counts.append(sum(vec[s] for s in d.accepting))
        return counts

    def equivalent(self, other):
        return self.shortest_distinguisher(other) is None

    def shortest_distinguisher(self, other):
        """Shortest word in the symmetric difference, or None if equivalent."""
        _same_domain(self, other)
        a = self.complete()
        b = other.complete()
        sa0 = next(iter(a.initial))
        sb0 = next(iter(b.initial))
        seen = {(sa0, sb0)}
        frontier = [((), sa0, sb0)]
        syms = sorted(self.domain, key=_skey)
        while frontier:
            nxt = []
            for word, sa, sb in frontier:
                if (sa in a.accepting) != (sb in b.accepting):
                    return word
                for sym in syms:
                    ta = next(iter(a.trans[(sa, sym)]))
                    tb = next(iter(b.trans[(sb, sym)]))
                    if (ta, tb) not in seen:
                        seen.add((ta, tb))
                        nxt.append((word + (sym,), ta, tb))
            frontier = nxt
        return None

    # ---------------------------------------------------------- serialization

    def to_text(self):
        lines = ["domain " + " ".join(format_symbol(s) for s in sorted(self.domain, key=_skey))]
        for s in range(self.n):
            flags = ""
            if s in self.initial:
                flags += " initial"
            if s in self.accepting:
                flags += " accept"
            lines.append("state %d%s" % (s, flags))
        for (src, sym), dsts in sorted(
            self.trans.items(), key=lambda kv: (kv[0][0], _skey(kv[0][1]) if kv[0][1] is not EPS else (-1, ()))
        ):
            for d in sorted(dsts):
                lines.append("trans %d %s %d" % (src, "EPS" if sym is EPS else format_symbol(sym), d))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text):
        domain = []
        states = {}
        initial = set()
        accepting = set()
        trans = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "domain":
                domain = [parse_symbol(t) for t in parts[1:]]
            elif parts[0] == "state":
                sid = int(parts[1])
                states[sid] = True
                if "initial" in parts[2:]:
                    initial.add(sid)
                if "accept" in parts[2:]:
                    accepting.add(sid)
            elif parts[0] == "trans":
                src = int(parts[1])
                sym = EPS if parts[2] == "EPS" else parse_symbol(parts[2])
                dst = int(parts[3])
                trans.setdefault((src, sym), set()).add(dst)
            else:
                raise InvalidInputError("bad automaton line: %r" % line)
        n = max(states) + 1 if states else 0
        return Fsa(domain, n, initial, accepting, trans)

    def to_dot(self, name="fsa"):
        lines = ["digraph %s {" % name, "  rankdir=LR;"]
        for s in range(self.n):
            shape = "doublecircle" if s in self.accepting else "circle"
            lines.append('  %d [shape=%s];' % (s, shape))
        for s in sorted(self.initial):
            lines.append('  start%d [shape=point];' % s)
            lines.append("  start%d -> %d;" % (s, s))
        for (src, sym), dsts in sorted(
            self.trans.items(), key=lambda kv: (kv[0][0], _skey(kv[0][1]) if kv[0][1] is not EPS else (-1, ()))
        ):
            lab = "EPS" if sym is EPS else format_symbol(sym)
            for d in sorted(dsts):
                lines.append('  %d -> %d [label="%s"];' % (src, d, lab))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _same_domain(a, b):
    if a.domain != b.domain:
        raise InvalidInputError(
            "domain mismatch: %r vs %r" % (sorted(a.domain, key=_skey), sorted(b.domain, key=_skey))
        )


def format_symbol(sym):
    if isinstance(sym, tuple):
        return "%s|%s" % sym
    return str(sym)


def parse_symbol(tok):
    if "|" in tok:
        l, r = tok.split("|")
        return (l, r)
    return tok


# --------------------------------------------------------------- constructors


def empty(domain):
    return Fsa(domain, 1, {0}, set(), {})


def epsilon(domain):
    return Fsa(domain, 1, {0}, {0}, {})


def literal(domain, word):
    word = list(word)
    trans = {}
    for i, sym in enumerate(word):
        trans[(i, sym)] = {i + 1}
    return Fsa(domain, len(word) + 1, {0}, {len(word)}, trans)


def any_of(domain, words):
    m = empty(domain)
    for w in words:
        m = m.union(literal(domain, w))
    return m


def all_words(domain):
    trans = {(0, sym): {0} for sym in domain}
    return Fsa(domain, 1, {0}, {0}, trans, deterministic=True)


def nonempty_words(domain):
    trans = {(0, sym): {1} for sym in domain}
    trans.update({(1, sym): {1} for sym in domain})
    return Fsa(domain, 2, {0}, {1}, trans, deterministic=True)


def factor_free(domain, factors_fsa):
    """Nonempty words containing no factor from the given language."""
    with_factor = all_words(domain).concat(factors_fsa).concat(all_words(domain))
    return nonempty_words(domain).difference(with_factor)


# ------------------------------------------------------------------------ gsm


class Gsm:
    """Generalized sequential machine with word outputs on transitions."""

    def __init__(self, n, input_alphabet, output_alphabet, moves, initial, terminals):
        self.n = n
        self.input_alphabet = frozenset(input_alphabet)
        self.output_alphabet = frozenset(output_alphabet)
        self.moves = {}
        for (q, a), opts in moves.items():
            if not (0 <= q < n) or a not in self.input_alphabet:
                raise InvalidInputError("bad gsm move key (%r, %r)" % (q, a))
            outs = []
            for (q2, out) in opts:
                if not (0 <= q2 < n):
                    raise InvalidInputError("bad gsm target %r" % q2)
                for c in out:
                    if c not in self.output_alphabet:
                        raise InvalidInputError("gsm output letter %r unknown" % c)
                outs.append((q2, tuple(out)))
            self.moves[(q, a)] = tuple(outs)
        if not (0 <= initial < n):
            raise InvalidInputError("bad gsm initial state")
        self.initial = initial
        self.terminals = frozenset(terminals)

    def apply(self, word):
        """All output words of successful paths reading the given input."""
        configs = {(self.initial, ())}
        for a in word:
            nxt = set()
            for (q, out) in configs:
                for (q2, o) in self.moves.get((q, a), ()):
                    nxt.add((q2, out + o))
            configs = nxt
            if not configs:
                return set()
        return {"".join(out) for (q, out) in configs if q in self.terminals}


def gsm_image(g, x):
    """Automaton for the image of L(x) under the gsm (outputs of successful paths)."""
    if x.domain != g.input_alphabet:
        raise InvalidInputError("gsm input alphabet does not match automaton domain")
    m = x.eps_free()
    # product states keyed (m-state, gsm-state); chain states keyed uniquely
    keys = {}
    edges = []  # (src_key, sym_or_EPS, dst_key)

    def intern(key):
        if key not in keys:
            keys[key] = len(keys)
        return keys[key]

    pending = [("p", s, g.initial) for s in sorted(m.initial)]
    for k in pending:
        intern(k)
    seen = set(pending)
    serial = [0]
    while pending:
        key = pending.pop()
        _, s, q = key
        for a in sorted(g.input_alphabet):
            for t in sorted(m.trans.get((s, a), frozenset())):
                for (q2, out) in g.moves.get((q, a), ()):
                    dst = ("p", t, q2)
                    if dst not in seen:
                        seen.add(dst)
                        intern(dst)
                        pending.append(dst)
                    if not out:
                        edges.append((key, EPS, dst))
                    else:
                        cur = key
                        for c in out[:-1]:
                            mid = ("c", serial[0])
                            serial[0] += 1
                            intern(mid)
                            edges.append((cur, c, mid))
                            cur = mid
                        edges.append((cur, out[-1], dst))
    trans = {}
    for (src, sym, dst) in edges:
        trans.setdefault((keys[src], sym), set()).add(keys[dst])
    initial = {keys[("p", s, g.initial)] for s in m.initial}
    accepting = {
        keys[k] for k in keys if k[0] == "p" and k[1] in m.accepting and k[2] in g.terminals
    }
    out = Fsa(g.output_alphabet, max(len(keys), 1), initial, accepting, trans)
    # images live in B+: drop the empty word if a zero-output path produced it
    return out.difference(epsilon(g.output_alphabet)).trim()
