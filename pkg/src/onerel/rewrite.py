"""Two-term string rewriting: orientation, compositions, completion, normal forms.

Relations are pairs of words; rules are deg-lex oriented.  Completion is
Shirshov's algorithm restricted to binomial (word = word) relations: compute
all compositions, reduce, add the nontrivial ones, repeat.  Infinite bases
are captured as pumped rule schemas  pre·pump^i·suf -> rpre·rpump^i·rsuf
detected from the generated rule sequence and re-verified by a bounded
composition audit.
"""

from dataclasses import dataclass

from .fsa import all_words, any_of, empty, factor_free, literal, nonempty_words
from .words import Alphabet, GREATER, InvalidInputError, deglex_compare, deglex_key

COMPLETE = "complete"
BOUNDED = "bounded_incomplete"
UNKNOWN = "unknown"


class TrivialRelationError(InvalidInputError):
    pass


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: str

    def __str__(self):
        return "%s->%s" % (self.lhs, self.rhs if self.rhs else "1")


@dataclass(frozen=True)
class RuleSchema:
    """Pumped rule family: lhs_pre·lhs_pump^i·lhs_suf -> rhs_pre·rhs_pump^i·rhs_suf, i >= min_i."""

    lhs_pre: str
    lhs_pump: str
    lhs_suf: str
    rhs_pre: str
    rhs_pump: str
    rhs_suf: str
    min_i: int

    def instance(self, i):
        return Rule(
            self.lhs_pre + self.lhs_pump * i + self.lhs_suf,
            self.rhs_pre + self.rhs_pump * i + self.rhs_suf,
        )

    def __str__(self):
        return "%s(%s)^i%s->%s(%s)^i%s for i>=%d" % (
            self.lhs_pre,
            self.lhs_pump,
            self.lhs_suf,
            self.rhs_pre,
            self.rhs_pump,
            self.rhs_suf,
            self.min_i,
        )


def orient(u, v, alphabet):
    """Rule with the deg-lex-greater side as lhs."""
    if u == v:
        raise TrivialRelationError("relation %r = %r is trivial" % (u, v))
    if not u and not v:
        raise InvalidInputError("empty relation")
    cmp = deglex_compare(u, v, alphabet)
    lhs, rhs = (u, v) if cmp == GREATER else (v, u)
    if not lhs:
        raise InvalidInputError("empty word cannot be a rule lhs")
    return Rule(lhs, rhs)


def check_rule(rule, alphabet):
    if not rule.lhs:
        raise InvalidInputError("rule lhs may not be empty")
    if deglex_compare(rule.lhs, rule.rhs, alphabet) != GREATER:
        raise InvalidInputError("rule %s is not deg-lex oriented" % rule)


def compositions(r1, r2):
    """Intersection and inclusion compositions of two rules.

    Returns (ambiguity, left_result, right_result) triples.  Intersection:
    a proper suffix of lhs1 equal to a proper prefix of lhs2.  Inclusion:
    lhs2 occurring inside lhs1 (the full self-overlap of a rule with itself
    is skipped as trivially trivial).
    """
    out = []
    l1, l2 = r1.lhs, r2.lhs
    for t in range(1, min(len(l1), len(l2))):
        if l1[-t:] == l2[:t]:
            w = l1 + l2[t:]
            out.append((w, r1.rhs + l2[t:], l1[:-t] + r2.rhs))
    start = 0
    while True:
        k = l1.find(l2, start)
        if k < 0:
            break
        a, b = l1[:k], l1[k + len(l2):]
        if not (r1 == r2 and not a and not b):
            out.append((l1, r1.rhs, a + r2.rhs + b))
        start = k + 1
    return out


class RewriteSystem:
    """Oriented rules plus pumped schemas over a deg-lex ordered alphabet."""

    def __init__(self, alphabet, rules=(), schemas=(), complete_flag=UNKNOWN):
        self.alphabet = alphabet
        self.rules = tuple(rules)
        self.schemas = tuple(schemas)
        for r in self.rules:
            check_rule(r, alphabet)
        for s in self.schemas:
            if not s.lhs_pump:
                raise InvalidInputError("schema lhs pump may not be empty")
            for i in range(s.min_i, s.min_i + 6):
                check_rule(s.instance(i), alphabet)
        self.complete_flag = complete_flag

    def __repr__(self):
        return "RewriteSystem(rules=[%s], schemas=[%s], %s)" % (
            ", ".join(str(r) for r in self.rules),
            ", ".join(str(s) for s in self.schemas),
            self.complete_flag,
        )

    # ------------------------------------------------------------- rewriting

    def _match_at(self, word, pos):
        """Longest redex at a position: (length, declaration rank, replacement)."""
        best = None
        for rank, r in enumerate(self.rules):
            if word.startswith(r.lhs, pos):
                cand = (len(r.lhs), -rank, r.rhs)
                if best is None or (cand[0], cand[1]) > (best[0], best[1]):
                    best = cand
        base = len(self.rules)
        for k, s in enumerate(self.schemas):
            if not word.startswith(s.lhs_pre, pos):
                continue
            p = pos + len(s.lhs_pre)
            reps = 0
            while word.startswith(s.lhs_pump, p):
                p += len(s.lhs_pump)
                reps += 1
            for j in range(reps, s.min_i - 1, -1):
                end = pos + len(s.lhs_pre) + j * len(s.lhs_pump)
                if word.startswith(s.lhs_suf, end):
                    length = len(s.lhs_pre) + j * len(s.lhs_pump) + len(s.lhs_suf)
                    cand = (length, -(base + k), s.rhs_pre + s.rhs_pump * j + s.rhs_suf)
                    if best is None or (cand[0], cand[1]) > (best[0], best[1]):
                        best = cand
                    break
        return best

    def rewrite_once(self, word):
        """Leftmost redex (longest lhs, then declaration order), or None."""
        for pos in range(len(word)):
            hit = self._match_at(word, pos)
            if hit is not None:
                length, _rank, repl = hit
                return word[:pos] + repl + word[pos + length:]
        return None

    def reduce(self, word):
        """Normal form under the leftmost/longest/declaration-order strategy."""
        while True:
            nxt = self.rewrite_once(word)
            if nxt is None:
                return word
            word = nxt

    def is_reducible(self, word):
        return self.rewrite_once(word) is not None

    # ------------------------------------------------------------- languages

    def domain(self):
        return frozenset(self.alphabet.letters)

    def leading_language(self):
        """Regular language of all rule lhs words (schema patterns included)."""
        dom = self.domain()
        m = any_of(dom, [r.lhs for r in self.rules])
        for s in self.schemas:
            pump = literal(dom, s.lhs_pump)
            block = literal(dom, s.lhs_pre)
            for _ in range(s.min_i):
                block = block.concat(pump)
            block = block.concat(pump.star()).concat(literal(dom, s.lhs_suf))
            m = m.union(block)
        return m

    def irr_language(self, with_identity=None):
        """Nonempty words containing no leading word as a factor.

        with_identity=e builds the language over alphabet + e (identity
        adjoined, absorption rules in the leading set): {e} plus the e-free
        irreducible words.
        """
        if with_identity is None:
            dom = self.domain()
            return factor_free(dom, self.leading_language())
        e = with_identity
        if e in self.alphabet:
            raise InvalidInputError("identity letter %r already in alphabet" % e)
        letters = (e,) + tuple(self.alphabet.letters)
        dom = frozenset(letters)
        lead = any_of(dom, [r.lhs for r in self.rules])
        for s in self.schemas:
            pump = literal(dom, s.lhs_pump)
            block = literal(dom, s.lhs_pre)
            for _ in range(s.min_i):
                block = block.concat(pump)
            block = block.concat(pump.star()).concat(literal(dom, s.lhs_suf))
            lead = lead.union(block)
        absorb = [e + e] + [e + a for a in self.alphabet.letters]
        absorb += [a + e for a in self.alphabet.letters]
        lead = lead.union(any_of(dom, absorb))
        return factor_free(dom, lead)


# ---------------------------------------------------------------- completion


def shirshov_complete(
    relations,
    alphabet,
    max_rules=24,
    max_len=32,
    detect_schemas=True,
    audit_instances=5,
):
    """Complete a set of word relations; detect pumped families when bounded.

    Returns a RewriteSystem whose complete_flag reports whether all
    compositions (including bounded schema-instance audits) are trivial.
    """
    rules = []
    seen = set()
    for (u, v) in relations:
        try:
            r = orient(u, v, alphabet)
        except TrivialRelationError:
            continue
        if r not in seen:
            seen.add(r)
            rules.append(r)

    def current():
        return RewriteSystem(alphabet, rules, (), UNKNOWN)

    bounded = False
    while True:
        rs = current()
        agenda = []
        for r1 in rules:
            for r2 in rules:
                for (w, p, q) in compositions(r1, r2):
                    np, nq = rs.reduce(p), rs.reduce(q)
                    if np != nq:
                        agenda.append((deglex_key(w, alphabet), np, nq))
        if not agenda:
            break
        agenda.sort()
        added = False
        for (_k, p, q) in agenda:
            rs = current()
            np, nq = rs.reduce(p), rs.reduce(q)
            if np == nq:
                continue
            r = orient(np, nq, alphabet)
            if r in seen:
                continue
            if len(rules) >= max_rules or len(r.lhs) > max_len:
                bounded = True
                break
            seen.add(r)
            rules.append(r)
            added = True
        if bounded:
            break
        if not added:
            break

    if not bounded:
        rules = _interreduce(rules, alphabet)
        return RewriteSystem(alphabet, rules, (), COMPLETE)

    if detect_schemas:
        plain, schemas = _detect_schemas(rules, alphabet)
        if schemas:
            plain = _interreduce_against(plain, schemas, alphabet)
            rs = RewriteSystem(alphabet, plain, schemas, UNKNOWN)
            flag = COMPLETE if _audit_schemas(rs, audit_instances) else BOUNDED
            return RewriteSystem(alphabet, rs.rules, rs.schemas, flag)
    return RewriteSystem(alphabet, rules, (), BOUNDED)


def _interreduce(rules, alphabet):
    """Canonical minimal form: reduced right sides, irreducible left sides."""
    rules = list(rules)
    changed = True
    while changed:
        changed = False
        for i, r in enumerate(list(rules)):
            others = [x for j, x in enumerate(rules) if j != i]
            rs = RewriteSystem(alphabet, others, (), UNKNOWN)
            if rs.is_reducible(r.lhs):
                rules.pop(i)
                changed = True
                break
            nf = rs.reduce(r.rhs)
            if nf != r.rhs:
                rules[i] = Rule(r.lhs, nf)
                changed = True
                break
    return sorted(rules, key=lambda r: (deglex_key(r.lhs, alphabet), deglex_key(r.rhs, alphabet)))


def _interreduce_against(plain, schemas, alphabet):
    """Drop plain rules whose lhs the rest of the system already joins."""
    plain = list(plain)
    changed = True
    while changed:
        changed = False
        for i, r in enumerate(list(plain)):
            others = [x for j, x in enumerate(plain) if j != i]
            rs = RewriteSystem(alphabet, others, schemas, UNKNOWN)
            if rs.is_reducible(r.lhs) and rs.reduce(r.lhs) == rs.reduce(r.rhs):
                plain.pop(i)
                changed = True
                break
    return plain


def _insertions(short, long_, d):
    """All (pre, pump, suf, reps) with short = pre·pump^reps·suf, long = pre·pump^(reps+1)·suf."""
    out = []
    seenkeys = set()
    for k in range(len(short) + 1):
        q = long_[k:k + d]
        if len(q) != d:
            continue
        if long_ == short[:k] + q + short[k:]:
            # normalize: maximal run of q around the insertion point
            left = k
            while left >= d and short[left - d:left] == q:
                left -= d
            right = k
            while short[right:right + d] == q:
                right += d
            pre, suf = short[:left], short[right:]
            reps = (right - left) // d
            key = (pre, q, suf)
            if key not in seenkeys:
                seenkeys.add(key)
                out.append((pre, q, suf, reps))
    return out


def _find_chain(remaining, d):
    for r1 in remaining:
        for r2 in remaining:
            if len(r2.lhs) - len(r1.lhs) != d:
                continue
            dr = len(r2.rhs) - len(r1.rhs)
            if dr not in (0, d):
                continue
            for (lp, lq, ls, li) in _insertions(r1.lhs, r2.lhs, d):
                if dr == 0:
                    rdecs = [(r1.rhs, "", "", 0)] if r1.rhs == r2.rhs else []
                else:
                    rdecs = _insertions(r1.rhs, r2.rhs, dr)
                for (rp, rq, rs_, ri) in rdecs:
                    cand = _grow_chain(remaining, lp, lq, ls, rp, rq, rs_, li, ri)
                    if cand is not None and len(cand[0]) >= 3:
                        return cand
    return None


def _detect_schemas(rules, alphabet):
    """Chains of >=3 rules forming a pumped family become RuleSchemas.

    Single-letter pumps are preferred; after each extraction the remaining
    rules are interreduced against the schemas found so far, so spurious
    sibling families (whose members are subsumed instances) never fire.
    """
    remaining = sorted(
        rules, key=lambda r: (deglex_key(r.lhs, alphabet), deglex_key(r.rhs, alphabet))
    )
    schemas = []
    while True:
        found = None
        for d in (1, 2):
            found = _find_chain(remaining, d)
            if found:
                break
        if not found:
            break
        chain, schema = found
        try:
            RewriteSystem(alphabet, (), (schema,), UNKNOWN)
        except InvalidInputError:
            remaining = [r for r in remaining if r not in chain]
            continue
        schemas.append(schema)
        remaining = [r for r in remaining if r not in chain]
        remaining = _interreduce_against(remaining, schemas, alphabet)
    return remaining, schemas


def _grow_chain(rules, lp, lq, ls, rp, rq, rs_, li, ri):
    """Collect all rules matching the family; normalize to equal pump counts."""
    pool = {(r.lhs, r.rhs) for r in rules}
    matched = []
    i = li
    j = ri
    # walk down
    while i >= 0 and (j >= 0 or not rq):
        lhs = lp + lq * i + ls
        rhs = rp + rq * j + rs_ if rq else rp
        if (lhs, rhs) in pool:
            matched.append((i, j, Rule(lhs, rhs)))
            i -= 1
            j -= 1 if rq else 0
        else:
            break
    matched.reverse()
    i = li + 1
    j = ri + 1 if rq else ri
    while True:
        lhs = lp + lq * i + ls
        rhs = rp + rq * j + rs_ if rq else rp
        if (lhs, rhs) in pool:
            matched.append((i, j, Rule(lhs, rhs)))
            i += 1
            j += 1 if rq else 0
        else:
            break
    if len(matched) < 3:
        return None
    lo_i, lo_j, _ = matched[0]
    # fold the lhs/rhs count offset so that both sides pump exactly i times
    off = lo_j - lo_i if rq else 0
    lp2, rp2, min_i = lp, rp, lo_i
    if rq and off > 0:
        rp2 = rp + rq * off
    elif rq and off < 0:
        lp2 = lp + lq * (-off)
        min_i = lo_i + off
        if min_i < 0:
            return None
    schema = RuleSchema(lp2, lq, ls, rp2, rq, rs_, min_i)
    chain = {r for (_i, _j, r) in matched}
    # every matched rule must be reproduced by the normalized schema
    for (ii, jj, r) in matched:
        k = ii - lo_i + min_i
        if schema.instance(k) != r:
            return None
    return chain, schema


def _audit_schemas(rs, audit_instances):
    """All compositions among rules and bounded schema instances must be trivial."""
    expanded = list(rs.rules)
    for s in rs.schemas:
        for i in range(s.min_i, s.min_i + audit_instances + 1):
            expanded.append(s.instance(i))
    for r1 in expanded:
        for r2 in expanded:
            for (_w, p, q) in compositions(r1, r2):
                if rs.reduce(p) != rs.reduce(q):
                    return False
    return True


# ------------------------------------------------------------------- oracles


def congruence_closure(word, relations, cap, node_budget=500_000):
    """All words congruent to `word` reachable with intermediate length <= cap."""
    steps = []
    for (u, v) in relations:
        if u != v:
            steps.append((u, v))
            steps.append((v, u))
    seen = {word}
    frontier = [word]
    budget = node_budget
    while frontier and budget > 0:
        nxt = []
        for w in frontier:
            for (u, v) in steps:
                if len(w) - len(u) + len(v) > cap:
                    continue
                if u:
                    start = 0
                    while True:
                        k = w.find(u, start)
                        if k < 0:
                            break
                        cand = w[:k] + v + w[k + len(u):]
                        if cand not in seen:
                            seen.add(cand)
                            nxt.append(cand)
                        budget -= 1
                        start = k + 1
                else:
                    for k in range(len(w) + 1):
                        cand = w[:k] + v + w[k:]
                        if cand not in seen:
                            seen.add(cand)
                            nxt.append(cand)
                        budget -= 1
        frontier = nxt
    return frozenset(seen)


def congruence_equal(w1, w2, relations, cap, node_budget=200_000):
    """Bidirectional congruence-closure search with a word-length cap.

    Returns "equal" (sound) or "distinct_up_to_cap" (sound relative to the
    cap: no derivation exists whose intermediate words stay within cap).
    """
    if w1 == w2:
        return "equal"
    steps = []
    for (u, v) in relations:
        if u != v:
            steps.append((u, v))
            steps.append((v, u))

    def neighbors(w):
        out = set()
        for (u, v) in steps:
            if len(w) - len(u) + len(v) > cap:
                continue
            if u:
                start = 0
                while True:
                    k = w.find(u, start)
                    if k < 0:
                        break
                    out.add(w[:k] + v + w[k + len(u):])
                    start = k + 1
            else:
                for k in range(len(w) + 1):
                    out.add(w[:k] + v + w[k:])
        return out

    left = {w1}
    right = {w2}
    seen_left = {w1}
    seen_right = {w2}
    budget = node_budget
    while left and right and budget > 0:
        if len(left) > len(right):
            left, right = right, left
            seen_left, seen_right = seen_right, seen_left
        frontier = set()
        for w in left:
            for x in neighbors(w):
                if x in seen_right:
                    return "equal"
                if x not in seen_left:
                    seen_left.add(x)
                    frontier.add(x)
                budget -= 1
        left = frontier
    return "distinct_up_to_cap"


# -------------------------------------------------------------- presentations


def parse_presentation(text):
    """Presentation text: `gens: a,b,c` then `rel: u = v` lines; ε written 1."""
    gens = None
    rels = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gens:"):
            gens = tuple(t.strip() for t in line[len("gens:"):].split(",") if t.strip())
        elif line.startswith("rel:"):
            body = line[len("rel:"):]
            if "=" not in body:
                raise InvalidInputError("relation line without '=': %r" % line)
            u, v = body.split("=", 1)
            u, v = u.strip(), v.strip()
            rels.append(("" if u == "1" else u, "" if v == "1" else v))
        else:
            raise InvalidInputError("bad presentation line: %r" % line)
    if gens is None:
        raise InvalidInputError("presentation needs a gens: line")
    return Alphabet(gens), rels


def embed_identity(alphabet, relations, marker="e"):
    """S¹ embedding: adjoin e (smallest), absorption rules, ε rewritten to e."""
    ext = alphabet.with_identity(marker)
    out = [(marker + marker, marker)]
    for a in alphabet.letters:
        out.append((a + marker, a))
        out.append((marker + a, a))
    for (u, v) in relations:
        out.append((u if u else marker, v if v else marker))
    return ext, out
