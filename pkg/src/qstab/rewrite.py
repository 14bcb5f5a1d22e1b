"""Degree-bounded noncommutative rewriting and completion.

Rules ``lhs -> rhs`` are oriented by the degree-lexicographic order of the
alphabet.  Completion is Buchberger / Knuth-Bendix style: overlaps of rule
left-hand sides whose overlap word has degree at most the bound are
resolved, and non-zero S-polynomial remainders become new rules.  A
polynomial that normal-forms to zero is certified to lie in the ideal
regardless of whether completion finished.
"""

from __future__ import annotations

import contextvars
import heapq
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from .ncpoly import Alphabet, NCPolynomial, StructuralError, Word, add_into, deglex_key
from .report import Verdict

DEFAULT_DEGREE_BOUND = 4
DEFAULT_RULE_CAP = 20000

_ONE = Fraction(1)


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-lexicographic order; precedence is the alphabet's letter order."""

    alphabet: Alphabet

    def key(self, word: Word):
        return deglex_key(word)

    def less(self, u: Word, v: Word) -> bool:
        return deglex_key(u) < deglex_key(v)

    def precedence(self) -> list[str]:
        return [self.alphabet.letter_str(i) for i in range(len(self.alphabet))]


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: NCPolynomial

    def __post_init__(self):
        if not self.lhs:
            raise OrientationError("rule lhs cannot be the unit word")
        key = deglex_key(self.lhs)
        for w in self.rhs.words():
            if deglex_key(w) >= key:
                raise OrientationError("rhs word not smaller than lhs")

    def as_polynomial(self) -> NCPolynomial:
        return self.rhs.alphabet.word(self.lhs) - self.rhs

    def __str__(self):
        return f"{self.rhs.alphabet.word_str(self.lhs)} -> {self.rhs}"


# ---------------------------------------------------------------------------
# trace accounting
# ---------------------------------------------------------------------------

_trace: contextvars.ContextVar = contextvars.ContextVar("qstab_trace", default=None)


class Trace:
    """Accumulates rule-application counts of the word-wise derivations.

    The count attached to a word is a function of the word and the system
    alone, so totals do not depend on cache state.
    """

    def __init__(self, full: bool = False):
        self.rewrites = 0
        self.full = full
        self.rules: Counter = Counter()

    def summary(self) -> dict:
        out = {"rewrites": self.rewrites}
        if self.full:
            out["rules_used"] = {k: self.rules[k] for k in sorted(self.rules)}
        return out


@contextmanager
def tracing(full: bool = False):
    t = Trace(full)
    token = _trace.set(t)
    try:
        yield t
    finally:
        _trace.reset(token)


# ---------------------------------------------------------------------------
# reduction machinery
# ---------------------------------------------------------------------------


def _match(word: Word, lookup: dict, lengths: tuple):
    n = len(word)
    for start in range(n):
        for ln in lengths:
            end = start + ln
            if end > n:
                break
            sub = word[start:end]
            if sub in lookup:
                return start, end, sub
    return None


def _reduce_live(terms: dict, lookup: dict, lengths: tuple) -> dict:
    """Largest-word-first reduction against a mutable rule table (no cache)."""
    p = dict(terms)
    result = {}
    heap = [(-len(w), tuple(-x for x in w), w) for w in p]
    heapq.heapify(heap)
    while heap:
        w = heapq.heappop(heap)[2]
        c = p.pop(w, None)
        if c is None:
            continue
        m = _match(w, lookup, lengths)
        if m is None:
            result[w] = c
            continue
        s, e, sub = m
        u, v = w[:s], w[e:]
        for x, d in lookup[sub].items():
            ww = u + x + v
            old = p.get(ww)
            new = (old or 0) + c * d
            if new:
                if old is None:
                    heapq.heappush(heap, (-len(ww), tuple(-y for y in ww), ww))
                p[ww] = new
            elif old is not None:
                del p[ww]
    return result


class _Reducer:
    """Memoised word normal forms for a fixed rule table."""

    def __init__(self, lookup: dict):
        self.lookup = lookup
        self.lengths = tuple(sorted({len(l) for l in lookup}))
        self.cache: dict = {}
        self.rule_counts: dict = {}

    def word_nf(self, w: Word):
        cache = self.cache
        hit = cache.get(w)
        if hit is not None:
            return hit
        lookup, lengths = self.lookup, self.lengths
        stack = [w]
        while stack:
            top = stack[-1]
            if top in cache:
                stack.pop()
                continue
            m = _match(top, lookup, lengths)
            if m is None:
                cache[top] = ({top: _ONE}, 0)
                stack.pop()
                continue
            s, e, sub = m
            u, v = top[:s], top[e:]
            children = [(u + x + v, c) for x, c in lookup[sub].items()]
            missing = [ch for ch, _ in children if ch not in cache]
            if missing:
                stack.extend(missing)
                continue
            acc: dict = {}
            count = 1
            for ch, c in children:
                nf, k = cache[ch]
                add_into(acc, nf, c)
                count += k
            cache[top] = (acc, count)
            stack.pop()
        return cache[w]

    def word_rules(self, w: Word) -> Counter:
        hit = self.rule_counts.get(w)
        if hit is not None:
            return hit
        m = _match(w, self.lookup, self.lengths)
        out: Counter = Counter()
        if m is not None:
            s, e, sub = m
            out[sub] += 1
            for x in self.lookup[sub]:
                out.update(self.word_rules(w[:s] + x + w[e:]))
        self.rule_counts[w] = out
        return out

    def reduce(self, terms: dict) -> dict:
        acc: dict = {}
        total = 0
        for w, c in terms.items():
            nf, k = self.word_nf(w)
            add_into(acc, nf, c)
            total += k
        return acc, total


def _lead(terms: dict) -> Word:
    return max(terms, key=deglex_key)


def _orient(terms: dict):
    lead = _lead(terms)
    c = terms[lead]
    rhs = {w: -v / c for w, v in terms.items() if w != lead}
    return lead, rhs


def _reducible_by_other(word: Word, lookup: dict, lengths: tuple) -> bool:
    n = len(word)
    for start in range(n):
        for ln in lengths:
            end = start + ln
            if end > n:
                break
            if ln == n:
                continue
            if word[start:end] in lookup:
                return True
    return False


def _interreduce(rules: dict, new_polys: list):
    """Merge new ideal elements into ``rules``; returns (rules, trivial)."""
    basis = dict(rules)
    pending = list(new_polys)
    while pending:
        pending.sort(key=lambda t: deglex_key(_lead(t)) if t else (0, ()))
        for p in pending:
            if not p:
                continue
            lengths = tuple(sorted({len(l) for l in basis}))
            p = _reduce_live(p, basis, lengths)
            if not p:
                continue
            lead, rhs = _orient(p)
            if not lead:
                return {}, True
            basis[lead] = rhs
        pending = []
        lengths = tuple(sorted({len(l) for l in basis}))
        for l in sorted(basis, key=deglex_key):
            if _reducible_by_other(l, basis, lengths):
                rhs = basis.pop(l)
                poly = {w: -c for w, c in rhs.items()}
                poly[l] = _ONE
                pending.append(poly)
                lengths = tuple(sorted({len(x) for x in basis}))
    # tail-reduce right-hand sides
    red = _Reducer(basis)
    out = {}
    for l in sorted(basis, key=deglex_key):
        out[l], _ = red.reduce(basis[l])
    return out, False


def _critical_pairs(lookup: dict, max_degree: int):
    prefix: dict = {}
    for l in lookup:
        for k in range(1, len(l)):
            prefix.setdefault(l[:k], []).append(l)
    pairs = []
    for l1 in lookup:
        n1 = len(l1)
        for k in range(1, n1):
            if n1 + 1 > max_degree:
                break
            for l2 in prefix.get(l1[n1 - k:], ()):
                if n1 + len(l2) - k <= max_degree:
                    pairs.append((l1, l2, k))
    pairs.sort(key=lambda t: (deglex_key(t[0][: len(t[0]) - t[2]] + t[1]), deglex_key(t[0]), deglex_key(t[1])))
    return pairs


def _spoly(l1: Word, l2: Word, k: int, lookup: dict) -> dict:
    u = l1[: len(l1) - k]
    v = l2[k:]
    out: dict = {}
    for w, c in lookup[l1].items():
        add_into(out, {w + v: c})
    for w, c in lookup[l2].items():
        add_into(out, {u + w: -c})
    return out


# ---------------------------------------------------------------------------
# public system
# ---------------------------------------------------------------------------


class RewriteSystem:
    """An immutable set of oriented rules over an alphabet.

    ``completed_to`` is the degree up to which all overlaps were resolved
    (``None`` before :func:`complete`).  ``capped`` records that completion
    stopped at the rule cap; ``trivial`` that the unit lies in the ideal.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        lookup: dict,
        *,
        degree_bound: int = DEFAULT_DEGREE_BOUND,
        rule_cap: int = DEFAULT_RULE_CAP,
        completed_to: int | None = None,
        capped: bool = False,
        trivial: bool = False,
    ):
        if degree_bound < 1 or rule_cap < 1:
            raise ValueError("degree bound and rule cap must be positive")
        self.alphabet = alphabet
        self.order = MonomialOrder(alphabet)
        self.degree_bound = degree_bound
        self.rule_cap = rule_cap
        self.completed_to = completed_to
        self.capped = capped
        self.trivial = trivial
        self._lookup = {l: lookup[l] for l in sorted(lookup, key=deglex_key)}
        self._reducer = _Reducer(self._lookup)
        self._rules = None

    # construction
    @classmethod
    def from_relations(cls, alphabet: Alphabet, relations, *, degree_bound=DEFAULT_DEGREE_BOUND,
                       rule_cap=DEFAULT_RULE_CAP) -> "RewriteSystem":
        polys = []
        for r in relations:
            if r.alphabet != alphabet:
                raise StructuralError("relation over a different generator set")
            if r:
                polys.append(dict(r.items()))
        lookup, trivial = _interreduce({}, polys)
        return cls(alphabet, lookup, degree_bound=degree_bound, rule_cap=rule_cap, trivial=trivial)

    @classmethod
    def from_rules(cls, alphabet: Alphabet, rules, **kw) -> "RewriteSystem":
        """Take oriented rules exactly as given (no inter-reduction)."""
        lookup = {}
        for r in rules:
            if r.rhs.alphabet != alphabet:
                raise StructuralError("rule over a different generator set")
            lookup[tuple(r.lhs)] = dict(r.rhs.items())
        return cls(alphabet, lookup, **kw)

    @property
    def rules(self) -> tuple[RewriteRule, ...]:
        if self._rules is None:
            a = self.alphabet
            self._rules = tuple(RewriteRule(l, NCPolynomial(a, r)) for l, r in self._lookup.items())
        return self._rules

    def __len__(self):
        return len(self._lookup)

    @property
    def is_complete(self) -> bool:
        return self.completed_to is not None and self.completed_to >= self.degree_bound and not self.capped

    def status(self) -> dict:
        return {
            "rules": len(self),
            "degree_bound": self.degree_bound,
            "completed_to": self.completed_to,
            "capped": self.capped,
            "trivial": self.trivial,
        }

    def with_bounds(self, degree_bound=None, rule_cap=None) -> "RewriteSystem":
        return RewriteSystem(
            self.alphabet,
            self._lookup,
            degree_bound=degree_bound or self.degree_bound,
            rule_cap=rule_cap or self.rule_cap,
        )

    # reduction
    def is_reducible(self, word: Word) -> bool:
        return self.trivial or _match(tuple(word), self._lookup, self._reducer.lengths) is not None

    def reduce_terms(self, terms: dict) -> dict:
        if self.trivial:
            return {}
        acc, total = self._reducer.reduce(terms)
        t = _trace.get()
        if t is not None:
            t.rewrites += total
            if t.full:
                a = self.alphabet
                for w in terms:
                    for lhs, k in self._reducer.word_rules(w).items():
                        t.rules[a.word_str(lhs)] += k
        return acc

    def nf(self, p: NCPolynomial) -> NCPolynomial:
        if p.alphabet != self.alphabet:
            raise StructuralError("polynomial over a different generator set")
        return NCPolynomial(self.alphabet, self.reduce_terms(p._terms))

    def complete(self) -> "RewriteSystem":
        return complete(self)


def _complete_lookup(lookup: dict, degree_bound: int, rule_cap: int, start: int):
    """Returns (lookup, completed_to, capped, trivial)."""
    processed: set = set()
    completed_to = start
    for d in range(max(start, 2) + 1, degree_bound + 1):
        while True:
            pairs = [p for p in _critical_pairs(lookup, d) if p not in processed]
            if not pairs:
                break
            red = _Reducer(lookup)
            new = []
            for pair in pairs:
                processed.add(pair)
                r, _ = red.reduce(_spoly(*pair, lookup))
                if r:
                    new.append(r)
            if not new:
                break
            lookup, trivial = _interreduce(lookup, new)
            if trivial:
                return {}, d, False, True
            if len(lookup) > rule_cap:
                return lookup, completed_to, True, False
        completed_to = d
    return lookup, max(completed_to, min(degree_bound, 2)), False, False


def complete(R: RewriteSystem) -> RewriteSystem:
    """Resolve every overlap of degree at most ``R.degree_bound``."""
    if isinstance(R, TensorRewriteSystem):
        return TensorRewriteSystem(R.alphabet, [complete(f) for f in R.factors])
    if R.trivial:
        return RewriteSystem(R.alphabet, {}, degree_bound=R.degree_bound, rule_cap=R.rule_cap,
                             completed_to=R.degree_bound, trivial=True)
    if R.is_complete:
        return R
    lookup, trivial = _interreduce({}, [dict(r.as_polynomial().items()) for r in R.rules])
    if trivial:
        return RewriteSystem(R.alphabet, {}, degree_bound=R.degree_bound, rule_cap=R.rule_cap,
                             completed_to=R.degree_bound, trivial=True)
    lookup, done, capped, trivial = _complete_lookup(lookup, R.degree_bound, R.rule_cap, 2)
    return RewriteSystem(R.alphabet, lookup, degree_bound=R.degree_bound, rule_cap=R.rule_cap,
                         completed_to=done, capped=capped, trivial=trivial)


def normal_form(p: NCPolynomial, R: RewriteSystem) -> NCPolynomial:
    return R.nf(p)


def prove_membership(p: NCPolynomial, R: RewriteSystem) -> Verdict:
    """Proven iff ``p`` reduces to zero; otherwise Inconclusive (never Refuted)."""
    if R.completed_to is None:
        raise ValueError("prove_membership needs a completed system")
    return Verdict.PROVEN if normal_form(p, R).is_zero() else Verdict.INCONCLUSIVE


def critical_pairs(R: RewriteSystem, max_degree: int | None = None):
    """All overlaps (l1, l2, k) of R's rules with overlap degree <= max_degree."""
    return _critical_pairs(R._lookup, max_degree or R.degree_bound)


def s_polynomial(R: RewriteSystem, pair) -> NCPolynomial:
    return NCPolynomial(R.alphabet, _spoly(*pair, R._lookup))


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------


class TensorRewriteSystem(RewriteSystem):
    """Rewriting on a tensor product of presented algebras.

    The rule set is the union of the factor rules (tagged by leg) and the
    cross-commutation rules ``y x -> x y`` for letters ``x`` on an earlier
    leg than ``y``.  Normal forms are computed by sorting letters by leg
    (applying the commutation rules) and reducing each leg in its factor.
    That union is complete whenever every factor is.
    """

    def __init__(self, alphabet: Alphabet, factors: list[RewriteSystem]):
        self.factors = list(factors)
        self._leg_of = []
        self._factor_code = []
        back = [dict() for _ in factors]
        for code, (g, star) in enumerate(alphabet.letters):
            leg = g.leg
            fa = factors[leg - 1].alphabet
            base = type(g)(g.name, g.self_adjoint, g.index, None)
            fc = fa.letter_code(base, star)
            self._leg_of.append(leg)
            self._factor_code.append(fc)
            back[leg - 1][fc] = code
        self._back = back
        self.alphabet = alphabet
        self.order = MonomialOrder(alphabet)
        self.degree_bound = min(f.degree_bound for f in factors) if factors else DEFAULT_DEGREE_BOUND
        self.rule_cap = max(f.rule_cap for f in factors) if factors else DEFAULT_RULE_CAP
        done = [f.completed_to for f in factors]
        self.completed_to = None if any(d is None for d in done) else min(done, default=self.degree_bound)
        self.capped = any(f.capped for f in factors)
        self.trivial = any(f.trivial for f in factors)
        self._cache: dict = {}
        self._lookup_built = None
        self._rules = None

    @property
    def _lookup(self):
        if self._lookup_built is None:
            lookup = {}
            for k, f in enumerate(self.factors):
                back = self._back[k]
                for l, r in f._lookup.items():
                    lookup[tuple(back[c] for c in l)] = {tuple(back[c] for c in w): v for w, v in r.items()}
            irreducible = [c for c in range(len(self.alphabet)) if (c,) not in lookup]
            for y in irreducible:
                for x in irreducible:
                    if self._leg_of[x] < self._leg_of[y]:
                        lookup[(y, x)] = {(x, y): _ONE}
            self._lookup_built = {l: lookup[l] for l in sorted(lookup, key=deglex_key)}
        return self._lookup_built

    @property
    def _reducer(self):
        return _Reducer(self._lookup)

    def is_reducible(self, word: Word) -> bool:
        word = tuple(word)
        if self.trivial:
            return True
        legs = [self._leg_of[c] for c in word]
        if any(legs[i] > legs[i + 1] for i in range(len(legs) - 1)):
            return True
        return any(
            f.is_reducible(sub) for f, sub in zip(self.factors, self._split(word))
        )

    def _split(self, word: Word):
        parts = [[] for _ in self.factors]
        for c in word:
            parts[self._leg_of[c] - 1].append(self._factor_code[c])
        return [tuple(p) for p in parts]

    def split_word(self, word: Word) -> list[Word]:
        """Per-leg factor words of a tensor word (legs commute)."""
        return self._split(tuple(word))

    def join_words(self, parts) -> Word:
        out = []
        for k, part in enumerate(parts):
            back = self._back[k]
            out.extend(back[c] for c in part)
        return tuple(out)

    def _word_nf(self, w: Word):
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        legs = [self._leg_of[c] for c in w]
        inversions = sum(1 for i in range(len(legs)) for j in range(i + 1, len(legs)) if legs[i] > legs[j])
        acc = {(): _ONE}
        count = inversions
        for k, (f, sub) in enumerate(zip(self.factors, self._split(w))):
            if sub:
                nf, c = f._reducer.word_nf(sub)
                count += c
            else:
                nf = {(): _ONE}
            back = self._back[k]
            nxt = {}
            for u, a in acc.items():
                for v, b in nf.items():
                    nxt[u + tuple(back[x] for x in v)] = a * b
            acc = nxt
        self._cache[w] = (acc, count)
        return acc, count

    def reduce_terms(self, terms: dict) -> dict:
        if self.trivial:
            return {}
        acc: dict = {}
        total = 0
        t = _trace.get()
        for w, c in terms.items():
            nf, k = self._word_nf(w)
            add_into(acc, nf, c)
            total += k
            if t is not None and t.full:
                for f, sub, back in zip(self.factors, self._split(w), self._back):
                    if sub:
                        for lhs, n in f._reducer.word_rules(sub).items():
                            t.rules[self.alphabet.word_str(tuple(back[x] for x in lhs))] += n
        if t is not None:
            t.rewrites += total
        return acc

    def with_bounds(self, degree_bound=None, rule_cap=None):
        return TensorRewriteSystem(self.alphabet, [f.with_bounds(degree_bound, rule_cap) for f in self.factors])
