"""Finitely presented unital *-algebras, tensor products, quotients and morphisms."""

from __future__ import annotations

import warnings
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Mapping

from .ncpoly import Alphabet, Generator, NCPolynomial, StructuralError, Word, add_into, mul_terms, parse_polynomial
from .report import Check, Verdict, VerificationReport, timed
from .rewrite import (
    DEFAULT_DEGREE_BOUND,
    DEFAULT_RULE_CAP,
    RewriteSystem,
    TensorRewriteSystem,
    complete,
    tracing,
)


class TrivialQuotientError(ValueError):
    """The quotient collapses to the zero ring (1 lies in the ideal)."""


class UnverifiedMorphismWarning(UserWarning):
    pass


class MorphismError(ValueError):
    pass


class Presentation:
    """A presented *-algebra with its completed rewrite system.

    The system is built from the relations together with their adjoints,
    so the ideal it represents is a *-ideal.
    """

    def __init__(self, name: str, alphabet: Alphabet, relations, system: RewriteSystem,
                 *, factors: tuple = (), parent: "Presentation | None" = None, extra: tuple = ()):
        self.name = name
        self.alphabet = alphabet
        self._relations = tuple(relations) if relations is not None else None
        self.system = system
        self.factors = factors
        self.parent = parent
        self.extra = tuple(extra)
        self._consistency = None

    def __repr__(self):
        return f"Presentation({self.name!r}, {len(self.alphabet.generators)} generators)"

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.alphabet.generators

    @property
    def relations(self) -> tuple[NCPolynomial, ...]:
        if self._relations is None:
            self._relations = _tensor_relations(self)
        return self._relations

    @property
    def is_tensor(self) -> bool:
        return bool(self.factors)

    @property
    def legs(self) -> int:
        return len(self.factors) if self.factors else 1

    def gen(self, name: str, leg: int | None = None) -> NCPolynomial:
        return self.alphabet.gen(name, leg=leg)

    def one(self) -> NCPolynomial:
        return self.alphabet.one()

    def zero(self) -> NCPolynomial:
        return self.alphabet.zero()

    def scalar(self, c) -> NCPolynomial:
        return self.alphabet.scalar(c)

    def parse(self, text: str) -> NCPolynomial:
        return parse_polynomial(text, self.alphabet)

    def nf(self, p: NCPolynomial) -> NCPolynomial:
        return self.system.nf(p)

    def consistency(self) -> Verdict:
        """Proven iff every relation normal-forms to zero in the own system."""
        if self._consistency is None:
            ok = all(self.nf(r).is_zero() for r in self.relations)
            self._consistency = Verdict.PROVEN if ok else Verdict.INCONCLUSIVE
        return self._consistency

    def is_trivial(self) -> bool:
        return self.system.trivial


def build_presentation(name: str, generators: Iterable[Generator], relations=(), *,
                       degree_bound: int = DEFAULT_DEGREE_BOUND, rule_cap: int = DEFAULT_RULE_CAP,
                       parent: Presentation | None = None, extra=()) -> Presentation:
    alphabet = generators if isinstance(generators, Alphabet) else Alphabet(generators)
    rels = []
    for r in relations:
        if isinstance(r, str):
            r = parse_polynomial(r, alphabet)
        elif r.alphabet != alphabet:
            raise StructuralError(f"relation {r} uses generators outside {name}")
        rels.append(r)
    closed = list(rels)
    for r in rels:
        adj = r.adjoint()
        if adj != r:
            closed.append(adj)
    system = RewriteSystem.from_relations(alphabet, closed, degree_bound=degree_bound, rule_cap=rule_cap)
    system = complete(system)
    P = Presentation(name, alphabet, rels, system, parent=parent, extra=extra)
    P.consistency()
    return P


@lru_cache(maxsize=None)
def scalars() -> Presentation:
    """The one-dimensional algebra of scalars (no generators)."""
    return build_presentation("C", [])


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------


def _flat_factors(P: Presentation) -> tuple:
    return P.factors if P.factors else (P,)


_tensor_cache: dict = {}


def tensor_product(*presentations: Presentation) -> Presentation:
    """Tensor product with legs numbered left to right; nested products flatten."""
    flat = []
    for P in presentations:
        flat.extend(_flat_factors(P))
    key = tuple(id(P) for P in flat)
    hit = _tensor_cache.get(key)
    if hit is not None and all(a is b for a, b in zip(hit.factors, flat)):
        return hit
    gens = []
    for leg, P in enumerate(flat, start=1):
        gens.extend(g.on_leg(leg) for g in P.generators)
    alphabet = Alphabet(gens)
    system = TensorRewriteSystem(alphabet, [P.system for P in flat])
    name = "⊗".join(P.name if not P.factors else f"({P.name})" for P in flat)
    T = Presentation(name, alphabet, None, system, factors=tuple(flat))
    _tensor_cache[key] = T
    return T


def _tensor_relations(T: Presentation) -> tuple:
    a = T.alphabet
    rels = []
    for leg in range(1, len(T.factors) + 1):
        rels.extend(embed(r, T, leg) for r in T.factors[leg - 1].relations)
    for y in range(len(a)):
        for x in range(len(a)):
            if a.letters[x][0].leg < a.letters[y][0].leg:
                rels.append(a.word((y, x)) - a.word((x, y)))
    return tuple(rels)


def embed(p: NCPolynomial, T: Presentation, leg: int) -> NCPolynomial:
    """Place ``p`` (over a factor, or a run of factors) into ``T`` starting at ``leg``."""
    src = p.alphabet
    table = []
    for g, star in src.letters:
        shifted = g.on_leg((g.leg or 1) + leg - 1)
        table.append(T.alphabet.letter_code(shifted, star))
    return NCPolynomial(T.alphabet, {tuple(table[c] for c in w): v for w, v in p.items()})


def split_legs(word: Word, T: Presentation) -> list[Word]:
    """Per-leg factor words of a word of ``T`` (legs commute, so order within a leg is kept)."""
    if not T.factors:
        return [tuple(word)]
    return T.system.split_word(word)


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------


class Morphism:
    """A unital *-homomorphism (or *-anti-homomorphism) given on generators.

    ``verified`` caches the well-definedness verdict; ``None`` means not yet
    checked.
    """

    def __init__(self, source: Presentation, target: Presentation,
                 images: Mapping, *, anti: bool = False, name: str = "", verified: Verdict | None = None):
        self.source = source
        self.target = target
        self.anti = anti
        self.name = name or f"{source.name}->{target.name}"
        imgs = {}
        for key, img in images.items():
            g = key if isinstance(key, Generator) else source.alphabet.generator(key)
            if isinstance(img, str):
                img = target.parse(img)
            elif isinstance(img, (int, Fraction)):
                img = target.scalar(img)
            if img.alphabet != target.alphabet:
                raise StructuralError(f"image of {g.name} uses generators outside {target.name}")
            imgs[g] = img
        missing = [g.name for g in source.generators if g not in imgs]
        if missing:
            raise MorphismError(f"{self.name}: no image for {', '.join(missing)}")
        self.images = imgs
        self.verified = verified
        self.report: VerificationReport | None = None
        self._letter_terms = []
        for g, star in source.alphabet.letters:
            img = imgs[g]
            if star:
                img = img.adjoint()
            self._letter_terms.append(dict(img.items()))

    def __repr__(self):
        return f"Morphism({self.name})"

    def image(self, name: str, leg: int | None = None) -> NCPolynomial:
        return self.images[self.source.alphabet.generator(name, leg)]

    def substitute_terms(self, terms: Mapping) -> dict:
        out: dict = {}
        one = {(): Fraction(1)}
        lt = self._letter_terms
        for w, c in terms.items():
            acc = one
            letters = reversed(w) if self.anti else w
            for x in letters:
                acc = mul_terms(acc, lt[x])
                if not acc:
                    break
            add_into(out, acc, c)
        return out


def substitute(phi: Morphism, p: NCPolynomial) -> NCPolynomial:
    """Multiplicative-linear extension of the generator images, not reduced."""
    if p.alphabet != phi.source.alphabet:
        raise StructuralError(f"{phi.name}: argument not over {phi.source.name}")
    return NCPolynomial(phi.target.alphabet, phi.substitute_terms(p._terms))


def apply_morphism(phi: Morphism, p: NCPolynomial) -> NCPolynomial:
    if phi.verified is Verdict.REFUTED:
        raise MorphismError(f"{phi.name} is not well defined")
    if phi.verified is not Verdict.PROVEN:
        warnings.warn(f"{phi.name} applied before being verified", UnverifiedMorphismWarning, stacklevel=2)
    return phi.target.nf(substitute(phi, p))


def identity_morphism(P: Presentation) -> Morphism:
    return Morphism(P, P, {g: P.alphabet.gen(g.name, leg=g.leg) for g in P.generators},
                    name=f"id_{P.name}", verified=Verdict.PROVEN)


def compose(phi: Morphism, psi: Morphism, name: str = "") -> Morphism:
    """``phi ∘ psi``: first ``psi``, then ``phi``."""
    if psi.target is not phi.source and psi.target.alphabet != phi.source.alphabet:
        raise StructuralError("morphisms are not composable")
    images = {g: phi.target.nf(NCPolynomial(phi.target.alphabet, phi.substitute_terms(img._terms)))
              for g, img in psi.images.items()}
    verified = Verdict.PROVEN if (phi.verified is Verdict.PROVEN and psi.verified is Verdict.PROVEN) else None
    return Morphism(psi.source, phi.target, images, anti=phi.anti != psi.anti,
                    name=name or f"{phi.name}∘{psi.name}", verified=verified)


def tensor_morphism(*maps: Morphism) -> Morphism:
    """``f1 ⊗ f2 ⊗ ...`` between the flattened tensor products."""
    source = tensor_product(*(m.source for m in maps))
    target = tensor_product(*(m.target for m in maps))
    images = {}
    src_leg = 1
    tgt_leg = 1
    for m in maps:
        for g, img in m.images.items():
            key = g.on_leg((g.leg or 1) + src_leg - 1)
            images[key] = embed(img, target, tgt_leg) if m.target.generators else target.alphabet.scalar(img.constant())
        src_leg += m.source.legs
        tgt_leg += m.target.legs
    verified = Verdict.PROVEN if all(m.verified is Verdict.PROVEN for m in maps) else None
    return Morphism(source, target, images, name="⊗".join(m.name for m in maps), verified=verified)


def contract_legs(p: NCPolynomial, T: Presentation, leg_maps, target: Presentation) -> NCPolynomial:
    """``m ∘ (f1 ⊗ ... ⊗ fk)`` applied to ``p`` in ``T``, not reduced.

    Each ``fi`` is a morphism (or anti-morphism) out of the i-th factor;
    the images of the legs are multiplied in leg order inside ``target``.
    Images landing in the scalars are promoted to constants of ``target``.
    """
    factors = _flat_factors(T)
    if len(leg_maps) != len(factors):
        raise StructuralError("one map per tensor leg required")
    out: dict = {}
    per_leg_cache = [dict() for _ in factors]
    for w, c in p.items():
        acc = {(): Fraction(1)}
        for k, sub in enumerate(split_legs(w, T)):
            cache = per_leg_cache[k]
            img = cache.get(sub)
            if img is None:
                f = leg_maps[k]
                if f.target.alphabet != target.alphabet and f.target.generators:
                    raise StructuralError(f"{f.name} does not land in {target.name}")
                img = f.substitute_terms({sub: Fraction(1)})
                if f.target is not target and not f.target.generators:
                    img = {(): sum(img.values(), Fraction(0))} if img else {}
                cache[sub] = img
            acc = mul_terms(acc, img)
            if not acc:
                break
        add_into(out, acc, c)
    return NCPolynomial(target.alphabet, out)


# ---------------------------------------------------------------------------
# zero checks shared by every verification suite
# ---------------------------------------------------------------------------


def check_zero(name: str, target: str, expr: NCPolynomial, T: Presentation, *,
               oracle: bool = True, full_trace: bool = False) -> Check:
    """Certify ``expr == 0`` in ``T``.

    Proven when the expression normal-forms to zero; Refuted when a
    classical point of ``T`` separates it from zero; otherwise Inconclusive.
    The unreduced expression is kept on the check for later re-evaluation.
    """
    with timed() as elapsed, tracing(full_trace) as trace:
        residual = T.nf(expr)
        if residual.is_zero():
            verdict = Verdict.PROVEN
            witness = {"method": "rewriting", "residual": "0", **trace.summary()}
        else:
            witness = {"method": "rewriting", "residual": _short(residual), **trace.summary()}
            verdict = Verdict.INCONCLUSIVE
            if T.system.capped:
                witness["capped"] = True
            if oracle:
                from .oracle import find_separating_point, format_point

                point = find_separating_point(residual, T)
                if point is not None:
                    verdict = Verdict.REFUTED
                    witness = {"method": "oracle", "point": format_point(point),
                               "value": str(point_value(residual, T, point))}
    return Check(name, target, verdict, witness, elapsed[0], identity=(expr, T))


def point_value(p, T, point):
    from .oracle import evaluate_classical

    return evaluate_classical(p, point)


def _short(p: NCPolynomial, limit: int = 160) -> str:
    s = str(p)
    return s if len(s) <= limit else s[:limit] + f" ... ({len(p)} terms)"


def morphism_report(phi: Morphism, *, oracle: bool = True, full_trace: bool = False) -> VerificationReport:
    """Well-definedness: every source relation maps to zero; *-structure preserved."""
    rep = VerificationReport()
    T = phi.target
    for g in phi.source.generators:
        if g.self_adjoint:
            img = phi.images[g]
            rep.add(check_zero("verify_morphism.adjoint", f"{phi.name}({g.name})", img - img.adjoint(), T,
                               oracle=oracle, full_trace=full_trace))
    for r in phi.source.relations:
        rep.add(check_zero("verify_morphism.relation", f"{phi.name}({r})", substitute(phi, r), T,
                           oracle=oracle, full_trace=full_trace))
    return rep


def verify_morphism(phi: Morphism, *, oracle: bool = True, full_trace: bool = False) -> Verdict:
    rep = morphism_report(phi, oracle=oracle, full_trace=full_trace)
    if phi.source.system.capped or phi.target.system.capped:
        verdict = Verdict.combine([rep.verdict, Verdict.INCONCLUSIVE]) if rep.verdict is not Verdict.PROVEN else rep.verdict
    else:
        verdict = rep.verdict
    phi.verified = verdict
    phi.report = rep
    return verdict


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------


def quotient_presentation(P: Presentation, extra, name: str = "") -> tuple[Presentation, Morphism]:
    """``P / <extra>`` together with the quotient map (generator to itself)."""
    extra = [P.parse(e) if isinstance(e, str) else e for e in extra]
    for e in extra:
        if e.alphabet != P.alphabet:
            raise StructuralError("quotient relation over a different generator set")
    name = name or (f"{P.name}/I" if extra else P.name)
    total_extra = tuple(P.extra) + tuple(extra)
    root = P.parent if P.parent is not None else P
    Q = build_presentation(name, P.alphabet, list(P.relations) + extra,
                           degree_bound=P.system.degree_bound, rule_cap=P.system.rule_cap,
                           parent=root, extra=total_extra)
    if Q.is_trivial():
        raise TrivialQuotientError(f"{name} is the zero ring")
    pi = Morphism(P, Q, {g: Q.gen(g.name) for g in P.generators}, name=f"pi_{name}", verified=Verdict.PROVEN)
    return Q, pi


def factor_through_quotient(phi: Morphism, Q: Presentation, *, oracle: bool = True) -> tuple[Morphism, Verdict]:
    """The induced map ``Q -> target`` of a morphism killing Q's extra relations."""
    if Q.alphabet != phi.source.alphabet:
        raise StructuralError("quotient of a different presentation")
    verdicts = [check_zero("factor_through_quotient", str(e), substitute(phi, e), phi.target, oracle=oracle).verdict
                for e in Q.extra]
    verdict = Verdict.combine(verdicts + [phi.verified or Verdict.INCONCLUSIVE])
    induced = Morphism(Q, phi.target, {g: img for g, img in phi.images.items()}, anti=phi.anti,
                       name=f"{phi.name}~", verified=verdict)
    return induced, verdict
