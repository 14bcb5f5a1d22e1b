"""Coactions of presented quantum groups on finite spaces."""

from __future__ import annotations

from dataclasses import dataclass, field

from .hopf import QuantumGroupPresentation
from .ncpoly import Generator, NCPolynomial
from .presentation import (
    Morphism,
    Presentation,
    build_presentation,
    check_zero,
    contract_legs,
    identity_morphism,
    morphism_report,
    scalars,
    substitute,
    tensor_morphism,
    tensor_product,
)
from .report import Check, Verdict, VerificationReport


class ActionError(ValueError):
    pass


class InvarianceError(ActionError):
    def __init__(self, message: str, verdict: Verdict, check: Check | None = None):
        super().__init__(message)
        self.verdict = verdict
        self.check = check


@dataclass
class FiniteSpace:
    """``X = {x_k : k in labels}`` with ``C(X)`` presented on idempotents ``e_k``."""

    labels: tuple
    algebra: Presentation

    @property
    def n(self) -> int:
        return len(self.labels)

    def position(self, point) -> int:
        k = _label(point)
        try:
            return self.labels.index(k)
        except ValueError:
            raise ActionError(f"unknown point x_{k}") from None

    def e(self, point) -> NCPolynomial:
        return self.algebra.gen(f"e_{_label(point)}")

    def basis(self) -> list[NCPolynomial]:
        return [self.e(k) for k in self.labels]


def _label(point) -> int:
    if isinstance(point, str):
        if point.startswith("x_"):
            point = point[2:]
        try:
            return int(point)
        except ValueError:
            raise ActionError(f"unknown point {point!r}") from None
    return int(point)


def finite_space(points, **kw) -> FiniteSpace:
    """``finite_space(3)`` or ``finite_space([1, 3])``."""
    labels = tuple(range(1, points + 1)) if isinstance(points, int) else tuple(sorted(_label(p) for p in points))
    if not labels:
        raise ActionError("a finite space needs at least one point")
    gens = [Generator(f"e_{k}", True, (k,)) for k in labels]
    from .ncpoly import Alphabet

    alphabet = Alphabet(gens)
    e = {k: alphabet.gen(f"e_{k}") for k in labels}
    rels = []
    for i in labels:
        for j in labels:
            rels.append(e[i] * e[j] - (e[i] if i == j else alphabet.zero()))
    rels.append(sum(e.values(), alphabet.zero()) - 1)
    name = f"C(X_{len(labels)})" if labels == tuple(range(1, len(labels) + 1)) else \
        "C({" + ",".join(f"x_{k}" for k in labels) + "})"
    return FiniteSpace(labels, build_presentation(name, alphabet, rels, **kw))


@dataclass
class Coaction:
    """``α(e_i) = Σ_j e_j ⊗ matrix[j][i]`` (positions in ``space.labels``)."""

    space: FiniteSpace
    group: QuantumGroupPresentation
    matrix: tuple
    axiom_status: dict = field(default_factory=dict)
    report: VerificationReport | None = field(default=None, repr=False)

    def __post_init__(self):
        n = self.space.n
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise ActionError(f"coaction matrix must be {n}x{n}")
        A = self.group.algebra
        rows = []
        for row in self.matrix:
            out = []
            for entry in row:
                if isinstance(entry, str):
                    entry = A.parse(entry)
                elif isinstance(entry, int):
                    entry = A.scalar(entry)
                if entry.alphabet != A.alphabet:
                    raise ActionError("coaction entries must lie in the group algebra")
                out.append(entry)
            rows.append(tuple(out))
        self.matrix = tuple(rows)
        B = self.space.algebra
        BA = tensor_product(B, A)
        images = {}
        for i, k in enumerate(self.space.labels):
            img = BA.zero()
            for j, l in enumerate(self.space.labels):
                img = img + _embed_pair(BA, f"e_{l}", self.matrix[j][i])
            images[f"e_{k}"] = img
        self.morphism = Morphism(B, BA, images, name="α")

    @property
    def tensor(self) -> Presentation:
        return tensor_product(self.space.algebra, self.group.algebra)

    def entry(self, j_point, i_point) -> NCPolynomial:
        return self.matrix[self.space.position(j_point)][self.space.position(i_point)]

    def apply(self, f: NCPolynomial) -> NCPolynomial:
        """``α(f)`` in ``B ⊗ A`` (unreduced)."""
        return substitute(self.morphism, f)


def _embed_pair(BA: Presentation, e_name: str, a: NCPolynomial) -> NCPolynomial:
    from .presentation import embed

    return BA.gen(e_name, 1) * embed(a, BA, 2)


def build_standard_action(Q: QuantumGroupPresentation, X: FiniteSpace | None = None, *,
                          symbol: str = "a", oracle: bool = True) -> Coaction:
    """The defining action ``α(e_i) = Σ_j e_j ⊗ a_ji``."""
    from .hopf import magic_name

    n = int(round(len(Q.generators) ** 0.5))
    if n * n != len(Q.generators):
        raise ActionError(f"{Q.name} is not a magic-unitary group")
    if X is None:
        X = finite_space(n)
    if X.n != n:
        raise ActionError(f"space has {X.n} points but {Q.name} acts on {n}")
    A = Q.algebra
    mat = tuple(tuple(A.gen(magic_name(j, i, n, symbol)) for i in range(1, n + 1)) for j in range(1, n + 1))
    alpha = Coaction(X, Q, mat)
    check_coaction_axioms(alpha, oracle=oracle)
    return alpha


def check_coaction_axioms(alpha: Coaction, *, oracle: bool = True, full_trace: bool = False) -> VerificationReport:
    """Homomorphism property, unitality, coassociativity and the counit law."""
    kw = dict(oracle=oracle, full_trace=full_trace)
    rep = VerificationReport()
    Q = alpha.group
    B = alpha.space.algebra
    A = Q.algebra
    hom = morphism_report(alpha.morphism, **kw)
    alpha.morphism.verified = hom.verdict
    alpha.morphism.report = hom
    rep.add(Check("check_coaction_axioms.homomorphism", "α", hom.verdict,
                  {"method": "rewriting", "relations_checked": len(hom)},
                  sum(c.elapsed_ms for c in hom), identity=[c.identity for c in hom]))
    BA = alpha.tensor
    total = sum(alpha.space.basis(), B.zero())
    rep.add(check_zero("check_coaction_axioms.unital", "α(1)", alpha.apply(total) - BA.one(), BA, **kw))
    idA = identity_morphism(A)
    idB = identity_morphism(B)
    BAA = tensor_product(B, A, A)
    left = tensor_morphism(alpha.morphism, idA)
    right = tensor_morphism(idB, Q.coproduct)
    eps = Morphism(A, scalars(), dict(Q.counit.images), name="ε", verified=Q.counit.verified)
    for k in alpha.space.labels:
        e = alpha.space.e(k)
        ae = alpha.apply(e)
        rep.add(check_zero("check_coaction_axioms.coassociativity", f"e_{k}",
                           substitute(left, ae) - substitute(right, ae), BAA, **kw))
        rep.add(check_zero("check_coaction_axioms.counit", f"e_{k}",
                           contract_legs(ae, BA, [idB, eps], B) - e, B, **kw))
    for c in rep:
        alpha.axiom_status[c.name.split(".", 1)[1]] = Verdict.combine(
            [alpha.axiom_status.get(c.name.split(".", 1)[1], Verdict.PROVEN), c.verdict])
    alpha.report = rep
    return rep


def _evaluation(space: FiniteSpace, point) -> Morphism:
    k = _label(point)
    space.position(k)
    C = scalars()
    return Morphism(space.algebra, C, {f"e_{l}": C.scalar(1 if l == k else 0) for l in space.labels},
                    name=f"ev_x{k}", verified=Verdict.PROVEN)


def evaluate_at_point(alpha: Coaction, point, f: NCPolynomial | None = None, *,
                      reduce: bool = True) -> NCPolynomial:
    """``(ev_x ⊗ id)α(f)`` in the group algebra (``f`` defaults to the unit)."""
    B = alpha.space.algebra
    A = alpha.group.algebra
    if f is None:
        f = B.one()
    if f.alphabet != B.alphabet:
        raise ActionError("argument must lie in the space algebra")
    ev = _evaluation(alpha.space, point)
    raw = contract_legs(alpha.apply(f), alpha.tensor, [ev, identity_morphism(A)], A)
    return A.nf(raw) if reduce else raw


def induce_action(alpha: Coaction, pi: Morphism, group: QuantumGroupPresentation, *,
                  oracle: bool = True) -> Coaction:
    """Push the coefficients through ``pi``: ``α_H = (id ⊗ π)α``."""
    if pi.verified is Verdict.REFUTED:
        raise ActionError(f"{pi.name} is not a morphism")
    if pi.source.alphabet != alpha.group.algebra.alphabet or pi.target.alphabet != group.algebra.alphabet:
        raise ActionError("induce_action: morphism does not match the groups")
    mat = tuple(tuple(substitute(pi, x) for x in row) for row in alpha.matrix)
    induced = Coaction(alpha.space, group, mat)
    check_coaction_axioms(induced, oracle=oracle)
    return induced


def invariance_report(alpha: Coaction, points, *, oracle: bool = True) -> VerificationReport:
    """``matrix[j][i] = 0`` whenever ``x_j`` is in ``Y`` and ``x_i`` is not."""
    Y = {_label(p) for p in points}
    rep = VerificationReport()
    A = alpha.group.algebra
    for j, l in enumerate(alpha.space.labels):
        if l not in Y:
            continue
        for i, k in enumerate(alpha.space.labels):
            if k in Y:
                continue
            rep.add(check_zero("restrict_to_invariant_subset.invariance", f"α[x_{l}][x_{k}]",
                               alpha.matrix[j][i], A, oracle=oracle))
    return rep


def restrict_to_invariant_subset(alpha: Coaction, points, *, oracle: bool = True) -> Coaction:
    Y = sorted({_label(p) for p in points})
    if not Y:
        raise ActionError("Y must be non-empty")
    for k in Y:
        alpha.space.position(k)
    rep = invariance_report(alpha, Y, oracle=oracle)
    if rep.verdict is not Verdict.PROVEN:
        bad = next(c for c in rep if c.verdict is rep.verdict)
        raise InvarianceError(f"Y is not invariant: {bad.target} ({bad.verdict})", rep.verdict, bad)
    if Y == list(alpha.space.labels):
        return alpha
    sub = finite_space(Y, degree_bound=alpha.space.algebra.system.degree_bound)
    pos = [alpha.space.position(k) for k in Y]
    mat = tuple(tuple(alpha.matrix[j][i] for i in pos) for j in pos)
    restricted = Coaction(sub, alpha.group, mat)
    check_coaction_axioms(restricted, oracle=oracle)
    return restricted
