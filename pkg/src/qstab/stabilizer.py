"""Stabilizer ideals, stabilizer subgroups, and their defining properties.

For a coaction ``α`` of ``A`` on ``C(X)`` and ``Y ⊆ X`` the stabilizer ideal
``I_Y`` is generated by ``(ev_x ⊗ id)α(e_i) - e_i(x)·1`` for ``x ∈ Y``.  A
subgroup here is always a presented quotient ``A/I`` with the quotient map
playing the role of the inclusion of the subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .action import Coaction, _label, evaluate_at_point, induce_action, restrict_to_invariant_subset
from .hopf import (
    QuantumGroupPresentation,
    build_quantum_permutation_group,
    check_hopf_axioms,
    magic_name,
    quotient_quantum_group,
    verify_qg_morphism,
)
from .ncpoly import NCPolynomial
from .presentation import (
    Morphism,
    Presentation,
    check_zero,
    embed,
    identity_morphism,
    morphism_report,
    quotient_presentation,
    scalars,
    substitute,
    tensor_morphism,
    tensor_product,
)
from .report import Check, Verdict, VerificationReport
from .rewrite import prove_membership


class StabilizerError(ValueError):
    pass


@dataclass
class StabilizerIdeal:
    parent: QuantumGroupPresentation
    action: Coaction
    points: tuple
    generators: list
    quotient: Presentation
    quotient_map: Morphism
    woronowicz_status: Verdict | None = None
    counit_status: Verdict | None = None

    @property
    def system(self):
        return self.quotient.system


@dataclass
class SubgroupPresentation:
    """A quantum subgroup presented as ``A/I`` with ``π: A -> A/I``."""

    group: QuantumGroupPresentation
    inclusion_map: Morphism
    parent: QuantumGroupPresentation
    ideal_generators: list = field(default_factory=list)
    points: tuple = ()
    reports: dict = field(default_factory=dict, repr=False)

    @property
    def algebra(self) -> Presentation:
        return self.group.algebra

    @property
    def name(self) -> str:
        return self.group.name


def _points(alpha: Coaction, Y) -> tuple:
    labels = tuple(sorted({_label(y) for y in Y}))
    if not labels:
        raise StabilizerError("Y must be non-empty")
    for k in labels:
        alpha.space.position(k)
    return labels


def stabilizer_ideal_generators(alpha: Coaction, Y) -> list[NCPolynomial]:
    """``(ev_x ⊗ id)α(e_i) - e_i(x)·1`` for ``x ∈ Y``, ``i = 1..n``.

    Zeros and duplicates (modulo the group's relations) are dropped; the
    surviving generators are returned in their unreduced form.
    """
    A = alpha.group.algebra
    seen = set()
    out = []
    for x in _points(alpha, Y):
        for k in alpha.space.labels:
            raw = evaluate_at_point(alpha, x, alpha.space.e(k), reduce=False)
            g = raw - A.scalar(1 if k == x else 0)
            nf = A.nf(g)
            if nf.is_zero() or nf in seen:
                continue
            seen.add(nf)
            out.append(g)
    return out


def check_counit_kills(gens, Q: QuantumGroupPresentation) -> Verdict:
    """Proven iff ``ε(g) = 0`` exactly for every generator (properness of the ideal)."""
    for g in gens:
        if substitute(Q.counit, g).constant() != 0:
            return Verdict.REFUTED
    return Verdict.PROVEN


def counit_report(gens, Q: QuantumGroupPresentation) -> VerificationReport:
    rep = VerificationReport()
    C = scalars()
    for g in gens:
        rep.add(check_zero("check_counit_kills", str(g), substitute(Q.counit, g), C))
    if not gens:
        rep.add(Check("check_counit_kills", "(no generators)", Verdict.PROVEN, {"method": "vacuous"}))
    return rep


def stabilizer_ideal(alpha: Coaction, Y) -> StabilizerIdeal:
    Y = _points(alpha, Y)
    gens = stabilizer_ideal_generators(alpha, Y)
    Q = alpha.group
    name = f"{Q.name}/I_{{" + ",".join(f"x_{k}" for k in Y) + "}"
    quot, pi = quotient_presentation(Q.algebra, gens, name)
    I = StabilizerIdeal(Q, alpha, Y, gens, quot, pi)
    I.counit_status = check_counit_kills(gens, Q)
    return I


def check_woronowicz_ideal(I: StabilizerIdeal, *, oracle: bool = True, full_trace: bool = False) -> VerificationReport:
    """``(π⊗π)Δ(g) = 0`` in ``(A/I)⊗(A/I)`` for every ideal generator ``g``."""
    if I.quotient.is_trivial():
        raise StabilizerError("ideal is not proper")
    rep = VerificationReport()
    QQ = tensor_product(I.quotient, I.quotient)
    pipi = tensor_morphism(I.quotient_map, I.quotient_map)
    for g in I.generators:
        expr = substitute(pipi, substitute(I.parent.coproduct, g))
        rep.add(check_zero("check_woronowicz_ideal", str(g), expr, QQ, oracle=oracle, full_trace=full_trace))
    if not I.generators:
        rep.add(Check("check_woronowicz_ideal", "(no generators)", Verdict.PROVEN, {"method": "vacuous"}))
    I.woronowicz_status = rep.verdict
    return rep


def subgroup_from_relations(Q: QuantumGroupPresentation, extra, name: str = "", *,
                            oracle: bool = True) -> SubgroupPresentation:
    """Any presented quotient ``A/<extra>`` regarded as a subgroup."""
    H, pi = quotient_quantum_group(Q, extra, name, oracle=oracle)
    return SubgroupPresentation(H, pi, Q, list(H.algebra.extra))


def build_stabilizer_subgroup(alpha: Coaction, Y, *, oracle: bool = True, full_trace: bool = False,
                              ideal: StabilizerIdeal | None = None) -> SubgroupPresentation:
    I = ideal if ideal is not None else stabilizer_ideal(alpha, Y)
    wor = check_woronowicz_ideal(I, oracle=oracle, full_trace=full_trace)
    if wor.verdict is not Verdict.PROVEN:
        raise StabilizerError(f"Woronowicz condition not proven ({wor.verdict})")
    H, pi = quotient_quantum_group(alpha.group, I.generators, I.quotient.name, oracle=oracle, full_trace=full_trace)
    sub = SubgroupPresentation(H, pi, alpha.group, list(I.generators), I.points)
    sub.reports["woronowicz"] = wor
    sub.reports["hopf"] = check_hopf_axioms(H, oracle=oracle, full_trace=full_trace)
    sub.reports["counit"] = counit_report(I.generators, alpha.group)
    return sub


def fixes_report(H: SubgroupPresentation, alpha: Coaction, Y, *, oracle: bool = True,
                 full_trace: bool = False) -> VerificationReport:
    if H.parent.algebra.alphabet != alpha.group.algebra.alphabet:
        raise StabilizerError("subgroup and action live over different groups")
    induced = induce_action(alpha, H.inclusion_map, H.group, oracle=oracle)
    rep = VerificationReport()
    B = H.algebra
    for x in _points(alpha, Y):
        for k in alpha.space.labels:
            val = evaluate_at_point(induced, x, alpha.space.e(k), reduce=False)
            rep.add(check_zero("check_fixes", f"x_{x}: e_{k}", val - B.scalar(1 if k == x else 0), B,
                               oracle=oracle, full_trace=full_trace))
    return rep


def check_fixes(H: SubgroupPresentation, alpha: Coaction, Y, *, oracle: bool = True) -> Verdict:
    """Proven iff ``(ev_y ⊗ id)α_H(e_i) = e_i(y)·1`` for all ``y ∈ Y`` and ``i``."""
    return fixes_report(H, alpha, Y, oracle=oracle).verdict


def check_universality(H: SubgroupPresentation, H0: SubgroupPresentation, *, oracle: bool = True,
                       full_trace: bool = False) -> VerificationReport:
    """Containment ``I_Y ⊆ I_H``, factorisation, and coproduct intertwining.

    Both subgroups must be quotients of the same parent.  The checks mirror
    the construction of ``π_{H,Y}: A/I_Y -> A/I_H`` (generator to generator).
    """
    if H.parent.algebra.alphabet != H0.parent.algebra.alphabet:
        raise StabilizerError("subgroups of different groups")
    kw = dict(oracle=oracle, full_trace=full_trace)
    rep = VerificationReport()
    B = H.algebra
    for g in H0.ideal_generators:
        rep.add(check_zero("check_universality.containment", str(g),
                           substitute(H.inclusion_map, g), B, **kw))
    if not H0.ideal_generators:
        rep.add(Check("check_universality.containment", "(no generators)", Verdict.PROVEN, {"method": "vacuous"}))
    link = Morphism(H0.algebra, B, {g: B.gen(g.name) for g in H0.algebra.generators},
                    name=f"pi_{H.name},{H0.name}")
    hom = morphism_report(link, **kw)
    link.verified = hom.verdict
    link.report = hom
    rep.add(Check("check_universality.existence", link.name, hom.verdict,
                  {"method": "rewriting", "relations_checked": len(hom)},
                  sum(c.elapsed_ms for c in hom), identity=[c.identity for c in hom]))
    for g in H.parent.generators:
        x = H.parent.gen(g.name)
        lhs = substitute(link, substitute(H0.inclusion_map, x))
        rep.add(check_zero("check_universality.factorization", g.name,
                           lhs - substitute(H.inclusion_map, x), B, **kw))
    BB = H.group.algebra_tensor()
    linklink = tensor_morphism(link, link)
    for g in H0.algebra.generators:
        lhs = substitute(linklink, H0.group.coproduct.images[g])
        rhs = substitute(H.group.coproduct, link.images[g])
        rep.add(check_zero("check_universality.coproduct", g.name, lhs - rhs, BB, **kw))
    return rep


def quotient_space_check(a: NCPolynomial, H: SubgroupPresentation, *, oracle: bool = True,
                         full_trace: bool = False) -> Check:
    A = H.parent.algebra
    if a.alphabet != A.alphabet:
        raise StabilizerError("element must lie in the parent algebra")
    T = tensor_product(H.algebra, A)
    lhs = substitute(tensor_morphism(H.inclusion_map, identity_morphism(A)), substitute(H.parent.coproduct, a))
    return check_zero("quotient_space_membership", str(a), lhs - embed(a, T, 2), T,
                      oracle=oracle, full_trace=full_trace)


def quotient_space_membership(a: NCPolynomial, H: SubgroupPresentation, *, oracle: bool = True) -> Verdict:
    """Proven iff ``(π_H ⊗ id)Δ(a) = 1 ⊗ a``."""
    return quotient_space_check(a, H, oracle=oracle).verdict


def equivariance_report(alpha: Coaction, x, H: SubgroupPresentation, *, oracle: bool = True,
                        full_trace: bool = False, require_fixes: bool = True) -> VerificationReport:
    if require_fixes and fixes_report(H, alpha, [x], oracle=oracle).verdict is not Verdict.PROVEN:
        raise StabilizerError(f"{H.name} does not fix x_{_label(x)}")
    Q = alpha.group
    A = Q.algebra
    AA = Q.algebra_tensor()
    kw = dict(oracle=oracle, full_trace=full_trace)
    space = alpha.space
    rep = VerificationReport()
    values = {k: evaluate_at_point(alpha, x, space.e(k), reduce=False) for k in space.labels}
    rep.add(check_zero("check_equivariance", "1", substitute(Q.coproduct, A.one()) - AA.one(), AA, **kw))
    for i, k in enumerate(space.labels):
        lhs = substitute(Q.coproduct, values[k])
        rhs = AA.zero()
        for j, l in enumerate(space.labels):
            rhs = rhs + embed(values[l], AA, 1) * embed(alpha.matrix[j][i], AA, 2)
        rep.add(check_zero("check_equivariance", f"e_{k}", lhs - rhs, AA, **kw))
    return rep


def check_equivariance(alpha: Coaction, x, H: SubgroupPresentation, *, oracle: bool = True) -> Verdict:
    """``Δ((ev_x⊗id)α(e_i)) = Σ_j (ev_x⊗id)α(e_j) ⊗ α_ji`` for every basis element."""
    return equivariance_report(alpha, x, H, oracle=oracle).verdict


def restriction_report(H: SubgroupPresentation, alpha: Coaction, x, *, oracle: bool = True) -> VerificationReport:
    """H fixes x under α, and under α_H restricted to the invariant set {x}."""
    rep = VerificationReport()
    direct = fixes_report(H, alpha, [x], oracle=oracle)
    rep.add(Check("restrict_to_invariant_subset.fixes_under_alpha", f"x_{_label(x)}", direct.verdict,
                  {"method": "rewriting", "checks": len(direct)}, identity=[c.identity for c in direct]))
    induced = induce_action(alpha, H.inclusion_map, H.group, oracle=oracle)
    restricted = restrict_to_invariant_subset(induced, [x], oracle=oracle)
    B = H.algebra
    sub_checks = []
    for k in restricted.space.labels:
        val = evaluate_at_point(restricted, x, restricted.space.e(k), reduce=False)
        sub_checks.append(check_zero("check_fixes", f"x_{_label(x)}: e_{k}",
                                     val - B.scalar(1 if k == _label(x) else 0), B, oracle=oracle))
    verdict = Verdict.combine([c.verdict for c in sub_checks] + [restricted.report.verdict])
    rep.add(Check("restrict_to_invariant_subset.fixes_under_restriction", f"x_{_label(x)}", verdict,
                  {"method": "rewriting", "points": len(restricted.space.labels)},
                  identity=[c.identity for c in sub_checks]))
    return rep


# ---------------------------------------------------------------------------
# the stabilizer of a point for A_s(n)
# ---------------------------------------------------------------------------


def verify_As_stabilizer_iso(n: int, *, degree_bound: int = 4, rule_cap: int = 20000, oracle: bool = True,
                             full_trace: bool = False) -> VerificationReport:
    """The stabilizer of ``x_n`` in ``A_s(n)`` is isomorphic to ``A_s(n-1)``.

    Builds ``S: A_s(n) -> A_s(n-1)``, the induced ``Φ`` on the stabilizer
    and its inverse ``Ψ``, and checks both are mutually inverse quantum-group
    morphisms.  ``a_in ∈ I_n`` is certified by completion and cross-checked
    through the antipode.
    """
    from .action import build_standard_action

    if n < 3:
        raise StabilizerError("the isomorphism check needs n >= 3")
    kw = dict(oracle=oracle, full_trace=full_trace)
    rep = VerificationReport()
    G = build_quantum_permutation_group(n, degree_bound, rule_cap, oracle=oracle)
    K = build_quantum_permutation_group(n - 1, degree_bound, rule_cap, "b", oracle=oracle)
    alpha = build_standard_action(G, oracle=oracle)
    H0 = build_stabilizer_subgroup(alpha, [n], **kw)
    A, Hq, Bq = G.algebra, H0.algebra, K.algebra
    a = lambda i, j: magic_name(i, j, n)  # noqa: E731
    b = lambda i, j: magic_name(i, j, n - 1, "b")  # noqa: E731
    rng = range(1, n + 1)

    # a_in ∈ I_n, directly and through the antipode
    for i in range(1, n):
        x = A.gen(a(i, n))
        verdict = prove_membership(x, Hq.system)
        witness = {"method": "rewriting", "normal_form": str(Hq.nf(x))}
        rep.add(Check("verify_As_stabilizer_iso.column_membership", a(i, n), verdict, witness,
                      identity=(substitute(H0.inclusion_map, x), Hq)))
        kappa_img = substitute(H0.inclusion_map, substitute(G.antipode, x))
        rep.add(check_zero("verify_As_stabilizer_iso.antipode_route", f"π(κ({a(i, n)}))", kappa_img, Hq, **kw))
        rep.add(check_zero("verify_As_stabilizer_iso.antipode_route_transport", f"κ_n(π({a(i, n)}))",
                           substitute(H0.group.antipode, Hq.gen(a(i, n))) - kappa_img, Hq, **kw))

    # S: A_s(n) -> A_s(n-1)
    S_images = {}
    for i in rng:
        for j in rng:
            S_images[a(i, j)] = Bq.gen(b(i, j)) if i < n and j < n else Bq.scalar(1 if i == j else 0)
    S = Morphism(A, Bq, S_images, name="S")
    srep = morphism_report(S, **kw)
    S.verified = srep.verdict
    rep.add(_summary("verify_As_stabilizer_iso.S_well_defined", "S", srep))
    for g in H0.ideal_generators:
        rep.add(check_zero("verify_As_stabilizer_iso.ideal_in_kernel", str(g), substitute(S, g), Bq, **kw))

    # Φ: A_s(n)/I_n -> A_s(n-1), same images as S
    Phi = Morphism(Hq, Bq, {Hq.alphabet.generator(k): v for k, v in S_images.items()}, name="Φ")
    prep = morphism_report(Phi, **kw)
    Phi.verified = prep.verdict
    rep.add(_summary("verify_As_stabilizer_iso.Phi_well_defined", "Φ", prep))

    # Ψ: A_s(n-1) -> A_s(n)/I_n, b_ij -> a_ij + I_n
    Psi = Morphism(Bq, Hq, {b(i, j): Hq.gen(a(i, j)) for i in range(1, n) for j in range(1, n)}, name="Ψ")
    qrep = morphism_report(Psi, **kw)
    Psi.verified = qrep.verdict
    rep.add(_summary("verify_As_stabilizer_iso.Psi_well_defined", "Ψ", qrep))

    for i in range(1, n):
        for j in range(1, n):
            y = Bq.gen(b(i, j))
            rep.add(check_zero("verify_As_stabilizer_iso.phi_psi_identity", b(i, j),
                               substitute(Phi, substitute(Psi, y)) - y, Bq, **kw))
    for i in rng:
        for j in rng:
            x = Hq.gen(a(i, j))
            rep.add(check_zero("verify_As_stabilizer_iso.psi_phi_identity", a(i, j),
                               substitute(Psi, substitute(Phi, x)) - x, Hq, **kw))

    for label, phi, src, tgt in (("Phi", Phi, H0.group, K), ("Psi", Psi, K, H0.group)):
        qg = verify_qg_morphism(phi, src, tgt, **kw)
        for c in qg:
            c.name = c.name.replace("verify_qg_morphism", f"verify_As_stabilizer_iso.{label}_qg_morphism")
            rep.add(c)
    return rep


def _summary(name: str, target: str, sub: VerificationReport) -> Check:
    return Check(name, target, sub.verdict, {"method": "rewriting", "relations_checked": len(sub),
                                             "proven": sub.summary()["Proven"]},
                 sum(c.elapsed_ms for c in sub), identity=[c.identity for c in sub])
