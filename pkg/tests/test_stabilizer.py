import pytest

from qstab.action import Coaction, build_standard_action, finite_space
from qstab.hopf import build_quantum_permutation_group
from qstab.oracle import vanishes_everywhere
from qstab.report import Verdict
from qstab.stabilizer import (
    StabilizerError,
    build_stabilizer_subgroup,
    check_counit_kills,
    check_equivariance,
    check_fixes,
    check_universality,
    check_woronowicz_ideal,
    quotient_space_membership,
    stabilizer_ideal,
    stabilizer_ideal_generators,
    subgroup_from_relations,
    verify_As_stabilizer_iso,
)


def _strs(polys):
    return [str(p) for p in polys]


def _counit_quotient(G):
    return subgroup_from_relations(G, [G.gen(g.name) - G.counit.images[g].constant() for g in G.generators], "C")


def test_ideal_generators(alpha3, alpha4, A3):
    assert _strs(stabilizer_ideal_generators(alpha3, [3])) == ["a_31", "a_32", "a_33 - 1"]
    assert _strs(stabilizer_ideal_generators(alpha4, ["x_4"])) == ["a_41", "a_42", "a_43", "a_44 - 1"]
    whole = stabilizer_ideal_generators(alpha3, [1, 2, 3])
    assert _strs(whole) == [f"a_{i}{j}" + (" - 1" if i == j else "") for i in (1, 2, 3) for j in (1, 2, 3)]
    one = A3.algebra.one()
    zero = A3.algebra.zero()
    trivial = Coaction(alpha3.space, A3, [[one if i == j else zero for i in range(3)] for j in range(3)])
    assert stabilizer_ideal_generators(trivial, [2]) == []
    with pytest.raises(Exception):
        stabilizer_ideal_generators(alpha3, [5])


def test_counit_kills(A3):
    g = A3.gen
    assert check_counit_kills([g("a_31"), g("a_32"), g("a_33") - 1], A3) is Verdict.PROVEN
    assert check_counit_kills([], A3) is Verdict.PROVEN
    assert check_counit_kills([g("a_11")], A3) is Verdict.REFUTED


def test_woronowicz(alpha3):
    I = stabilizer_ideal(alpha3, [3])
    rep = check_woronowicz_ideal(I)
    assert rep.all_proven and len(rep) == 3
    assert I.woronowicz_status is Verdict.PROVEN


def test_stabilizer_subgroup(H3):
    B = H3.algebra
    for name in ("a_13", "a_23", "a_31", "a_32"):
        assert B.nf(B.gen(name)).is_zero()
    assert B.nf(B.gen("a_33")) == B.one()
    assert H3.reports["hopf"].all_proven


def test_whole_space_gives_trivial_group(alpha3):
    H = build_stabilizer_subgroup(alpha3, [1, 2, 3])
    B = H.algebra
    assert all(B.nf(B.gen(g.name)).is_constant() for g in B.generators)


def test_non_proper_ideal_is_rejected(A3):
    one, zero = A3.algebra.one(), A3.algebra.zero()
    # a "coaction" with a scalar 2 entry makes the ideal contain 1
    m = [[one if i == j else zero for i in range(3)] for j in range(3)]
    m[2][2] = 2 * one
    bogus = Coaction(finite_space(3), A3, m)
    with pytest.raises(Exception):
        build_stabilizer_subgroup(bogus, [3])


def test_fixes(alpha3, H3, A3):
    assert check_fixes(H3, alpha3, [3]) is Verdict.PROVEN
    C = _counit_quotient(A3)
    assert check_fixes(C, alpha3, [1, 2, 3]) is Verdict.PROVEN
    full = subgroup_from_relations(A3, [], "A_s(3)")
    assert check_fixes(full, alpha3, [3]) is Verdict.REFUTED


def test_universality(A3, A4, H3, H4):
    rep = check_universality(H3, H3)
    assert rep.all_proven
    assert check_universality(_counit_quotient(A3), H3).all_proven
    smaller = subgroup_from_relations(A4, list(H4.ideal_generators) + [A4.gen("a_11") - 1], "K")
    rep = check_universality(smaller, H4)
    assert rep.all_proven
    assert rep.by_name("check_universality.containment")


def test_universality_fails_for_a_subgroup_moving_the_point(A3, H3):
    other = subgroup_from_relations(A3, ["a_11 - 1"], "fix x_1")
    rep = check_universality(other, H3)
    assert Verdict.REFUTED in {c.verdict for c in rep.by_name("check_universality.containment")}


def test_quotient_space(A3, H3):
    assert quotient_space_membership(A3.algebra.one(), H3) is Verdict.PROVEN
    assert quotient_space_membership(A3.gen("a_31"), H3) is Verdict.PROVEN
    assert quotient_space_membership(A3.gen("a_13"), H3) is Verdict.REFUTED


def test_equivariance(alpha3, alpha4, H3, H4, A3):
    assert check_equivariance(alpha3, 3, H3) is Verdict.PROVEN
    assert check_equivariance(alpha4, 4, H4) is Verdict.PROVEN
    full = subgroup_from_relations(A3, [], "A_s(3)")
    with pytest.raises(StabilizerError):
        check_equivariance(alpha3, 3, full)


def test_containment_chain():
    for n in (3, 4):
        G = build_quantum_permutation_group(n)
        alpha = build_standard_action(G)
        chain = [[n], [n - 1, n], list(range(1, n + 1))]
        subs = [build_stabilizer_subgroup(alpha, Y) for Y in chain]
        for small, big in zip(subs, subs[1:]):
            for g in small.ideal_generators:
                assert big.algebra.nf(g).is_zero()


def test_iso_three():
    rep = verify_As_stabilizer_iso(3)
    assert rep.all_proven
    names = {c.name for c in rep}
    for part in ("column_membership", "antipode_route", "S_well_defined", "Phi_well_defined", "Psi_well_defined",
                 "phi_psi_identity", "psi_phi_identity", "Phi_qg_morphism.coproduct", "Psi_qg_morphism.coproduct"):
        assert f"verify_As_stabilizer_iso.{part}" in names
    with pytest.raises(StabilizerError):
        verify_As_stabilizer_iso(2)


def test_proven_checks_hold_classically(H3, alpha3):
    reports = [H3.reports["hopf"], H3.reports["woronowicz"], check_universality(H3, H3),
               verify_As_stabilizer_iso(3)]
    for rep in reports:
        for c in rep:
            if c.verdict is Verdict.PROVEN:
                for expr, T in c.identities():
                    assert vanishes_everywhere(expr, T) is True
