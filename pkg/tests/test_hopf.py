import pytest
from hypothesis import given

from qstab.hopf import (
    build_presented_quantum_group,
    build_quantum_permutation_group,
    check_hopf_axioms,
    counit_morphism,
    quotient_quantum_group,
    scalar_quantum_group,
    verify_qg_morphism,
)
from qstab.presentation import identity_morphism, substitute
from qstab.report import Verdict

from conftest import polynomials


def test_builder_shape(A3):
    assert len(A3.generators) == 9
    assert len(A3.algebra.relations) == 9 + 18 + 6
    AA = A3.algebra_tensor()
    expected = sum((AA.gen(f"a_1{k}", 1) * AA.gen(f"a_{k}1", 2) for k in (1, 2, 3)), AA.zero())
    assert A3.coproduct.images[A3.algebra.alphabet.generator("a_11")] == expected
    assert A3.epsilon(A3.gen("a_12")) == 0 and A3.epsilon(A3.gen("a_11")) == 1
    assert A3.kappa(A3.gen("a_13")) == A3.algebra.nf(A3.gen("a_31"))
    assert all(v is Verdict.PROVEN for v in A3.axiom_status.values())


def test_builder_rejects_small_n():
    with pytest.raises(ValueError):
        build_quantum_permutation_group(1)


def test_axiom_suite(A3):
    rep = check_hopf_axioms(A3)
    assert rep.all_proven
    names = {c.name for c in rep}
    for axiom in ("coassociativity", "counit_left", "counit_right", "antipode_left", "antipode_right"):
        assert f"check_hopf_axioms.{axiom}" in names
    assert len(rep.by_name("check_hopf_axioms.coassociativity")) == 9


def test_broken_antipode_is_refuted(A3):
    from qstab.hopf import QuantumGroupPresentation
    from qstab.presentation import Morphism

    A = A3.algebra
    bad = Morphism(A, A, {g: A.gen(g.name) for g in A.generators}, anti=True, name="id*")
    Q = QuantumGroupPresentation("bad", A, A3.coproduct, A3.counit, bad)
    rep = check_hopf_axioms(Q)
    refuted = [c for c in rep if c.verdict is Verdict.REFUTED]
    assert refuted and all("antipode" in c.name for c in refuted)


def test_qg_morphisms(A3, H3):
    assert verify_qg_morphism(H3.inclusion_map, A3, H3.group).all_proven
    assert verify_qg_morphism(identity_morphism(A3.algebra), A3, A3).all_proven
    assert verify_qg_morphism(counit_morphism(A3), A3, scalar_quantum_group()).all_proven


@given(polynomials(build_quantum_permutation_group(3).algebra.alphabet))
def test_coproduct_is_unital_star_map(p):
    Q = build_quantum_permutation_group(3)
    AA = Q.algebra_tensor()
    assert Q.delta(Q.algebra.one()) == AA.one()
    assert Q.delta(p.adjoint()) == AA.nf(Q.delta(p).adjoint())


@given(polynomials(build_quantum_permutation_group(3).algebra.alphabet),
       polynomials(build_quantum_permutation_group(3).algebra.alphabet))
def test_antipode_is_anti_multiplicative(p, q):
    Q = build_quantum_permutation_group(3)
    assert Q.kappa(p * q) == Q.algebra.nf(Q.kappa(q) * Q.kappa(p))


def test_antipode_squares_to_identity(A4):
    for g in A4.generators:
        x = A4.gen(g.name)
        assert A4.kappa(substitute(A4.antipode, x)) == A4.algebra.nf(x)


def test_quotient_group_structure(A3):
    H, pi = quotient_quantum_group(A3, ["a_31", "a_32", "a_33 - 1"])
    assert all(v is Verdict.PROVEN for v in H.axiom_status.values())
    assert check_hopf_axioms(H).all_proven


def test_non_woronowicz_quotient_fails_coproduct(A3):
    # the transposition (12) satisfies a_11 = a_22 but (12)·(23) does not
    H, _ = quotient_quantum_group(A3, ["a_11 - a_22"])
    assert H.axiom_status["coproduct"] is Verdict.REFUTED


def test_inline_group(A3):
    # the group algebra of Z/2: g self-adjoint, g^2 = 1, Δg = g⊗g, ε(g) = 1, κ(g) = g
    Z2 = build_presented_quantum_group("C[Z2]", ["g"], ["g*g - 1"], {"g": [["g", "g"]]}, {"g": 1}, {"g": "g"})
    assert check_hopf_axioms(Z2).all_proven
    with pytest.raises(ValueError):
        build_presented_quantum_group("x", ["g"], [], {}, {}, {})
