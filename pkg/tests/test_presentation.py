import warnings

import pytest
from hypothesis import given

from qstab.action import finite_space
from qstab.hopf import build_quantum_permutation_group, magic_name
from qstab.ncpoly import Generator, StructuralError
from qstab.presentation import (
    Morphism,
    TrivialQuotientError,
    UnverifiedMorphismWarning,
    apply_morphism,
    build_presentation,
    compose,
    embed,
    factor_through_quotient,
    identity_morphism,
    quotient_presentation,
    scalars,
    substitute,
    tensor_product,
    verify_morphism,
)
from qstab.report import Verdict

from conftest import polynomials


def _S(n):
    """a_ij -> b_ij for i, j < n, otherwise delta_ij."""
    A = build_quantum_permutation_group(n).algebra
    B = build_quantum_permutation_group(n - 1, symbol="b").algebra
    images = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            images[magic_name(i, j, n)] = (B.gen(magic_name(i, j, n - 1, "b")) if i < n and j < n
                                           else B.scalar(int(i == j)))
    return Morphism(A, B, images, name="S")


def test_build_presentation_examples():
    P = build_presentation("proj", [Generator("p")], ["p*p - p"])
    assert [str(r) for r in P.system.rules] == ["p*p -> p"]
    X = finite_space(3)
    e = X.e
    assert X.algebra.nf(e(1) * e(2)).is_zero()
    assert X.algebra.nf(e(1) + e(2) + e(3)).constant() == 1
    free = build_presentation("free", [Generator("x"), Generator("y", False)])
    assert len(free.system) == 0
    assert free.nf(free.gen("x") * free.gen("y")) == free.gen("x") * free.gen("y")


def test_undeclared_generator_in_relation():
    with pytest.raises(Exception):
        build_presentation("bad", [Generator("p")], ["p*q"])


def test_tensor_product_examples():
    A2 = build_quantum_permutation_group(2).algebra
    T = tensor_product(A2, A2)
    assert len(T.generators) == 8
    assert len(T.relations) >= 2 * len(A2.relations)
    x, y = T.gen("a_11", 1), T.gen("a_12", 2)
    assert T.nf(x * y) == T.nf(y * x)
    assert T.nf(T.gen("a_11", 2) * T.gen("a_12", 1)) == T.nf(T.gen("a_12", 1) * T.gen("a_11", 2))
    for r in A2.relations:
        assert T.nf(embed(r, T, 1)).is_zero() and T.nf(embed(r, T, 2)).is_zero()
    assert tensor_product(A2, A2) is T


def test_verify_morphism_examples(A3):
    S = _S(3)
    assert verify_morphism(S) is Verdict.PROVEN
    assert verify_morphism(identity_morphism(A3.algebra)) is Verdict.PROVEN
    C = scalars()
    bad = Morphism(A3.algebra, C, {g: C.one() for g in A3.generators}, name="ones")
    assert verify_morphism(bad) is Verdict.REFUTED
    failing = [c for c in bad.report if c.verdict is Verdict.REFUTED]
    assert failing and failing[0].witness["method"] == "oracle"


def test_apply_morphism_examples(A3):
    S = _S(3)
    verify_morphism(S)
    A = A3.algebra
    assert apply_morphism(S, A.gen("a_33")) == S.target.one()
    assert apply_morphism(S, A.gen("a_13") * A.gen("a_11")).is_zero()
    idA = identity_morphism(A)
    p = A.gen("a_12") * A.gen("a_21") + A.gen("a_22")
    assert apply_morphism(idA, p) == A.nf(p)


def test_unverified_morphism_warns(A3):
    S = _S(3)
    with pytest.warns(UnverifiedMorphismWarning):
        apply_morphism(S, A3.gen("a_11"))


def test_quotient_examples(A3):
    A = A3.algebra
    Q, pi = quotient_presentation(A, ["a_31", "a_32", "a_33 - 1"])
    assert Q.nf(Q.gen("a_13")).is_zero() and Q.nf(Q.gen("a_23")).is_zero()
    assert pi.verified is Verdict.PROVEN
    same, pi0 = quotient_presentation(A, [])
    assert [str(r) for r in same.system.rules] == [str(r) for r in A.system.rules]
    pinned, _ = quotient_presentation(A, [A.gen(magic_name(i, j, 3)) - int(i == j)
                                          for i in (1, 2, 3) for j in (1, 2, 3)])
    for g in pinned.generators:
        assert pinned.nf(pinned.gen(g.name)).is_constant()
    with pytest.raises(TrivialQuotientError):
        quotient_presentation(A, ["a_11 - 1", "a_12 - 1"])
    with pytest.raises(StructuralError):
        quotient_presentation(A, [scalars().one()])


def test_quotient_universal_property(A3):
    S = _S(3)
    verify_morphism(S)
    Q, _ = quotient_presentation(A3.algebra, ["a_31", "a_32", "a_33 - 1"])
    induced, verdict = factor_through_quotient(S, Q)
    assert verdict is Verdict.PROVEN
    for g in Q.generators:
        assert induced.images[g] == S.images[A3.algebra.alphabet.generator(g.name)]
    assert verify_morphism(induced) is Verdict.PROVEN


def test_functoriality(A3):
    A = A3.algebra
    S = _S(3)
    verify_morphism(S)
    kappa = A3.antipode
    SK = compose(S, identity_morphism(A))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for g in A.generators:
            x = A.gen(g.name)
            assert apply_morphism(SK, x) == apply_morphism(S, apply_morphism(identity_morphism(A), x))
    assert kappa.anti


@given(polynomials(build_quantum_permutation_group(3).algebra.alphabet))
def test_morphisms_commute_with_adjoint(p):
    S = _S(3)
    S.verified = Verdict.PROVEN
    B = S.target
    assert B.nf(substitute(S, p.adjoint())) == B.nf(substitute(S, p).adjoint())


def test_images_must_live_in_target(A3):
    C = scalars()
    with pytest.raises(Exception):
        Morphism(A3.algebra, C, {g: A3.gen("a_11") for g in A3.generators})
