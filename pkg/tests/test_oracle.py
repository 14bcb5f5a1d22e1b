from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qstab.hopf import build_quantum_permutation_group, magic_name
from qstab.oracle import (
    ClosureError,
    OracleError,
    OracleVerdict,
    PermutationPoint,
    all_permutations,
    classical_orbit,
    classical_points,
    classical_subgroup,
    evaluate_classical,
    find_separating_point,
    haar_average,
    identity,
    refute_membership,
)
from qstab.action import evaluate_at_point

from conftest import polynomials

ALPHA3 = build_quantum_permutation_group(3).algebra.alphabet


def a(i, j, A=ALPHA3):
    return A.gen(magic_name(i, j, 3))


I3 = [a(3, 1), a(3, 2), a(3, 3) - 1]


def test_permutation_points():
    s = PermutationPoint((2, 3, 1))
    assert s(1) == 2 and s.inverse()(2) == 1
    assert s.value(2, 1) == 1 and s.value(1, 2) == 0
    assert s.cycles() == "(1 2 3)"
    assert identity(3).cycles() == "()"
    assert s.compose(s.inverse()) == identity(3)
    assert len(all_permutations(4)) == 24
    assert all_permutations(3)[0] == identity(3)


@pytest.mark.parametrize("sigma", all_permutations(3))
def test_evaluate_examples(sigma):
    assert evaluate_classical(a(1, 1), identity(3)) == 1
    assert evaluate_classical(a(1, 1) * a(1, 2), sigma) == 0
    assert evaluate_classical(a(1, 1) + a(1, 2) + a(1, 3), sigma) == 1


def test_evaluate_outside_family():
    from qstab.ncpoly import Alphabet, Generator

    x = Alphabet([Generator("x")]).gen("x")
    with pytest.raises(OracleError):
        evaluate_classical(x, identity(3))


def test_refute_membership_examples():
    assert refute_membership(a(1, 1), I3) is OracleVerdict.REFUTED
    assert refute_membership(a(1, 3), I3) is OracleVerdict.UNKNOWN
    assert refute_membership(ALPHA3.zero(), I3) is OracleVerdict.UNKNOWN


def test_classical_subgroup_examples():
    H = classical_subgroup(I3, 3)
    assert {s.images for s in H} == {(1, 2, 3), (2, 1, 3)}
    assert len(classical_subgroup([], 3)) == 6
    pinned = [a(i, j) - int(i == j) for i in (1, 2, 3) for j in (1, 2, 3)]
    assert list(classical_subgroup(pinned, 3)) == [identity(3)]
    with pytest.raises(ClosureError):
        classical_subgroup([a(1, 1)], 3)
    # the zero set of a_13·a_32 is S_3 minus the 3-cycle (1 2 3), which is not a subgroup
    with pytest.raises(ClosureError):
        classical_subgroup([a(1, 3) * a(3, 2)], 3)


def test_orbits():
    H = classical_subgroup(I3, 3)
    assert classical_orbit(H, 3) == {3}
    assert classical_orbit(H, 1) == {1, 2}
    trivial = classical_subgroup([a(i, j) - int(i == j) for i in (1, 2, 3) for j in (1, 2, 3)], 3)
    assert all(classical_orbit(trivial, k) == {k} for k in (1, 2, 3))


def test_haar_average(alpha3):
    S3 = classical_subgroup([], 3)
    assert haar_average(a(1, 1), S3) == Fraction(1, 3)
    H = classical_subgroup(I3, 3)
    assert haar_average(ALPHA3.one(), H) == 1
    state = {x: [haar_average(evaluate_at_point(alpha3, x, alpha3.space.e(i), reduce=False), H)
                 for i in (1, 2, 3)] for x in (1, 2, 3)}
    assert state[1] == state[2] != state[3]


def test_characters_of_quotients(H3):
    pts = classical_points(H3.algebra)[0]
    assert [p.images for p in pts] == [(1, 2, 3), (2, 1, 3)]


def test_separating_point_is_lexicographically_first(A3):
    p = A3.gen("a_12")
    assert find_separating_point(p, A3.algebra) == PermutationPoint((2, 1, 3))


P3 = polynomials(ALPHA3)


@given(P3, P3, st.sampled_from(all_permutations(3)))
def test_evaluation_is_a_character(p, q, sigma):
    assert evaluate_classical(p + q, sigma) == evaluate_classical(p, sigma) + evaluate_classical(q, sigma)
    assert evaluate_classical(p * q, sigma) == evaluate_classical(p, sigma) * evaluate_classical(q, sigma)
    assert evaluate_classical(p.adjoint(), sigma) == evaluate_classical(p, sigma)


@given(P3)
def test_haar_faithfulness(p):
    H = classical_subgroup(I3, 3)
    if haar_average(p * p.adjoint(), H) == 0:
        assert all(evaluate_classical(p, s) == 0 for s in H)
