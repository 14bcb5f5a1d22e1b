import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qstab.hopf import build_quantum_permutation_group, magic_generators, magic_relations
from qstab.ncpoly import Alphabet
from qstab.oracle import vanishes_everywhere
from qstab.presentation import build_presentation
from qstab.report import Verdict
from qstab.rewrite import (
    OrientationError,
    RewriteRule,
    RewriteSystem,
    complete,
    critical_pairs,
    normal_form,
    prove_membership,
    s_polynomial,
)

A3_LETTERS = Alphabet(magic_generators(3))


def _magic(n, d=4):
    a = Alphabet(magic_generators(n))
    return build_presentation(f"M{n}", a, magic_relations(a, n), degree_bound=d)


def test_normal_form_examples(A3):
    A = A3.algebra
    assert normal_form(A.zero(), A.system).is_zero()
    a11 = A.gen("a_11")
    assert normal_form(a11 * a11, A.system) == normal_form(a11, A.system)
    assert normal_form(A.gen("a_13") * A.gen("a_33"), A.system).is_zero()


def test_completion_finds_column_consequence():
    a = A3_LETTERS
    R = RewriteSystem.from_relations(a, [a.gen("a_33") - 1, a.gen("a_13") * a.gen("a_33")])
    C = complete(R)
    assert C.nf(a.gen("a_13")).is_zero()
    assert C.completed_to == C.degree_bound


def test_completion_of_two_point_magic_unitary():
    P = _magic(2)
    g = P.gen
    assert P.nf(g("a_12")) == 1 - g("a_11")
    assert P.nf(g("a_21")) == 1 - g("a_11")
    assert P.nf(g("a_22")) == g("a_11")
    for x in P.generators:
        for y in P.generators:
            assert P.nf(g(x.name) * g(y.name) - g(y.name) * g(x.name)).is_zero()


def test_complete_is_a_fixpoint(A3):
    R = A3.algebra.system
    again = complete(RewriteSystem.from_rules(R.alphabet, R.rules, degree_bound=R.degree_bound))
    assert [str(r) for r in again.rules] == [str(r) for r in R.rules]


def test_three_point_group_is_commutative(A3):
    A = A3.algebra
    names = [g.name for g in A.generators]
    for x in names:
        for y in names:
            assert A.nf(A.gen(x) * A.gen(y) - A.gen(y) * A.gen(x)).is_zero()


def test_prove_membership(H3):
    R = H3.algebra.system
    A = H3.parent.algebra
    assert prove_membership(H3.algebra.gen("a_31"), R) is Verdict.PROVEN
    assert prove_membership(H3.algebra.gen("a_13"), R) is Verdict.PROVEN
    assert prove_membership(H3.algebra.gen("a_11"), R) is Verdict.INCONCLUSIVE
    uncompleted = RewriteSystem.from_relations(A.alphabet, [])
    with pytest.raises(ValueError):
        prove_membership(A.gen("a_11"), uncompleted)


def test_rules_orientation():
    a = A3_LETTERS
    with pytest.raises(OrientationError):
        RewriteRule((a.code("a_11"),), a.gen("a_12"))
    with pytest.raises(OrientationError):
        RewriteRule((), a.zero())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_completed_system_invariants(n):
    P = _magic(n)
    R = P.system
    assert R.is_complete and not R.capped and not R.trivial
    lhss = [r.lhs for r in R.rules]
    assert lhss == sorted(lhss, key=lambda w: (len(w), w))
    for r in R.rules:
        others = RewriteSystem.from_rules(R.alphabet, [s for s in R.rules if s.lhs != r.lhs])
        assert not others.is_reducible(r.lhs)
        assert all(not R.is_reducible(w) for w in r.rhs.words())
    for pair in critical_pairs(R):
        assert R.nf(s_polynomial(R, pair)).is_zero()
    for rel in P.relations:
        assert P.nf(rel).is_zero()


def test_completion_is_deterministic():
    first = [str(r) for r in _magic(4).system.rules]
    second = [str(r) for r in _magic(4).system.rules]
    assert first == second


def test_rule_cap_marks_the_system():
    a = Alphabet(magic_generators(4))
    R = complete(RewriteSystem.from_relations(a, magic_relations(a, 4), rule_cap=30))
    assert R.capped and not R.is_complete
    assert R.status()["capped"] is True


def _ideal_element(P, rng, terms=3):
    """A random two-sided combination of the relations."""
    a = P.alphabet
    out = a.zero()
    for _ in range(terms):
        r = rng.choice(P.relations)
        u = a.word(tuple(rng.randrange(len(a)) for _ in range(rng.randrange(2))))
        v = a.word(tuple(rng.randrange(len(a)) for _ in range(rng.randrange(2))))
        out = out + rng.choice([1, -2, 3]) * u * r * v
    return out


@given(st.integers(0, 10**6))
def test_soundness_and_monotonicity(seed):
    rng = random.Random(seed)
    systems = {d: _cached_magic(3, d) for d in (2, 3, 4)}
    p = _ideal_element(systems[4], rng)
    proven = {d: systems[d].nf(p).is_zero() for d in systems}
    for d in (2, 3):
        if proven[d]:
            assert proven[d + 1]
    assert proven[4]
    assert vanishes_everywhere(p, systems[4]) is True


@given(st.integers(0, 10**6))
def test_proven_implies_oracle_zero_in_four_points(seed):
    rng = random.Random(seed)
    P = build_quantum_permutation_group(4).algebra
    p = _ideal_element(P, rng, terms=2)
    assert P.nf(p).is_zero()
    assert vanishes_everywhere(p, P) is True


_cache = {}


def _cached_magic(n, d):
    if (n, d) not in _cache:
        _cache[n, d] = _magic(n, d)
    return _cache[n, d]
