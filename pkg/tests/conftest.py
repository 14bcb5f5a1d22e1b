from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qstab.action import build_standard_action
from qstab.hopf import build_quantum_permutation_group
from qstab.ncpoly import NCPolynomial
from qstab.stabilizer import build_stabilizer_subgroup

settings.register_profile("qstab", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qstab")


@pytest.fixture(scope="session")
def A3():
    return build_quantum_permutation_group(3)


@pytest.fixture(scope="session")
def A4():
    return build_quantum_permutation_group(4)


@pytest.fixture(scope="session")
def alpha3(A3):
    return build_standard_action(A3)


@pytest.fixture(scope="session")
def alpha4(A4):
    return build_standard_action(A4)


@pytest.fixture(scope="session")
def H3(alpha3):
    return build_stabilizer_subgroup(alpha3, [3])


@pytest.fixture(scope="session")
def H4(alpha4):
    return build_stabilizer_subgroup(alpha4, [4])


coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)


def polynomials(alphabet, max_len=3, max_terms=4):
    """Random polynomials over ``alphabet``'s letters."""
    letters = st.integers(0, len(alphabet) - 1)
    words = st.lists(letters, max_size=max_len).map(tuple)
    return st.dictionaries(words, coefficients, max_size=max_terms).map(
        lambda d: NCPolynomial(alphabet, {w: Fraction(c) for w, c in d.items()}))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict = {}


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
