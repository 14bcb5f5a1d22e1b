"""Symbolic verification of stabilizer subgroups of quantum permutation groups.

Everything is exact: polynomials have rational coefficients, identities are
certified by normal forms of a degree-bounded completed rewriting system,
and non-identities are refuted by classical (permutation) points.
"""

__version__ = "0.1.0"

from .report import Check, Verdict, VerificationReport  # noqa: E402
from .ncpoly import Alphabet, Generator, NCPolynomial, parse_polynomial  # noqa: E402
from .rewrite import RewriteSystem, complete, normal_form, prove_membership  # noqa: E402
from .presentation import (  # noqa: E402
    Morphism,
    Presentation,
    build_presentation,
    quotient_presentation,
    tensor_product,
    verify_morphism,
)
from .hopf import (  # noqa: E402
    QuantumGroupPresentation,
    build_quantum_permutation_group,
    check_hopf_axioms,
    verify_qg_morphism,
)
from .action import Coaction, build_standard_action, evaluate_at_point, finite_space  # noqa: E402
from .stabilizer import (  # noqa: E402
    build_stabilizer_subgroup,
    check_universality,
    stabilizer_ideal_generators,
    verify_As_stabilizer_iso,
)

__all__ = [
    "Alphabet", "Check", "Coaction", "Generator", "Morphism", "NCPolynomial", "Presentation",
    "QuantumGroupPresentation", "RewriteSystem", "Verdict", "VerificationReport", "build_presentation",
    "build_quantum_permutation_group", "build_stabilizer_subgroup", "build_standard_action",
    "check_hopf_axioms", "check_universality", "complete", "evaluate_at_point", "finite_space",
    "normal_form", "parse_polynomial", "prove_membership", "quotient_presentation",
    "stabilizer_ideal_generators", "tensor_product", "verify_As_stabilizer_iso", "verify_morphism",
    "verify_qg_morphism",
]
