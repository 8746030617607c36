"""Exact common-composite computations for univariate polynomials.

Given f1, f2 over GF(p), GF(p^n), or Q, this package decides whether a
common composite h = g1(f1(x)) = g2(f2(x)) exists, produces machine-
verifiable certificates when it does, and produces machine-verifiable
refutations (multiplicity cycles, derivative cycles, inconsistent sets)
when it does not.
"""

from .errors import *  # noqa: F401,F403
from .fields import (  # noqa: F401
    GF,
    QQ,
    Field,
    FieldElement,
    element_degree,
    embed,
    frobenius,
    is_irreducible,
    is_prime,
    make_extension,
    subfield_preimage,
)
from .poly import (  # noqa: F401
    Polynomial,
    RootMultiplicity,
    compose,
    divrem,
    factor_degrees,
    gcd_monic,
    in_xp_subring,
    multiplicity,
    pow_mod,
    roots_in,
    squarefree_part,
)
from .parser import parse_poly, parse_element, parse_field, field_text, modulus_text  # noqa: F401
from .search import (  # noqa: F401
    CompositeCertificate,
    SearchOutcome,
    VerifyResult,
    default_bound,
    descent_check,
    extract_cofactor,
    fiber_iterate,
    minimal_poly_mod,
    search_linear,
    verify_certificate,
)
from .closure import (  # noqa: F401
    AnalysisReport,
    ClosureOverflow,
    ClosurePoint,
    CompatibleSet,
    InconsistencyCertificate,
    LabelingResult,
    analyze,
    compatible_closure,
    composite_from_set,
    fiber,
    solve_labeling,
)
from .refute import (  # noqa: F401
    FiberCycle,
    RefutationCertificate,
    cycle_search,
    degree_hypothesis,
    derivative_test,
    multiplicity_test,
    refute,
    verify_refutation,
)
from .families import (  # noqa: F401
    FamilyInstance,
    additive_family,
    common_right_component,
    deg2_family,
    dickson,
    dickson_closed_form,
    multiplicative_order,
    shifted_family,
    tame_family,
    tame_right_component,
)

__version__ = "0.1.0"
