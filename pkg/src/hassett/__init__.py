"""Exact combinatorics of moduli spaces of weighted pointed stable curves.

The package decides stability questions for weight data (g; a_1, ..., a_n),
computes chamber signatures and boundary strata, recognizes the named
blow-up families, and describes automorphism groups, all in exact rational
arithmetic. The ``hassett`` command line exposes the same operations.
"""

from hassett.autgroup import (
    NOT_COVERED_MESSAGE,
    AutDescription,
    NotCoveredError,
    admissible_generators,
    aut_group,
    is_admissible,
)
from hassett.families import (
    BlowupSchedule,
    BlowupStep,
    FamilySpec,
    InfeasibleFamilyError,
    blowup_schedule,
    classify,
    classify_with_relabeling,
    factors_kapranov,
    family_conditions,
    family_grid,
    feasible_representative,
    kapranov_spec,
    kapranov_weights,
    keel_spec,
    representative_weights,
    sym_spec,
    verify_keel_factorization,
)
from hassett.perms import PermGroup, generate_group, transposition
from hassett.strata import (
    BoundaryDivisor,
    Contraction,
    StableTree,
    contracted_divisors,
    divisor_tree,
    enumerate_boundary_divisors,
    is_stable,
)
from hassett.weights import (
    InvalidWeightDataError,
    ValidationReport,
    WeightData,
    chamber_reduction_exists,
    chamber_signature,
    coarse_equivalent_genus0,
    fine_equivalent,
    forgetful_defined,
    format_rational,
    parse_rational,
    reduction_exists,
    reduction_exists_up_to_equivalence,
    validate,
)

__all__ = [
    "AutDescription",
    "BlowupSchedule",
    "BlowupStep",
    "BoundaryDivisor",
    "Contraction",
    "FamilySpec",
    "InfeasibleFamilyError",
    "InvalidWeightDataError",
    "NOT_COVERED_MESSAGE",
    "NotCoveredError",
    "PermGroup",
    "StableTree",
    "ValidationReport",
    "WeightData",
    "admissible_generators",
    "aut_group",
    "blowup_schedule",
    "chamber_reduction_exists",
    "chamber_signature",
    "classify",
    "classify_with_relabeling",
    "coarse_equivalent_genus0",
    "contracted_divisors",
    "divisor_tree",
    "enumerate_boundary_divisors",
    "factors_kapranov",
    "family_conditions",
    "family_grid",
    "feasible_representative",
    "fine_equivalent",
    "forgetful_defined",
    "format_rational",
    "generate_group",
    "is_admissible",
    "is_stable",
    "kapranov_spec",
    "kapranov_weights",
    "keel_spec",
    "parse_rational",
    "reduction_exists",
    "reduction_exists_up_to_equivalence",
    "representative_weights",
    "sym_spec",
    "transposition",
    "validate",
    "verify_keel_factorization",
]

__version__ = "0.1.0"
