"""Exact-arithmetic probability kinematics on finite frames.

Revision of probability measures and coherent lower probabilities under
evidence given as mass functions, Dempster models, or two-monotone capacity
bounds, with every closed-form rule backed by exact linear-programming
envelopes over the dominating-measure polytope.
"""

from .capacity import (
    Capacity,
    DempsterModel,
    check_property,
    conjugate,
    is_belief,
    is_k_monotone,
    is_monotone,
    is_superadditive,
    project_dempster,
)
from .conditioning import CombinationResult, ConditionedCapacity, combine_belief, condition_lower
from .credal import (
    CredalSet,
    EnvelopeRevisionReport,
    check_coherent,
    conditional_envelope,
    core_vertices_2monotone,
    envelope_revise,
    envelope_value,
    joint_marginal_envelope,
)
from .documents import emit_document, parse_document
from .errors import (
    DocumentError,
    Infeasible,
    InvariantViolation,
    ProbkinError,
    UndefinedOperation,
)
from .kinematics import (
    JeffreySpec,
    JointMeasure,
    MaxentResult,
    ProbabilityMeasure,
    RevisedMeasure,
    canonical_joint,
    jeffrey_revise,
    kinematic_revise,
    maxent_project,
    relative_information,
    verify_joint,
)
from .lab import SearchBudget, gen_capacity, gen_probability, search_witness
from .lattice import (
    Frame,
    SetFunction,
    SignedMassFunction,
    mobius_transform,
    zeta_transform,
)

__version__ = "0.1.0"

__all__ = [
    "Capacity",
    "CombinationResult",
    "ConditionedCapacity",
    "CredalSet",
    "DempsterModel",
    "DocumentError",
    "EnvelopeRevisionReport",
    "Frame",
    "Infeasible",
    "InvariantViolation",
    "JeffreySpec",
    "JointMeasure",
    "MaxentResult",
    "ProbabilityMeasure",
    "ProbkinError",
    "RevisedMeasure",
    "SearchBudget",
    "SetFunction",
    "SignedMassFunction",
    "UndefinedOperation",
    "canonical_joint",
    "check_coherent",
    "check_property",
    "combine_belief",
    "condition_lower",
    "conditional_envelope",
    "conjugate",
    "core_vertices_2monotone",
    "emit_document",
    "envelope_revise",
    "envelope_value",
    "gen_capacity",
    "gen_probability",
    "is_belief",
    "is_k_monotone",
    "is_monotone",
    "is_superadditive",
    "jeffrey_revise",
    "joint_marginal_envelope",
    "kinematic_revise",
    "maxent_project",
    "mobius_transform",
    "parse_document",
    "project_dempster",
    "relative_information",
    "search_witness",
    "verify_joint",
    "zeta_transform",
]
