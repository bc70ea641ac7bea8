"""Certified counting of relative ends e(G, H) from finite presentations."""

from .cayley import (
    CayleyBall,
    UncertifiedDistance,
    build_ball,
    estimate_delta,
    estimate_epsilon,
    gromov_product,
    in_ball_distance,
    orbit_in_ball,
)
from .constants import (
    ConstantsLedger,
    Estimates,
    annulus_inner_radius,
    derive_certified,
    empirical_ledger,
    exhaustive_outer_radius,
)
from .ends import (
    ConditionReport,
    EmpiricalEndsReport,
    EndsReport,
    INFINITE,
    ShadowReport,
    SphereClasses,
    UNCERTIFIED,
    UnstableBallError,
    check_dag,
    check_ddag,
    count_relative_ends,
    empirical_ends,
    probe_class_history,
    project_to_sphere,
    shadow_consistency_check,
    sphere_classes,
    stabilization_verdict,
)
from .oracle import (
    CoreGraph,
    canonical_code,
    free_schreier_ball,
    graphs_isomorphic,
    stallings_fold,
)
from .presentation import (
    ParseError,
    ParsedInput,
    Presentation,
    SmallCancellationReport,
    SubgroupSpec,
    check_small_cancellation,
    cyclic_reduce,
    free_reduce,
    invert,
    parse_file,
    parse_presentation,
    word_from_text,
)
from .rips import (
    RipsOutput,
    RipsReport,
    rips_construct,
    verify_rips,
)
from .schreier import (
    Ball,
    BudgetExceeded,
    CoveringReport,
    CoveringViolation,
    DEFAULT_NODE_BUDGET,
    SchreierBall,
    covering_degree_check,
    enumerate_cosets,
    quotient_distance,
    restrict_to_generators,
    stable_ball,
)
from .word_engine import (
    UndecidedWithinBound,
    WordProblemStrategy,
    choose_strategy,
    dehn_reduce,
    is_identity,
    shortlex_normal_form,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BudgetExceeded",
    "CayleyBall",
    "ConditionReport",
    "ConstantsLedger",
    "CoreGraph",
    "CoveringReport",
    "CoveringViolation",
    "DEFAULT_NODE_BUDGET",
    "EmpiricalEndsReport",
    "EndsReport",
    "Estimates",
    "INFINITE",
    "ParseError",
    "ParsedInput",
    "Presentation",
    "RipsOutput",
    "RipsReport",
    "SchreierBall",
    "ShadowReport",
    "SmallCancellationReport",
    "SphereClasses",
    "SubgroupSpec",
    "UNCERTIFIED",
    "UncertifiedDistance",
    "UndecidedWithinBound",
    "UnstableBallError",
    "WordProblemStrategy",
    "__version__",
    "annulus_inner_radius",
    "build_ball",
    "canonical_code",
    "check_dag",
    "check_ddag",
    "check_small_cancellation",
    "choose_strategy",
    "count_relative_ends",
    "covering_degree_check",
    "cyclic_reduce",
    "dehn_reduce",
    "derive_certified",
    "empirical_ends",
    "empirical_ledger",
    "enumerate_cosets",
    "estimate_delta",
    "estimate_epsilon",
    "exhaustive_outer_radius",
    "free_reduce",
    "free_schreier_ball",
    "graphs_isomorphic",
    "gromov_product",
    "in_ball_distance",
    "invert",
    "is_identity",
    "orbit_in_ball",
    "parse_file",
    "parse_presentation",
    "probe_class_history",
    "project_to_sphere",
    "quotient_distance",
    "restrict_to_generators",
    "rips_construct",
    "shadow_consistency_check",
    "shortlex_normal_form",
    "sphere_classes",
    "stabilization_verdict",
    "stable_ball",
    "stallings_fold",
    "verify_rips",
    "word_from_text",
]
