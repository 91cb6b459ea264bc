"""Belief-function conditioning over power, hyper-power and super-power sets."""

from .algebra import (
    AlgebraError,
    ExprSyntaxError,
    Frame,
    FrameError,
    FrameMismatchError,
    Model,
    SetElement,
    UnknownAtomError,
    atoms_under,
    build_frame,
    complement_of,
    enumerate_space,
    evaluate,
    format_expr,
    intersect_of,
    is_empty,
    is_subset,
    parse_ast,
    parse_expr,
    union_of,
)
from .conditioning import (
    ClassParams,
    ConditioningReport,
    InvalidFactorError,
    RuleId,
    UndefinedConditioning,
    compare_all,
    condition,
    condition_class,
    condition_dcr,
    condition_dsm1,
    condition_dsm2,
    condition_tbm,
    conflict_mass,
)
from .fusion import ConflictLedger, conjunctive_combine
from .mass import (
    ConditioningEvent,
    InvalidMassError,
    MassFunction,
    Violation,
    bel,
    pl,
    point_mass,
    vacuous,
    validate_bba,
)

__version__ = "0.1.0"
