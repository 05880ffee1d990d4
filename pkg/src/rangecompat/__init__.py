"""Exact toolkit for range-compatible maps on matrix subspaces over small finite fields."""

from .errors import (
    BudgetError,
    DecompositionError,
    FieldError,
    ShapeError,
    ToolkitError,
    VerificationError,
)
from .gf import AdditiveEndo, Field, endo_space, field_make, mul_endo, sqrt_endo
from .linalg import Mat
from .spaces import (
    Space,
    act,
    coprod,
    evaluate_span,
    full_space,
    hat_space,
    named_space,
    orthogonal,
    project_mod,
    space_make,
    vee,
)
from .rcmaps import (
    AdditiveMap,
    MapSpace,
    eval_map,
    exceptional_map,
    is_local,
    is_rc_map,
    local_space,
    map_from_images,
    rc_space,
    verify_rc_by_enumeration,
)
from .classify import (
    AdaptedReport,
    Decomposition,
    TypeReport,
    adapted_vectors,
    d_bound,
    decompose_rc,
    detect_adapted_exception,
    detect_type,
    equivalent_spaces,
    theorem_gate,
)
from .reflexivity import ReflexReport, reflexive_closure, reflexivity_report
from .enumeration import count_subspaces, enumerate_subspaces, random_spaces
from .preservers import (
    OpMap,
    PreserverReport,
    classify_preservers,
    nonstandard_preserver,
    preserving_filter,
    range_restricting_space,
    standard_preserver,
    transpose_dual,
)
from .harness import ScanConfig, TheoremReport, THEOREM_IDS, verify_theorem

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
