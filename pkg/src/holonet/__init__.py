"""Holonomy, lifting, duality and gerbe computations for unitary
cocycles over finite posets."""

from .errors import (
    ClosureBoundExceeded,
    CycleDetected,
    DimensionMismatch,
    Disconnected,
    HolonetError,
    InvalidCocycle,
    NotComposable,
    NotInNormalizer,
    NotSquare,
    NotSubgroup,
    NotUnitary,
    ParseError,
    RelationNotInFiber,
    SearchSpaceTooLarge,
    SizeCapExceeded,
    UnknownGenerator,
    WordNotReducible,
)
from .gerbe import FlatteningPair, GerbeCochain, flatten, gerbe_from_section, validate_gerbe
from .lifting import (
    LiftProblem,
    LiftResult,
    ScalarPhasesFiber,
    lift_search,
    lift_via_det_section,
    relator_defect,
)
from .netbundle import (
    Cocycle,
    EquivalenceResult,
    HolonomyRep,
    QuotientHolonomyRep,
    chern_c1,
    equivalent,
    gauge_reduction_check,
    holonomy,
    morphism_dim,
    quotient_holonomy,
    reconstruct,
    sections_dim,
    transport,
    validate_cocycle,
)
from .poset import (
    Path,
    PathFrame,
    Pi1Presentation,
    Poset,
    Simplex1,
    Simplex2,
    close_order,
    compose,
    loop_of_generator,
    path_frame,
    pi1_presentation,
    reverse,
)
from .tannaka import (
    IntertwinerSpace,
    SymmetryOperator,
    check_symmetry_axioms,
    conjugate_solution,
    dual_recover_in_ambient,
    flip_symmetry,
    intertwiner_basis,
    normalizer_membership,
    tannaka_dual_membership,
)
from .unitary import (
    DEFAULT_EPS,
    FiniteMatrixGroup,
    ScalarFiber,
    SpecialFiber,
    contains,
    group_closure,
    is_unitary,
    kron_power,
    nullspace,
    same_coset,
    scalar_phase_group,
)

__version__ = "0.1.0"
