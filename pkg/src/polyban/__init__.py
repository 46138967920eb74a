"""polyban: exact-arithmetic toolkit for finite-dimensional Banach spaces
with polyhedral norms.

Everything is computed in exact rational arithmetic; no floating point
enters any decision path.
"""

from .errors import (
    AssignmentNotInSubspace,
    DegenerateSystem,
    DimensionCapExceeded,
    DimensionMismatch,
    DomainError,
    EmptyInput,
    FormulaSyntaxError,
    InputError,
    IsActuallyIdeal,
    NormTooLarge,
    NotAnIsometry,
    NotEpsCommutative,
    NotFullDimensional,
    NotSymmetric,
    PolybanError,
    PreconditionViolated,
    ScopeError,
    SquareNotCommuting,
    StageOutOfRange,
    UnboundedPolytope,
)
from .rationals import Q, rat, rat_str
from .lp import LinearProgram, LPResult, lp_solve, make_lp
from .geometry import (
    convex_hull_facets,
    extreme_points,
    geometry_cap,
    set_geometry_cap,
    vertex_enumerate,
)
from .spaces import (
    ZERO_SPACE,
    PolyhedralSpace,
    direct_sum,
    dual_space,
    make_space,
    norm,
    projective_tensor,
    tensor_coords,
)
from .maps import (
    IsometryDefect,
    LinearMap,
    compose,
    difference,
    identity_map,
    is_injective,
    isometry_defect,
    linear_map,
    min_norm_on_sphere,
    operator_norm,
    tensor_map,
)
from .colimits import (
    Chain,
    EpsPushout,
    best_factorization,
    chain_colimit_distance,
    decomposition_norm,
    eps_pushout,
    factor_through_stage,
    pushout_mediator,
)
from .purity import (
    DefectReport,
    Embedding,
    embedding,
    ideal_defect,
    intersection_pairs,
    minimal_extension_norm,
    pure_square_defect,
    repair_fix_basis,
    retraction_defect,
    verify_u_extension_candidate,
)
from .logic import (
    PPFormula,
    SlackResult,
    approximate,
    distinguishing_formula,
    format_formula,
    parse_formula,
    presentation_formula,
    pull_back_assignment,
    satisfaction_slack,
    transfer_check,
)
from .injectivity import (
    GurariiLog,
    MorphismCatalog,
    catalog,
    gurarii_build,
    injectivity_defect,
    lindenstrauss_report,
    operator_ball_vertices,
    product_injectivity,
    saturation_report,
)
from .fileio import (
    load_catalog,
    load_chain,
    load_formula,
    load_map,
    load_space,
    parse_vectors,
    save_map,
    save_space,
)

__version__ = "0.1.0"
