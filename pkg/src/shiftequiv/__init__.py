"""Exact computations around shift equivalence of nonnegative integer matrices.

Submodules
----------
linalg
    Exact integer and rational linear algebra: Smith form, kernels, solvers,
    nonnegative feasibility.
dimgroup
    Dimension groups ``G_A`` and Krieger's dimension triple.
shift
    Shift equivalence verification and search, and the correspondence between
    nonnegative intertwiners and order-preserving module maps.
bimodule
    Based bimodules over vertex sets and aligned module shift equivalence.
graph
    Directed graphs, the Cuntz splice and graded K-theory obstructions.
cli
    The ``shiftequiv`` command-line program.
"""
from .dimgroup import (
    DeltaElement,
    DimClass,
    EssentialMatrix,
    EventualImageSpace,
    InCone,
    Unknown,
    add,
    apply_R_delta,
    apply_Rt_G,
    as_essential,
    delta_membership,
    delta_order_unit,
    delta_shift,
    equal,
    eventual_image,
    generator_class,
    in_positive_cone,
    order_unit,
    psi,
    x_action,
    zero_class,
)
from .exceptions import (
    MatrixMismatchError,
    NotAHomomorphismError,
    NotEssentialError,
    NotIntertwinerError,
    ParseError,
    ShapeError,
    SinkError,
)
from .linalg import (
    Matrix,
    SmithForm,
    integer_kernel,
    integer_solve,
    nonneg_feasible,
    rational_kernel,
    rational_solve,
    rref,
    smith_normal_form,
)
from .report import Check, Report
from .shift import (
    GradedHomSpec,
    LiftResult,
    RelaxedSEWitness,
    SEWitness,
    SSEStep,
    compose_se,
    iter_se,
    lift_hom_to_matrix,
    matrix_to_hom,
    search_se,
    solve_intertwiners,
    sse_to_se,
    verify_relaxed_se,
    verify_se,
    verify_sse_chain,
    verify_unital,
)
from .bimodule import (
    BasedBimodule,
    BimoduleMap,
    EdgeSet,
    ModuleSEData,
    bridging_K0_action,
    build_sigma,
    lex_module_se,
    tensor,
    tensor_map,
    verify_aligned,
    verify_module_se,
    verify_unitally_aligned,
)
from .graph import (
    DirectedGraph,
    InconclusiveWithCandidate,
    NoUnitalHom,
    ZModClass,
    adjacency,
    cuntz_splice,
    k0gr_generators,
    unital_hom_obstruction,
    zmod_equal,
    zmod_intertwiner_check,
    zmod_intertwiner_search,
)

__version__ = "0.1.0"
