"""Shuffle-algebra series coefficients, exact iterated-integral moments, and
strong integrators for driftless linear SDE systems."""

from .words import (
    EMPTY_WORD,
    Word,
    WordPoly,
    all_words,
    antipode,
    concat,
    concat_mul,
    full_shuffle_of_letters,
    reversal,
    shuffle,
    word,
    words_of_length,
)
from .opalg import (
    OpPoly,
    antipode_operator,
    cs_power,
    evaluate,
    glue,
    op_concat,
    op_shuffle,
    partial_integration_rhs,
)
from .coeffs import (
    CoefficientSet,
    EpsPoly,
    GradedTensorSeries,
    bracket_expand,
    coefficient_via_operator,
    exp_of_lie_truncation,
    lie_coefficient,
    reconstruct_from_sinhlog,
    signature,
    sinhlog_closed_form,
    transform_series,
)
from .moments import (
    MomentValue,
    expect_ito_product,
    expect_poly_product,
    expect_single,
    expect_strat_product,
    strat_to_ito,
)
from .excess import (
    ExcessBreakdown,
    LinearVectorFieldSet,
    b_matrix,
    eig_sym,
    eps_sweep,
    evaluate_excess,
    excess_grid,
    excess_terms,
    excess_vs_quadratic_form,
    quadratic_form_excess,
    remainder_coefficient,
)
from .integrate import (
    ErrorReport,
    ExperimentConfig,
    StepperSpec,
    WienerMesh,
    correction_matrix,
    global_error_experiment,
    iterated_integral_table,
    iterated_integrals,
    mat_exp,
    mat_sqrt,
    reference_solution,
    sample_mesh,
    step_lie,
    step_sinhlog,
    step_taylor,
)

__version__ = "0.1.0"
