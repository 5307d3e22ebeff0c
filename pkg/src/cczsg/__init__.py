"""Two-player zero-sum games with complex payoffs and complex mixed
strategies under deterministic and chance linear constraints.

Chance rows are reformulated into second-order cones per ambiguity
model, the game is solved as a primal-dual SOCP pair, and equilibria
can be sample-certified and Monte Carlo calibrated.
"""

from . import conic
from .cli import InstanceRecipe, WaveformSet, gen_instance, main, parse_model, run, txjam_payoff
from .complex_core import (
    as_cmat,
    as_cvec,
    dual_norm_certificate,
    embed_mat,
    embed_vec,
    herm_inner,
    lift_mat,
    lift_vec,
)
from .errors import (
    CczsgError,
    DimensionMismatch,
    EmptyStrategySet,
    GapTooLarge,
    InconsistentMoments,
    LengthMismatch,
    ModulusViolation,
    NotPSD,
    POutOfRange,
    SamplerStarvation,
    SchemaError,
    SlaterViolated,
    SolverFailure,
    UnsampleableModel,
    ZeroVector,
)
from .games import (
    CertificationReport,
    DetRow,
    Equilibrium,
    FeasibilityReport,
    GameSpec,
    PlayerSpec,
    StrategySetSpec,
    build_dual,
    build_primal,
    certify_saddle,
    membership,
    player_feasibility,
    slater_check,
    solve_game,
    with_certification,
)
from .moments import (
    CAUCHY,
    GAUSSIAN,
    LAPLACE,
    LOGISTIC,
    Ces,
    ComplexMoments,
    KnownMoments,
    QuantileFamily,
    UnknownMoments,
    UnknownSecondMoment,
    complex_from_composite,
    composite_from_complex,
    projection_moments,
    quantile,
    safety_factor,
    sample_gaussian_row,
    sample_projection,
    student_t,
)
from .montecarlo import (
    AlphaSweepRow,
    AlphaSweepTable,
    CalibrationReport,
    CalibrationRow,
    PSweepRow,
    PSweepTable,
    calibrate,
    calibration_csv,
    calibration_dict,
    sweep_alpha,
    sweep_alpha_csv,
    sweep_alpha_dict,
    sweep_p,
    sweep_p_csv,
    sweep_p_dict,
)
from .reformulate import (
    ChanceRow,
    CouplingMatrices,
    SocData,
    coupling_from_factor,
    deterministic_constraint,
    effective_k_and_gamma,
    factor_psd,
    group_margin,
    k_matrix,
    mean_functional,
)
from .serialize import (
    decode_game,
    decode_model,
    decode_moments,
    encode_equilibrium,
    encode_game,
    encode_model,
    encode_moments,
    equilibrium_to_json,
    game_from_json,
    game_to_json,
)

__version__ = "0.1.0"
