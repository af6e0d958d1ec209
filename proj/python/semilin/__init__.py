from _semilin import (  # noqa: F401
    ComparisonRow,
    ContinuousModelSpec,
    ContinuousPath,
    DegenerateError,
    DeviationStats,
    DiscretePath,
    EstimateResult,
    ExperimentConfig,
    FnKind,
    FunctionSpec,
    GammaDist,
    GammaKind,
    LimitVarianceEstimate,
    McSummary,
    MdotSpec,
    ModelSpec,
    NoiseKind,
    NoiseSpec,
    SchemeSummary,
    ValidationError,
    WeightScheme,
    check_stationarity_continuous,
    check_stationarity_system,
    compare_schemes,
    compose_f_r,
    conditional_variance,
    ct_weight_lse,
    ct_weight_optimal,
    estimate_continuous,
    estimate_discrete,
    functional_V_T,
    functional_V_n,
    limit_variance_optimal,
    parse_config,
    run_monte_carlo,
    serialize_config,
    simulate_continuous,
    simulate_discrete,
    weights_for,
)

__version__ = "0.1.0"
