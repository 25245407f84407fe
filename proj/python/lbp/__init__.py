from ._lbp import (
    ScaleRefused,
    __version__,
    beta,
    border_bound,
    bp_transition_scan,
    double_gap_bound,
    envelope,
    estimate_growth,
    evaluate_polynomial,
    eventually_active_bounds,
    exact_bp_spanning,
    exact_growth_probability,
    fit_correction,
    growth_csv,
    lambda_integral,
    no_double_gap_exact,
    rate_function,
    run_standard_bp,
    run_trajectory,
    scale_constants,
)
