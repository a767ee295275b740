"""Amplitude estimation by maximum-likelihood combination of
measurements taken at several amplification depths."""

from .conventional import ConventionalPoint, conventional_curve, conventional_error
from .experiments import (
    CSV_HEADER,
    CurveRow,
    ErrorCurve,
    SweepConfig,
    curve_to_csv,
    default_m_values,
    emit_outputs,
    nearest_rank,
    run_conventional_comparison,
    run_sweep,
)
from .mle import MLConfig, MLResult, log_likelihood, ml_estimate
from .model import (
    Amplitude,
    MeasurementData,
    Schedule,
    draw_hits,
    good_probability,
    make_schedule,
    sample_counts,
    trial_seed,
)
from .montecarlo import (
    IntegralProblem,
    StateVector,
    apply_p,
    apply_q,
    apply_r,
    estimate_integral,
    exact_sum,
    good_state_probability,
    integral_closed_form,
    prepare_state,
    q_matrix,
    q_matrix_reference,
    zero_state,
)
from .stats import (
    BoundReport,
    SlopeFit,
    bound_report,
    classical_error_bound,
    cramer_rao_error,
    fisher_information,
    fisher_oracle,
    fit_error_exponent,
    query_count,
)

__all__ = [
    "Amplitude",
    "BoundReport",
    "CSV_HEADER",
    "ConventionalPoint",
    "CurveRow",
    "ErrorCurve",
    "IntegralProblem",
    "MLConfig",
    "MLResult",
    "MeasurementData",
    "Schedule",
    "SlopeFit",
    "StateVector",
    "SweepConfig",
    "apply_p",
    "apply_q",
    "apply_r",
    "bound_report",
    "classical_error_bound",
    "conventional_curve",
    "conventional_error",
    "cramer_rao_error",
    "curve_to_csv",
    "default_m_values",
    "draw_hits",
    "emit_outputs",
    "estimate_integral",
    "exact_sum",
    "fisher_information",
    "fisher_oracle",
    "fit_error_exponent",
    "good_probability",
    "good_state_probability",
    "integral_closed_form",
    "log_likelihood",
    "make_schedule",
    "ml_estimate",
    "nearest_rank",
    "prepare_state",
    "q_matrix",
    "q_matrix_reference",
    "query_count",
    "run_conventional_comparison",
    "run_sweep",
    "sample_counts",
    "trial_seed",
    "zero_state",
]

__version__ = "0.1.0"
