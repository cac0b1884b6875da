"""Numerical laboratory for cutoffed time-randomized Euler schemes."""

from ._core import (
    ConditionReport,
    DriftSpec,
    Grid,
    GridDensity,
    PathSample,
    SchemeParams,
    Variant,
    beta_function,
    check_condition,
    cutoff_primary,
    cutoff_zero_first,
    default_cutoff_constant,
    default_grid,
    duhamel_residual,
    empirical_gaussian_bound,
    first_step_density,
    fit_rate,
    gauss_density,
    gauss_grad,
    gauss_hess,
    holder_time_modulus,
    ks_statistic,
    lq_lrho_norm,
    mc_weak_error,
    propagate,
    reference_density,
    run_lemma_suite_json,
    run_rate_study_json,
    simulate_path,
    simulate_terminals,
    step_floor,
    tv_error,
    weighted_sup_error,
)

__all__ = [
    "ConditionReport",
    "DriftSpec",
    "Grid",
    "GridDensity",
    "PathSample",
    "SchemeParams",
    "Variant",
    "beta_function",
    "check_condition",
    "cutoff_primary",
    "cutoff_zero_first",
    "default_cutoff_constant",
    "default_grid",
    "duhamel_residual",
    "empirical_gaussian_bound",
    "first_step_density",
    "fit_rate",
    "gauss_density",
    "gauss_grad",
    "gauss_hess",
    "holder_time_modulus",
    "ks_statistic",
    "lq_lrho_norm",
    "mc_weak_error",
    "propagate",
    "reference_density",
    "run_lemma_suite_json",
    "run_rate_study_json",
    "simulate_path",
    "simulate_terminals",
    "step_floor",
    "tv_error",
    "weighted_sup_error",
]
