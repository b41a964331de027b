"""
Estimation module: sampled subtask sizes and their chi-squared validation.
"""

from .chi_squared import (
    chi_squared_pvalue,
    chi_squared_statistic,
    chi_squared_test,
    regularized_lower_gamma,
    regularized_upper_gamma,
    support_dof
)
from .sampler import SubtaskEstimator, draw_submatrix_coverings, floyd_sample, sample_eta
from .schema import (
    ChiSquaredResult,
    FrequencyEstimate,
    SampleConfig,
    ValidationRow,
    format_estimate,
    parse_estimate
)
from .validation import ValidationExperiment, max_abs_error, table1_layout, validation_experiment

__all__ = [
    'chi_squared_pvalue',
    'chi_squared_statistic',
    'chi_squared_test',
    'regularized_lower_gamma',
    'regularized_upper_gamma',
    'support_dof',
    'SubtaskEstimator',
    'draw_submatrix_coverings',
    'floyd_sample',
    'sample_eta',
    'ChiSquaredResult',
    'FrequencyEstimate',
    'SampleConfig',
    'ValidationRow',
    'format_estimate',
    'parse_estimate',
    'ValidationExperiment',
    'max_abs_error',
    'table1_layout',
    'validation_experiment'
]
