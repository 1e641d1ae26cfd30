"""Sample-count theory: closed forms, Monte Carlo and the verification grid"""
from .bounds import (SeriesEstimate, expected_samples_decayed, expected_samples_uniform,
                     harmonic, harmonic_sandwich, harmonic_table, thm1_bounds, thm2_bound,
                     uniform_count_variance)
from .monte_carlo import SkewedSampler, monte_carlo_counts
from .verify import FIELDNAMES, verify_grid, write_verification

__all__ = ['FIELDNAMES', 'SeriesEstimate', 'SkewedSampler', 'expected_samples_decayed',
           'expected_samples_uniform', 'harmonic', 'harmonic_sandwich', 'harmonic_table',
           'monte_carlo_counts', 'thm1_bounds', 'thm2_bound', 'uniform_count_variance',
           'verify_grid', 'write_verification']
