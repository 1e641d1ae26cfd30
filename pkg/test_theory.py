import math

import numpy as np
import pytest

from models.run_config import resolve_run_config
from theory import (expected_samples_decayed, expected_samples_uniform, harmonic,
                    harmonic_sandwich, harmonic_table, monte_carlo_counts, thm1_bounds,
                    thm2_bound, uniform_count_variance, verify_grid, write_verification)
from theory.verify import FIELDNAMES, thm1_analytic_rows, thm2_analytic_rows, thm2_monte_carlo_rows
from utils.csv_io import read_rows
from utils.errors import ParameterRangeError


def test_harmonic_values():
    assert harmonic(1) == 1.0
    assert harmonic(2) == 1.5
    assert harmonic(10) == pytest.approx(2.9289682539682538, abs=1e-15)
    table = harmonic_table(10)
    assert table[0] == 0.0 and table[10] == pytest.approx(harmonic(10), abs=1e-14)
    with pytest.raises(ParameterRangeError):
        harmonic(0)


@pytest.mark.parametrize('n', [2, 3, 10, 1000, 100_000])
def test_harmonic_sandwich_is_strict(n):
    lower, upper = harmonic_sandwich(n)
    value = harmonic_table(n)[n]
    assert lower < value < upper


def test_uniform_expectation_examples():
    assert expected_samples_uniform(1, 1, 8) == 8.0
    assert expected_samples_uniform(1, 3, 1) == pytest.approx(11 / 6)
    assert expected_samples_uniform(3, 3, 6) == pytest.approx(2.0)
    with pytest.raises(ParameterRangeError):
        expected_samples_uniform(4, 3, 1)


def test_uniform_expectation_is_decreasing_in_t():
    values = [expected_samples_uniform(t, 50, 1) for t in range(1, 51)]
    assert all(a > b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize('N', [10, 100, 1000])
def test_thm1_bounds_strict_for_all_t(N):
    for t in range(1, N + 1):
        lower, upper = thm1_bounds(t, N)
        assert lower < expected_samples_uniform(t, N, 1.0) < upper


def test_uniform_variance_examples():
    assert uniform_count_variance(1, 1, 4) == 0.0
    assert uniform_count_variance(2, 2, 1) == pytest.approx(0.25)


def test_decayed_series_reference_value():
    est = expected_samples_decayed(1, 0.5)
    assert est.value == pytest.approx(1.606695, abs=1e-6)
    assert est.certified
    assert float(est) == est.value


@pytest.mark.parametrize('eps', [0.5, 0.1, 0.01, 1e-3])
@pytest.mark.parametrize('i', [1, 2, 10])
def test_decayed_series_below_bound(eps, i):
    est = expected_samples_decayed(i, eps, beta=4.0)
    assert est.certified
    assert est.value < thm2_bound(eps, 4.0)


def test_decayed_series_decreasing_in_index():
    values = [expected_samples_decayed(i, 0.1).value for i in (1, 2, 10, 100)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_decayed_series_epsilon_one():
    assert expected_samples_decayed(1, 1.0).value == 1.0
    assert expected_samples_decayed(3, 1.0).value == 0.0


def test_decayed_series_rejects_bad_input():
    with pytest.raises(ParameterRangeError):
        expected_samples_decayed(1, 0.0)
    with pytest.raises(ParameterRangeError):
        expected_samples_decayed(0, 0.5)


def test_thm2_bound_values():
    assert thm2_bound(0.5, 8) == 16.0
    with pytest.raises(ParameterRangeError):
        thm2_bound(1.5, 1)


def test_uniform_monte_carlo_matches_expectation():
    N, beta = 200, 8
    stats = monte_carlo_counts('uniform', N, beta, seeds=4, root_seed=3)
    assert stats.mean.shape == (N,)
    # every draw lands somewhere
    assert stats.mean.sum() == pytest.approx(N * beta)
    for t in (1, 10, 100, N):
        var = uniform_count_variance(t, N, beta)
        tol = 3 * math.sqrt(stats.stderr[t - 1] ** 2 + var / 4)
        assert abs(stats.mean[t - 1] - expected_samples_uniform(t, N, beta)) <= tol


def test_monte_carlo_is_seed_deterministic():
    a = monte_carlo_counts('decay', 100, 4, seeds=2, root_seed=5, epsilon=0.05, tau=0.1)
    b = monte_carlo_counts('decay', 100, 4, seeds=2, root_seed=5, epsilon=0.05, tau=0.1)
    assert np.array_equal(a.mean, b.mean)


def test_decayed_monte_carlo_respects_bound():
    eps, beta = 0.05, 4
    stats = monte_carlo_counts('decay', 1_000, beta, seeds=3, root_seed=1, epsilon=eps)
    assert stats.mean.max() < thm2_bound(eps, beta)


def test_decayed_monte_carlo_row_checks_every_index(monkeypatch):
    th = resolve_run_config('testing').theorems
    (row,) = thm2_monte_carlo_rows(th, 0, 1)
    assert row['pass'] and row['empirical_mean'] < row['upper']

    # a bound just under the largest observed mean fails the row
    ceiling = row['empirical_mean'] * 0.999
    monkeypatch.setattr('theory.verify.thm2_bound', lambda eps, beta: ceiling)
    (row,) = thm2_monte_carlo_rows(th, 0, 1)
    assert not row['pass']


def test_single_seed_has_infinite_stderr():
    stats = monte_carlo_counts('uniform', 20, 2, seeds=1)
    assert np.all(np.isinf(stats.stderr))


def test_analytic_rows_all_pass():
    rows = thm1_analytic_rows([10, 100]) + thm2_analytic_rows([0.5, 0.01], [1, 10])
    assert rows and all(row['pass'] for row in rows)
    assert {row['theorem'] for row in rows} == {'thm1', 'thm2'}


def test_verify_grid_testing_profile_passes(tmp_path):
    run_config = resolve_run_config('testing')
    rows = verify_grid(run_config)
    theorems = {row['theorem'] for row in rows}
    assert {'harmonic', 'thm1', 'thm1_mc', 'thm2', 'thm2_mc', 'figure_early',
            'figure_flat_cv'} <= theorems
    assert [row for row in rows if not row['pass']] == []

    path = write_verification(rows, tmp_path / 'verification.csv')
    written = read_rows(path)
    assert list(written[0].keys()) == FIELDNAMES
    assert len(written) == len(rows)


def test_corrupted_sampler_fails_uniform_checks():
    run_config = resolve_run_config('testing')
    rows = verify_grid(run_config, corrupt_sampler=True, include_figure=False)
    mc = [row for row in rows if row['theorem'] == 'thm1_mc']
    assert mc and not any(row['pass'] for row in mc if 't=1;' in row['params'])
    assert any(not row['pass'] for row in rows)
