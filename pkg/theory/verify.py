"""Verification grid for the sample-count results.

Every check produces one row of verification.csv:
theorem, params, analytic, lower, upper, empirical_mean, stderr, pass.
Analytic-only rows leave the empirical columns empty.
"""
import logging
import math

import numpy as np

from replay import cutoff_age
from utils.csv_io import write_rows

from .bounds import (expected_samples_decayed, expected_samples_uniform, harmonic_table,
                     thm1_bounds, thm2_bound, uniform_count_variance)
from .monte_carlo import monte_carlo_counts

logger = logging.getLogger(__name__)

FIELDNAMES = ['theorem', 'params', 'analytic', 'lower', 'upper', 'empirical_mean', 'stderr',
              'pass']
MC_PROBES = (1, 2, 10, 100)
FIGURE_CV_LIMIT = 0.1


def _row(theorem, params, analytic=None, lower=None, upper=None, empirical_mean=None,
         stderr=None, passed=True):
    return {
        'theorem': theorem,
        'params': params,
        'analytic': analytic,
        'lower': lower,
        'upper': upper,
        'empirical_mean': empirical_mean,
        'stderr': stderr,
        'pass': bool(passed),
    }


def _finite_or_zero(values):
    values = np.asarray(values, dtype=np.float64)
    return np.where(np.isfinite(values), values, 0.0)


def harmonic_rows(n_max):
    table = harmonic_table(n_max)
    n = np.arange(2, n_max + 1, dtype=np.float64)
    logs = np.log(n)
    inside = (logs + 1.0 / n < table[2:]) & (table[2:] < logs + 1.0)

    rows = [_row('harmonic', f'n=2..{n_max}', passed=bool(inside.all()))]
    decade = 10
    while decade <= n_max:
        rows.append(_row('harmonic', f'n={decade}', analytic=float(table[decade]),
                         lower=math.log(decade) + 1.0 / decade, upper=math.log(decade) + 1.0,
                         passed=bool(inside[decade - 2])))
        decade *= 10
    return rows


def thm1_analytic_rows(horizons):
    rows = []
    for N in horizons:
        table = harmonic_table(N)
        t = np.arange(2, N + 1, dtype=np.float64)
        exact = table[N] - table[1:N]
        ratio = np.log(N / (t - 1.0))
        lower = ratio + 1.0 / N - 1.0
        upper = ratio + 1.0 - 1.0 / (t - 1.0)
        inside = bool(np.all((lower < exact) & (exact < upper)))
        rows.append(_row('thm1', f'N={N};t=2..{N}', analytic=float(exact[0]),
                         lower=float(lower[0]), upper=float(upper[0]), passed=inside))

        low1, up1 = thm1_bounds(1, N)
        first = float(table[N])
        rows.append(_row('thm1', f'N={N};t=1', analytic=first, lower=low1, upper=up1,
                         passed=low1 < first < up1))
    return rows


def thm1_monte_carlo_rows(th, root_seed, workers, corrupt_sampler=False):
    N, beta, seeds = th.mc_horizon, th.mc_beta, th.mc_seeds
    kind = 'skewed' if corrupt_sampler else 'uniform'
    stats = monte_carlo_counts(kind, N, beta, seeds=seeds, root_seed=root_seed,
                               workers=workers)
    rows = []
    for t in sorted({p for p in MC_PROBES if p <= N} | {N}):
        analytic = expected_samples_uniform(t, N, beta)
        model_se = math.sqrt(uniform_count_variance(t, N, beta) / stats.seeds)
        emp_se = float(stats.stderr[t - 1])
        combined = math.sqrt(emp_se ** 2 + model_se ** 2)
        mean = float(stats.mean[t - 1])
        rows.append(_row('thm1_mc', f'{kind};N={N};beta={beta};t={t};seeds={seeds}',
                         analytic=analytic, lower=analytic - 3 * combined,
                         upper=analytic + 3 * combined, empirical_mean=mean, stderr=emp_se,
                         passed=abs(mean - analytic) <= 3 * combined))
    return rows


def thm2_analytic_rows(epsilons, indices, beta=1.0):
    rows = []
    for eps in epsilons:
        bound = thm2_bound(eps, beta)
        for i in indices:
            est = expected_samples_decayed(i, eps, beta)
            rows.append(_row('thm2', f'eps={eps};i={i};beta={beta}', analytic=est.value,
                             upper=bound, passed=est.certified and est.value < bound))
    return rows


def thm2_monte_carlo_rows(th, root_seed, workers):
    N, beta, eps = th.mc_decay_horizon, th.mc_beta, th.mc_decay_epsilon
    stats = monte_carlo_counts('decay', N, beta, seeds=th.mc_seeds, root_seed=root_seed,
                               epsilon=eps, tau=0.0, workers=workers)
    bound = thm2_bound(eps, beta)
    worst = int(np.argmax(stats.mean))
    first = expected_samples_decayed(1, eps, beta)
    return [
        _row('thm2_mc', f'eps={eps};tau=0;N={N};beta={beta};seeds={stats.seeds}',
             analytic=first.value, upper=bound, empirical_mean=float(stats.mean[worst]),
             stderr=float(stats.stderr[worst]),
             passed=bool(stats.mean.max() < bound) and first.value < bound),
    ]


def figure_shape_rows(th, root_seed, workers):
    """Early counts capped below beta*H_N; flat-window counts nearly equal."""
    N, beta = th.figure_steps, th.figure_beta
    eps, tau = th.figure_epsilon, th.figure_tau
    stats = monte_carlo_counts('decay', N, beta, seeds=th.figure_seeds, root_seed=root_seed,
                               epsilon=eps, tau=tau, workers=workers)
    params = f'eps={eps};tau={tau};N={N};beta={beta};seeds={stats.seeds}'

    uniform_first = expected_samples_uniform(1, N, beta)
    first_mean = float(stats.mean[0])
    first_se = float(stats.stderr[0])
    rows = [_row('figure_early', params, analytic=uniform_first, upper=uniform_first,
                 empirical_mean=first_mean, stderr=first_se,
                 passed=first_mean + 3 * float(_finite_or_zero(first_se)) < uniform_first)]

    cutoff = cutoff_age(eps, tau)
    if cutoff == math.inf or N - 2 * int(cutoff) < 2:
        logger.warning('flat window empty for %s (cutoff %s)', params, cutoff)
        rows.append(_row('figure_flat_cv', params + ';window=empty', upper=FIGURE_CV_LIMIT,
                         passed=False))
        return rows

    window = stats.mean[int(cutoff):N - int(cutoff)]
    cv = float(window.std() / window.mean()) if window.mean() > 0 else math.inf
    rows.append(_row('figure_flat_cv', f'{params};window={int(cutoff)}..{N - int(cutoff)}',
                     analytic=cv, upper=FIGURE_CV_LIMIT, empirical_mean=float(window.mean()),
                     passed=cv < FIGURE_CV_LIMIT))
    return rows


def verify_grid(run_config, workers=1, corrupt_sampler=False, include_figure=True):
    """Run every check; returns the list of verification rows."""
    th = run_config.theorems
    seed = run_config.run.seed
    rows = []
    rows += harmonic_rows(th.harmonic_max)
    rows += thm1_analytic_rows(th.thm1_horizons)
    rows += thm1_monte_carlo_rows(th, seed, workers, corrupt_sampler=corrupt_sampler)
    rows += thm2_analytic_rows(th.thm2_epsilons, th.thm2_indices)
    rows += thm2_monte_carlo_rows(th, seed, workers)
    if include_figure:
        rows += figure_shape_rows(th, seed, workers)

    failed = [row for row in rows if not row['pass']]
    for row in failed:
        logger.warning('verification failed: %s %s', row['theorem'], row['params'])
    logger.info('verification grid: %d rows, %d failed', len(rows), len(failed))
    return rows


def write_verification(rows, path):
    return write_rows(path, FIELDNAMES, rows)
