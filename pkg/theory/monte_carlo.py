"""Monte Carlo sample-count simulation on the real replay samplers.

Each step pushes one transition and then draws ``beta`` indices from the
sampler's current law; per-transition hit counts are accumulated with a
chunked bincount and merged across seeds.
"""
import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from models.records import SamplingCountStats
from models.transition import BufferSchema, Transition
from replay import UniformSampler, make_sampler
from utils.seeding import child_rng

logger = logging.getLogger(__name__)

MC_SCHEMA = BufferSchema(state_dim=1, action_dim=1)
FLUSH_DRAWS = 1 << 20


class SkewedSampler(UniformSampler):
    """Negative control: draws lean toward the oldest items.

    An index lands at age-rank floor(u^2 * size), which over-samples early
    transitions badly enough that every uniform-law check must fail.
    """

    kind = 'skewed'

    def sample_batch(self, batch_size, rng):
        self._require_items()
        u = rng.random(batch_size)
        offsets = np.floor(u * u * self.storage.size).astype(np.int64)
        return self.storage.oldest + offsets


def _dummy_transition():
    return Transition(state=np.zeros(1), action=np.zeros(1), reward=0.0,
                      next_state=np.zeros(1), done=False)


def _build(sampler_kind, capacity, epsilon, tau):
    if sampler_kind == 'skewed':
        return SkewedSampler(capacity, MC_SCHEMA)
    return make_sampler(sampler_kind, capacity, MC_SCHEMA, epsilon=epsilon, tau=tau)


def count_one_seed(sampler_kind, N, beta, capacity, epsilon, tau, root_seed, seed_index):
    """Per-insert_index hit counts for a single seed (length N)."""
    rng = child_rng(root_seed, 'mc', seed_index)
    sampler = _build(sampler_kind, capacity, epsilon, tau)
    counts = np.zeros(N, dtype=np.int64)
    pending = []
    pending_draws = 0
    transition = _dummy_transition()

    for _ in range(N):
        sampler.push(transition)
        if beta <= 0:
            continue
        pending.append(sampler.sample_batch(beta, rng))
        pending_draws += beta
        if pending_draws >= FLUSH_DRAWS:
            counts += np.bincount(np.concatenate(pending), minlength=N)[:N]
            pending, pending_draws = [], 0

    if pending:
        counts += np.bincount(np.concatenate(pending), minlength=N)[:N]
    return counts


def _count_star(args):
    return count_one_seed(*args)


def monte_carlo_counts(sampler_kind, N, beta, capacity=None, seeds=3, root_seed=0,
                       epsilon=1e-4, tau=0.0, workers=1) -> SamplingCountStats:
    """Mean and stderr of per-transition sample counts over ``seeds`` runs.

    ``capacity`` defaults to N (no eviction, the setting of the count
    theorems). Seeds run in a process pool when ``workers`` > 1.
    """
    N = int(N)
    beta = int(beta)
    capacity = int(capacity or N)
    jobs = [(sampler_kind, N, beta, capacity, epsilon, tau, root_seed, k)
            for k in range(int(seeds))]

    logger.info('Monte Carlo %s: N=%d beta=%d seeds=%d workers=%d',
                sampler_kind, N, beta, seeds, workers)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_count_star, jobs))
    else:
        results = [count_one_seed(*job) for job in jobs]

    return SamplingCountStats.from_counts(np.stack(results), beta=beta, horizon=N)
