"""Replay samplers sharing one batch-sampling interface"""
from .base import ReplaySampler, RingStorage
from .decay import UNBOUNDED, DecayedSampler, DecayLaw, cutoff_age, weight, weights
from .priority import PrioritySampler, SumTree
from .uniform import UniformSampler

__all__ = ['DecayLaw', 'DecayedSampler', 'PrioritySampler', 'ReplaySampler', 'RingStorage',
           'SumTree', 'UNBOUNDED', 'UniformSampler', 'cutoff_age', 'make_sampler', 'weight',
           'weights']


def make_sampler(kind, capacity, schema, epsilon=1e-5, tau=0.1, per_alpha=0.6,
                 per_beta_start=0.4, per_beta_end=1.0, per_beta_steps=100_000,
                 per_priority_floor=1e-6, rebuild_interval=1 << 16):
    """Build a sampler by kind name ('uniform', 'decay' or 'per')."""
    if kind == 'uniform':
        return UniformSampler(capacity, schema)
    if kind == 'decay':
        return DecayedSampler(capacity, schema, epsilon, tau, rebuild_interval=rebuild_interval)
    if kind == 'per':
        return PrioritySampler(capacity, schema, alpha=per_alpha, beta_start=per_beta_start,
                               beta_end=per_beta_end, beta_steps=per_beta_steps,
                               priority_floor=per_priority_floor)
    raise ValueError(f'unknown sampler kind {kind!r}')
