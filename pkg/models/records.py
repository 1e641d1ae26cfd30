"""Plain result records written to CSV artifacts"""
from dataclasses import asdict, dataclass, fields

import numpy as np


@dataclass
class LossRecord:
    """Per-update losses, emitted once per gradient update."""

    step: int
    critic_loss: float
    actor_loss: float
    alpha: float
    entropy: float
    q1_mean: float
    q2_mean: float

    @classmethod
    def fieldnames(cls):
        return [f.name for f in fields(cls)]

    def as_row(self):
        return asdict(self)

    def is_finite(self):
        return all(np.isfinite(v) for v in asdict(self).values())


@dataclass
class GrowthEvent:
    """One expansion or reset, a row of events.csv."""

    step: int
    event: str
    depth_before: int
    depth_after: int
    lr: float

    @classmethod
    def fieldnames(cls):
        return [f.name for f in fields(cls)]

    def as_row(self):
        return asdict(self)


@dataclass
class SamplingCountStats:
    """Per-transition sample counts averaged over Monte Carlo seeds.

    Attributes:
        mean: expected-count estimate per insert_index
        stderr: standard error of ``mean`` across seeds
        beta: draws per environment step
        horizon: number of pushes N
        seeds: number of independent seeds merged
    """

    mean: np.ndarray
    stderr: np.ndarray
    beta: int
    horizon: int
    seeds: int

    @classmethod
    def from_counts(cls, counts, beta, horizon):
        counts = np.asarray(counts, dtype=np.float64)
        seeds = counts.shape[0]
        mean = counts.mean(axis=0)
        if seeds > 1:
            stderr = counts.std(axis=0, ddof=1) / np.sqrt(seeds)
        else:
            stderr = np.full_like(mean, np.inf)
        return cls(mean=mean, stderr=stderr, beta=int(beta), horizon=int(horizon), seeds=seeds)
