"""ER Decay replay: w = max(tau, (1 - eps)^age) with O(1) sampling.

Because the weight depends only on age and has a hard floor, the live buffer
splits at ``cutoff_age`` into a geometric head (ages below the cutoff) and a
flat tail (weight exactly tau). The head mass is kept incrementally and
rebuilt from the closed form every ``rebuild_interval`` pushes; a draw picks
a region by mass, then either a uniform age in the tail or an inverse-CDF
truncated-geometric age in the head.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from utils.errors import ParameterRangeError

from .base import ReplaySampler

logger = logging.getLogger(__name__)

UNBOUNDED = math.inf
REBUILD_INTERVAL = 1 << 16


def _check_law(epsilon, tau):
    if not 0.0 < epsilon < 1.0:
        raise ParameterRangeError(f'epsilon must lie in (0,1), got {epsilon}')
    if not 0.0 <= tau <= 1.0:
        raise ParameterRangeError(f'tau must lie in [0,1], got {tau}')


def cutoff_age(epsilon: float, tau: float):
    """Smallest age a with (1 - eps)^a <= tau; UNBOUNDED when tau == 0."""
    _check_law(epsilon, tau)
    if tau == 0.0:
        return UNBOUNDED
    if tau >= 1.0:
        return 0
    log_q = math.log1p(-epsilon)
    age = max(0, math.ceil(math.log(tau) / log_q))
    # closed form can land one off the boundary in floating point
    while math.exp(age * log_q) > tau:
        age += 1
    while age > 0 and math.exp((age - 1) * log_q) <= tau:
        age -= 1
    return age


@dataclass(frozen=True)
class DecayLaw:
    """Per-step decay rate epsilon with weight floor tau."""

    epsilon: float
    tau: float
    cutoff: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'cutoff', cutoff_age(self.epsilon, self.tau))

    @property
    def log_q(self) -> float:
        return math.log1p(-self.epsilon)

    def head_mass(self, head_size: int) -> float:
        """Sum of (1-eps)^a for a in [0, head_size)."""
        if head_size <= 0:
            return 0.0
        return -math.expm1(head_size * self.log_q) / self.epsilon


def weight(law: DecayLaw, age: int) -> float:
    if age < 0:
        raise ParameterRangeError(f'age must be nonnegative, got {age}')
    if age >= law.cutoff:
        return law.tau
    return max(law.tau, math.exp(age * law.log_q))


def weights(law: DecayLaw, ages: np.ndarray) -> np.ndarray:
    """Vectorized weight() over an array of ages."""
    ages = np.asarray(ages, dtype=np.float64)
    values = np.maximum(law.tau, np.exp(ages * law.log_q))
    values[ages >= law.cutoff] = law.tau
    return values


class DecayedSampler(ReplaySampler):
    kind = 'decay'

    def __init__(self, capacity, schema, epsilon, tau, rebuild_interval=REBUILD_INTERVAL):
        super().__init__(capacity, schema)
        self.law = DecayLaw(epsilon, tau)
        self.rebuild_interval = int(rebuild_interval)
        self._head_mass = 0.0
        self._pushes_since_rebuild = 0

    @property
    def head_size(self) -> int:
        n = self.storage.size
        return n if self.law.cutoff == UNBOUNDED else min(n, int(self.law.cutoff))

    @property
    def flat_count(self) -> int:
        return self.storage.size - self.head_size

    def push(self, transition) -> int:
        head_before = self.head_size
        index = self.storage.push(transition)
        # every head item ages by one; the newcomer enters at age 0
        mass = 1.0 + (1.0 - self.law.epsilon) * self._head_mass
        if self.head_size == head_before:
            # the item now at age head_before dropped out of the head
            mass -= math.exp(head_before * self.law.log_q)
        self._head_mass = max(mass, 0.0)

        self._pushes_since_rebuild += 1
        if self._pushes_since_rebuild >= self.rebuild_interval:
            self.rebuild_masses()
        return index

    def rebuild_masses(self):
        drift = self._head_mass - self.law.head_mass(self.head_size)
        self._head_mass = self.law.head_mass(self.head_size)
        self._pushes_since_rebuild = 0
        logger.debug('rebuilt head mass (drift %.3e)', drift)

    def region_masses(self):
        """(flat-region mass, head mass, head size)."""
        return self.flat_count * self.law.tau, self._head_mass, self.head_size

    def total_mass(self) -> float:
        flat_mass, head_mass, _ = self.region_masses()
        return flat_mass + head_mass

    def linear_mass(self) -> float:
        """Total mass from a fresh linear scan (reference for drift checks)."""
        return math.fsum(self.oracle_weights())

    def sample_probability(self, insert_index: int) -> float:
        self.storage.check_live(insert_index)
        return weight(self.law, self.now - int(insert_index)) / self.total_mass()

    def probabilities(self) -> np.ndarray:
        return self.oracle_weights() / self.total_mass()

    def oracle_weights(self) -> np.ndarray:
        ages = self.now - self.storage.live_indices()
        return weights(self.law, ages)

    def sample_batch(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        self._require_items()
        flat_mass, head_mass, head = self.region_masses()
        flat = self.storage.size - head

        u = rng.random(batch_size) * (flat_mass + head_mass)
        in_flat = u < flat_mass
        ages = np.empty(batch_size, dtype=np.int64)

        n_flat = int(in_flat.sum())
        if n_flat:
            ages[in_flat] = head + rng.integers(0, flat, size=n_flat)

        n_head = batch_size - n_flat
        if n_head:
            # inverse CDF of P(a) ~ q^a on [0, head): F(a) = (1 - q^(a+1)) / (1 - q^head)
            v = rng.random(n_head)
            log_q = self.law.log_q
            span = -math.expm1(head * log_q)
            drawn = np.floor(np.log1p(-v * span) / log_q).astype(np.int64)
            ages[~in_flat] = np.clip(drawn, 0, head - 1)

        return self.now - ages
