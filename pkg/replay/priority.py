"""Proportional prioritized replay on a complete-binary-tree sum structure.

The tree is stored heap-style in one array: node k has children 2k+1 and
2k+2, leaves start at ``leaf_offset`` and leaf j holds the priority of ring
slot j. Parents are recomputed from their children on every write, so the
stored prefix sums never drift.
"""
import logging

import numpy as np

from utils.errors import NonFiniteError, ParameterRangeError

from .base import ReplaySampler

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.6
DEFAULT_BETA_START = 0.4
DEFAULT_BETA_END = 1.0
PRIORITY_FLOOR = 1e-6


class SumTree:
    def __init__(self, size: int):
        leaves = 1
        while leaves < size:
            leaves *= 2
        self.size = int(size)
        self.leaf_offset = leaves - 1
        self.nodes = np.zeros(2 * leaves - 1)

    @property
    def total(self) -> float:
        return float(self.nodes[0])

    def __getitem__(self, slot: int) -> float:
        return float(self.nodes[self.leaf_offset + slot])

    def update(self, slot: int, value: float):
        idx = self.leaf_offset + int(slot)
        self.nodes[idx] = value
        while idx > 0:
            idx = (idx - 1) // 2
            self.nodes[idx] = self.nodes[2 * idx + 1] + self.nodes[2 * idx + 2]

    def retrieve(self, cumsums: np.ndarray) -> np.ndarray:
        """Leaf slots whose prefix-sum interval contains each query (vectorized)."""
        idx = np.zeros(cumsums.shape[0], dtype=np.int64)
        if idx.shape[0] == 0:
            return idx
        remaining = cumsums.astype(np.float64).copy()
        while idx[0] < self.leaf_offset:
            left = 2 * idx + 1
            left_sum = self.nodes[left]
            go_right = remaining >= left_sum
            # never descend into an empty right subtree
            go_right &= self.nodes[left + 1] > 0.0
            remaining = np.where(go_right, remaining - left_sum, remaining)
            idx = np.where(go_right, left + 1, left)
        return idx - self.leaf_offset

    def recompute_total(self) -> float:
        return float(np.sum(self.nodes[self.leaf_offset:self.leaf_offset + self.size]))


class PrioritySampler(ReplaySampler):
    kind = 'per'

    def __init__(self, capacity, schema, alpha=DEFAULT_ALPHA, beta_start=DEFAULT_BETA_START,
                 beta_end=DEFAULT_BETA_END, beta_steps=100_000, priority_floor=PRIORITY_FLOOR):
        super().__init__(capacity, schema)
        if alpha < 0:
            raise ParameterRangeError('alpha must be nonnegative')
        self.alpha = float(alpha)
        self.beta_start = float(beta_start)
        self.beta_end = float(beta_end)
        self.beta_steps = max(1, int(beta_steps))
        self.priority_floor = float(priority_floor)
        self.tree = SumTree(self.capacity)
        self.max_priority = 1.0
        self.sample_calls = 0

    def push(self, transition) -> int:
        index = self.storage.push(transition)
        # overwriting the slot also drops the evicted item's priority
        self.tree.update(index % self.capacity, self.max_priority)
        return index

    def beta_at(self, step: int) -> float:
        fraction = min(1.0, max(0.0, step / self.beta_steps))
        return self.beta_start + fraction * (self.beta_end - self.beta_start)

    def priority(self, insert_index: int) -> float:
        self.storage.check_live(insert_index)
        return self.tree[int(insert_index) % self.capacity]

    def sample_probability(self, insert_index: int) -> float:
        return self.priority(insert_index) / self.tree.total

    def probabilities(self) -> np.ndarray:
        slots = self.storage.live_indices() % self.capacity
        leaves = self.tree.nodes[self.tree.leaf_offset + slots]
        return leaves / self.tree.total

    def sample_batch(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        self._require_items()
        u = rng.random(batch_size) * self.tree.total
        slots = self.tree.retrieve(u)
        return self._slots_to_indices(slots)

    def _slots_to_indices(self, slots):
        # live indexes are contiguous, so each slot maps to exactly one of them
        oldest = self.storage.oldest
        return oldest + (slots - oldest) % self.capacity

    def per_sample(self, batch_size: int, rng: np.random.Generator):
        """(indices, importance weights normalized by the batch maximum)."""
        indices = self.sample_batch(batch_size, rng)
        if indices.shape[0] == 0:
            return indices, np.ones(0)
        beta = self.beta_at(self.sample_calls)
        self.sample_calls += 1
        probs = self.tree.nodes[self.tree.leaf_offset + indices % self.capacity] / self.tree.total
        weights = (len(self) * probs) ** (-beta)
        return indices, weights / weights.max()

    def sample(self, batch_size, rng):
        indices, weights = self.per_sample(batch_size, rng)
        return self.storage.gather(indices, weights)

    def per_update_priorities(self, indices, td_errors):
        td_errors = np.asarray(td_errors, dtype=np.float64)
        if not np.all(np.isfinite(td_errors)):
            raise NonFiniteError('non-finite TD error passed to per_update_priorities')
        for index, delta in zip(np.asarray(indices, dtype=np.int64), td_errors):
            if not self.storage.is_live(int(index)):
                # evicted between sampling and update
                continue
            priority = (abs(delta) + self.priority_floor) ** self.alpha
            self.tree.update(int(index) % self.capacity, priority)
            self.max_priority = max(self.max_priority, priority)
