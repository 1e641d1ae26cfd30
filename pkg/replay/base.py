"""Ring storage and the sampling interface shared by every replay policy."""
import logging
from abc import ABC, abstractmethod

import numpy as np

from models.transition import Batch, BufferSchema, Transition
from utils.errors import EmptyBufferError, UnknownIndexError

logger = logging.getLogger(__name__)


class RingStorage:
    """Preallocated FIFO ring of transitions addressed by insert_index.

    Live insert indexes are always the contiguous range
    [next_index - size, next_index - 1]; slot = insert_index % capacity.
    """

    def __init__(self, capacity: int, schema: BufferSchema):
        if capacity < 1:
            raise ValueError('capacity must be positive')
        self.capacity = int(capacity)
        self.schema = schema
        self.states = np.zeros((self.capacity, schema.state_dim))
        self.actions = np.zeros((self.capacity, schema.action_dim))
        self.rewards = np.zeros(self.capacity)
        self.next_states = np.zeros((self.capacity, schema.state_dim))
        self.dones = np.zeros(self.capacity)
        self.next_index = 0
        self.size = 0

    def push(self, transition: Transition) -> int:
        state, action, reward, next_state, done = transition.validate(self.schema)
        index = self.next_index
        slot = index % self.capacity
        self.states[slot] = state
        self.actions[slot] = action
        self.rewards[slot] = reward
        self.next_states[slot] = next_state
        self.dones[slot] = float(done)
        self.next_index += 1
        self.size = min(self.size + 1, self.capacity)
        transition.insert_index = index
        return index

    @property
    def oldest(self) -> int:
        return self.next_index - self.size

    @property
    def newest(self) -> int:
        return self.next_index - 1

    def is_live(self, insert_index: int) -> bool:
        return self.size > 0 and self.oldest <= insert_index <= self.newest

    def check_live(self, insert_index: int):
        if not self.is_live(int(insert_index)):
            raise UnknownIndexError(
                f'insert_index {insert_index} not live (live range '
                f'{self.oldest}..{self.newest})')

    def live_indices(self) -> np.ndarray:
        return np.arange(self.oldest, self.next_index, dtype=np.int64)

    def gather(self, indices, weights=None) -> Batch:
        indices = np.asarray(indices, dtype=np.int64)
        slots = indices % self.capacity
        if weights is None:
            weights = np.ones(indices.shape[0])
        return Batch(
            indices=indices,
            states=self.states[slots],
            actions=self.actions[slots],
            rewards=self.rewards[slots],
            next_states=self.next_states[slots],
            dones=self.dones[slots],
            weights=np.asarray(weights, dtype=np.float64),
        )


class ReplaySampler(ABC):
    """Common interface: push, per-index probability, batch sampling."""

    kind = 'base'

    def __init__(self, capacity: int, schema: BufferSchema):
        self.storage = RingStorage(capacity, schema)

    @property
    def capacity(self) -> int:
        return self.storage.capacity

    @property
    def schema(self) -> BufferSchema:
        return self.storage.schema

    @property
    def now(self) -> int:
        """insert_index of the newest item (-1 while empty)."""
        return self.storage.newest

    def __len__(self):
        return self.storage.size

    def push(self, transition: Transition) -> int:
        index = self.storage.push(transition)
        self._on_push(index)
        return index

    def _on_push(self, index: int):
        pass

    def _require_items(self):
        if self.storage.size == 0:
            raise EmptyBufferError('cannot sample from an empty buffer')

    @abstractmethod
    def sample_probability(self, insert_index: int) -> float:
        """Exact probability that one draw returns ``insert_index``."""

    def probabilities(self) -> np.ndarray:
        """Probabilities of all live items, oldest first."""
        return np.array([self.sample_probability(i) for i in self.storage.live_indices()])

    @abstractmethod
    def sample_batch(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        """i.i.d. draws (with replacement) of live insert indexes."""

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        return self.storage.gather(self.sample_batch(batch_size, rng))

    def get_batch(self, indices) -> Batch:
        for index in np.unique(indices):
            self.storage.check_live(int(index))
        return self.storage.gather(indices)

    def oracle_weights(self) -> np.ndarray:
        """Unnormalized weights of live items from a plain linear scan."""
        return self.probabilities()

    def sample_batch_oracle(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        """Linear-scan cumulative-weight sampler with the same law (tests only)."""
        self._require_items()
        live = self.storage.live_indices()
        cumulative = np.cumsum(self.oracle_weights())
        u = rng.random(batch_size) * cumulative[-1]
        positions = np.searchsorted(cumulative, u, side='right')
        return live[np.minimum(positions, live.shape[0] - 1)]
