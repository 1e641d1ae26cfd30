"""Plain uniform replay: every live transition equally likely."""
import numpy as np

from .base import ReplaySampler


class UniformSampler(ReplaySampler):
    kind = 'uniform'

    def sample_probability(self, insert_index: int) -> float:
        self.storage.check_live(insert_index)
        return 1.0 / self.storage.size

    def probabilities(self) -> np.ndarray:
        return np.full(self.storage.size, 1.0 / max(self.storage.size, 1))

    def sample_batch(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        self._require_items()
        return rng.integers(self.storage.oldest, self.storage.next_index, size=batch_size)
