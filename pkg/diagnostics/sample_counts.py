"""Exact per-transition replay counts collected during training."""
import numpy as np

from utils.csv_io import write_rows

FLUSH_DRAWS = 1 << 20


class SampleCountTracker:
    """Counts how often each insert_index appeared in an update batch.

    Draws are buffered and folded in with one bincount per flush.
    """

    def __init__(self):
        self._counts = np.zeros(0, dtype=np.int64)
        self._pending = []
        self._pending_draws = 0
        self.total_draws = 0

    def record(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        self._pending.append(indices)
        self._pending_draws += indices.shape[0]
        self.total_draws += indices.shape[0]
        if self._pending_draws >= FLUSH_DRAWS:
            self._flush()

    def _flush(self):
        if not self._pending:
            return
        drawn = np.bincount(np.concatenate(self._pending))
        if drawn.shape[0] > self._counts.shape[0]:
            grown = np.zeros(drawn.shape[0], dtype=np.int64)
            grown[:self._counts.shape[0]] = self._counts
            self._counts = grown
        self._counts[:drawn.shape[0]] += drawn
        self._pending, self._pending_draws = [], 0

    def counts(self, n_transitions=None):
        """Array indexed by insert_index, zero-padded to ``n_transitions``."""
        self._flush()
        size = max(self._counts.shape[0], int(n_transitions or 0))
        out = np.zeros(size, dtype=np.int64)
        out[:self._counts.shape[0]] = self._counts
        return out

    def to_csv(self, path, n_transitions=None):
        counts = self.counts(n_transitions)
        rows = ({'insert_index': i, 'count': int(c)} for i, c in enumerate(counts))
        return write_rows(path, ['insert_index', 'count'], rows)
