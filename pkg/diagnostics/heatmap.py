"""Critic loss over the whole buffer, bucketed by insertion time.

At every heatmap checkpoint the live buffer is split into contiguous
insert_index buckets of ``bucket_size``; each bucket's mean squared TD error
under the current critic and the checkpoint's frozen targets becomes one cell
of heatmap.csv (rows = checkpoints, columns = buckets, empty = bucket did not
exist yet).
"""
import logging

import numpy as np

from utils.csv_io import read_rows, write_rows

logger = logging.getLogger(__name__)

EVAL_CHUNK = 4096


def critic_buffer_loss(critic, target_fn, storage, bucket_size, max_per_bucket=50_000,
                       rng=None, upto=None):
    """{bucket id: mean squared TD error} over the live items of ``storage``.

    ``target_fn(batch)`` returns TD targets; ``upto`` restricts the pass to
    insert indexes below it. Buckets larger than ``max_per_bucket`` are
    subsampled uniformly without replacement.
    """
    live = storage.live_indices()
    if upto is not None:
        live = live[live < upto]
    if live.shape[0] == 0:
        return {}
    rng = rng or np.random.default_rng(0)

    losses = {}
    buckets = live // bucket_size
    for bucket in np.unique(buckets):
        members = live[buckets == bucket]
        if members.shape[0] > max_per_bucket:
            members = np.sort(rng.choice(members, size=max_per_bucket, replace=False))
        total = 0.0
        for start in range(0, members.shape[0], EVAL_CHUNK):
            batch = storage.gather(members[start:start + EVAL_CHUNK])
            targets = target_fn(batch)
            q = critic.forward(batch.states, batch.actions)
            critic.invalidate()
            total += float(np.sum((q - targets) ** 2))
        losses[int(bucket)] = total / members.shape[0]
    return losses


class HeatmapAccumulator:
    """Checkpoint x bucket matrix of mean critic losses.

    Attributes:
        bucket_size: insert_index span of one column
        interval: env steps between checkpoints
        rows: {checkpoint step: {bucket: loss}}
    """

    def __init__(self, bucket_size, interval=0):
        self.bucket_size = int(bucket_size)
        self.interval = int(interval)
        self.rows = {}

    def add(self, step, losses):
        self.rows[int(step)] = dict(losses)

    @property
    def n_buckets(self) -> int:
        buckets = [b for losses in self.rows.values() for b in losses]
        return max(buckets) + 1 if buckets else 0

    def matrix(self):
        """Array (checkpoints x buckets) with NaN where no cell exists."""
        steps = sorted(self.rows)
        out = np.full((len(steps), self.n_buckets), np.nan)
        for r, step in enumerate(steps):
            for bucket, loss in self.rows[step].items():
                out[r, bucket] = loss
        return out

    def support_ok(self) -> bool:
        """No cell for a bucket whose first index was not yet inserted."""
        return all(bucket * self.bucket_size < step
                   for step, losses in self.rows.items() for bucket in losses)

    def to_csv(self, path):
        fieldnames = ['step'] + [f'bucket_{b}' for b in range(self.n_buckets)]
        rows = []
        for step in sorted(self.rows):
            row = {'step': step}
            row.update({f'bucket_{b}': loss for b, loss in self.rows[step].items()})
            rows.append(row)
        return write_rows(path, fieldnames, rows)

    @classmethod
    def from_csv(cls, path, bucket_size, interval=0):
        acc = cls(bucket_size, interval)
        for row in read_rows(path):
            step = int(row.pop('step'))
            acc.rows[step] = {int(key.split('_', 1)[1]): float(value)
                              for key, value in row.items() if value != ''}
        return acc


def heatmap_checkpoints(env_steps, interval):
    if interval <= 0:
        return []
    return list(range(interval, env_steps + 1, interval))
