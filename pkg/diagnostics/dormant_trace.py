"""Dormant-ratio time series with growth events annotated (dormant.csv)."""
from dataclasses import asdict, dataclass

from networks.dormant import DEFAULT_THRESHOLD, dormant_ratio
from utils.csv_io import write_rows


class DormantProbe:
    """Probe batch of (state, action) pairs drawn uniformly from the live buffer.

    ``refresh()`` redraws the batch; ``measure()`` reuses it, so readings taken
    around an expansion share one batch.
    """

    def __init__(self, sampler, size=256, threshold=DEFAULT_THRESHOLD, rng=None):
        self.sampler = sampler
        self.size = int(size)
        self.threshold = float(threshold)
        self.rng = rng
        self.batch = None

    def refresh(self):
        storage = self.sampler.storage
        indices = self.rng.integers(storage.oldest, storage.next_index, size=self.size)
        gathered = storage.gather(indices)
        self.batch = (gathered.states, gathered.actions)
        return self.batch

    def measure(self, critic) -> float:
        if self.batch is None:
            self.refresh()
        return dormant_ratio(critic, self.batch, self.threshold)


@dataclass
class DormantRow:
    step: int
    ratio: float
    event: str = ''


class DormantTrace:
    FIELDNAMES = ['step', 'ratio', 'event']

    def __init__(self):
        self.rows = []

    def record(self, step, ratio, event=''):
        self.rows.append(DormantRow(int(step), float(ratio), event))

    def record_expansion(self, step, before, after):
        self.record(step, before, 'expand_before')
        self.record(step, after, 'expand_after')

    def ratios(self, event=None):
        return [row.ratio for row in self.rows if event is None or row.event == event]

    def to_csv(self, path):
        return write_rows(path, self.FIELDNAMES, (asdict(row) for row in self.rows))
