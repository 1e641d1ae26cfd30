"""When to grow the critic and when to reset everything."""
from dataclasses import dataclass, field

from utils.errors import ParameterRangeError


def _strictly_increasing(values):
    return all(a < b for a, b in zip(values, values[1:]))


@dataclass
class ExpansionSchedule:
    """Update counts (since the last reset) at which blocks are appended.

    Attributes:
        expansion_iters: strictly increasing iteration thresholds
        blocks_per_expansion: blocks appended per firing
        initial_depth: depth right after construction or a reset
        max_depth: hard cap on depth
    """

    expansion_iters: list
    blocks_per_expansion: int = 1
    initial_depth: int = 2
    max_depth: int = 4
    consumed: set = field(default_factory=set)

    def __post_init__(self):
        self.expansion_iters = [int(i) for i in self.expansion_iters]
        if not _strictly_increasing(self.expansion_iters):
            raise ParameterRangeError('expansion_iters must be strictly increasing')
        if self.blocks_per_expansion < 1:
            raise ParameterRangeError('blocks_per_expansion must be positive')
        grown = self.initial_depth + len(self.expansion_iters) * self.blocks_per_expansion
        if grown > self.max_depth:
            raise ParameterRangeError(
                f'initial_depth {self.initial_depth} + {len(self.expansion_iters)} expansions '
                f'of {self.blocks_per_expansion} exceeds max_depth {self.max_depth}')

    def should_expand(self, iterations_since_reset, current_depth) -> bool:
        """True at most once per entry per reset epoch; consumes the entry."""
        if current_depth >= self.max_depth:
            return False
        for k, threshold in enumerate(self.expansion_iters):
            if k not in self.consumed and threshold <= iterations_since_reset:
                self.consumed.add(k)
                return True
        return False

    def rearm(self):
        self.consumed.clear()


def should_expand(iterations_since_reset, schedule: ExpansionSchedule, current_depth) -> bool:
    return schedule.should_expand(iterations_since_reset, current_depth)


@dataclass
class ResetList:
    """Env-step counts at which a full reset happens."""

    steps: list

    def __post_init__(self):
        self.steps = [int(s) for s in self.steps]
        if not _strictly_increasing(self.steps):
            raise ParameterRangeError('reset steps must be strictly increasing')
        self._lookup = set(self.steps)

    def __contains__(self, step):
        return int(step) in self._lookup

    def __len__(self):
        return len(self.steps)


def decayed_lr(init_lr, init_dense_layers, current_dense_layers) -> float:
    """init_lr * init / current dense-layer count."""
    if init_dense_layers < 1 or current_dense_layers < 1:
        raise ParameterRangeError('dense-layer counts must be >= 1')
    return init_lr * init_dense_layers / current_dense_layers
