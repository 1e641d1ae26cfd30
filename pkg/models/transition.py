"""Transition records stored by every replay sampler"""
from dataclasses import dataclass

import numpy as np

from utils.errors import NonFiniteError, SchemaError


@dataclass(frozen=True)
class BufferSchema:
    """Fixed per-buffer dimensions.

    Attributes:
        state_dim: length of state and next_state vectors
        action_dim: length of action vectors
    """

    state_dim: int
    action_dim: int

    def __post_init__(self):
        if self.state_dim < 1 or self.action_dim < 1:
            raise SchemaError(f'dimensions must be positive, got {self}')


@dataclass
class Transition:
    """One environment step.

    Attributes:
        state: observation before the action (env units)
        action: action in [-1, 1] per dimension
        reward: scalar reward
        next_state: observation after the action
        done: True only on physical termination (bootstrap cut)
        insert_index: global insertion count, assigned by the sampler on push
    """

    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    done: bool
    insert_index: int = -1

    def validate(self, schema: BufferSchema):
        state = np.asarray(self.state, dtype=np.float64).reshape(-1)
        next_state = np.asarray(self.next_state, dtype=np.float64).reshape(-1)
        action = np.asarray(self.action, dtype=np.float64).reshape(-1)
        if state.shape[0] != schema.state_dim or next_state.shape[0] != schema.state_dim:
            raise SchemaError(
                f'state dims {state.shape[0]}/{next_state.shape[0]} != schema {schema.state_dim}')
        if action.shape[0] != schema.action_dim:
            raise SchemaError(f'action dim {action.shape[0]} != schema {schema.action_dim}')
        if not (np.all(np.isfinite(state)) and np.all(np.isfinite(next_state))
                and np.all(np.isfinite(action)) and np.isfinite(self.reward)):
            raise NonFiniteError('transition contains non-finite values')
        return state, action, float(self.reward), next_state, bool(self.done)


@dataclass
class Batch:
    """Stacked transitions handed to an update.

    ``weights`` carries importance weights (all ones unless PER).
    """

    indices: np.ndarray
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    dones: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return self.indices.shape[0]
