"""Environment interface shared by the built-in control tasks."""
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from utils.errors import NonFiniteError, SchemaError


@dataclass
class StepResult:
    """Outcome of one env step.

    ``terminated`` is a physical end of the episode (cuts the bootstrap);
    ``truncated`` only marks the time limit.
    """

    obs: np.ndarray
    reward: float
    terminated: bool
    truncated: bool

    @property
    def done(self) -> bool:
        return self.terminated or self.truncated


class Env(ABC):
    name = 'base'
    obs_dim = 0
    action_dim = 0
    horizon = 0

    def __init__(self):
        self.t = 0

    @abstractmethod
    def reset(self, seed=None) -> np.ndarray:
        """Start an episode from the seeded initial-state distribution."""

    @abstractmethod
    def _advance(self, action: np.ndarray):
        """Integrate one step; returns (reward, terminated)."""

    @abstractmethod
    def observe(self) -> np.ndarray:
        ...

    def _check_action(self, action):
        action = np.asarray(action, dtype=np.float64).reshape(-1)
        if action.shape[0] != self.action_dim:
            raise SchemaError(f'{self.name} expects {self.action_dim} action dims, got {action.shape[0]}')
        if not np.all(np.isfinite(action)):
            raise NonFiniteError(f'non-finite action passed to {self.name}')
        return np.clip(action, -1.0, 1.0)

    def step(self, action) -> StepResult:
        reward, terminated = self._advance(self._check_action(action))
        self.t += 1
        return StepResult(obs=self.observe(), reward=float(reward), terminated=terminated,
                          truncated=self.t >= self.horizon and not terminated)
