"""Built-in continuous-control tasks"""
from utils.errors import ConfigError

from .base import Env, StepResult
from .pendulum import Pendulum, pendulum_energy, pendulum_reward, wrap_angle
from .pointreach import PointReach
from .trajectory import TrajectoryRecorder

ENVS = {
    'pendulum': Pendulum,
    'pointreach': PointReach,
}

__all__ = ['ENVS', 'Env', 'Pendulum', 'PointReach', 'StepResult', 'TrajectoryRecorder',
           'make_env', 'pendulum_energy', 'pendulum_reward', 'wrap_angle']


def make_env(name) -> Env:
    try:
        return ENVS[name]()
    except KeyError:
        raise ConfigError(f'unknown env {name!r}; choose from {sorted(ENVS)}') from None
