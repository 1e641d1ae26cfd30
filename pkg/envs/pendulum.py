"""Torque-limited pendulum swing-up.

theta = 0 is upright. Semi-implicit Euler:
    theta_dot += (3 g / (2 l) sin(theta) + 3 u / (m l^2)) dt,  clipped to +-8
    theta     += theta_dot dt
Reward is charged on the pre-step state. Observations are bounded by
(1, 1, 8); rewards lie in [-(pi^2 + 6.4 + 0.004), 0].
"""
import math

import numpy as np

from .base import Env

MAX_SPEED = 8.0
MAX_TORQUE = 2.0
DT = 0.05
G = 10.0
M = 1.0
L = 1.0


def wrap_angle(theta):
    return ((theta + math.pi) % (2.0 * math.pi)) - math.pi


def pendulum_reward(theta, theta_dot, torque):
    return -(wrap_angle(theta) ** 2 + 0.1 * theta_dot ** 2 + 0.001 * torque ** 2)


def pendulum_energy(theta, theta_dot):
    """Conserved quantity of the undamped, unforced dynamics above."""
    return 0.5 * theta_dot ** 2 + (3.0 * G / (2.0 * L)) * math.cos(theta)


class Pendulum(Env):
    name = 'pendulum'
    obs_dim = 3
    action_dim = 1
    horizon = 200

    def __init__(self):
        super().__init__()
        self.theta = 0.0
        self.theta_dot = 0.0

    def reset(self, seed=None):
        rng = np.random.default_rng(seed)
        self.theta = float(rng.uniform(-math.pi, math.pi))
        self.theta_dot = float(rng.uniform(-1.0, 1.0))
        self.t = 0
        return self.observe()

    def set_state(self, theta, theta_dot):
        self.theta = float(theta)
        self.theta_dot = float(theta_dot)

    def observe(self):
        return np.array([math.cos(self.theta), math.sin(self.theta), self.theta_dot])

    def _advance(self, action):
        u = MAX_TORQUE * float(action[0])
        reward = pendulum_reward(self.theta, self.theta_dot, u)
        accel = 3.0 * G / (2.0 * L) * math.sin(self.theta) + 3.0 / (M * L ** 2) * u
        self.theta_dot = min(max(self.theta_dot + accel * DT, -MAX_SPEED), MAX_SPEED)
        self.theta = self.theta + self.theta_dot * DT
        return reward, False
