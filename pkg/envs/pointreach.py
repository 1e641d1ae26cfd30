"""2-D point mass steered by velocity commands toward a per-episode goal."""
import numpy as np

from .base import Env

DT = 0.05
SPEED_CAP = 1.0
SUCCESS_RADIUS = 0.05
ARENA = 1.0


class PointReach(Env):
    """obs = position (+) goal; reward = -||pos - goal|| (+1 inside the success radius).

    Start and goal are drawn from [-1, 1]^2, so |obs| <= 1 + horizon * dt.
    """

    name = 'pointreach'
    obs_dim = 4
    action_dim = 2
    horizon = 100

    def __init__(self):
        super().__init__()
        self.pos = np.zeros(2)
        self.goal = np.zeros(2)

    def reset(self, seed=None):
        rng = np.random.default_rng(seed)
        self.pos = rng.uniform(-ARENA, ARENA, size=2)
        self.goal = rng.uniform(-ARENA, ARENA, size=2)
        self.t = 0
        return self.observe()

    def set_state(self, pos, goal):
        self.pos = np.asarray(pos, dtype=np.float64).copy()
        self.goal = np.asarray(goal, dtype=np.float64).copy()

    def observe(self):
        return np.concatenate([self.pos, self.goal])

    def _advance(self, action):
        velocity = SPEED_CAP * action
        speed = float(np.linalg.norm(velocity))
        if speed > SPEED_CAP:
            velocity = velocity * (SPEED_CAP / speed)
        self.pos = self.pos + velocity * DT
        dist = float(np.linalg.norm(self.pos - self.goal))
        return -dist + (1.0 if dist <= SUCCESS_RADIUS else 0.0), False
