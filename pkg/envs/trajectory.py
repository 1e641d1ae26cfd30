"""Optional per-step trajectory dump (trajectories.csv)."""
from utils.csv_io import write_rows


class TrajectoryRecorder:
    def __init__(self, obs_dim, action_dim):
        self.fieldnames = (['episode', 't']
                           + [f'obs_{k}' for k in range(obs_dim)]
                           + [f'action_{k}' for k in range(action_dim)]
                           + ['reward', 'terminated', 'truncated'])
        self.rows = []

    def record(self, episode, t, obs, action, result):
        row = {'episode': episode, 't': t, 'reward': result.reward,
               'terminated': result.terminated, 'truncated': result.truncated}
        row.update({f'obs_{k}': float(v) for k, v in enumerate(obs)})
        row.update({f'action_{k}': float(v) for k, v in enumerate(action)})
        self.rows.append(row)

    def write(self, path):
        return write_rows(path, self.fieldnames, self.rows)
