"""Environment-driven settings and experiment profiles."""
import os
from pathlib import Path

from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent
ENV_FILE = BASE_DIR / '.env'
if ENV_FILE.exists():
    load_dotenv(ENV_FILE)
else:
    load_dotenv()

def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default

# Full-length step counts; profiles divide them by run.scale.
FULL_RESET_LIST = (15_000, 50_000, 100_000, 200_000, 400_000, 600_000, 800_000)
FULL_EXPANSION_ITERS = (50_000, 200_000)

class Config:
    """Base settings shared across profiles."""

    NAME = 'base'
    OUTPUT_ROOT = os.getenv('FOG_OUTPUT_ROOT', str(BASE_DIR / 'runs'))
    LOG_DIR = os.getenv('FOG_LOG_DIR', str(BASE_DIR / 'logs'))
    LOG_LEVEL = os.getenv('FOG_LOG_LEVEL', 'INFO').upper()
    WORKERS = _int_env('FOG_WORKERS', 1)
    DEBUG = False
    TESTING = False

    # Nested section overrides applied on top of the dataclass defaults
    SECTION_DEFAULTS: dict = {}

    @staticmethod
    def init_run(run_config):
        """Hook for profile-specific checks on a resolved run config."""
        return None

class DeskConfig(Config):
    NAME = 'desk'
    SECTION_DEFAULTS = {
        'run': {'env_steps': 8_000, 'scale': 10, 'eval_interval': 1_000, 'eval_episodes': 5},
        'agent': {'hidden_dim': 64, 'actor_hidden_dim': 64, 'warmup_steps': 1_000},
        'replay': {'capacity': 100_000, 'epsilon': 1e-3, 'tau': 0.1},
        'diagnostics': {'heatmap_interval': 1_000, 'bucket_size': 1_000,
                        'dormant_interval': 500},
    }

class FullConfig(Config):
    NAME = 'full'
    SECTION_DEFAULTS = {
        'run': {'env_steps': 1_000_000, 'scale': 1, 'eval_interval': 10_000,
                'eval_episodes': 10},
        'agent': {'hidden_dim': 512, 'actor_hidden_dim': 256, 'warmup_steps': 1_000},
        'replay': {'capacity': 1_000_000, 'epsilon': 1e-5, 'tau': 0.1},
        'diagnostics': {'heatmap_interval': 100_000, 'bucket_size': 100_000,
                        'dormant_interval': 10_000},
    }

    @staticmethod
    def init_run(run_config):
        Config.init_run(run_config)
        if run_config.run.scale != 1:
            raise RuntimeError('Full profile requires run.scale = 1')

class TestingConfig(Config):
    NAME = 'testing'
    TESTING = True
    SECTION_DEFAULTS = {
        'run': {'env_steps': 400, 'scale': 100, 'eval_interval': 200, 'eval_episodes': 1},
        'agent': {'hidden_dim': 16, 'actor_hidden_dim': 16, 'batch_size': 32,
                  'replay_ratio': 2, 'warmup_steps': 100},
        'replay': {'capacity': 5_000, 'epsilon': 1e-2, 'tau': 0.1},
        'diagnostics': {'heatmap_interval': 100, 'bucket_size': 100,
                        'dormant_interval': 100, 'probe_size': 32},
        'theorems': {'mc_seeds': 3, 'mc_horizon': 300, 'mc_decay_horizon': 3_000,
                     'figure_steps': 2_000, 'figure_epsilon': 1e-2, 'figure_tau': 5e-3},
        'sampling': {'steps': 2_000, 'seeds': 3},
    }

CONFIG_BY_NAME = {
    'desk': DeskConfig,
    'full': FullConfig,
    'testing': TestingConfig,
}

def get_profile(name: str | None = None):
    """Profile class by name, defaulting to FOG_PROFILE then desk."""
    env_name = (name or os.getenv('FOG_PROFILE', 'desk')).lower()
    return CONFIG_BY_NAME.get(env_name, DeskConfig)
