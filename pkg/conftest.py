import numpy as np
import pytest

from models.run_config import resolve_run_config
from models.transition import BufferSchema, Transition


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run long acceptance-style tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def schema():
    return BufferSchema(state_dim=2, action_dim=1)


@pytest.fixture
def make_transition(schema):
    def _make(value=0.0, reward=0.0, done=False):
        return Transition(state=np.full(schema.state_dim, value),
                          action=np.zeros(schema.action_dim), reward=reward,
                          next_state=np.full(schema.state_dim, value + 1.0), done=done)
    return _make


@pytest.fixture
def testing_config(tmp_path):
    return resolve_run_config('testing', overrides=[{'run': {'out_dir': str(tmp_path)}}])
