"""Hand-written backward passes against central finite differences."""
import numpy as np
import pytest

from agents import SACAgent
from models.run_config import AgentSection
from models.transition import Batch
from networks import Dense, ELU, GaussianActor, LayerNorm, ResidualCritic
from networks.module import Module

STEP = 1e-5
TOLERANCE = 1e-4
ENTRIES_PER_TENSOR = 6


def relative_error(analytic, numeric):
    return abs(analytic - numeric) / max(1e-6, abs(analytic) + abs(numeric))


def check_module(module, loss_fn, rng):
    """loss_fn() must run forward+backward and return the scalar loss."""
    loss_fn()
    analytic = {name: grad.copy() for name, grad in module.gradients()}
    worst = 0.0
    for name, param in module.parameters():
        for flat in rng.choice(param.size, size=min(ENTRIES_PER_TENSOR, param.size), replace=False):
            idx = np.unravel_index(flat, param.shape)
            saved = param[idx]
            param[idx] = saved + STEP
            plus = loss_fn()
            param[idx] = saved - STEP
            minus = loss_fn()
            param[idx] = saved
            numeric = (plus - minus) / (2 * STEP)
            worst = max(worst, relative_error(analytic[name][idx], numeric))
    return worst


def test_layer_norm_input_gradient(rng):
    norm = LayerNorm(6)
    norm.params['gamma'][:] = rng.uniform(0.5, 1.5, 6)
    x = rng.standard_normal((3, 6))
    g = rng.standard_normal((3, 6))
    norm.forward(x)
    dx = norm.backward(g)
    for i, j in [(0, 0), (1, 3), (2, 5)]:
        shifted = x.copy()
        shifted[i, j] += STEP
        plus = float(np.sum(norm.forward(shifted) * g))
        shifted[i, j] -= 2 * STEP
        minus = float(np.sum(norm.forward(shifted) * g))
        assert relative_error(dx[i, j], (plus - minus) / (2 * STEP)) < TOLERANCE


@pytest.mark.parametrize('depth', [0, 1, 3])
def test_critic_parameter_gradients(rng, depth):
    critic = ResidualCritic(3, 2, 8, depth, 4, rng)
    states, actions = rng.standard_normal((5, 3)), rng.uniform(-1, 1, (5, 2))
    # small loss scale keeps roundoff below the 1e-6 floor for biases feeding a LayerNorm
    g = 0.1 * rng.standard_normal(5)

    def loss_fn():
        q = critic.forward(states, actions)
        critic.backward(g)
        return float(np.sum(q * g))

    assert check_module(critic, loss_fn, rng) < TOLERANCE


def test_critic_action_gradient(rng):
    critic = ResidualCritic(3, 2, 8, 2, 4, rng)
    states, actions = rng.standard_normal((4, 3)), rng.uniform(-1, 1, (4, 2))
    critic.forward(states, actions)
    _, d_actions = critic.backward(np.ones(4))
    for i, j in [(0, 0), (3, 1)]:
        shifted = actions.copy()
        shifted[i, j] += STEP
        plus = critic.forward(states, shifted).sum()
        shifted[i, j] -= 2 * STEP
        minus = critic.forward(states, shifted).sum()
        critic.invalidate()
        assert relative_error(d_actions[i, j], (plus - minus) / (2 * STEP)) < TOLERANCE


@pytest.mark.parametrize('layer_norm', [False, True])
def test_actor_parameter_gradients(rng, layer_norm):
    actor = GaussianActor(3, 2, 8, rng, layer_norm=layer_norm)
    states = rng.standard_normal((5, 3))
    g_mean, g_log_std = rng.standard_normal((5, 2)), rng.standard_normal((5, 2))

    def loss_fn():
        mean, log_std = actor.forward(states)
        actor.backward(g_mean, g_log_std)
        return float(np.sum(mean * g_mean) + np.sum(log_std * g_log_std))

    assert check_module(actor, loss_fn, rng) < TOLERANCE


def test_sac_actor_loss_gradient(rng):
    cfg = AgentSection(hidden_dim=8, actor_hidden_dim=8, init_alpha=0.3)
    agent = SACAgent(3, 2, cfg, rng)
    states = rng.standard_normal((6, 3))
    noise = rng.standard_normal((6, 2))

    def loss_fn():
        loss, _ = agent.actor_loss(states, noise=noise)
        return loss

    assert check_module(agent.actor, loss_fn, rng) < TOLERANCE


def test_sac_critic_loss_gradient(rng):
    cfg = AgentSection(hidden_dim=8, actor_hidden_dim=8)
    agent = SACAgent(3, 1, cfg, rng)
    n = 6
    batch = Batch(indices=np.arange(n), states=rng.standard_normal((n, 3)),
                  actions=rng.uniform(-1, 1, (n, 1)), rewards=rng.standard_normal(n),
                  next_states=rng.standard_normal((n, 3)), dones=np.zeros(n),
                  weights=np.ones(n))
    targets = agent.critics[0].forward(batch.states, batch.actions) + 0.1 * rng.standard_normal(n)
    agent.critics[0].invalidate()

    def loss_fn():
        losses, _ = agent.critic_losses(batch, targets)
        return losses[0]

    assert check_module(agent.critics[0], loss_fn, rng) < TOLERANCE


class SingleLayer(Module):
    def __init__(self, layer):
        self.layer = layer

    def named_layers(self):
        return [('layer', self.layer)]


def _away_from_zero(rng, shape, margin=0.05):
    x = rng.standard_normal(shape)
    return np.sign(x) * (np.abs(x) + margin)


def check_input(layer, x, g, rng):
    layer.forward(x)
    dx = layer.backward(g)
    worst = 0.0
    for flat in rng.choice(x.size, size=ENTRIES_PER_TENSOR, replace=False):
        idx = np.unravel_index(flat, x.shape)
        shifted = x.copy()
        shifted[idx] += STEP
        plus = float(np.sum(layer.forward(shifted) * g))
        shifted[idx] -= 2 * STEP
        minus = float(np.sum(layer.forward(shifted) * g))
        worst = max(worst, relative_error(dx[idx], (plus - minus) / (2 * STEP)))
    layer.invalidate()
    return worst


def _make_layer(kind, rng):
    if kind == 'dense':
        return Dense(5, 4, rng)
    if kind == 'layer_norm':
        norm = LayerNorm(5)
        norm.params['gamma'][:] = rng.uniform(0.5, 1.5, 5)
        norm.params['beta'][:] = rng.standard_normal(5)
        return norm
    return ELU()


@pytest.mark.parametrize('seed', range(20))
@pytest.mark.parametrize('kind', ['dense', 'layer_norm', 'elu'])
def test_single_layer_gradients(kind, seed):
    rng = np.random.default_rng(seed)
    layer = _make_layer(kind, rng)
    x = _away_from_zero(rng, (3, 5))
    out_dim = 4 if kind == 'dense' else 5
    g = rng.standard_normal((3, out_dim))
    assert check_input(layer, x, g, rng) < TOLERANCE
    if layer.params:
        def loss_fn():
            y = layer.forward(x)
            layer.backward(g)
            return float(np.sum(y * g))

        assert check_module(SingleLayer(layer), loss_fn, rng) < TOLERANCE


@pytest.mark.parametrize('seed', range(20))
def test_critic_gradients_across_instances(seed):
    rng = np.random.default_rng(seed)
    critic = ResidualCritic(3, 1, 8, 2, 4, rng)
    states, actions = rng.standard_normal((5, 3)), rng.uniform(-1, 1, (5, 1))
    g = 0.1 * rng.standard_normal(5)

    def loss_fn():
        q = critic.forward(states, actions)
        critic.backward(g)
        return float(np.sum(q * g))

    assert check_module(critic, loss_fn, rng) < TOLERANCE


@pytest.mark.parametrize('seed', range(20))
def test_actor_gradients_across_instances(seed):
    rng = np.random.default_rng(seed)
    actor = GaussianActor(3, 1, 8, rng)
    states = rng.standard_normal((5, 3))
    g_mean, g_log_std = 0.1 * rng.standard_normal((5, 1)), 0.1 * rng.standard_normal((5, 1))

    def loss_fn():
        mean, log_std = actor.forward(states)
        actor.backward(g_mean, g_log_std)
        return float(np.sum(mean * g_mean) + np.sum(log_std * g_log_std))

    assert check_module(actor, loss_fn, rng) < TOLERANCE


@pytest.mark.parametrize('seed', range(5))
def test_layer_norm_ignores_constant_shift(seed):
    rng = np.random.default_rng(seed)
    norm = LayerNorm(6)
    norm.params['gamma'][:] = rng.uniform(0.5, 1.5, 6)
    # rows symmetric about their mean
    half = rng.standard_normal((4, 3))
    x = np.concatenate([half, -half], axis=1) + rng.standard_normal((4, 1))
    norm.forward(x)
    dx = norm.backward(rng.standard_normal((4, 6)))
    np.testing.assert_allclose(dx.sum(axis=1), 0.0, atol=1e-10 * np.abs(dx).max())
    shifted = norm.forward(x + 3.0)
    np.testing.assert_allclose(shifted, norm.forward(x), atol=1e-9)


@pytest.mark.parametrize('seed', range(5))
def test_dense_sum_gradient_is_outer_product(seed):
    rng = np.random.default_rng(seed)
    dense = Dense(5, 3, rng)
    x = rng.standard_normal((1, 5))
    dense.forward(x)
    dense.backward(np.ones((1, 3)))
    np.testing.assert_allclose(dense.grads['W'], np.outer(np.ones(3), x[0]))
    np.testing.assert_allclose(dense.grads['b'], np.ones(3))
