"""Tanh-squashed Gaussian policy on a three-dense-layer MLP."""
import math

import numpy as np

from utils.errors import NonFiniteError, SchemaError

from .layers import ELU, Dense, LayerNorm
from .module import Module

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def softplus(x):
    return np.logaddexp(0.0, x)


def log_one_minus_tanh_sq(u):
    """log(1 - tanh(u)^2) without cancellation near saturation."""
    return 2.0 * (math.log(2.0) - u - softplus(-2.0 * u))


class GaussianActor(Module):
    """Dense -> ELU -> Dense -> ELU -> Dense(2A): mean and log-std per action dim.

    Attributes:
        layer_norm: insert LayerNorm after each hidden dense layer
    """

    def __init__(self, state_dim, action_dim, hidden_dim, rng, layer_norm=False):
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.hidden_dim = int(hidden_dim)
        self.layer_norm = bool(layer_norm)
        self.dense1 = Dense(state_dim, hidden_dim, rng, np.sqrt(2.0))
        self.act1 = ELU()
        self.dense2 = Dense(hidden_dim, hidden_dim, rng, np.sqrt(2.0))
        self.act2 = ELU()
        self.dense3 = Dense(hidden_dim, 2 * action_dim, rng, 1.0)
        self.norm1 = LayerNorm(hidden_dim) if layer_norm else None
        self.norm2 = LayerNorm(hidden_dim) if layer_norm else None
        self._hidden = None
        self._clipped = None

    def named_layers(self):
        layers = [('dense1', self.dense1)]
        if self.layer_norm:
            layers.append(('norm1', self.norm1))
        layers += [('act1', self.act1), ('dense2', self.dense2)]
        if self.layer_norm:
            layers.append(('norm2', self.norm2))
        layers += [('act2', self.act2), ('dense3', self.dense3)]
        return layers

    def layer_schema(self):
        return {'state_dim': self.state_dim, 'action_dim': self.action_dim,
                'hidden_dim': self.hidden_dim, 'layer_norm': self.layer_norm}

    def forward(self, states):
        """(mean, log_std), log_std clipped to [LOG_STD_MIN, LOG_STD_MAX]."""
        states = np.atleast_2d(np.asarray(states, dtype=np.float64))
        if states.shape[1] != self.state_dim:
            raise SchemaError(f'actor expects state dim {self.state_dim}, got {states.shape[1]}')
        if not np.all(np.isfinite(states)):
            raise NonFiniteError('non-finite state passed to the actor')
        h = self.dense1.forward(states)
        if self.layer_norm:
            h = self.norm1.forward(h)
        h1 = self.act1.forward(h)
        h = self.dense2.forward(h1)
        if self.layer_norm:
            h = self.norm2.forward(h)
        h2 = self.act2.forward(h)
        self._hidden = [h1, h2]
        out = self.dense3.forward(h2)
        mean, raw_log_std = out[:, :self.action_dim], out[:, self.action_dim:]
        self._clipped = (raw_log_std < LOG_STD_MIN) | (raw_log_std > LOG_STD_MAX)
        return mean, np.clip(raw_log_std, LOG_STD_MIN, LOG_STD_MAX)

    def backward(self, d_mean, d_log_std):
        """Gradients flow to the raw log-std only where it was not clipped."""
        d_log_std = np.where(self._clipped, 0.0, d_log_std)
        dh = self.act2.backward(self.dense3.backward(np.concatenate([d_mean, d_log_std], axis=1)))
        if self.layer_norm:
            dh = self.norm2.backward(dh)
        dh = self.act1.backward(self.dense2.backward(dh))
        if self.layer_norm:
            dh = self.norm1.backward(dh)
        return self.dense1.backward(dh)

    def sample(self, states, rng=None, deterministic=False, noise=None):
        """Squashed action plus what the agent needs for log-prob gradients.

        Returns (action, log_prob, pre_tanh, std, noise); in deterministic mode
        the noise is zero and the action is tanh(mean). A given ``noise``
        array replaces the draw from ``rng``.
        """
        mean, log_std = self.forward(states)
        std = np.exp(log_std)
        if deterministic:
            noise = np.zeros_like(mean)
        elif noise is None:
            noise = rng.standard_normal(mean.shape)
        u = mean + std * noise
        action = np.tanh(u)
        log_prob = (np.sum(-0.5 * noise ** 2 - log_std - HALF_LOG_2PI, axis=1)
                    - np.sum(log_one_minus_tanh_sq(u), axis=1))
        return action, log_prob, u, std, noise

    def hidden_activations(self, states):
        self.forward(states)
        acts = list(self._hidden)
        self.invalidate()
        return acts
