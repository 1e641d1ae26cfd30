"""Expandable residual Q-network.

    input head:  state (+) action -> Dense -> LayerNorm -> ELU
    blocks:      x + LN2(D2(ELU(LN1(D1 x))))       (depth of them)
    output head: Dense -> scalar Q

Only residual blocks count toward depth. New blocks are appended after the
last one and never touch existing parameter arrays.
"""
import logging

import numpy as np

from utils.errors import MaxDepthError, SchemaError

from .layers import ELU, Dense, LayerNorm
from .module import Module

logger = logging.getLogger(__name__)

HIDDEN_SCALE = np.sqrt(2.0)
OUTPUT_SCALE = 1.0


def block_param_count(hidden_dim: int) -> int:
    return 2 * (hidden_dim ** 2 + hidden_dim) + 2 * (2 * hidden_dim)


class ResidualBlock(Module):
    def __init__(self, hidden_dim, rng):
        self.dense1 = Dense(hidden_dim, hidden_dim, rng, HIDDEN_SCALE)
        self.norm1 = LayerNorm(hidden_dim)
        self.act = ELU()
        self.dense2 = Dense(hidden_dim, hidden_dim, rng, HIDDEN_SCALE)
        self.norm2 = LayerNorm(hidden_dim)
        self.inner = None

    def named_layers(self):
        return [('dense1', self.dense1), ('norm1', self.norm1), ('act', self.act),
                ('dense2', self.dense2), ('norm2', self.norm2)]

    def forward(self, x):
        self.inner = self.act.forward(self.norm1.forward(self.dense1.forward(x)))
        return x + self.norm2.forward(self.dense2.forward(self.inner))

    def backward(self, dy):
        d_inner = self.dense2.backward(self.norm2.backward(dy))
        return dy + self.dense1.backward(self.norm1.backward(self.act.backward(d_inner)))


class ResidualCritic(Module):
    """Q(s, a) with an ordered, growable list of residual blocks."""

    def __init__(self, state_dim, action_dim, hidden_dim, depth, max_depth, rng):
        if not 0 <= depth <= max_depth:
            raise ValueError(f'depth {depth} outside [0, {max_depth}]')
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.hidden_dim = int(hidden_dim)
        self.max_depth = int(max_depth)
        self.head = Dense(self.state_dim + self.action_dim, hidden_dim, rng, HIDDEN_SCALE)
        self.head_norm = LayerNorm(hidden_dim)
        self.head_act = ELU()
        self.blocks = [ResidualBlock(hidden_dim, rng) for _ in range(depth)]
        self.out = Dense(hidden_dim, 1, rng, OUTPUT_SCALE)
        self._head_out = None

    @property
    def depth(self) -> int:
        return len(self.blocks)

    def named_layers(self):
        layers = [('head.dense', self.head), ('head.norm', self.head_norm),
                  ('head.act', self.head_act)]
        for k, block in enumerate(self.blocks):
            layers += [(f'blocks.{k}.{name}', layer) for name, layer in block.named_layers()]
        layers.append(('out', self.out))
        return layers

    def dense_layer_count(self, include_head=True) -> int:
        return (1 if include_head else 0) + 2 * self.depth

    def layer_schema(self):
        return {'state_dim': self.state_dim, 'action_dim': self.action_dim,
                'hidden_dim': self.hidden_dim, 'depth': self.depth,
                'max_depth': self.max_depth}

    def _inputs(self, states, actions):
        states = np.atleast_2d(np.asarray(states, dtype=np.float64))
        actions = np.atleast_2d(np.asarray(actions, dtype=np.float64))
        if states.shape[1] != self.state_dim or actions.shape[1] != self.action_dim:
            raise SchemaError(
                f'critic expects state {self.state_dim} / action {self.action_dim}, '
                f'got {states.shape[1]} / {actions.shape[1]}')
        return np.concatenate([states, actions], axis=1)

    def forward(self, states, actions):
        """Q-values of shape (batch,)."""
        x = self.head_act.forward(self.head_norm.forward(self.head.forward(
            self._inputs(states, actions))))
        self._head_out = x
        for block in self.blocks:
            x = block.forward(x)
        return self.out.forward(x)[:, 0]

    def backward(self, dq):
        """Fills parameter grads; returns (d_states, d_actions)."""
        dx = self.out.backward(np.asarray(dq, dtype=np.float64).reshape(-1, 1))
        for block in reversed(self.blocks):
            dx = block.backward(dx)
        d_in = self.head.backward(self.head_norm.backward(self.head_act.backward(dx)))
        return d_in[:, :self.state_dim], d_in[:, self.state_dim:]

    def hidden_activations(self, states, actions):
        """Post-ELU activations of the head and every block's inner layer."""
        self.forward(states, actions)
        acts = [self._head_out] + [block.inner for block in self.blocks]
        self.invalidate()
        return acts

    def expand(self, rng, blocks=1):
        """Append ``blocks`` freshly initialized residual blocks."""
        if self.depth + blocks > self.max_depth:
            raise MaxDepthError(f'critic at depth {self.depth} cannot grow past {self.max_depth}')
        new_blocks = [ResidualBlock(self.hidden_dim, rng) for _ in range(blocks)]
        self.blocks.extend(new_blocks)
        self.invalidate()
        logger.debug('critic expanded to depth %d', self.depth)
        return new_blocks
