"""Adam with optional decoupled weight decay (AdamW)."""
import logging

import numpy as np

from utils.errors import NonFiniteError

from .layers import Layer
from .module import Module

logger = logging.getLogger(__name__)


class Adam:
    """Bias-corrected Adam over a Module's parameters.

    Attributes:
        lr: learning rate
        weight_decay: decoupled decay coefficient; > 0 makes this AdamW
        step_count: updates applied since the last reset()
    """

    def __init__(self, module, lr=3e-4, betas=(0.9, 0.999), eps=1e-8, weight_decay=0.0):
        self.module = module
        self.lr = float(lr)
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.weight_decay = float(weight_decay)
        self.reset()

    def reset(self, lr=None):
        """Zero every moment and the step counter, optionally with a new lr."""
        if lr is not None:
            self.lr = float(lr)
        self.m = {name: np.zeros_like(value) for name, value in self.module.parameters()}
        self.v = {name: np.zeros_like(value) for name, value in self.module.parameters()}
        self.step_count = 0

    def step(self):
        grads = self.module.gradients()
        for name, grad in grads:
            if not np.all(np.isfinite(grad)):
                raise NonFiniteError(f'non-finite gradient for {name}; step rejected')

        self.step_count += 1
        correction1 = 1.0 - self.beta1 ** self.step_count
        correction2 = 1.0 - self.beta2 ** self.step_count
        grads = dict(grads)
        for name, param in self.module.parameters():
            grad = grads[name]
            m = self.m[name]
            v = self.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad * grad
            if self.weight_decay:
                param *= 1.0 - self.lr * self.weight_decay
            param -= self.lr * (m / correction1) / (np.sqrt(v / correction2) + self.eps)
        self.module.invalidate()


class ScalarParameter(Module):
    """A single trainable value (the log temperature) that Adam can step."""

    def __init__(self, value):
        self.layer = Layer()
        self.layer.params = {'value': np.array([float(value)])}
        self.layer.zero_grad()

    def named_layers(self):
        return [('scalar', self.layer)]

    @property
    def value(self) -> float:
        return float(self.layer.params['value'][0])

    @value.setter
    def value(self, new):
        self.layer.params['value'][0] = float(new)

    def set_grad(self, grad):
        self.layer.grads['value'] = np.array([float(grad)])
