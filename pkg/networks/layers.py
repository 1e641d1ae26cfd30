"""Dense, LayerNorm and ELU layers with hand-written backward passes.

Every layer caches what its backward needs during forward(). backward()
consumes that cache, so a second backward (or one after the parameters were
stepped) raises StaleCacheError instead of returning wrong gradients.
"""
import numpy as np

from utils.errors import SchemaError, StaleCacheError

from .init import orthogonal_init

LN_EPS = 1e-5


class Layer:
    """Base class: named parameter arrays plus matching gradient arrays."""

    def __init__(self):
        self.params = {}
        self.grads = {}
        self._cache = None

    def _take_cache(self):
        if self._cache is None:
            raise StaleCacheError(f'{type(self).__name__}.backward() without a fresh forward()')
        cache, self._cache = self._cache, None
        return cache

    def invalidate(self):
        self._cache = None

    def zero_grad(self):
        for name, value in self.params.items():
            self.grads[name] = np.zeros_like(value)


class Dense(Layer):
    """y = x W^T + b with W stored out x in."""

    def __init__(self, in_dim, out_dim, rng=None, scale=np.sqrt(2.0)):
        super().__init__()
        if rng is None:
            weight = np.zeros((out_dim, in_dim))
        else:
            weight = orthogonal_init((out_dim, in_dim), scale, rng)
        self.params = {'W': weight, 'b': np.zeros(out_dim)}
        self.zero_grad()

    @property
    def in_dim(self):
        return self.params['W'].shape[1]

    @property
    def out_dim(self):
        return self.params['W'].shape[0]

    def forward(self, x):
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise SchemaError(f'Dense expects (batch, {self.in_dim}) input, got {x.shape}')
        self._cache = x
        return x @ self.params['W'].T + self.params['b']

    def backward(self, dy):
        x = self._take_cache()
        self.grads['W'] = dy.T @ x
        self.grads['b'] = dy.sum(axis=0)
        return dy @ self.params['W']


class LayerNorm(Layer):
    """Per-row normalization with learnable scale (gamma) and shift (beta)."""

    def __init__(self, dim, eps=LN_EPS):
        super().__init__()
        self.eps = eps
        self.params = {'gamma': np.ones(dim), 'beta': np.zeros(dim)}
        self.zero_grad()

    def normalize(self, x):
        mean = x.mean(axis=1, keepdims=True)
        inv_std = 1.0 / np.sqrt(x.var(axis=1, keepdims=True) + self.eps)
        return (x - mean) * inv_std, inv_std

    def forward(self, x):
        if x.ndim != 2 or x.shape[1] != self.params['gamma'].shape[0]:
            raise SchemaError(f'LayerNorm expects (batch, {self.params["gamma"].shape[0]}) input')
        x_hat, inv_std = self.normalize(x)
        self._cache = (x_hat, inv_std)
        return x_hat * self.params['gamma'] + self.params['beta']

    def backward(self, dy):
        x_hat, inv_std = self._take_cache()
        self.grads['gamma'] = (dy * x_hat).sum(axis=0)
        self.grads['beta'] = dy.sum(axis=0)
        d_hat = dy * self.params['gamma']
        n = x_hat.shape[1]
        return (inv_std / n) * (n * d_hat - d_hat.sum(axis=1, keepdims=True)
                                - x_hat * (d_hat * x_hat).sum(axis=1, keepdims=True))


class ELU(Layer):
    def forward(self, x):
        y = np.where(x > 0, x, np.expm1(np.minimum(x, 0.0)))
        self._cache = (x, y)
        return y

    def backward(self, dy):
        x, y = self._take_cache()
        return dy * np.where(x > 0, 1.0, y + 1.0)
