"""Shared parameter bookkeeping for composed networks."""
import copy

import numpy as np

from utils.errors import SchemaError


class Module:
    """A network made of named layers.

    Subclasses implement ``named_layers()``; parameter names are
    ``<layer name>.<param name>`` in layer order, which is also the order the
    optimizer and the checkpoint writer see.
    """

    def named_layers(self):
        raise NotImplementedError

    def parameters(self):
        return [(f'{lname}.{pname}', value)
                for lname, layer in self.named_layers()
                for pname, value in layer.params.items()]

    def gradients(self):
        return [(f'{lname}.{pname}', layer.grads[pname])
                for lname, layer in self.named_layers()
                for pname in layer.params]

    def num_params(self) -> int:
        return sum(value.size for _, value in self.parameters())

    def zero_grad(self):
        for _, layer in self.named_layers():
            layer.zero_grad()

    def invalidate(self):
        """Drop every cached forward pass (called after parameters change)."""
        for _, layer in self.named_layers():
            layer.invalidate()

    def state_dict(self):
        return {name: value.copy() for name, value in self.parameters()}

    def load_state_dict(self, state):
        own = dict(self.parameters())
        if set(own) != set(state):
            missing = sorted(set(own) - set(state))
            extra = sorted(set(state) - set(own))
            raise SchemaError(f'state mismatch: missing {missing}, unexpected {extra}')
        for name, value in own.items():
            if value.shape != np.shape(state[name]):
                raise SchemaError(f'{name}: shape {np.shape(state[name])} != {value.shape}')
            np.copyto(value, state[name])
        self.invalidate()

    def soft_update_from(self, source, coefficient):
        """Polyak average: self <- (1 - c) self + c source."""
        theirs = dict(source.parameters())
        for name, value in self.parameters():
            value *= 1.0 - coefficient
            value += coefficient * theirs[name]

    def clone(self):
        twin = copy.deepcopy(self)
        twin.invalidate()
        return twin
