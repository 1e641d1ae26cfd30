"""Orthogonal weight initialization."""
import numpy as np


def orthogonal_init(shape, scale, rng: np.random.Generator) -> np.ndarray:
    """Matrix whose thin side is orthonormal, times ``scale``.

    For out >= in the columns satisfy W^T W = scale^2 I, otherwise the rows
    satisfy W W^T = scale^2 I.
    """
    if len(shape) != 2:
        raise ValueError(f'orthogonal_init needs a 2-D shape, got {shape}')
    rows, cols = shape
    flat = rng.standard_normal((rows, cols))
    if rows < cols:
        flat = flat.T
    q, r = np.linalg.qr(flat)
    # sign fix makes the draw uniform over the orthogonal group
    q = q * np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    return scale * q
