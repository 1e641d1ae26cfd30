"""Root-seed split scheme.

Every random stream of a run derives from one root seed. Component streams
are children of ``SeedSequence(root)`` keyed by a fixed component id, so a
partial rerun of one component reproduces exactly:

    env     -> spawn key (0,)    environment resets
    agent   -> spawn key (1,)    network init, policy noise, resets, expansions
    sampler -> spawn key (2,)    replay batch draws
    eval    -> spawn key (3,)    evaluation episode seeds
    probe   -> spawn key (4,)    dormant-ratio probe batches
    mc      -> spawn key (5, k)  Monte Carlo seed k
    heatmap -> spawn key (6, s)  bucket subsampling at heatmap checkpoint s
"""
import numpy as np

COMPONENTS = {
    'env': 0,
    'agent': 1,
    'sampler': 2,
    'eval': 3,
    'probe': 4,
    'mc': 5,
    'heatmap': 6,
}


def child_seed(root: int, component: str, *extra: int) -> np.random.SeedSequence:
    key = (COMPONENTS[component], *extra)
    return np.random.SeedSequence(entropy=int(root), spawn_key=key)


def child_rng(root: int, component: str, *extra: int) -> np.random.Generator:
    return np.random.default_rng(child_seed(root, component, *extra))


def int_seed(rng: np.random.Generator) -> int:
    """Draw a plain integer seed (for env resets) from a generator."""
    return int(rng.integers(0, 2**31 - 1))
