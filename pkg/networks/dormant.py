"""Dormant-neuron ratio over a network's hidden activations."""
import numpy as np

DEFAULT_THRESHOLD = 0.025
SCORE_EPS = 1e-9


def neuron_scores(activations):
    """Mean |activation| per neuron divided by the layer's mean score."""
    scores = np.abs(activations).mean(axis=0)
    return scores / (scores.mean() + SCORE_EPS)


def layer_dormant_counts(activations_by_layer, threshold=DEFAULT_THRESHOLD):
    """[(dormant, total)] per hidden layer; an all-zero layer is fully dormant."""
    counts = []
    for activations in activations_by_layer:
        scores = neuron_scores(activations)
        counts.append((int(np.count_nonzero(scores <= threshold)), scores.shape[0]))
    return counts


def dormant_ratio(network, probe_batch, threshold=DEFAULT_THRESHOLD) -> float:
    """Fraction of dormant neurons across every hidden layer of ``network``.

    ``probe_batch`` is the argument tuple of ``network.hidden_activations``
    (states for the actor, (states, actions) for a critic).
    """
    if not isinstance(probe_batch, tuple):
        probe_batch = (probe_batch,)
    if np.asarray(probe_batch[0]).shape[0] == 0:
        raise ValueError('probe batch must be nonempty')
    counts = layer_dormant_counts(network.hidden_activations(*probe_batch), threshold)
    dormant = sum(d for d, _ in counts)
    total = sum(n for _, n in counts)
    return dormant / total if total else 0.0
