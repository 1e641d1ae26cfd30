"""Closed forms and series for how often a transition gets replayed.

Sampling model: after every single push, beta indices are drawn i.i.d. from
the buffer's current law. Under uniform replay the t-th pushed transition
(1-based) then expects beta * (H_N - H_{t-1}) draws over N pushes; under pure
exponential decay its expectation is a convergent series bounded by
beta / eps.
"""
import math
from dataclasses import dataclass

import numpy as np

from utils.errors import ParameterRangeError

SERIES_STOP = 1e-12
CERTIFY_TOLERANCE = 1e-6
SERIES_CHUNK = 4096


def harmonic(n: int) -> float:
    """H_n = sum_{k=1..n} 1/k."""
    if n < 1:
        raise ParameterRangeError(f'harmonic(n) needs n >= 1, got {n}')
    return math.fsum(1.0 / k for k in range(1, int(n) + 1))


def harmonic_table(n: int) -> np.ndarray:
    """Array H with H[k] = H_k for k in 0..n (H_0 = 0)."""
    table = np.zeros(int(n) + 1)
    table[1:] = np.cumsum(1.0 / np.arange(1, int(n) + 1))
    return table


def harmonic_sandwich(n: int):
    """(ln n + 1/n, ln n + 1), strictly around H_n for n >= 2."""
    return math.log(n) + 1.0 / n, math.log(n) + 1.0


def expected_samples_uniform(t: int, N: int, beta: float) -> float:
    """beta * (H_N - H_{t-1}) for the t-th of N transitions."""
    if not 1 <= t <= N:
        raise ParameterRangeError(f'need 1 <= t <= N, got t={t}, N={N}')
    return beta * math.fsum(1.0 / i for i in range(int(t), int(N) + 1))


def uniform_count_variance(t: int, N: int, beta: float) -> float:
    """Variance of the uniform-replay count: beta * sum_{s=t..N} (1/s)(1 - 1/s)."""
    if not 1 <= t <= N:
        raise ParameterRangeError(f'need 1 <= t <= N, got t={t}, N={N}')
    s = np.arange(int(t), int(N) + 1, dtype=np.float64)
    return float(beta * np.sum((1.0 / s) * (1.0 - 1.0 / s)))


def thm1_bounds(t: int, N: int):
    """Strict (lower, upper) bounds on E[n_t] / beta for uniform replay.

    t = 1 uses the earliest-transition corollary (ln N + 1/N, ln N + 1).
    """
    if t <= 1:
        return harmonic_sandwich(N)
    ratio = math.log(N / (t - 1))
    return ratio + 1.0 / N - 1.0, ratio + 1.0 - 1.0 / (t - 1)


@dataclass
class SeriesEstimate:
    """Truncated series value with a certified tail bound."""

    value: float
    tail_bound: float
    terms: int
    certified: bool

    def __float__(self):
        return self.value


def expected_samples_decayed(i: int, epsilon: float, beta: float = 1.0,
                             horizon: int = 10_000_000) -> SeriesEstimate:
    """E[n_i] = beta * sum_t eps (1-eps)^t / (1 - (1-eps)^(i+t)) under tau = 0.

    Summation stops once the geometric tail bound drops below 1e-12 of the
    running sum or ``horizon`` terms were added; ``certified`` reports whether
    the tail is within 1e-6 relative.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ParameterRangeError(f'epsilon must lie in (0,1], got {epsilon}')
    if i < 1:
        raise ParameterRangeError(f'transition index i must be >= 1, got {i}')
    if epsilon == 1.0:
        # only the draw right after its own push can hit it, with prob 1/1 for i = 1
        return SeriesEstimate(value=beta * (1.0 if i == 1 else 0.0), tail_bound=0.0,
                              terms=1, certified=True)

    log_q = math.log1p(-epsilon)
    total = 0.0
    start = 0
    tail = math.inf
    while start < horizon:
        t = np.arange(start, min(start + SERIES_CHUNK, horizon), dtype=np.float64)
        numer = epsilon * np.exp(t * log_q)
        denom = -np.expm1((i + t) * log_q)
        terms = numer / denom
        partial = np.cumsum(terms) + total
        # the remaining terms are dominated by q^(t+1) / (1 - q^(i+t))
        tails = np.exp((t + 1) * log_q) / denom
        done = np.nonzero(tails < SERIES_STOP * partial)[0]
        if done.size:
            k = int(done[0])
            total = float(partial[k])
            tail = float(tails[k])
            start += k + 1
            break
        total = float(partial[-1])
        tail = float(tails[-1])
        start += t.shape[0]

    return SeriesEstimate(
        value=beta * total,
        tail_bound=beta * tail,
        terms=start,
        certified=tail <= CERTIFY_TOLERANCE * total,
    )


def thm2_bound(epsilon: float, beta: float) -> float:
    """beta / eps: upper bound on any transition's expected draw count."""
    if not 0.0 < epsilon <= 1.0:
        raise ParameterRangeError(f'epsilon must lie in (0,1], got {epsilon}')
    return beta / epsilon
