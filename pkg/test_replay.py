import math

import numpy as np
import pytest

from models.transition import BufferSchema, Transition
from replay import (UNBOUNDED, DecayedSampler, DecayLaw, UniformSampler, cutoff_age,
                    make_sampler, weight, weights)
from replay.snapshot import read_snapshot, restore_into, write_snapshot
from utils.errors import (EmptyBufferError, ParameterRangeError, SchemaError,
                          UnknownIndexError)


def _fill(sampler, n, make_transition):
    for k in range(n):
        sampler.push(make_transition(float(k)))
    return sampler


def _oracle_cutoff(epsilon, tau):
    value, age = 1.0, 0
    while value > tau:
        value *= 1.0 - epsilon
        age += 1
    return age


def test_first_push_gets_index_zero(schema, make_transition):
    sampler = UniformSampler(4, schema)
    assert sampler.push(make_transition()) == 0
    assert len(sampler) == 1


def test_fifo_eviction_keeps_newest(schema, make_transition):
    sampler = _fill(UniformSampler(2, schema), 3, make_transition)
    assert list(sampler.storage.live_indices()) == [1, 2]
    assert sampler.now == 2
    with pytest.raises(UnknownIndexError):
        sampler.sample_probability(0)


def test_live_range_after_many_pushes(schema, make_transition):
    sampler = _fill(UniformSampler(50, schema), 137, make_transition)
    assert list(sampler.storage.live_indices()) == list(range(87, 137))


def test_push_rejects_wrong_dimensions(schema):
    sampler = UniformSampler(4, schema)
    bad = Transition(state=np.zeros(3), action=np.zeros(1), reward=0.0,
                     next_state=np.zeros(3), done=False)
    with pytest.raises(SchemaError):
        sampler.push(bad)


def test_weight_examples():
    assert weight(DecayLaw(0.3, 0.1), 0) == 1.0
    assert weight(DecayLaw(0.5, 0.1), 2) == pytest.approx(0.25)
    assert weight(DecayLaw(1e-4, 0.01), 100_000) == 0.01


def test_weight_rejects_negative_age():
    with pytest.raises(ParameterRangeError):
        weight(DecayLaw(0.5, 0.1), -1)


def test_cutoff_examples():
    assert cutoff_age(0.5, 0.1) == 4
    assert cutoff_age(1e-4, 0.01) == _oracle_cutoff(1e-4, 0.01) == 46050
    assert cutoff_age(0.3, 1.0) == 0
    assert cutoff_age(0.3, 0.0) == UNBOUNDED


@pytest.mark.parametrize('epsilon,tau', [(0.5, 0.1), (0.01, 0.2), (1e-3, 0.05), (0.2, 0.5)])
def test_cutoff_matches_iterated_multiplication(epsilon, tau):
    age = cutoff_age(epsilon, tau)
    assert age == _oracle_cutoff(epsilon, tau)
    q = math.log1p(-epsilon)
    assert math.exp(age * q) <= tau < math.exp((age - 1) * q)


@pytest.mark.parametrize('epsilon,tau', [(0.0, 0.1), (1.0, 0.1), (0.5, -0.1), (0.5, 1.5)])
def test_cutoff_rejects_bad_parameters(epsilon, tau):
    with pytest.raises(ParameterRangeError):
        cutoff_age(epsilon, tau)


def test_weight_floor_beyond_cutoff():
    law = DecayLaw(0.5, 0.1)
    ages = np.arange(0, 12)
    w = weights(law, ages)
    assert np.all(np.diff(w) <= 0)
    assert np.all(w[ages >= law.cutoff] == 0.1)
    assert np.all(np.diff(w[ages < law.cutoff]) < 0)


def test_probability_example(schema, make_transition):
    sampler = _fill(DecayedSampler(10, schema, 0.5, 0.1), 3, make_transition)
    probs = [sampler.sample_probability(i) for i in range(3)]
    assert probs == pytest.approx([0.25 / 1.75, 0.5 / 1.75, 1.0 / 1.75], abs=1e-12)


def test_single_item_probability_is_one(schema, make_transition):
    sampler = _fill(DecayedSampler(10, schema, 0.5, 0.1), 1, make_transition)
    assert sampler.sample_probability(0) == 1.0
    assert np.all(sampler.sample_batch(16, np.random.default_rng(0)) == 0)


def test_tau_one_is_uniform(schema, make_transition):
    sampler = _fill(DecayedSampler(20, schema, 1e-9, 1.0), 7, make_transition)
    assert sampler.probabilities() == pytest.approx(np.full(7, 1 / 7), abs=1e-12)


def test_sampling_empty_buffer_raises(schema, rng):
    for kind in ('uniform', 'decay', 'per'):
        sampler = make_sampler(kind, 8, schema, epsilon=0.1, tau=0.1)
        with pytest.raises(EmptyBufferError):
            sampler.sample_batch(4, rng)


def test_normalization_after_evictions(schema, make_transition):
    rng = np.random.default_rng(7)
    for _ in range(20):
        eps = float(rng.uniform(1e-3, 0.5))
        tau = float(rng.uniform(0.0, 0.9))
        capacity = int(rng.integers(5, 200))
        sampler = _fill(DecayedSampler(capacity, schema, eps, tau), int(rng.integers(1, 500)),
                        make_transition)
        assert math.fsum(sampler.probabilities()) == pytest.approx(1.0, abs=1e-12)


def test_fast_mass_matches_linear_scan(schema, make_transition):
    """Fast two-region probabilities agree with the linear scan to 1e-12."""
    rng = np.random.default_rng(11)
    for _ in range(100):
        eps = float(10 ** rng.uniform(-3, -0.3))
        tau = float(rng.choice([0.0, rng.uniform(0.0, 0.9)]))
        capacity = int(rng.integers(1, 1001))
        pushes = int(rng.integers(1, 1500))
        sampler = DecayedSampler(capacity, schema, eps, tau, rebuild_interval=97)
        _fill(sampler, pushes, make_transition)
        oracle = sampler.oracle_weights() / math.fsum(sampler.oracle_weights())
        assert sampler.total_mass() == pytest.approx(sampler.linear_mass(), rel=1e-9)
        assert np.max(np.abs(sampler.probabilities() - oracle)) < 1e-12


def test_shift_stationarity_in_head(schema, make_transition):
    sampler = _fill(DecayedSampler(100, schema, 0.05, 0.01), 60, make_transition)
    now = sampler.now
    ratio = sampler.sample_probability(now - 3) / sampler.sample_probability(now - 10)
    assert ratio == pytest.approx((1 - 0.05) ** (3 - 10), rel=1e-12)


def test_region_masses_track_rebuild(schema, make_transition):
    sampler = _fill(DecayedSampler(500, schema, 0.01, 0.2), 400, make_transition)
    flat, head, head_size = sampler.region_masses()
    assert head_size == sampler.law.cutoff
    assert flat == pytest.approx((400 - head_size) * 0.2)
    sampler.rebuild_masses()
    assert sampler.region_masses()[1] == pytest.approx(head, rel=1e-12)


def test_decayed_draws_match_oracle_frequencies(schema, make_transition):
    sampler = _fill(DecayedSampler(100, schema, 0.05, 0.1), 100, make_transition)
    rng = np.random.default_rng(3)
    draws = 1_000_000
    fast = np.bincount(sampler.sample_batch(draws, rng), minlength=100) / draws
    oracle = np.bincount(sampler.sample_batch_oracle(draws, rng), minlength=100) / draws
    exact = sampler.probabilities()
    assert 0.5 * np.abs(fast - exact).sum() < 0.01
    assert 0.5 * np.abs(oracle - exact).sum() < 0.01


def test_oracle_frequencies_within_binomial_band(schema, make_transition):
    sampler = _fill(DecayedSampler(10, schema, 0.2, 0.05), 10, make_transition)
    draws = 1_000_000
    freq = np.bincount(sampler.sample_batch_oracle(draws, np.random.default_rng(5)),
                       minlength=10) / draws
    p = sampler.probabilities()
    assert np.all(np.abs(freq - p) <= 4 * np.sqrt(p * (1 - p) / draws))


def test_three_item_frequencies(schema, make_transition):
    sampler = _fill(DecayedSampler(10, schema, 0.5, 0.1), 3, make_transition)
    freq = np.bincount(sampler.sample_batch(200_000, np.random.default_rng(9)),
                       minlength=3) / 200_000
    assert freq == pytest.approx([0.143, 0.286, 0.571], abs=0.01)


def test_get_batch_stacks_arrays(schema, make_transition):
    sampler = _fill(UniformSampler(10, schema), 5, make_transition)
    batch = sampler.get_batch([1, 3, 3])
    assert batch.states.shape == (3, 2)
    assert batch.states[:, 0].tolist() == [1.0, 3.0, 3.0]
    assert np.all(batch.weights == 1.0)
    with pytest.raises(UnknownIndexError):
        sampler.get_batch([7])


def test_snapshot_round_trip(tmp_path, make_transition):
    schema = BufferSchema(2, 1)
    sampler = _fill(DecayedSampler(4, schema, 0.1, 0.1), 6, make_transition)
    path = write_snapshot(sampler, tmp_path / 'buffer.fogrply')
    read_schema, columns = read_snapshot(path)
    assert read_schema == schema
    assert columns['insert_index'].tolist() == [2, 3, 4, 5]

    restored = restore_into(UniformSampler(4, schema), columns)
    assert list(restored.storage.live_indices()) == [2, 3, 4, 5]
    assert np.array_equal(restored.get_batch([4]).states, sampler.get_batch([4]).states)
