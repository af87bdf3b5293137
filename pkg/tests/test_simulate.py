import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle_layer
from vzmodel.circuit import AppliedLayer, Schedule
from vzmodel.errors import DimensionError
from vzmodel.simulate import (
    apply_layer, layer_unitary, output_distribution, plus_state, run_schedule, schedule_unitary,
    tvd, unitary_distance_up_to_phase,
)


def random_layer(rng, n, partial_x=False):
    pairs = [(i, i + 1) for i in range(0, n - 1, 2)] if rng.random() < 0.5 else \
        [(i, i + 1) for i in range(1, n - 1, 2)]
    pairs = [p for p in pairs if rng.random() < 0.7]
    v = tuple(q for q in range(n) if rng.random() < 0.5)
    x = tuple(q for q in range(n) if rng.random() < 0.6) if partial_x else None
    return AppliedLayer(rng.uniform(0.05, 4), b=rng.normal(), c=rng.normal(), w_mask=tuple(pairs),
                        v_mask=v, x_mask=x)


def test_structural_and_dense_agree_with_expm(rng):
    for _ in range(500):
        n = int(rng.integers(1, 7))
        layer = random_layer(rng, n, partial_x=rng.random() < 0.3)
        a = rng.uniform(0.2, 2)
        ref = oracle_layer(layer, a, n)
        assert np.abs(layer_unitary(layer, a, n) - ref).max() < 1e-10
        assert np.abs(layer_unitary(layer, a, n, method="dense") - ref).max() < 1e-10


def test_full_x_turn_is_minus_identity():
    u = layer_unitary(AppliedLayer(np.pi), 1.0, 3)
    assert np.allclose(u, -np.eye(8))


def test_state_and_unitary_paths_agree(rng):
    n = 5
    s = Schedule(n, 0.8, [random_layer(rng, n) for _ in range(6)], global_phase=0.4)
    assert np.allclose(run_schedule(s), schedule_unitary(s) @ plus_state(n))
    assert np.isclose(np.linalg.norm(run_schedule(s)), 1.0)


def test_empty_schedule_gives_flat_distribution():
    p = output_distribution(run_schedule(Schedule(3, 1.0, [])))
    assert np.allclose(p, 1 / 8)


def test_z_only_pulse_keeps_plus_state_distribution():
    # a pure Z field rotates |+> about Z, which changes X-basis data but not Z-basis probabilities
    psi = apply_layer(plus_state(2), AppliedLayer(1e-12, c=1e6, v_mask=(0, 1)), 1.0, 2)
    assert np.allclose(output_distribution(psi), 0.25, atol=1e-6)


def test_distance_examples():
    u = np.eye(4)
    assert unitary_distance_up_to_phase(np.exp(0.7j) * u, u) < 1e-14
    # a CZ is not a global phase away from the identity
    assert unitary_distance_up_to_phase(np.diag([1, 1, 1, -1]), u) > 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=4, max_size=4), st.lists(st.floats(0, 1), min_size=4, max_size=4))
def test_tvd_is_a_metric_on_distributions(p, q):
    p = np.array(p) + 1e-3
    q = np.array(q) + 1e-3
    p, q = p / p.sum(), q / q.sum()
    assert tvd(p, p) == 0
    assert np.isclose(tvd(p, q), tvd(q, p))
    assert 0 <= tvd(p, q) <= 1


def test_tvd_rejects_bad_inputs():
    with pytest.raises(DimensionError):
        tvd([1.0], [0.5, 0.5])
    with pytest.raises(ValueError):
        tvd([1.5, -0.5], [0.5, 0.5])


def test_dimension_ceiling():
    with pytest.raises(DimensionError):
        schedule_unitary(Schedule(13, 1.0, []))
