import numpy as np
import pytest

from conftest import dist, oracle_schedule
from test_circuit import random_circuit
from vzmodel.circuit import AxisAngle, Circuit, Graph, Rotation, SWAP, T, W, ZZCoupling
from vzmodel.compiler import absorb_x_rotations, compile, merge_aux_rotations, optimize_schedule
from vzmodel.errors import CircuitError
from vzmodel.simulate import circuit_unitary, schedule_unitary


def ugs_layer(n):
    g = Graph.chain(n)
    return Circuit(g, [[W((0,)), T((1, 2)), ZZCoupling(np.pi / 8, ((3, 4),))]])


def test_ugs_layer_within_eighteen():
    for n in (5, 6):
        c = ugs_layer(n)
        sched, rep = compile(c)
        assert len(sched) <= 18
        assert rep.bound_check["within_bound"]
        assert dist(oracle_schedule(sched), circuit_unitary(c)) < 1e-9


def test_compiled_unitary_is_exact_including_phase(rng):
    c = random_circuit(rng, 4, 3)
    sched, _ = compile(c, a=0.7)
    assert np.abs(oracle_schedule(sched) - circuit_unitary(c)).max() < 1e-8


def test_report_counts_add_up(rng):
    sched, rep = compile(random_circuit(rng, 5, 2))
    assert rep.applied_layers == len(sched) == sum(rep.per_category.values())
    assert rep.effective_layers == 2
    assert set(rep.to_json()) >= {"effective_layers", "applied_layers", "per_category", "bound_check"}


def test_couplings_beyond_pi_wrap_with_sign():
    g = Graph.chain(2)
    c = Circuit(g, [[ZZCoupling(np.pi + 0.3, ((0, 1),))]])
    sched, _ = compile(c)
    assert np.abs(schedule_unitary(sched) - circuit_unitary(c)).max() < 1e-9
    zero = Circuit(g, [[ZZCoupling(np.pi, ((0, 1),))]])
    sched, _ = compile(zero)
    assert len(sched) == 0
    assert np.abs(schedule_unitary(sched) - circuit_unitary(zero)).max() < 1e-12


def test_empty_circuit_gives_empty_schedule():
    sched, rep = compile(Circuit(Graph.chain(3), []))
    assert len(sched) == 0 and rep.applied_layers == 0


def test_invalid_inputs():
    with pytest.raises(CircuitError):
        compile(Circuit(Graph.chain(3), [[ZZCoupling(0.1, ((0, 2),))]]))
    with pytest.raises(ValueError):
        compile(ugs_layer(5), a=0.0)
    with pytest.raises(CircuitError):
        compile(ugs_layer(5), variant="other")


def test_passes_preserve_unitary_and_never_grow(rng):
    for _ in range(10):
        c = random_circuit(rng, 4, 3)
        sched, _ = compile(c)
        u = schedule_unitary(sched)
        for p in (absorb_x_rotations, merge_aux_rotations, optimize_schedule):
            out = p(sched)
            assert len(out) <= len(sched)
            assert np.abs(schedule_unitary(out) - u).max() < 1e-10


def test_swap_gate_optimises_to_five_triples():
    c = Circuit(Graph.chain(2), [[SWAP(((0, 1),))]])
    raw, _ = compile(c)
    opt = optimize_schedule(raw)
    assert len(opt) < len(raw) and len(opt) == 19
    assert np.abs(schedule_unitary(opt) - circuit_unitary(c)).max() < 1e-9


def test_consecutive_couplings_share_one_aux_correction():
    g = Graph.chain(4)
    c = Circuit(g, [[ZZCoupling(0.3, ((0, 1),))], [ZZCoupling(0.5, ((0, 1),))], [ZZCoupling(0.9, ((0, 1),))]])
    raw, _ = compile(c)
    assert raw.categories()["aux"] == 9
    merged = merge_aux_rotations(raw)
    assert merged.categories()["aux"] == 3
    assert np.abs(schedule_unitary(merged) - schedule_unitary(raw)).max() < 1e-10


def test_aux_on_different_sets_is_kept():
    g = Graph.chain(4)
    c = Circuit(g, [[ZZCoupling(0.3, ((0, 1),))], [ZZCoupling(0.5, ((2, 3),))]])
    raw, _ = compile(c)
    assert merge_aux_rotations(raw).categories()["aux"] == raw.categories()["aux"] == 6


def test_no_aux_when_every_qubit_is_coupled():
    sched, _ = compile(Circuit(Graph.chain(4), [[ZZCoupling(0.3, ((0, 1), (2, 3)))]]))
    assert sched.categories()["aux"] == 0 and len(sched) == 3


def test_alternating_flag_is_carried():
    sched, _ = compile(Circuit(Graph.chain(2), [[Rotation(AxisAngle(0.1, 0.2, 0.3), (0,))]]), variant="alternating")
    assert sched.variant == "alternating"
    assert len(optimize_schedule(sched)) == len(sched)
