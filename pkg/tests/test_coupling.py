import numpy as np
import pytest
from scipy.linalg import expm

from conftest import X, Z, dist, oracle_schedule, zz_target
from vzmodel.circuit import Schedule
from vzmodel.coupling import (
    X_MAX, feasibility_grid, find_coupling_params, kak_params, kak_unitary, magic_basis_oracle,
    solve_sinc, synth_coupling_layer,
)
from vzmodel.errors import CouplingInfeasible, SynthesisError


def residual(C, k, t, a=1.0):
    x = 2 * a * t
    d = C + k * np.pi
    return np.sin(np.hypot(x, d)) / np.hypot(x, d) - np.sin(d) / d


def test_closed_form_root_at_pi():
    t = solve_sinc(np.pi, 0, 1.0)
    assert t == pytest.approx(np.pi * np.sqrt(3) / 2, abs=1e-12)
    assert solve_sinc(np.pi, 0, 2.0) == pytest.approx(np.pi * np.sqrt(3) / 4, abs=1e-12)


def test_roots_satisfy_the_equation():
    for C in np.linspace(0.05, np.pi, 40):
        for k in range(4):
            t = solve_sinc(C, k, 1.0)
            if t is not None:
                assert abs(residual(C, k, t)) < 1e-12
                assert 0 < 2 * t <= X_MAX


def test_feasibility_is_stable_under_wider_scan():
    grid = np.arange(1, 315) * 0.01
    for C in grid:
        for k in range(4):
            assert (solve_sinc(C, k, 1.0) is None) == (solve_sinc(C, k, 1.0, x_max=2 * X_MAX) is None)
    assert feasibility_grid(grid) == feasibility_grid(grid)


def test_quarter_pi_coupling_is_not_solvable():
    # exp(-iπ/2 ZZ) = -i Z⊗Z is a local gate; the symmetric pulse cannot reach it for any k
    with pytest.raises(CouplingInfeasible):
        find_coupling_params(np.pi / 2, 1.0)


def test_feasibility_grid_reports_every_k():
    rows = feasibility_grid([0.5, np.pi / 2])
    assert rows[0]["k"] is not None and rows[1]["k"] is None
    assert set(rows[0]["feasible"]) == {0, 1, 2, 3}


def test_solution_reproduces_two_qubit_target(rng):
    for C in rng.uniform(0.02, np.pi, 30):
        try:
            sol = find_coupling_params(C, 1.0)
        except CouplingInfeasible:
            continue
        pulse = expm(-1j * sol.t * (np.kron(X, np.eye(2)) + np.kron(np.eye(2), X) + sol.b * np.kron(Z, Z)))
        assert sol.t > 0 and sol.t_prime > 0
        # the pulse is the target up to single-qubit X rotations on both sides
        xx = expm(-1j * (np.pi - sol.beta) * (np.kron(X, np.eye(2)) + np.kron(np.eye(2), X)))
        assert dist(xx @ pulse @ xx, zz_target(C, [(0, 1)], 2)) < 1e-9


def test_kak_identity_random(rng):
    worst = 0.0
    for _ in range(1000):
        a, b, t = rng.uniform(0.1, 3), rng.uniform(-3, 3), rng.uniform(0.01, 5)
        p = kak_params(a, b, t)
        u = expm(-1j * t * (a * (np.kron(X, np.eye(2)) + np.kron(np.eye(2), X)) + b * np.kron(Z, Z)))
        worst = max(worst, np.abs(kak_unitary(p) - u).max())
    assert worst < 1e-9


def test_kak_uncoupled_limit():
    p = kak_params(1.0, 0.0, 0.7)
    assert p.omega == 0 and p.D2 == 0 and p.D3 == 0


def test_magic_basis_oracle(rng):
    for _ in range(200):
        assert magic_basis_oracle(rng.uniform(0.1, 3), rng.uniform(-3, 3), rng.uniform(0, 5)).ok


@pytest.mark.parametrize("n,pairs", [(2, [(0, 1)]), (4, [(0, 1), (2, 3)]), (4, [(1, 2)]), (3, [(0, 1)])])
@pytest.mark.parametrize("C", [np.pi / 64, 0.7, np.pi / 2, 1.9, np.pi])
def test_layer_synthesis_matches_target(n, pairs, C):
    layers, ph = synth_coupling_layer(C, pairs, 1.0, n)
    assert len(layers) <= 6
    u = oracle_schedule(Schedule(n, 1.0, layers, global_phase=ph))
    assert np.abs(u - zz_target(C, pairs, n)).max() < 1e-8


def test_fully_coupled_feasible_layer_uses_three_pulses():
    layers, _ = synth_coupling_layer(0.5, [(0, 1)], 1.0, 2)
    assert len(layers) == 3


def test_uniform_shape_is_six_layers():
    for C in (0.3, np.pi / 2, 2.0):
        layers, _ = synth_coupling_layer(C, [(0, 1)], 1.0, 4, uniform=True)
        assert len(layers) == 6


def test_empty_mask_and_non_pairwise_mask():
    assert synth_coupling_layer(0.4, [], 1.0, 3) == ([], 0.0)
    with pytest.raises(SynthesisError):
        synth_coupling_layer(0.4, [(0, 1), (1, 2)], 1.0, 3)
    with pytest.raises((ValueError, SynthesisError)):
        synth_coupling_layer(4.0, [(0, 1)], 1.0, 2)
