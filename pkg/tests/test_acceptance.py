"""Acceptance criteria AC1-AC10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or ``python3 tests/test_acceptance.py``.
"""

import csv
import time

import numpy as np
from scipy.linalg import expm

from conftest import H, X, Z, dist, on, oracle_schedule, record, zz_target
from test_circuit import random_circuit
from vzmodel.circuit import AxisAngle, Circuit, Graph, Schedule, T, W, ZZCoupling
from vzmodel.cli import main as cli_main
from vzmodel.compiler import absorb_x_rotations, compile, merge_aux_rotations, optimize_schedule
from vzmodel.coupling import magic_basis_oracle, solve_sinc, synth_coupling_layer
from vzmodel.simulate import circuit_state, circuit_unitary, output_distribution, run_schedule, schedule_unitary, tvd
from vzmodel.single_qubit import solve_vu_angles, synth_single_qubit_layer
from vzmodel.supremacy import compile_alternating, compile_homogeneous, gen_iqp, iqp_distribution

I2 = np.eye(2)


def test_ac1_single_qubit_reconstruction():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    sizes_ok = True
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        a = rng.uniform(0.3, 3)
        axis = AxisAngle(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        mask = tuple(q for q in range(n) if rng.random() < 0.5) or (int(rng.integers(n)),)
        layers, ph = synth_single_qubit_layer(axis, mask, a, n)
        sizes_ok &= len(layers) == 3
        u = oracle_schedule(Schedule(n, a, layers, global_phase=ph))
        worst = max(worst, dist(u, on({q: axis.matrix() for q in mask}, n)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 30 and sizes_ok
    record("AC1", ok, f"max distance {worst:.2e} over 1000 three-layer syntheses, {elapsed:.1f} s")
    assert ok


def test_ac2_named_gates():
    errs = []
    for name, axis, gate in (("T", AxisAngle(0.0, 0.0, np.pi / 8), np.diag([1, np.exp(1j * np.pi / 4)])),
                             ("H", AxisAngle(np.pi / 8, 0.0, np.pi / 2), H)):
        ang = solve_vu_angles(axis, 1.0)
        errs.append(abs(ang.psi - (axis.theta + ang.alpha) / 2))
        errs.append(abs(ang.alpha_prime - np.pi / 2))
        layers, ph = synth_single_qubit_layer(axis, (0,), 1.0, 1)
        errs.append(dist(oracle_schedule(Schedule(1, 1.0, layers, global_phase=ph)), gate))
    ok = max(errs) < 1e-12
    record("AC2", ok, f"max angle/matrix error {max(errs):.2e} for T and Hadamard")
    assert ok


def test_ac3_coupling_reconstruction():
    n = 4
    masks = [((0, 1), (2, 3)), ((0, 1),), ((1, 2),), ((2, 3),)]
    worst, most, idle = 0.0, 0, 0.0
    for m in range(1, 65):
        C = m * np.pi / 64
        for pairs in masks:
            layers, ph = synth_coupling_layer(C, pairs, 1.0, n)
            most = max(most, len(layers))
            u = oracle_schedule(Schedule(n, 1.0, layers, global_phase=ph))
            worst = max(worst, dist(u, zz_target(C, pairs, n)))
            coupled = {q for e in pairs for q in e}
            for q in set(range(n)) - coupled:
                idle = max(idle, _idle_error(u, q, n))
    ok = worst < 1e-8 and most <= 6 and idle < 1e-8
    record("AC3", ok, f"max distance {worst:.2e}, at most {most} layers, uncoupled deviation {idle:.1e}")
    assert ok


def _idle_error(u, q, n):
    # u restricted to qubit q: with the rest fixed at |0..0>, the 2x2 block must be ∝ I
    idx = [0, 1 << q]
    b = u[np.ix_(idx, idx)]
    return float(max(abs(b[0, 1]), abs(b[1, 0]), abs(b[0, 0] - b[1, 1])))


def test_ac4_magic_basis():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        rep = magic_basis_oracle(rng.uniform(0.1, 3), rng.uniform(-3, 3), rng.uniform(0, 6))
        worst = max(worst, rep.max_entry_error, rep.max_off_support)
    ok = worst < 1e-10
    record("AC4", ok, f"max entry / off-pattern error {worst:.2e} over 1000 (a, b, t)")
    assert ok


def test_ac5_sinc_solvability(tmp_path):
    start = time.perf_counter()
    out = tmp_path / "sinc.csv"
    cli_main(["solve-sinc", "--step", "0.01", "-o", str(out)])
    rows = [r for r in csv.DictReader(out.open()) if float(r["C"]) >= 0.01 - 1e-12]
    missing = []
    for r in rows:
        C = float(r["C"])
        found = False
        for k in range(4):
            t = solve_sinc(C, k, 1.0)
            if t is None:
                continue
            d = C + k * np.pi
            x = np.hypot(2 * t, d)
            found |= abs(np.sin(x) / x - np.sin(d) / d) < 1e-12
        if not found:
            missing.append(C)
    spot = solve_sinc(np.pi, 0, 1.0)
    spot_ok = abs(spot - np.pi * np.sqrt(3) / 2) < 1e-12
    elapsed = time.perf_counter() - start
    ok = not missing and spot_ok and elapsed < 10 and len(rows) == 314
    gap = f"no root for {len(missing)} of {len(rows)} values, C in [{min(missing):.2f}, {max(missing):.2f}]" \
        if missing else f"all {len(rows)} values solvable"
    record("AC5", ok, f"{gap}; t(π, k=0) check {'ok' if spot_ok else 'off'}; {elapsed:.1f} s")
    assert ok


def test_ac6_ugs_layer():
    c = Circuit(Graph.chain(6), [[W((0, 5)), T((1, 2)), ZZCoupling(np.pi / 8, ((3, 4),))]])
    sched, _ = compile(c)
    u_err = dist(oracle_schedule(sched), circuit_unitary(c))
    ok = len(sched) <= 18 and u_err < 1e-8
    record("AC6", ok, f"{len(sched)} applied layers (bound 18), distance {u_err:.1e}")
    assert ok


def test_ac7_end_to_end():
    rng = np.random.default_rng(7)
    worst_tvd, worst_pass, grew = 0.0, 0.0, False
    for _ in range(20):
        c = random_circuit(rng, 5, 4)
        sched, _ = compile(c)
        worst_tvd = max(worst_tvd, tvd(output_distribution(run_schedule(sched)),
                                       output_distribution(circuit_state(c))))
        u = schedule_unitary(sched)
        for p in (absorb_x_rotations, merge_aux_rotations, optimize_schedule):
            out = p(sched)
            grew |= len(out) > len(sched)
            worst_pass = max(worst_pass, float(np.abs(schedule_unitary(out) - u).max()))
    ok = worst_tvd < 1e-8 and worst_pass < 1e-10 and not grew
    record("AC7", ok, f"max TVD {worst_tvd:.1e} over 20 circuits, pass deviation {worst_pass:.1e}, "
                      f"{'a pass grew a schedule' if grew else 'no pass grew a schedule'}")
    assert ok


def test_ac8_swap_identities():
    # big-endian two-qubit matrices: the first Kronecker factor is qubit 1
    w1, w2 = np.kron(H, I2), np.kron(I2, H)
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])
    cnot12 = np.kron(p0, I2) + np.kron(p1, X)
    cnot21 = np.kron(I2, p0) + np.kron(X, p1)
    cz = np.diag([1, 1, 1, -1])
    swap = np.eye(4)[[0, 2, 1, 3]]
    form_a = cnot12 @ cnot21 @ cnot12
    cz_zz = expm(-1j * np.pi / 4 * (np.kron(Z, I2) + np.kron(I2, Z))) @ expm(1j * np.pi / 4 * np.kron(Z, Z))
    form_b = (w2 @ cz @ w2) @ (w1 @ cz @ w1) @ (w2 @ cz @ w2)
    form_c = (w2 @ cz_zz @ w2) @ (w1 @ cz_zz @ w1) @ (w2 @ cz_zz @ w2)
    forms = [form_a, form_b, form_c, swap]
    e_forms = max(dist(f, g) for f in forms for g in forms)

    a = 1.0
    t = np.pi / (2 * np.sqrt(2) * a)
    u12 = expm(-1j * t * (a * np.kron(I2, X) + a * np.kron(Z, Z)))
    u21 = expm(-1j * t * (a * np.kron(X, I2) + a * np.kron(Z, Z)))
    cy12 = np.kron(p0, I2) + np.kron(p1, Z @ X)
    e_u12 = float(np.abs(u12 - (-1j) * w2 @ cy12).max())
    prod = u12 @ w1 @ w2 @ u21 @ u12 @ w2
    e_prod = float(np.abs(prod - 1j * cz @ swap).max())
    ok = e_forms < 1e-12 and e_u12 < 1e-10 and e_prod < 1e-10
    record("AC8", ok, f"SWAP forms {e_forms:.1e}, U12 block {e_u12:.1e}, five-factor product {e_prod:.1e}")
    assert ok


def test_ac9_supremacy_layer_counts():
    bad = []
    for n in range(3, 11):
        inst = gen_iqp(n, n)
        hom, _ = compile_homogeneous(inst)
        alt, _ = compile_alternating(inst)
        ch, ca = hom.categories(), alt.categories()
        if len(hom) != 40 * n + 10 or ch["coupling"] != 18 * n or ch["swap"] != 22 * n or ch["single_qubit"] != 10:
            bad.append(("homogeneous", n, len(hom), ch))
        if len(alt) != 28 * n + 10 or ca["coupling"] != 18 * n or ca["swap"] != 10 * n or ca["single_qubit"] != 10:
            bad.append(("alternating", n, len(alt), ca))
    ok = not bad
    record("AC9", ok, "40n+10 and 28n+10 with 18n/22n/10n/10 split for n=3..10" if ok else f"mismatch {bad[0]}")
    assert ok


def test_ac10_supremacy_distributions():
    start = time.perf_counter()
    worst = 0.0
    for n in range(2, 6):
        for seed in range(20):
            inst = gen_iqp(n, seed)
            p = iqp_distribution(inst)
            for build in (compile_homogeneous, compile_alternating):
                sched, _ = build(inst)
                worst = max(worst, tvd(output_distribution(run_schedule(sched)), p))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 120
    record("AC10", ok, f"max TVD {worst:.1e} over n=2..5, 20 seeds, both variants, {elapsed:.1f} s")
    assert ok


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_ac")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[1][2:]))
    failed = 0
    for fn in tests:
        try:
            if fn is test_ac5_sinc_solvability:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
    raise SystemExit(1 if failed else 0)
