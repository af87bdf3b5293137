"""Independent dense oracles (Kronecker products + scipy expm) shared by the tests."""

import numpy as np
import pytest
from scipy.linalg import expm

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)

ACCEPTANCE_LINES: list[str] = []


def on(ops: dict, n: int) -> np.ndarray:
    """Tensor product with ops[q] on qubit q (qubit 0 = least significant bit)."""
    out = np.eye(1, dtype=complex)
    for q in range(n - 1, -1, -1):
        out = np.kron(out, ops.get(q, I2))
    return out


def oracle_layer(layer, a: float, n: int) -> np.ndarray:
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for q in range(n):
        if layer.x_mask is None or q in layer.x_mask:
            h += a * on({q: X}, n)
    for q in layer.v_mask:
        h += layer.c * on({q: Z}, n)
    for i, j in layer.w_mask:
        h += layer.b * on({i: Z, j: Z}, n)
    return expm(-1j * layer.t * h)


def oracle_schedule(sched) -> np.ndarray:
    u = np.eye(2 ** sched.n, dtype=complex)
    for layer in sched.layers:
        u = oracle_layer(layer, sched.a, sched.n) @ u
    return np.exp(1j * sched.global_phase) * u


def zz_target(C: float, pairs, n: int) -> np.ndarray:
    h = sum((on({i: Z, j: Z}, n) for i, j in pairs), np.zeros((2 ** n, 2 ** n)))
    return expm(-1j * C * h)


def dist(u, v) -> float:
    ph = np.angle(np.trace(v.conj().T @ u))
    return float(np.linalg.norm(u - np.exp(1j * ph) * v, 2))


def record(label: str, ok: bool, detail: str) -> None:
    line = f"{label}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
