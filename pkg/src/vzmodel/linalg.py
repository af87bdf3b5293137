"""Dense 2x2 / 4x4 helpers shared by the synthesis passes and the simulator.

Qubit order is little-endian everywhere: qubit 0 is the least significant bit
of a basis index, so a two-qubit operator on (i, j) with i listed first is
``kron(op_j, op_i)``.
"""

from __future__ import annotations

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (X, Y, Z)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
T_GATE = np.diag([1.0, np.exp(1j * np.pi / 4)]).astype(complex)
CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
ZZ = np.kron(Z, Z)

TWO_PI = 2.0 * np.pi


def wrap(angle: float, period: float = TWO_PI) -> float:
    """Reduce an angle into [0, period)."""
    r = float(np.mod(angle, period))
    return 0.0 if np.isclose(r, period, rtol=0, atol=1e-15) else r


def su2(gamma: float, axis) -> np.ndarray:
    """exp(-i gamma n.sigma) for a unit 3-vector n."""
    nx, ny, nz = axis
    ns = nx * X + ny * Y + nz * Z
    return np.cos(gamma) * I2 - 1j * np.sin(gamma) * ns


def xrot(angle: float) -> np.ndarray:
    return su2(angle, (1.0, 0.0, 0.0))


def zrot(angle: float) -> np.ndarray:
    return su2(angle, (0.0, 0.0, 1.0))


def field_op(t: float, hx: float, hz: float) -> np.ndarray:
    """exp(-i t (hx X + hz Z)) in closed form."""
    w = np.hypot(hx, hz)
    if w == 0.0:
        return I2.copy()
    return su2(t * w, (hx / w, 0.0, hz / w))


def expm_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(-i t h) through an eigendecomposition of the Hermitian h."""
    if not np.allclose(h, h.conj().T, atol=1e-12):
        raise AssertionError("non-Hermitian generator")
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * t * evals)) @ evecs.conj().T


def pair_hamiltonian(hx_i: float, hx_j: float, hz_i: float, hz_j: float, jzz: float) -> np.ndarray:
    """hx_i X_i + hx_j X_j + hz_i Z_i + hz_j Z_j + jzz Z_i Z_j on (i=low, j=high)."""
    return (hx_i * np.kron(I2, X) + hx_j * np.kron(X, I2)
            + hz_i * np.kron(I2, Z) + hz_j * np.kron(Z, I2) + jzz * ZZ)


def rel_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Phase phi with a ~= exp(i phi) b (0 when the overlap vanishes)."""
    ov = np.vdot(b, a)
    return float(np.angle(ov)) if abs(ov) > 1e-300 else 0.0


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Operator-norm distance between a and b after the best global phase."""
    return float(np.linalg.norm(a - np.exp(1j * rel_phase(a, b)) * b, 2))


def is_scalar(u: np.ndarray, tol: float = 1e-10) -> bool:
    return abs(abs(np.trace(u)) - u.shape[0]) < tol * u.shape[0] and \
        np.linalg.norm(u - u[0, 0] * np.eye(u.shape[0]), 2) < tol


def commutes_with_x(u: np.ndarray, tol: float = 1e-10) -> bool:
    return np.linalg.norm(u @ X - X @ u, 2) < tol


def axis_of(u: np.ndarray) -> tuple[float, np.ndarray, float]:
    """Split a 2x2 unitary as exp(i phase) exp(-i gamma n.sigma), gamma in [0, pi]."""
    det = np.linalg.det(u)
    half = np.sqrt(det + 0j)
    v = u / half
    c = float(np.real(np.trace(v)) / 2)
    ns = np.array([float(np.real(1j * np.trace(v @ p) / 2)) for p in PAULIS])
    s = float(np.linalg.norm(ns))
    gamma = float(np.arctan2(s, c))
    n = ns / s if s > 1e-14 else np.array([0.0, 0.0, 1.0])
    return gamma, n, float(np.angle(half))
