"""Reference semantics: layer exponentials, state evolution, distances.

Layer exponentials are built structurally.  A pairwise coupling mask splits the
layer Hamiltonian into commuting pieces (coupled pairs and lone qubits), each
exponentiated exactly as a 4x4 or 2x2 matrix.  ``method="dense"`` instead
diagonalises the full 2^n Hamiltonian and serves as a cross-check.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .circuit import (
    AppliedLayer, Circuit, Schedule, SINGLE_QUBIT_GATES, gate_matrix, is_pairwise,
)
from .errors import DimensionError

DENSE_CEILING = 12
STATE_CEILING = 20


def _check_n(n: int, ceiling: int = DENSE_CEILING) -> None:
    if n > ceiling:
        raise DimensionError(f"n={n} exceeds the dense limit of {ceiling} qubits")


def apply_op(psi: np.ndarray, op: np.ndarray, qubits, n: int) -> np.ndarray:
    """Apply a k-qubit operator to a state or a stack of states (columns).

    ``op`` uses the local little-endian order: qubits[0] is its low bit.
    """
    k = len(qubits)
    batch = psi.shape[1:]
    t = psi.reshape((2,) * n + batch)
    axes = [n - 1 - q for q in reversed(qubits)]
    opr = op.reshape((2,) * (2 * k))
    out = np.tensordot(opr, t, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(psi.shape)


def layer_blocks(layer: AppliedLayer, a: float, n: int):
    """Commuting pieces of a pairwise layer as (qubits, local unitary) pairs."""
    if not is_pairwise(layer.w_mask):
        raise DimensionError("structural exponential needs a pairwise coupling mask")
    v = set(layer.v_mask)
    out = []
    paired = set()
    for i, j in layer.w_mask:
        h = la.pair_hamiltonian(a * layer.x_on(i), a * layer.x_on(j),
                                layer.c * (i in v), layer.c * (j in v), layer.b)
        out.append(((i, j), la.expm_hermitian(h, layer.t)))
        paired.update((i, j))
    for q in range(n):
        if q not in paired:
            out.append(((q,), la.field_op(layer.t, a * layer.x_on(q), layer.c * (q in v))))
    return out


def layer_hamiltonian(layer: AppliedLayer, a: float, n: int) -> np.ndarray:
    _check_n(n)

    def on(q, p):
        ops = [p if k == q else la.I2 for k in range(n - 1, -1, -1)]
        out = ops[0]
        for o in ops[1:]:
            out = np.kron(out, o)
        return out

    dim = 2 ** n
    h = np.zeros((dim, dim), dtype=complex)
    for q in range(n):
        if layer.x_on(q):
            h += a * on(q, la.X)
    for q in layer.v_mask:
        h += layer.c * on(q, la.Z)
    for i, j in layer.w_mask:
        h += layer.b * on(i, la.Z) @ on(j, la.Z)
    return h


def layer_unitary(layer: AppliedLayer, a: float, n: int, method: str = "structural") -> np.ndarray:
    _check_n(n)
    if method == "dense" or not is_pairwise(layer.w_mask):
        return la.expm_hermitian(layer_hamiltonian(layer, a, n), layer.t)
    u = np.eye(2 ** n, dtype=complex)
    for qs, op in layer_blocks(layer, a, n):
        u = apply_op(u, op, qs, n)
    return u


def apply_layer(psi: np.ndarray, layer: AppliedLayer, a: float, n: int) -> np.ndarray:
    if not is_pairwise(layer.w_mask):
        return layer_unitary(layer, a, n, "dense") @ psi
    for qs, op in layer_blocks(layer, a, n):
        psi = apply_op(psi, op, qs, n)
    return psi


def plus_state(n: int) -> np.ndarray:
    _check_n(n, STATE_CEILING)
    return np.full(2 ** n, 2 ** (-n / 2), dtype=complex)


def run_schedule(schedule: Schedule, state: np.ndarray | None = None) -> np.ndarray:
    """Evolve |+>^n (or ``state``) through every layer; global phase included."""
    n = schedule.n
    psi = plus_state(n) if state is None else np.asarray(state, dtype=complex).copy()
    if psi.shape[0] != 2 ** n:
        raise DimensionError(f"state of length {psi.shape[0]} does not match n={n}")
    for layer in schedule.layers:
        psi = apply_layer(psi, layer, schedule.a, n)
    return np.exp(1j * schedule.global_phase) * psi


def schedule_unitary(schedule: Schedule) -> np.ndarray:
    _check_n(schedule.n)
    return run_schedule(schedule, np.eye(2 ** schedule.n, dtype=complex))


def local_unitary(layers, a: float, qubits) -> np.ndarray:
    """Product of layers restricted to 1 or 2 qubits that no layer couples outward."""
    qubits = tuple(qubits)
    qs = set(qubits)
    u = np.eye(2 ** len(qubits), dtype=complex)
    for layer in layers:
        v = set(layer.v_mask)
        jzz = 0.0
        for e in layer.w_mask:
            touching = qs & set(e)
            if touching and not set(e) <= qs:
                raise DimensionError(f"layer couples {e} out of the component {qubits}")
            if touching:
                jzz = layer.b
        if len(qubits) == 1:
            (q,) = qubits
            op = la.field_op(layer.t, a * layer.x_on(q), layer.c * (q in v))
        else:
            i, j = qubits
            h = la.pair_hamiltonian(a * layer.x_on(i), a * layer.x_on(j),
                                    layer.c * (i in v), layer.c * (j in v), jzz)
            op = la.expm_hermitian(h, layer.t)
        u = op @ u
    return u


def output_distribution(state: np.ndarray) -> np.ndarray:
    p = np.abs(np.asarray(state)) ** 2
    return p / p.sum()


def unitary_distance_up_to_phase(u: np.ndarray, v: np.ndarray) -> float:
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise DimensionError(f"shape mismatch {u.shape} vs {v.shape}")
    return la.phase_distance(u, v)


def tvd(p, q) -> float:
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionError("distributions have different lengths")
    if (p < -1e-15).any() or (q < -1e-15).any():
        raise ValueError("negative probability")
    return float(0.5 * np.abs(p - q).sum())


def apply_circuit(circuit: Circuit, psi: np.ndarray) -> np.ndarray:
    n = circuit.n
    for layer in circuit.layers:
        for g in layer:
            m = gate_matrix(g)
            if isinstance(g, SINGLE_QUBIT_GATES):
                for q in g.targets:
                    psi = apply_op(psi, m, (q,), n)
            else:
                for e in g.edges:
                    psi = apply_op(psi, m, e, n)
    return psi


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    _check_n(circuit.n)
    return apply_circuit(circuit, np.eye(2 ** circuit.n, dtype=complex))


def circuit_state(circuit: Circuit) -> np.ndarray:
    return apply_circuit(circuit, plus_state(circuit.n))


def default_tolerance() -> float:
    return float(os.environ.get("VZMODEL_TOL", "1e-8"))


@dataclass
class VerificationReport:
    op_distance: float | None
    tvd: float
    applied_layers: int
    per_category: dict
    passed: bool
    tolerances: dict = field(default_factory=dict)
    note: str = ""

    def to_json(self) -> dict:
        d = {"op_distance": self.op_distance, "tvd": self.tvd,
             "applied_layers": self.applied_layers, "per_category": self.per_category,
             "pass": self.passed, "tolerances": self.tolerances}
        if self.note:
            d["note"] = self.note
        return d


def verify(circuit: Circuit, schedule: Schedule, tol_op: float | None = None,
           tol_tvd: float | None = None, unitary: bool = True) -> VerificationReport:
    """Compare a schedule against the circuit it should implement."""
    if circuit.n != schedule.n:
        raise DimensionError(f"circuit has n={circuit.n}, schedule has n={schedule.n}")
    _check_n(circuit.n)
    tol_op = default_tolerance() if tol_op is None else tol_op
    tol_tvd = default_tolerance() if tol_tvd is None else tol_tvd
    d = None
    if unitary:
        d = unitary_distance_up_to_phase(schedule_unitary(schedule), circuit_unitary(circuit))
    dist = tvd(output_distribution(run_schedule(schedule)), output_distribution(circuit_state(circuit)))
    ok = dist < tol_tvd and (d is None or d < tol_op)
    return VerificationReport(d, dist, len(schedule), schedule.categories(), bool(ok),
                              {"op_distance": tol_op, "tvd": tol_tvd})
