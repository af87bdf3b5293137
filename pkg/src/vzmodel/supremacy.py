"""Random IQP instances, their 1D coupling/SWAP circuit, and fixed-shape schedules.

The target distribution is |<s| H^n exp(-i C_z) |+>^n|^2 with
C_z = Σ_{i<j} w_ij Z_iZ_j + Σ_i v_i Z_i and angles drawn from {kπ/8, k = 0..7}.
Angles are stored as the integers k.

In the 1D circuit the logical qubits walk past each other through n rounds of
neighbour couplings and SWAPs.  Starting from the reversed placement, n SWAP
rounds bring every qubit back to its own position, so measured bit j belongs to
logical qubit j.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .circuit import (
    AppliedLayer, AxisAngle, Circuit, Graph, Rotation, SWAP, W, ZZCoupling,
)
from .compiler import DepthReport, ScheduleBuilder
from .coupling import _phase_against, find_coupling_params, idle_layer, synth_coupling_layer
from .errors import CircuitError
from .simulate import local_unitary
from .single_qubit import synth_single_qubit_layer, synth_unitary_layer

EIGHTH = np.pi / 8


@dataclass(frozen=True)
class IqpInstance:
    n: int
    v: tuple[int, ...]
    w: tuple[int, ...]  # one entry per pair (i<j), lexicographic
    seed: int | None = None

    def __post_init__(self):
        if self.n < 2:
            raise CircuitError("IQP instances need n >= 2")
        if len(self.v) != self.n or len(self.w) != self.n * (self.n - 1) // 2:
            raise CircuitError("angle lists do not match n")
        if any(not 0 <= k < 8 for k in self.v + self.w):
            raise CircuitError("angles must be kπ/8 with k in 0..7")

    def pair_index(self, i: int, j: int) -> int:
        i, j = min(i, j), max(i, j)
        return i * self.n - i * (i + 1) // 2 + (j - i - 1)

    def w_of(self, i: int, j: int) -> int:
        return self.w[self.pair_index(i, j)]

    def pairs(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def to_json(self) -> str:
        d = {"n": self.n, "seed": self.seed, "v": [k * EIGHTH for k in self.v],
             "w": [[i, j, self.w_of(i, j) * EIGHTH] for i, j in self.pairs()]}
        return json.dumps(d, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "IqpInstance":
        try:
            d = json.loads(text)
            n = int(d["n"])
            v = tuple(angle_units(x) for x in d["v"])
            w = [0] * (n * (n - 1) // 2)
            probe = cls(n, (0,) * n, tuple(w))
            for i, j, x in d["w"]:
                w[probe.pair_index(int(i), int(j))] = angle_units(x)
            return cls(n, v, tuple(w), d.get("seed"))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CircuitError(f"cannot parse instance: {exc}") from exc


def angle_units(angle: float) -> int:
    """k with angle = kπ/8, k in 0..7."""
    u = angle / EIGHTH
    k = int(round(u))
    if abs(u - k) > 1e-9 or not 0 <= k < 8:
        raise ValueError(f"angle {angle} is not kπ/8 with k in 0..7")
    return k


def binary_decompose(angle: float) -> tuple[int, int, int]:
    """Bits (a, b, c) with angle = (4a + 2b + c)π/8."""
    k = angle_units(angle)
    return (k >> 2) & 1, (k >> 1) & 1, k & 1


def gen_iqp(n: int, seed: int) -> IqpInstance:
    if n < 2:
        raise CircuitError("IQP instances need n >= 2")
    rng = np.random.default_rng(seed)
    v = rng.integers(0, 8, size=n)
    w = rng.integers(0, 8, size=n * (n - 1) // 2)
    return IqpInstance(n, tuple(int(x) for x in v), tuple(int(x) for x in w), seed)


def iqp_amplitudes(inst: IqpInstance) -> np.ndarray:
    """<s| H^n exp(-iC_z) |+>^n by direct summation over all 2^n basis states."""
    n = inst.n
    idx = np.arange(2 ** n)
    z = 1 - 2 * ((idx[:, None] >> np.arange(n)) & 1)  # z[x, q] = ±1, qubit q = bit q
    cz = z @ (np.array(inst.v) * EIGHTH)
    for (i, j), k in zip(inst.pairs(), inst.w):
        cz = cz + k * EIGHTH * z[:, i] * z[:, j]
    f = np.exp(-1j * cz)
    parity = np.array([[bin(s & x).count("1") & 1 for x in idx] for s in idx])
    return ((1 - 2 * parity) @ f) / 2 ** n


def iqp_distribution(inst: IqpInstance) -> np.ndarray:
    return np.abs(iqp_amplitudes(inst)) ** 2


def round_pairs(n: int, r: int) -> list[tuple[int, int]]:
    return [(p, p + 1) for p in range(r % 2, n - 1, 2)]


def initial_layout(n: int) -> list[int]:
    """layout[p] = logical qubit held at position p before the first round."""
    return list(range(n - 1, -1, -1))


def _swap_layout(layout, pairs):
    layout = list(layout)
    for p, q in pairs:
        layout[p], layout[q] = layout[q], layout[p]
    return layout


def lower_iqp_to_1d(inst: IqpInstance) -> Circuit:
    n = inst.n
    layout = initial_layout(n)
    vlayer = []
    for k in range(1, 8):
        qs = tuple(p for p in range(n) if inst.v[layout[p]] == k)
        if qs:
            vlayer.append(Rotation(AxisAngle(0.0, 0.0, k * EIGHTH), qs))
    layers = [tuple(vlayer)]
    for r in range(n):
        pairs = round_pairs(n, r)
        coup = []
        for k in range(1, 8):
            es = tuple(e for e in pairs if inst.w_of(layout[e[0]], layout[e[1]]) == k)
            if es:
                coup.append(ZZCoupling(k * EIGHTH, es))
        layers.append(tuple(coup))
        layers.append((SWAP(tuple(pairs)),) if pairs else ())
        layout = _swap_layout(layout, pairs)
    layers.append((W(tuple(range(n))),))
    return Circuit(Graph.chain(n), tuple(layers))


def match_iqp_circuit(circuit: Circuit) -> tuple[IqpInstance, float] | None:
    """Recognise a circuit laid out like lower_iqp_to_1d.

    Returns the instance and a phase p with circuit = e^{ip} * lower_iqp_to_1d(instance),
    or None if the circuit has a different shape.
    """
    n = circuit.n
    if n < 2 or len(circuit.layers) != 2 * n + 2:
        return None
    wraps = 0

    def units(angle):
        nonlocal wraps
        u = angle / EIGHTH
        k = int(round(u))
        if abs(u - k) > 1e-9:
            raise ValueError
        wraps += (k - k % 8) // 8
        return k % 8

    try:
        layout = initial_layout(n)
        v = [0] * n
        seen = set()
        for g in circuit.layers[0]:
            if not isinstance(g, Rotation) or not g.axis.z_diagonal:
                return None
            for p in g.targets:
                if p in seen:
                    return None
                seen.add(p)
                v[layout[p]] = units(g.axis.gamma * np.sign(g.axis.vector[2]))
        w = {}
        for r in range(n):
            pairs = round_pairs(n, r)
            for g in circuit.layers[1 + 2 * r]:
                if not isinstance(g, ZZCoupling):
                    return None
                for e in g.edges:
                    key = tuple(sorted((layout[e[0]], layout[e[1]])))
                    if e not in pairs or key in w:
                        return None
                    w[key] = units(g.C)
            swaps = [e for g in circuit.layers[2 + 2 * r] if isinstance(g, SWAP) for e in g.edges]
            if not all(isinstance(g, SWAP) for g in circuit.layers[2 + 2 * r]) or sorted(swaps) != pairs:
                return None
            layout = _swap_layout(layout, pairs)
        last = circuit.layers[-1]
        if not all(isinstance(g, W) for g in last) or sorted(q for g in last for q in g.targets) != list(range(n)):
            return None
    except ValueError:
        return None
    probe = IqpInstance(n, tuple(v), (0,) * (n * (n - 1) // 2))
    wl = [0] * len(probe.w)
    for (i, j), k in w.items():
        wl[probe.pair_index(i, j)] = k
    return IqpInstance(n, tuple(v), tuple(wl)), np.pi * wraps


# --- schedules ----------------------------------------------------------------

def _pads(a, n, count, tag):
    return [idle_layer(a, tag, k) for k in range(count)], count * n * np.pi


def _z_sublayers(b: ScheduleBuilder, units_at, a, n):
    for bit in (4, 2, 1):
        mask = tuple(p for p in range(n) if units_at(p) & bit)
        if mask:
            layers, ph = synth_single_qubit_layer(AxisAngle(0.0, 0.0, bit * EIGHTH), mask, a, n)
        else:
            layers, ph = _pads(a, n, 3, "single_qubit")
        b.add(layers, ph, "single_qubit")


def _coupling_round(b, inst_w, layout, pairs, a, n):
    for bit in (4, 2, 1):
        es = tuple(e for e in pairs if inst_w(layout[e[0]], layout[e[1]]) & bit)
        layers, ph = synth_coupling_layer(bit * EIGHTH, es, a, n, uniform=True,
                                          tag="coupling", aux_tag="coupling")
        b.add(layers, ph, "coupling")


def _aux_for(layers, qs, a, n):
    op = local_unitary(layers, a, (qs[0],))
    return synth_unitary_layer(op.conj().T, qs, a, n, "swap")


def swap_block_homogeneous(pairs, a: float, n: int) -> tuple[list[AppliedLayer], float]:
    """22 layers realising SWAP on every listed pair, phase relative to exact SWAPs."""
    if not pairs:
        return _pads(a, n, 22, "swap")
    sol = find_coupling_params(np.pi / 4, a)
    xi = np.pi - sol.beta
    seconds = tuple(j for _, j in pairs)
    both = tuple(sorted(q for e in pairs for q in e))
    rest = tuple(q for q in range(n) if q not in both)
    h, rz, rx = la.HADAMARD, la.zrot(np.pi / 4), la.xrot(xi)
    pulse = AppliedLayer(sol.t, b=sol.b, w_mask=tuple(pairs))
    middle = rx @ rz @ h @ rx
    out: list[AppliedLayer] = []
    for part in (synth_unitary_layer(h, seconds, a, n)[0], synth_unitary_layer(rx @ rz, both, a, n)[0],
                 [pulse], synth_unitary_layer(middle, both, a, n)[0], [pulse],
                 synth_unitary_layer(middle, both, a, n)[0], [pulse], [AppliedLayer(xi / a)],
                 synth_unitary_layer(h, seconds, a, n)[0]):
        k = len({l.block for l in out})
        out += [AppliedLayer(l.t, l.b, l.c, l.w_mask, l.v_mask, l.x_mask, "swap", k) for l in part]
    k = len({l.block for l in out})
    if rest:
        aux, _ = _aux_for(out, rest, a, n)
    else:
        aux = _pads(a, n, 3, "swap")[0]
    out += [AppliedLayer(l.t, l.b, l.c, l.w_mask, l.v_mask, l.x_mask, "swap", k + (l.block if not rest else 0)) for l in aux]
    return out, _phase_against(out, a, n, pairs, la.SWAP)


def parity_class(n: int, parity: int) -> tuple[int, ...]:
    return tuple(q for q in range(n) if q % 2 == parity % 2)


def swap_block_alternating(pairs, r: int, a: float, n: int) -> tuple[list[AppliedLayer], float]:
    """7 layers plus one correction triple per parity class of idle qubits.

    Each listed pair receives CZ·SWAP; the returned phase is relative to that.
    """
    tu = np.pi / (2 * np.sqrt(2) * a)
    seconds = tuple(j for _, j in pairs)
    both = tuple(sorted(q for e in pairs for q in e))
    rest = tuple(q for q in range(n) if q not in both)
    w2 = synth_unitary_layer(la.HADAMARD, seconds, a, n)[0] if seconds else _pads(a, n, 3, "swap")[0]
    u12 = AppliedLayer(tu, b=a, w_mask=tuple(pairs), x_mask=parity_class(n, r + 1), block=1)
    u21 = AppliedLayer(tu, b=a, w_mask=tuple(pairs), x_mask=parity_class(n, r), block=2)
    ww = AppliedLayer(tu, c=a, v_mask=both, block=3)
    base = [AppliedLayer(l.t, l.b, l.c, l.w_mask, l.v_mask, l.x_mask, block=0 if seconds else 10 + l.block)
            for l in w2] + [u12, u21, ww, AppliedLayer(tu, b=a, w_mask=tuple(pairs),
                                                       x_mask=parity_class(n, r + 1), block=4)]
    out = list(base)
    for k, par in enumerate((0, 1)):
        qs = tuple(q for q in rest if q % 2 == par)
        if qs:
            aux, _ = _aux_for(base, qs, a, n)
            out += [AppliedLayer(l.t, l.b, l.c, l.w_mask, l.v_mask, l.x_mask, block=20 + k) for l in aux]
    out = [AppliedLayer(l.t, l.b, l.c, l.w_mask, l.v_mask, l.x_mask, "swap", l.block) for l in out]
    return out, _phase_against(out, a, n, pairs, la.CZ @ la.SWAP)


def _hadamard_layer(a, n):
    layer = AppliedLayer(np.pi / (2 * np.sqrt(2) * a), c=a, v_mask=tuple(range(n)), tag="single_qubit")
    u = local_unitary([layer], a, (0,))
    return [layer], n * la.rel_phase(la.HADAMARD, u)


def _build(v, w_of, n, a, variant):
    b = ScheduleBuilder(n, a, variant)
    layout = initial_layout(n)
    _z_sublayers(b, lambda p: v[layout[p]], a, n)
    for r in range(n):
        pairs = round_pairs(n, r)
        _coupling_round(b, w_of, layout, pairs, a, n)
        if variant == "homogeneous":
            layers, ph = swap_block_homogeneous(pairs, a, n)
        else:
            layers, ph = swap_block_alternating(pairs, r, a, n)
        b.add(layers, ph, "swap")
        layout = _swap_layout(layout, pairs)
    b.add(*_hadamard_layer(a, n))
    return b


def _report(sched, n, expected, details) -> DepthReport:
    return DepthReport(2 * n + 2, len(sched), sched.categories(),
                       {"expected": expected, "matches": len(sched) == expected}, details)


def compile_homogeneous(inst: IqpInstance, a: float = 1.0):
    """Schedule of exactly 40n+10 layers whose output distribution is the instance's."""
    n = inst.n
    sched = _build(inst.v, inst.w_of, n, a, "homogeneous").build()
    return sched, _report(sched, n, 40 * n + 10, {"variant": "homogeneous"})


def cz_shift(inst: IqpInstance, sign: int = 1) -> tuple[IqpInstance, int]:
    """Shift v by sign*(n-1)π/4 and w by -sign*π/4 (mod π).

    This is the diagonal picked up when every pair receives one extra CZ.
    Also returns the number of π wraps, whose parity gives the sign relating
    the two diagonal unitaries.
    """
    n = inst.n
    wraps = 0

    def move(k, d):
        nonlocal wraps
        wraps += (k + d - (k + d) % 8) // 8
        return (k + d) % 8

    v = tuple(move(k, sign * 2 * (n - 1)) for k in inst.v)
    w = tuple(move(k, -sign * 2) for k in inst.w)
    return IqpInstance(n, v, w, inst.seed), wraps


def compile_alternating(inst: IqpInstance, a: float = 1.0, compensate: bool = True):
    """Schedule of exactly 28n+10 layers using half-lattice X fields for the SWAPs.

    Each SWAP block leaves a CZ on the pair it swapped; every pair is swapped
    once, so together they shift the instance by cz_shift.  With ``compensate``
    the inverse shift is compiled instead, so the schedule samples from the
    given instance.  Without it, the schedule samples from cz_shift(inst).
    """
    n = inst.n
    npairs = n * (n - 1) // 2
    if compensate:
        compiled, wraps = cz_shift(inst, -1)
        shifted_back, back = cz_shift(compiled, 1)
        assert shifted_back.v == inst.v and shifted_back.w == inst.w
        realised = inst
    else:
        compiled = inst
        realised, back = cz_shift(inst, 1)
    b = _build(compiled.v, compiled.w_of, n, a, "alternating")
    # every CZ = e^{iπ/4} e^{-iπ/4(Z_i+Z_j)} e^{iπ/4 Z_iZ_j}; wraps add factors of -1
    b.phase += -npairs * np.pi / 4 + np.pi * back
    sched = b.build()
    details = {"variant": "alternating", "compiled_instance": json.loads(compiled.to_json()),
               "realised_instance": json.loads(realised.to_json())}
    return sched, _report(sched, n, 28 * n + 10, details)


def compile_instance(inst: IqpInstance, a: float = 1.0, variant: str = "homogeneous"):
    if variant == "homogeneous":
        return compile_homogeneous(inst, a)
    if variant == "alternating":
        return compile_alternating(inst, a)
    raise CircuitError(f"unknown variant {variant!r}")
