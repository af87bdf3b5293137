"""Circuit -> schedule lowering, depth accounting and the peephole passes."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg as la
from .circuit import AppliedLayer, Circuit, Rotation, Schedule, validate_circuit, decompose_layer
from .coupling import synth_coupling_layer
from .errors import CircuitError
from .single_qubit import synth_single_qubit_layer, synth_unitary_layer


@dataclass
class DepthReport:
    effective_layers: int
    applied_layers: int
    per_category: dict
    bound_check: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {"effective_layers": self.effective_layers, "applied_layers": self.applied_layers,
             "per_category": self.per_category, "bound_check": self.bound_check}
        if self.details:
            d["details"] = self.details
        return d


class ScheduleBuilder:
    """Accumulates synthesised pieces, giving each block a fresh id."""

    def __init__(self, n: int, a: float, variant: str = "homogeneous"):
        self.n, self.a, self.variant = n, a, variant
        self.layers: list[AppliedLayer] = []
        self.phase = 0.0
        self._next = 0

    def add(self, layers, phase: float = 0.0, tag: str | None = None) -> None:
        ids = {}
        for layer in layers:
            if layer.block not in ids:
                ids[layer.block] = self._next
                self._next += 1
            changes = {"block": ids[layer.block]}
            if tag is not None:
                changes["tag"] = tag
            self.layers.append(replace(layer, **changes))
        self.phase += phase

    def build(self) -> Schedule:
        return Schedule(self.n, self.a, tuple(self.layers), self.variant, self.phase)


def compile(circuit: Circuit, a: float = 1.0, *, variant: str = "homogeneous",
            optimize: bool = False) -> tuple[Schedule, DepthReport]:
    """Lower a validated circuit to applied layers.

    Each single-qubit sublayer costs three layers and each pairwise coupling
    sublayer at most six.  ``variant="alternating"`` only flags the schedule;
    generic circuits use the homogeneous constructions.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if variant not in ("homogeneous", "alternating"):
        raise CircuitError(f"unsupported variant {variant!r}")
    res = validate_circuit(circuit)
    if not res.ok and res.violations != ["empty circuit"]:
        raise CircuitError("; ".join(res.violations))
    n = circuit.n
    b = ScheduleBuilder(n, a, variant)
    bound = 0
    for layer in circuit.layers:
        subs, phase = decompose_layer(layer, circuit.graph)
        b.phase += phase
        for sub in subs:
            g = sub.gate
            if isinstance(g, Rotation):
                bound += 3
                layers, ph = synth_single_qubit_layer(g.axis, g.targets, a, n, tag=sub.category)
                b.add(layers, ph)
                continue
            bound += 6
            wraps, C = divmod(g.C, np.pi)
            # exp(-i(C + mπ)ZZ) = (-1)^m exp(-iC ZZ)
            b.phase += np.pi * wraps * len(g.edges)
            if C < 1e-15:
                continue
            layers, ph = synth_coupling_layer(C, g.edges, a, n, tag=sub.category, aux_tag="aux")
            b.add(layers, ph)
    sched = b.build()
    if optimize:
        sched = optimize_schedule(sched)
    report = DepthReport(len(circuit.layers), len(sched), sched.categories(),
                         {"bound": bound, "within_bound": len(sched) <= bound})
    return sched, report


# --- passes ------------------------------------------------------------------

@dataclass
class _Block:
    layers: list[AppliedLayer]

    @property
    def tag(self) -> str:
        return self.layers[0].tag

    @property
    def is_xrot(self) -> bool:
        return len(self.layers) == 1 and self.layers[0].pure_x

    @property
    def is_triple(self) -> bool:
        return (len(self.layers) == 3 and all(not l.w_mask and l.x_mask is None for l in self.layers))

    @property
    def mask(self) -> tuple[int, ...]:
        return self.layers[1].v_mask


def _blocks(s: Schedule) -> list[_Block]:
    out: list[_Block] = []
    prev = object()
    for layer in s.layers:
        if out and layer.block == prev and layer.block >= 0:
            out[-1].layers.append(layer)
        else:
            out.append(_Block([layer]))
        prev = layer.block
    return out


def _assemble(s: Schedule, blocks: list[_Block], phase_delta: float) -> Schedule:
    layers = []
    for k, blk in enumerate(blocks):
        layers += [replace(l, block=k) for l in blk.layers]
    return s.with_layers(layers, phase_delta)


def _op(blk: _Block, a: float, q: int) -> np.ndarray:
    from .simulate import local_unitary
    return local_unitary(blk.layers, a, (q,))


def _touches(blk: _Block, qs) -> bool:
    return any(set(e) & set(qs) for l in blk.layers for e in l.w_mask)


def _transparent(blk: _Block, a: float, qs) -> bool:
    """Block acts on qs without coupling them and commutes with X rotations there."""
    if _touches(blk, qs):
        return False
    return all(la.commutes_with_x(_op(blk, a, q)) for q in qs)


def _product(blocks, a, q) -> np.ndarray:
    u = la.I2
    for blk in blocks:
        u = _op(blk, a, q) @ u
    return u


def _rewrite_phase(old, new, a, n) -> float | None:
    """Sum of per-qubit phases old = e^{iδ} new, or None if they differ."""
    delta = 0.0
    for q in range(n):
        u, v = _product(old, a, q), _product(new, a, q)
        if la.phase_distance(u, v) > 1e-9:
            return None
        delta += la.rel_phase(u, v)
    return delta


def _resynth(target: np.ndarray, mask, a, n, tag) -> list[_Block]:
    if la.is_scalar(target):
        return []
    layers, _ = synth_unitary_layer(target, mask, a, n, tag)
    return [_Block(layers)]


def _triple_target(blk: _Block, a: float) -> np.ndarray:
    return _op(blk, a, blk.mask[0])


def _try_simplify(blocks, a, n):
    """Drop identity blocks, merge neighbouring X pulses and same-mask triples."""
    for i, blk in enumerate(blocks):
        if blk.is_xrot or (blk.is_triple and blk.mask):
            if all(la.is_scalar(_op(blk, a, q)) for q in range(n)):
                d = _rewrite_phase([blk], [], a, n)
                if d is not None:
                    return blocks[:i] + blocks[i + 1:], d
        if blk.is_triple and not blk.mask:
            d = _rewrite_phase([blk], [], a, n)
            if d is not None:
                return blocks[:i] + blocks[i + 1:], d
        if i + 1 < len(blocks):
            nxt = blocks[i + 1]
            if blk.is_xrot and nxt.is_xrot:
                t = np.mod(blk.layers[0].t + nxt.layers[0].t, np.pi / a)
                new = [_Block([replace(blk.layers[0], t=t)])] if t > 1e-12 else []
                d = _rewrite_phase([blk, nxt], new, a, n)
                if d is not None:
                    return blocks[:i] + new + blocks[i + 2:], d
            if blk.is_triple and nxt.is_triple and blk.mask and blk.mask == nxt.mask:
                target = _triple_target(nxt, a) @ _triple_target(blk, a)
                new = _resynth(target, blk.mask, a, n, blk.tag)
                d = _rewrite_phase([blk, nxt], new, a, n)
                if d is not None:
                    return blocks[:i] + new + blocks[i + 2:], d
    return None


def _find_aux(blocks, a, start, skip, mask):
    """Index of an aux triple on ``mask`` reachable from ``start`` across blocks transparent on mask."""
    for step in (-1, 1):
        j = start + step
        while 0 <= j < len(blocks):
            blk = blocks[j]
            if j not in skip and blk.is_triple and blk.tag == "aux" and blk.mask == mask:
                return j
            if j not in skip and not _transparent(blk, a, mask):
                break
            j += step
    return None


def _try_absorb(blocks, a, n):
    everyone = tuple(range(n))
    for i, blk in enumerate(blocks):
        if not blk.is_xrot:
            continue
        xop = _op(blk, a, 0)
        for step in (-1, 1):
            j = i + step
            while 0 <= j < len(blocks):
                cand = blocks[j]
                if cand.is_triple and cand.mask:
                    rest = tuple(q for q in everyone if q not in cand.mask)
                    aux = None
                    if rest:
                        aux = _find_aux(blocks, a, i, {i, j}, rest)
                    if not rest or aux is not None:
                        g = _triple_target(cand, a)
                        g = g @ xop if step == 1 else xop @ g
                        new_t = _resynth(g, cand.mask, a, n, cand.tag)
                        changes = {j: new_t, i: []}
                        if aux is not None:
                            h = _triple_target(blocks[aux], a)
                            h = h @ xop if aux > i else xop @ h
                            changes[aux] = _resynth(h, rest, a, n, "aux")
                        idx = sorted(changes)
                        old = [blocks[k] for k in idx]
                        new = [b for k in idx for b in changes[k]]
                        d = _rewrite_phase(old, new, a, n)
                        if d is not None:
                            out = []
                            for k, b in enumerate(blocks):
                                out += changes.get(k, [b])
                            return out, d
                if not _transparent(cand, a, everyone):
                    break
                j += step
    return None


def _run(s: Schedule, rules) -> Schedule:
    blocks = _blocks(s)
    phase = 0.0
    while True:
        for rule in rules:
            hit = rule(blocks, s.a, s.n)
            if hit is not None:
                blocks, d = hit
                phase += d
                break
        else:
            return _assemble(s, blocks, phase)


def absorb_x_rotations(schedule: Schedule) -> Schedule:
    """Fold bare X pulses into neighbouring single-qubit triples and merge what lines up."""
    if schedule.variant != "homogeneous":
        return schedule
    return _run(schedule, (_try_simplify, _try_absorb))


def _try_merge_aux(blocks, a, n):
    for i, blk in enumerate(blocks):
        if not (blk.is_triple and blk.tag == "aux" and blk.mask):
            continue
        mask = blk.mask
        j = i + 1
        while j < len(blocks):
            other = blocks[j]
            if other.is_triple and other.tag == "aux" and other.mask == mask:
                g2 = _triple_target(other, a)
                if not la.commutes_with_x(g2):
                    break
                target = g2 @ _triple_target(blk, a)
                new = _resynth(target, mask, a, n, "aux")
                d = _rewrite_phase([blk, other], new, a, n)
                if d is None:
                    break
                return blocks[:i] + new + blocks[i + 1:j] + blocks[j + 1:], d
            if not _transparent(other, a, mask):
                break
            j += 1
    return None


def merge_aux_rotations(schedule: Schedule) -> Schedule:
    """Combine auxiliary X corrections on the same uncoupled set."""
    if schedule.variant != "homogeneous":
        return schedule
    return _run(schedule, (_try_merge_aux,))


def optimize_schedule(schedule: Schedule) -> Schedule:
    while True:
        before = len(schedule)
        schedule = merge_aux_rotations(absorb_x_rotations(schedule))
        if len(schedule) >= before:
            return schedule
