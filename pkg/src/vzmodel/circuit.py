"""Circuit and schedule data model: graphs, gates, applied layers, JSON I/O.

Two levels of description live here.  A ``Circuit`` is a gate-model program
whose layers hold mutually commuting gates.  A ``Schedule`` is the pulse-level
program for the transverse-field machine: a list of ``AppliedLayer`` values,
each one a fixed Hamiltonian switched on for a duration ``t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

import numpy as np

from . import linalg as la
from .errors import CircuitError, NonCommutingLayer

Edge = tuple[int, int]


def _edge(i, j) -> Edge:
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError("graph needs at least one vertex")
        canon = []
        for e in self.edges:
            i, j = _edge(*e)
            if i == j:
                raise CircuitError(f"self-loop on vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise CircuitError(f"edge {(i, j)} out of range for n={self.n}")
            canon.append((i, j))
        if len(set(canon)) != len(canon):
            raise CircuitError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def chain(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))

    def has_edge(self, i: int, j: int) -> bool:
        return _edge(i, j) in set(self.edges)

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    @property
    def max_degree(self) -> int:
        return max_degree(self.edges)


def max_degree(edges: Iterable[Edge]) -> int:
    deg: dict[int, int] = {}
    for i, j in edges:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    return max(deg.values(), default=0)


def is_pairwise(edges: Iterable[Edge]) -> bool:
    seen: set[int] = set()
    for i, j in edges:
        if i in seen or j in seen:
            return False
        seen.update((i, j))
    return True


@dataclass(frozen=True)
class AxisAngle:
    """Rotation exp(-i gamma r.sigma) with r = (sin2θ cos2φ, sin2θ sin2φ, cos2θ)."""

    theta: float
    phi: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "gamma", la.wrap(self.gamma))

    @property
    def vector(self) -> np.ndarray:
        s = np.sin(2 * self.theta)
        return np.array([s * np.cos(2 * self.phi), s * np.sin(2 * self.phi), np.cos(2 * self.theta)])

    def matrix(self) -> np.ndarray:
        return la.su2(self.gamma, self.vector)

    @property
    def z_diagonal(self) -> bool:
        return self.gamma == 0.0 or abs(np.sin(2 * self.theta)) < 1e-12

    @classmethod
    def from_vector(cls, gamma: float, r) -> "AxisAngle":
        r = np.asarray(r, dtype=float)
        r = r / np.linalg.norm(r)
        theta = 0.5 * np.arccos(np.clip(r[2], -1.0, 1.0))
        phi = 0.5 * np.arctan2(r[1], r[0]) if np.hypot(r[0], r[1]) > 1e-15 else 0.0
        return cls(theta, phi, gamma)

    @classmethod
    def from_unitary(cls, u: np.ndarray) -> tuple["AxisAngle", float]:
        """Return (axis, phase) with u = exp(i phase) axis.matrix()."""
        gamma, n, phase = la.axis_of(np.asarray(u, dtype=complex))
        ax = cls.from_vector(gamma, n)
        return ax, la.rel_phase(u, ax.matrix())


# --- gates -----------------------------------------------------------------

@dataclass(frozen=True)
class Rotation:
    axis: AxisAngle
    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(sorted(int(q) for q in self.targets)))


@dataclass(frozen=True)
class ZZCoupling:
    """exp(-i C Z_i Z_j) on every listed edge."""

    C: float
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "C", float(self.C))
        object.__setattr__(self, "edges", tuple(sorted(_edge(*e) for e in self.edges)))


@dataclass(frozen=True)
class W:
    """Hadamard on every target."""

    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(sorted(int(q) for q in self.targets)))


@dataclass(frozen=True)
class T:
    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(sorted(int(q) for q in self.targets)))


@dataclass(frozen=True)
class CZ:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(_edge(*e) for e in self.edges)))


@dataclass(frozen=True)
class SWAP:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(_edge(*e) for e in self.edges)))


Gate = Union[Rotation, ZZCoupling, W, T, CZ, SWAP]
SINGLE_QUBIT_GATES = (Rotation, W, T)
EDGE_GATES = (ZZCoupling, CZ, SWAP)


def support(g: Gate) -> set[int]:
    if isinstance(g, SINGLE_QUBIT_GATES):
        return set(g.targets)
    return {q for e in g.edges for q in e}


def is_z_diagonal(g: Gate) -> bool:
    if isinstance(g, Rotation):
        return g.axis.z_diagonal
    return isinstance(g, (T, ZZCoupling, CZ))


def gate_matrix(g: Gate) -> np.ndarray:
    """Reference matrix of one application (2x2 or 4x4 little-endian)."""
    if isinstance(g, Rotation):
        return g.axis.matrix()
    if isinstance(g, W):
        return la.HADAMARD
    if isinstance(g, T):
        return la.T_GATE
    if isinstance(g, ZZCoupling):
        return np.diag(np.exp(-1j * g.C * np.array([1, -1, -1, 1]))).astype(complex)
    if isinstance(g, CZ):
        return la.CZ
    if isinstance(g, SWAP):
        return la.SWAP
    raise CircuitError(f"unsupported gate {g!r}")


@dataclass(frozen=True)
class Circuit:
    graph: Graph
    layers: tuple[tuple[Gate, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass
class ValidationResult:
    ok: bool
    violations: list[str] = field(default_factory=list)
    # (layer index, gate index) of coupling gates whose edges share a vertex
    non_pairwise: list[tuple[int, int]] = field(default_factory=list)


def validate_circuit(circuit: Circuit, graph: Graph | None = None) -> ValidationResult:
    graph = graph or circuit.graph
    edges = set(graph.edges)
    res = ValidationResult(ok=True)
    if not circuit.layers:
        res.violations.append("empty circuit")
    for li, layer in enumerate(circuit.layers):
        for gi, g in enumerate(layer):
            if isinstance(g, SINGLE_QUBIT_GATES):
                for q in g.targets:
                    if not 0 <= q < graph.n:
                        res.violations.append(f"layer {li} gate {gi}: qubit {q} out of range")
            elif isinstance(g, EDGE_GATES):
                for e in g.edges:
                    if not all(0 <= q < graph.n for q in e):
                        res.violations.append(f"layer {li} gate {gi}: qubit out of range in {e}")
                    elif e not in edges:
                        res.violations.append(f"layer {li} gate {gi}: edge {e} not in graph")
                if not is_pairwise(g.edges):
                    res.non_pairwise.append((li, gi))
            else:
                res.violations.append(f"layer {li} gate {gi}: unsupported gate")
    res.ok = not res.violations
    return res


# --- edge colouring --------------------------------------------------------

def edge_color(graph: Graph, mask: Iterable[Edge]) -> list[tuple[Edge, ...]]:
    """Split a set of edges into classes that share no vertex.

    Greedy colouring in lexicographic edge order is tried first; when it needs
    more than Δ+1 classes the Misra–Gries construction is used instead, which
    always stays within Δ+1.
    """
    es = sorted({_edge(*e) for e in mask})
    known = set(graph.edges)
    for e in es:
        if e not in known:
            raise CircuitError(f"edge {e} not in graph")
    if not es:
        return []
    delta = max_degree(es)
    colors = _greedy_colors(es)
    if max(colors.values()) + 1 > delta + 1:
        colors = _misra_gries(es, graph.n, delta)
    k = max(colors.values()) + 1
    return [tuple(e for e in es if colors[e] == c) for c in range(k) if any(colors[e] == c for e in es)]


def _greedy_colors(es: list[Edge]) -> dict[Edge, int]:
    used: dict[int, set[int]] = {}
    out = {}
    for i, j in es:
        busy = used.get(i, set()) | used.get(j, set())
        c = 0
        while c in busy:
            c += 1
        out[(i, j)] = c
        used.setdefault(i, set()).add(c)
        used.setdefault(j, set()).add(c)
    return out


def _misra_gries(es: list[Edge], n: int, delta: int) -> dict[Edge, int]:
    at: list[dict[int, int]] = [dict() for _ in range(n)]  # at[x][colour] = neighbour
    palette = range(delta + 1)

    def free(x):
        return next(c for c in palette if c not in at[x])

    def color_of(u, w):
        for c, y in at[u].items():
            if y == w:
                return c
        return None

    def is_fan(u, fan):
        for k in range(len(fan) - 1):
            c = color_of(u, fan[k + 1])
            if c is None or c in at[fan[k]]:
                return False
        return True

    for u, v in es:
        fan = [v]
        grown = True
        while grown:
            grown = False
            for c, w in sorted(at[u].items()):
                if w not in fan and c not in at[fan[-1]]:
                    fan.append(w)
                    grown = True
                    break
        c, d = free(u), free(fan[-1])
        if c != d:
            path, x, want = [], u, d
            while want in at[x]:
                y = at[x][want]
                path.append((x, y, want))
                x, want = y, (c if want == d else d)
            for x, y, col in path:
                del at[x][col]
                del at[y][col]
            for x, y, col in path:
                new = c if col == d else d
                at[x][new] = y
                at[y][new] = x
        for i, w in enumerate(fan):
            if d not in at[w] and is_fan(u, fan[: i + 1]):
                break
        else:
            raise AssertionError("edge colouring failed")
        shifted = [color_of(u, fan[k + 1]) for k in range(i)]
        for k in range(i):
            del at[u][shifted[k]]
            del at[fan[k + 1]][shifted[k]]
        for k in range(i):
            at[u][shifted[k]] = fan[k]
            at[fan[k]][shifted[k]] = u
        at[u][d] = fan[i]
        at[fan[i]][d] = u
    out = {}
    for x in range(n):
        for col, y in at[x].items():
            out[_edge(x, y)] = col
    return out


# --- layer decomposition ---------------------------------------------------

@dataclass(frozen=True)
class Sublayer:
    """One homogeneous piece of a circuit layer: a Rotation or a pairwise ZZCoupling."""

    gate: Union[Rotation, ZZCoupling]
    category: str  # single_qubit | coupling | swap


W_AXIS = AxisAngle(np.pi / 8, 0.0, np.pi / 2)
T_AXIS = AxisAngle(0.0, 0.0, np.pi / 8)
QUARTER_Z = AxisAngle(0.0, 0.0, np.pi / 4)


def _expand(g: Gate) -> tuple[list[Union[Rotation, ZZCoupling]], float]:
    """Primitive steps (time order) and the phase with g = exp(i phase) * steps."""
    if isinstance(g, (Rotation, ZZCoupling)):
        return [g], 0.0
    if isinstance(g, W):
        return [Rotation(W_AXIS, g.targets)], len(g.targets) * np.pi / 2
    if isinstance(g, T):
        return [Rotation(T_AXIS, g.targets)], len(g.targets) * np.pi / 8
    edges = g.edges
    firsts = tuple(i for i, _ in edges)
    seconds = tuple(j for _, j in edges)
    both = tuple(sorted(firsts + seconds))
    if isinstance(g, CZ):
        steps = [Rotation(QUARTER_Z, both), ZZCoupling(3 * np.pi / 4, edges)]
        local = [Rotation(QUARTER_Z, (0, 1)), ZZCoupling(3 * np.pi / 4, ((0, 1),))]
        target = la.CZ
    elif isinstance(g, SWAP):
        def seq(first, second, pairs):
            ws = Rotation(W_AXIS, second)
            wb = Rotation(W_AXIS, first + second)
            z = Rotation(QUARTER_Z, first + second)
            zz = ZZCoupling(np.pi / 4, pairs)
            return [ws, z, zz, wb, z, zz, wb, z, zz, ws]
        steps = seq(firsts, seconds, edges)
        local = seq((0,), (1,), ((0, 1),))
        target = la.SWAP
    else:
        raise CircuitError(f"unsupported gate {g!r}")
    u = np.eye(4, dtype=complex)
    for s in local:
        u = _two_qubit_matrix(s) @ u
    return steps, len(edges) * la.rel_phase(target, u)


def _two_qubit_matrix(s) -> np.ndarray:
    if isinstance(s, ZZCoupling):
        return gate_matrix(s)
    m = s.axis.matrix()
    out = np.eye(4, dtype=complex)
    if 0 in s.targets:
        out = np.kron(la.I2, m) @ out
    if 1 in s.targets:
        out = np.kron(m, la.I2) @ out
    return out


def _group_key(g: Gate):
    if isinstance(g, Rotation):
        return ("rot", g.axis.theta, g.axis.phi, g.axis.gamma)
    if isinstance(g, ZZCoupling):
        return ("zz", g.C)
    return (type(g).__name__,)


def _merge(g: Gate, other: Gate) -> Gate:
    if isinstance(g, Rotation):
        return Rotation(g.axis, g.targets + other.targets)
    if isinstance(g, (W, T)):
        return type(g)(g.targets + other.targets)
    if isinstance(g, ZZCoupling):
        return ZZCoupling(g.C, g.edges + other.edges)
    return type(g)(g.edges + other.edges)


def check_commuting(layer: Iterable[Gate]) -> None:
    gates = list(layer)
    for a in range(len(gates)):
        for b in range(a + 1, len(gates)):
            if support(gates[a]) & support(gates[b]):
                if not (is_z_diagonal(gates[a]) and is_z_diagonal(gates[b])):
                    raise NonCommutingLayer(
                        f"gates {gates[a]!r} and {gates[b]!r} overlap and do not commute")


def decompose_layer(layer: Iterable[Gate], graph: Graph) -> tuple[list[Sublayer], float]:
    """Split one circuit layer into homogeneous, pairwise sublayers.

    Returns the sublayers in time order and the phase p with
    layer = exp(i p) * product(sublayers).
    """
    gates = list(layer)
    check_commuting(gates)
    for g in gates:
        if isinstance(g, EDGE_GATES) and g.edges:
            for e in g.edges:
                if e not in set(graph.edges):
                    raise CircuitError(f"edge {e} not in graph")
    groups: list[Gate] = []
    for g in gates:
        if not support(g):
            continue
        for k, h in enumerate(groups):
            if _group_key(h) == _group_key(g) and not (support(h) & support(g)):
                groups[k] = _merge(h, g)
                break
        else:
            groups.append(g)
    rank = {Rotation: 0, W: 0, T: 0, ZZCoupling: 1, CZ: 2, SWAP: 2}
    groups.sort(key=lambda h: rank[type(h)])  # stable: keeps first-appearance order
    out: list[Sublayer] = []
    phase = 0.0
    for h in groups:
        steps, ph = _expand(h)
        phase += ph
        cat = "swap" if isinstance(h, SWAP) else None
        for s in steps:
            if isinstance(s, Rotation):
                out.append(Sublayer(s, cat or "single_qubit"))
            else:
                for cls in edge_color(graph, s.edges):
                    out.append(Sublayer(ZZCoupling(s.C, cls), cat or "coupling"))
    return out, phase


def sublayer_decompose(circuit: Circuit) -> list[Union[Rotation, ZZCoupling]]:
    """All sublayers of a circuit in time order (phases are dropped; see decompose_layer)."""
    out = []
    for layer in circuit.layers:
        subs, _ = decompose_layer(layer, circuit.graph)
        out.extend(s.gate for s in subs)
    return out


# --- applied layers and schedules -------------------------------------------

@dataclass(frozen=True)
class AppliedLayer:
    """exp(-i t (a Σ_x X + b Σ_w ZZ + c Σ_v Z)).

    ``x_mask=None`` means the field is on for every qubit.  ``tag`` names the
    part of the source program the layer implements and ``block`` groups the
    layers that were synthesised together.
    """

    t: float
    b: float = 0.0
    c: float = 0.0
    w_mask: tuple[Edge, ...] = ()
    v_mask: tuple[int, ...] = ()
    x_mask: tuple[int, ...] | None = None
    tag: str = ""
    block: int = -1

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "w_mask", tuple(sorted(_edge(*e) for e in self.w_mask)))
        object.__setattr__(self, "v_mask", tuple(sorted(int(q) for q in self.v_mask)))
        if self.x_mask is not None:
            object.__setattr__(self, "x_mask", tuple(sorted(int(q) for q in self.x_mask)))
        if not self.w_mask:
            object.__setattr__(self, "b", 0.0)
        if not self.v_mask:
            object.__setattr__(self, "c", 0.0)
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "c", float(self.c))
        if not self.t > 0:
            raise CircuitError(f"applied layer duration must be positive, got {self.t}")

    def x_on(self, q: int) -> bool:
        return self.x_mask is None or q in self.x_mask

    @property
    def pure_x(self) -> bool:
        return not self.w_mask and not self.v_mask and self.x_mask is None


@dataclass(frozen=True)
class Schedule:
    n: int
    a: float
    layers: tuple[AppliedLayer, ...] = ()
    variant: str = "homogeneous"
    global_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "global_phase", la.wrap(self.global_phase))
        if not self.a > 0:
            raise CircuitError("field strength a must be positive")
        if self.variant not in ("homogeneous", "alternating"):
            raise CircuitError(f"unknown variant {self.variant!r}")
        for layer in self.layers:
            qs = [q for e in layer.w_mask for q in e] + list(layer.v_mask) + list(layer.x_mask or ())
            if any(not 0 <= q < self.n for q in qs):
                raise CircuitError("mask index out of range")
            if layer.x_mask is not None and self.variant != "alternating":
                raise CircuitError("partial X-field only allowed in the alternating variant")

    def __len__(self) -> int:
        return len(self.layers)

    def with_layers(self, layers, phase_delta: float = 0.0) -> "Schedule":
        return replace(self, layers=tuple(layers), global_phase=self.global_phase + phase_delta)

    def categories(self) -> dict[str, int]:
        out = {"single_qubit": 0, "coupling": 0, "aux": 0, "swap": 0}
        for layer in self.layers:
            key = layer.tag or "other"
            out[key] = out.get(key, 0) + 1
        return out


# --- JSON ------------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def gate_to_json(g: Gate) -> dict:
    if isinstance(g, Rotation):
        return {"gate": "rotation", "theta": g.axis.theta, "phi": g.axis.phi,
                "gamma": g.axis.gamma, "targets": list(g.targets)}
    if isinstance(g, ZZCoupling):
        return {"gate": "zz", "C": g.C, "edges": [list(e) for e in g.edges]}
    if isinstance(g, (W, T)):
        return {"gate": type(g).__name__, "targets": list(g.targets)}
    return {"gate": type(g).__name__, "edges": [list(e) for e in g.edges]}


def gate_from_json(d: dict) -> Gate:
    try:
        kind = d["gate"]
        if kind == "rotation":
            return Rotation(AxisAngle(d["theta"], d["phi"], d["gamma"]), tuple(d["targets"]))
        if kind == "zz":
            return ZZCoupling(d["C"], tuple(tuple(e) for e in d["edges"]))
        if kind in ("W", "T"):
            return {"W": W, "T": T}[kind](tuple(d["targets"]))
        if kind in ("CZ", "SWAP"):
            return {"CZ": CZ, "SWAP": SWAP}[kind](tuple(tuple(e) for e in d["edges"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise CircuitError(f"bad gate record {d!r}: {exc}") from exc
    raise CircuitError(f"unsupported gate {kind!r}")


def circuit_to_json(c: Circuit) -> str:
    return _dump({"n": c.n, "edges": [list(e) for e in c.graph.edges],
                  "layers": [[gate_to_json(g) for g in layer] for layer in c.layers]})


def circuit_from_json(text: str) -> Circuit:
    try:
        d = json.loads(text)
        graph = Graph(int(d["n"]), tuple(tuple(e) for e in d["edges"]))
        layers = tuple(tuple(gate_from_json(g) for g in layer) for layer in d["layers"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CircuitError(f"cannot parse circuit: {exc}") from exc
    return Circuit(graph, layers)


def layer_to_json(layer: AppliedLayer, n: int) -> dict:
    return {"t": layer.t, "b": layer.b, "c": layer.c,
            "w_mask": [list(e) for e in layer.w_mask], "v_mask": list(layer.v_mask),
            "x_mask": list(range(n)) if layer.x_mask is None else list(layer.x_mask),
            "tag": layer.tag, "block": layer.block}


def schedule_to_json(s: Schedule) -> str:
    return _dump({"n": s.n, "a": s.a, "variant": s.variant, "global_phase": s.global_phase,
                  "layers": [layer_to_json(layer, s.n) for layer in s.layers]})


def schedule_from_json(text: str) -> Schedule:
    try:
        d = json.loads(text)
        n = int(d["n"])
        layers = []
        for r in d["layers"]:
            xm = tuple(r.get("x_mask", range(n)))
            layers.append(AppliedLayer(
                t=r["t"], b=r.get("b", 0.0), c=r.get("c", 0.0),
                w_mask=tuple(tuple(e) for e in r.get("w_mask", ())),
                v_mask=tuple(r.get("v_mask", ())),
                x_mask=None if sorted(xm) == list(range(n)) else xm,
                tag=r.get("tag", ""), block=int(r.get("block", -1))))
        return Schedule(n, float(d["a"]), tuple(layers), d.get("variant", "homogeneous"),
                        float(d.get("global_phase", 0.0)))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CircuitError(f"cannot parse schedule: {exc}") from exc
