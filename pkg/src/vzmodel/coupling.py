"""ZZ-coupling layers from a global X field plus switchable ZZ terms.

For a coupled pair, one pulse of duration t with coupling b gives

    exp(-it(a(X_i+X_j) + b Z_iZ_j)) = e^{-iβX's} e^{-iD2 YY} e^{-iD3 ZZ} e^{-iβX's}.

Choosing t so that D2 vanishes (the sinc condition below) leaves a pure ZZ
rotation by D = bt = C + kπ.  Sandwiching between X pulses of angle π − β then
cancels the X parts.  Uncoupled qubits turn by a·t + 2(π−β) about X, which an
auxiliary three-pulse rotation undoes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .circuit import AppliedLayer, AxisAngle, is_pairwise
from .errors import CouplingInfeasible, SynthesisError
from .single_qubit import synth_single_qubit_layer

X_MAX = 8 * np.pi
SCAN_STEP = np.pi / 50
K_RANGE = (0, 1, 2, 3)


def sinc(x):
    """Unnormalised sinc, sin(x)/x."""
    return np.sinc(np.asarray(x) / np.pi)


def _residual(x, d):
    return sinc(np.sqrt(x * x + d * d)) - sinc(d)


def solve_sinc(C: float, k: int, a: float, x_max: float = X_MAX, step: float = SCAN_STEP) -> float | None:
    """Smallest t > 0 with sinc(C+kπ) = sinc(sqrt(4a²t² + (C+kπ)²)), or None."""
    if a <= 0:
        raise ValueError("a must be positive")
    d = C + k * np.pi
    if d == 0:
        return None
    xs = np.arange(1, int(np.floor(x_max / step)) + 1) * step
    f = _residual(xs, d)
    hit = np.nonzero((f[:-1] == 0) | (np.sign(f[:-1]) != np.sign(f[1:])))[0]
    if hit.size == 0:
        return None
    j = hit[0]
    lo, hi = xs[j], xs[j + 1]
    flo = f[j]
    if flo == 0:
        return float(lo / (2 * a))
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        fm = _residual(mid, d)
        if fm == 0:
            lo = hi = mid
            break
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    return float(x / (2 * a))


@dataclass(frozen=True)
class CouplingSolution:
    C: float
    k: int
    D: float
    t: float
    b: float
    beta: float
    t_prime: float
    gamma_aux: float
    s: int


def _beta(a: float, t: float, d: float) -> tuple[float, int]:
    r = t * np.sqrt(4 * a * a + (d / t) ** 2)
    cos4 = np.cos(r) / np.cos(d)
    sin4 = 2 * a * t * np.sin(r) / (r * np.cos(d))
    s = 1 if a * np.sin(r) >= 0 else -1
    return float(np.mod(np.arctan2(sin4, cos4), 2 * np.pi) / 4), s


def find_coupling_params(C: float, a: float, ks=K_RANGE) -> CouplingSolution:
    """Smallest offset k (and shortest pulse) realising exp(-iC ZZ) on a pair."""
    if not 0 <= C <= np.pi:
        raise ValueError("C must lie in [0, π]")
    for k in ks:
        t = solve_sinc(C, k, a)
        if t is None:
            continue
        d = C + k * np.pi
        beta, s = _beta(a, t, d)
        return CouplingSolution(C, k, d, t, d / t, beta, (np.pi - beta) / a,
                                la.wrap(2 * beta - a * t), s)
    raise CouplingInfeasible(f"no k in {tuple(ks)} solves the pulse equation for C={C!r}")


def feasibility_grid(Cs, a: float = 1.0, ks=K_RANGE) -> list[dict]:
    rows = []
    for C in Cs:
        ts = {k: solve_sinc(C, k, a) for k in ks}
        ok = [k for k in ks if ts[k] is not None]
        rows.append({"C": float(C), "feasible": {k: ts[k] is not None for k in ks},
                     "k": ok[0] if ok else None, "t": ts[ok[0]] if ok else None})
    return rows


# --- canonical-form parameters and the magic basis ---------------------------

@dataclass(frozen=True)
class KakParams:
    D1: float
    D2: float
    D3: float
    omega: float
    beta: float
    s: int


def kak_params(a: float, b: float, t: float) -> KakParams:
    """Canonical parameters of exp(-it(a(X1+X2) + b Z1Z2)) in the general closed form."""
    root = np.sqrt(4 * a * a + b * b)
    r = root * t
    omega = float(np.arcsin(np.clip(b * np.sin(r) / root, -1, 1)))
    s = 1 if a * np.sin(r) >= 0 else -1
    beta = s / 4 * np.arccos(np.clip(np.cos(r) / np.cos(omega), -1, 1)) + np.pi / 2
    return KakParams(0.0, (b * t - omega) / 2, (b * t + omega) / 2, omega, float(beta), s)


def kak_unitary(p: KakParams) -> np.ndarray:
    xx = la.expm_hermitian(np.kron(la.X, la.I2) + np.kron(la.I2, la.X), p.beta)
    yy = la.expm_hermitian(np.kron(la.Y, la.Y), p.D2)
    zz = la.expm_hermitian(la.ZZ, p.D3)
    return xx @ yy @ zz @ xx


def pulse_unitary(a: float, b: float, t: float) -> np.ndarray:
    return la.expm_hermitian(la.pair_hamiltonian(a, a, 0, 0, b), t)


def magic_basis() -> np.ndarray:
    """Magic basis columns, rows relabelled from |q1 q2> to little-endian order."""
    q = np.array([[1, 1j, 0, 0], [0, 0, 1, 1j], [0, 0, -1, 1j], [1, -1j, 0, 0]]) / np.sqrt(2)
    return q[[0, 2, 1, 3]]


MAGIC_SUPPORT = ((0, 0), (0, 3), (1, 1), (2, 2), (3, 0), (3, 3))


def magic_closed_form(a: float, b: float, t: float) -> np.ndarray:
    root = np.sqrt(4 * a * a + b * b)
    r = root * t
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = np.cos(r) - 1j * b * np.sin(r) / root
    m[3, 3] = np.cos(r) + 1j * b * np.sin(r) / root
    m[0, 3] = 2 * a * np.sin(r) / root
    m[3, 0] = -m[0, 3]
    m[1, 1] = np.exp(-1j * b * t)
    m[2, 2] = np.exp(1j * b * t)
    return m


@dataclass
class MagicReport:
    matrix: np.ndarray
    closed_form: np.ndarray
    max_entry_error: float
    max_off_support: float

    @property
    def ok(self) -> bool:
        return self.max_entry_error < 1e-10 and self.max_off_support < 1e-10


def magic_basis_oracle(a: float, b: float, t: float) -> MagicReport:
    q = magic_basis()
    m = q.conj().T @ pulse_unitary(a, b, t) @ q
    cf = magic_closed_form(a, b, t)
    off = m.copy()
    for i, j in MAGIC_SUPPORT:
        off[i, j] = 0
    return MagicReport(m, cf, float(np.abs(m - cf).max()), float(np.abs(off).max()))


# --- layer synthesis ---------------------------------------------------------

X_AXIS = (np.pi / 4, 0.0)


def x_axis(angle: float) -> AxisAngle:
    return AxisAngle(np.pi / 4, 0.0, angle)


def idle_layer(a: float, tag: str, block: int = 0) -> AppliedLayer:
    """exp(-iπX) on every qubit: -I each, a do-nothing pulse used for padding."""
    return AppliedLayer(np.pi / a, tag=tag, block=block)


def _null_field(t: float, a: float) -> float:
    """Z field c making exp(-it(aX + cZ)) = ±I."""
    m = max(1, math.ceil(a * t / np.pi - 1e-12))
    return a * np.sqrt(max((m * np.pi / (a * t)) ** 2 - 1.0, 0.0))


def _components(n: int, pairs) -> list[tuple[int, ...]]:
    paired = {q for e in pairs for q in e}
    return [tuple(e) for e in pairs] + [(q,) for q in range(n) if q not in paired]


def _phase_against(layers, a: float, n: int, pairs, pair_target: np.ndarray) -> float:
    from .simulate import local_unitary

    phase = 0.0
    cache = {}
    for comp in _components(n, pairs):
        key = len(comp)
        if key not in cache:
            u = local_unitary(layers, a, comp)
            target = pair_target if key == 2 else la.I2
            if la.phase_distance(target, u) > 1e-9:
                raise SynthesisError("coupling synthesis failed to reproduce the target")
            cache[key] = la.rel_phase(target, u)
        phase += cache[key]
    return phase


def _renumber(layers: list[AppliedLayer], start: int = 0) -> list[AppliedLayer]:
    from dataclasses import replace

    out, prev, blk = [], None, start - 1
    for layer in layers:
        if layer.block != prev:
            blk += 1
            prev = layer.block
        out.append(replace(layer, block=blk))
    return out


def synth_coupling_layer(C: float, w_mask, a: float, n: int, *, uniform: bool = False,
                         tag: str = "coupling", aux_tag: str = "aux") -> tuple[list[AppliedLayer], float]:
    """At most six layers realising exp(-iC Σ_w ZZ), and the phase p with exp(ip)*product = target.

    ``uniform`` pads the result to exactly six layers with idle pulses.
    """
    pairs = tuple(sorted(tuple(sorted(e)) for e in w_mask))
    if not is_pairwise(pairs):
        raise SynthesisError("coupling mask is not pairwise")
    if not 0 < C <= np.pi:
        raise SynthesisError(f"coupling angle {C} outside (0, π]")
    if not pairs:
        return ([idle_layer(a, tag, k) for k in range(6)], 6 * n * np.pi) if uniform else ([], 0.0)
    coupled = tuple(sorted(q for e in pairs for q in e))
    uncoupled = tuple(q for q in range(n) if q not in coupled)
    if abs(C - np.pi / 2) < 1e-12:
        layers = _half_turn(coupled, a, n, tag)
    else:
        try:
            sol = find_coupling_params(C, a)
            layers = _sandwich(sol, pairs, uncoupled, a, n, tag, aux_tag)
        except CouplingInfeasible:
            layers = _split(C, pairs, uncoupled, a, tag)
    if uniform:
        layers = [idle_layer(a, tag, -1 - k) for k in range(6 - len(layers))] + layers
    layers = _renumber(layers)
    target = np.diag(np.exp(-1j * C * np.array([1, -1, -1, 1]))).astype(complex)
    return layers, _phase_against(layers, a, n, pairs, target)


def _half_turn(coupled, a, n, tag):
    # exp(-i π/2 ZZ) = -i Z⊗Z, a local gate up to phase
    layers, _ = synth_single_qubit_layer(AxisAngle(0.0, 0.0, np.pi / 2), coupled, a, n, tag)
    return layers


def _sandwich(sol: CouplingSolution, pairs, uncoupled, a, n, tag, aux_tag):
    layers = []
    if uncoupled:
        aux, _ = synth_single_qubit_layer(x_axis(sol.gamma_aux), uncoupled, a, n, aux_tag)
        layers += [AppliedLayer(l.t, l.b, l.c, l.w_mask, l.v_mask, tag=aux_tag, block=0) for l in aux]
    layers += [AppliedLayer(sol.t_prime, tag=tag, block=1),
               AppliedLayer(sol.t, b=sol.b, w_mask=pairs, tag=tag, block=2),
               AppliedLayer(sol.t_prime, tag=tag, block=3)]
    return layers


def _split(C, pairs, uncoupled, a, tag):
    """Two half-angle pulses; Z fields park the uncoupled qubits at ±I meanwhile."""
    half = find_coupling_params(C / 2, a)
    beta = half.beta
    mid = np.mod(-2 * beta, np.pi)
    pieces = [((np.pi - beta) / a, None), (half.t, half.b)]
    if mid > 1e-12:
        pieces.append((mid / a, None))
    pieces += [(half.t, half.b), ((np.pi - beta) / a, None)]
    layers = []
    for k, (t, b) in enumerate(pieces):
        c = _null_field(t, a) if uncoupled else 0.0
        layers.append(AppliedLayer(t, b=b or 0.0, c=c, w_mask=pairs if b else (),
                                   v_mask=uncoupled if c else (), tag=tag, block=k))
    return layers
