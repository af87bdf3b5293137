"""Three-pulse synthesis of a uniform single-qubit gate layer.

Every target rotation g is written as V U V† where

* U = exp(-i (π/a)(a X + c Z)) on the selected qubits.  Unselected qubits only
  see exp(-iπX) = -I during U, so they are left alone.
* V = exp(-i t'(a X + c' Z)) is applied to every qubit.  It rotates U's axis
  onto the target axis.

V† is realised as the forward rotation by π − α' about the same axis, which
equals -V†.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .circuit import AppliedLayer, AxisAngle
from .errors import SynthesisError

_DEGENERATE = 1e-12
_MIN_SIN = 0.05  # below this sin2ψ a fallback representation of g is preferred


@dataclass(frozen=True)
class VUAngles:
    alpha: float
    psi: float
    alpha_prime: float
    v_identity: bool = False


@dataclass(frozen=True)
class SingleQubitSynthesis:
    t: float
    c: float
    t_prime: float
    c_prime: float
    t_dagger: float
    angles: VUAngles
    gamma: float  # rotation actually synthesised (may differ from the target by a phase)
    axis: tuple[float, float, float]


def _angles(gamma: float, r: np.ndarray, a: float) -> tuple[VUAngles, float]:
    c = (a / np.pi) * np.sqrt((np.pi + gamma) ** 2 - np.pi ** 2)
    alpha = 0.5 * np.arccos(c / np.hypot(a, c))
    n_alpha = np.array([np.sin(2 * alpha), 0.0, np.cos(2 * alpha)])
    if np.linalg.norm(r - n_alpha) < _DEGENERATE:
        # V must be ±I: use a full π turn about X, which keeps durations positive.
        return VUAngles(alpha, np.pi / 4, np.pi, True), c
    two_psi = np.mod(np.arctan2(np.cos(2 * alpha) - r[2], r[0] - np.sin(2 * alpha)), np.pi)
    m = np.array([np.sin(two_psi), 0.0, np.cos(two_psi)])
    p = n_alpha - np.dot(m, n_alpha) * m
    q = r - np.dot(m, r) * m
    delta = np.arctan2(np.dot(m, np.cross(p, q)), np.dot(p, q))
    alpha_prime = float(np.mod(delta / 2, np.pi))
    if alpha_prime < _DEGENERATE or np.pi - alpha_prime < _DEGENERATE:
        return VUAngles(alpha, np.pi / 4, np.pi, True), c
    return VUAngles(float(alpha), float(two_psi / 2), alpha_prime), c


def solve_vu_angles(axis: AxisAngle, a: float) -> VUAngles:
    """(α, ψ, α') for the target exactly as given (no fallback representation)."""
    if a <= 0:
        raise ValueError("a must be positive")
    return _angles(axis.gamma, axis.vector, a)[0]


def plan_single_qubit(axis: AxisAngle, a: float) -> SingleQubitSynthesis:
    """Pulse parameters for one target rotation.

    When the rotation axis of V would be ±Z (which the always-on X field cannot
    produce) the same gate is tried as exp(-i(π-γ)(-r)σ) (a -1 phase) or with γ
    shifted by 2π.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    r = axis.vector
    g = axis.gamma
    candidates = [(g, r), (la.wrap(np.pi - g), -r), (g + 2 * np.pi, r), (la.wrap(np.pi - g) + 2 * np.pi, -r)]
    best = None
    for gamma, rr in candidates:
        ang, c = _angles(gamma, rr, a)
        s = 1.0 if ang.v_identity else np.sin(2 * ang.psi)
        if best is None or s > best[0]:
            best = (s, gamma, rr, ang, c)
        if s >= _MIN_SIN:
            break
    s, gamma, rr, ang, c = best
    if s < 1e-9:
        raise SynthesisError(f"no usable V axis for {axis}")
    two_psi = 2 * ang.psi
    c_prime = a * np.cos(two_psi) / np.sin(two_psi)
    t_prime = ang.alpha_prime * np.sin(two_psi) / a
    dagger_angle = np.pi - ang.alpha_prime
    if dagger_angle <= _DEGENERATE:
        dagger_angle += np.pi
    t_dagger = dagger_angle * np.sin(two_psi) / a
    return SingleQubitSynthesis(np.pi / a, float(c), float(t_prime), float(c_prime),
                                float(t_dagger), ang, float(gamma), tuple(float(x) for x in rr))


def synth_single_qubit_layer(axis: AxisAngle, v_mask, a: float, n: int,
                             tag: str = "single_qubit") -> tuple[list[AppliedLayer], float]:
    """Layers [V†, U, V] (time order) and phase p with exp(ip) * product = target layer.

    An empty mask gives no layers.
    """
    v_mask = tuple(sorted(v_mask))
    if not v_mask:
        return [], 0.0
    if any(not 0 <= q < n for q in v_mask):
        raise SynthesisError("mask index out of range")
    plan = plan_single_qubit(axis, a)
    everyone = tuple(range(n))
    layers = [
        AppliedLayer(plan.t_dagger, c=plan.c_prime, v_mask=everyone if plan.c_prime else (), tag=tag, block=0),
        AppliedLayer(plan.t, c=plan.c, v_mask=v_mask if plan.c else (), tag=tag, block=0),
        AppliedLayer(plan.t_prime, c=plan.c_prime, v_mask=everyone if plan.c_prime else (), tag=tag, block=0),
    ]
    return layers, triple_phase(layers, axis.matrix(), v_mask, a, n)


def triple_phase(layers, target: np.ndarray, v_mask, a: float, n: int) -> float:
    """Phase p with exp(ip) * (layers on every qubit) = target on v_mask, identity elsewhere."""
    from .simulate import local_unitary

    mask = set(v_mask)
    phase = 0.0
    on = local_unitary(layers, a, (min(mask),)) if mask else None
    off = local_unitary(layers, a, (min(set(range(n)) - mask),)) if len(mask) < n else None
    if on is not None:
        if la.phase_distance(target, on) > 1e-9:
            raise SynthesisError("single-qubit synthesis failed to reproduce the target")
        phase += len(mask) * la.rel_phase(target, on)
    if off is not None:
        if la.phase_distance(la.I2, off) > 1e-9:
            raise SynthesisError("unselected qubits are not idle")
        phase += (n - len(mask)) * la.rel_phase(la.I2, off)
    return phase


def synth_unitary_layer(u: np.ndarray, v_mask, a: float, n: int,
                        tag: str = "single_qubit") -> tuple[list[AppliedLayer], float]:
    """Same as synth_single_qubit_layer for an arbitrary 2x2 unitary (phase included)."""
    v_mask = tuple(sorted(v_mask))
    if not v_mask:
        return [], 0.0
    axis, _ = AxisAngle.from_unitary(u)
    layers, _ = synth_single_qubit_layer(axis, v_mask, a, n, tag)
    return layers, triple_phase(layers, u, v_mask, a, n)
