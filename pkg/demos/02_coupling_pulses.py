"""
ZZ couplings under a transverse field
=====================================

A coupling pulse also rotates both qubits about X.  Choosing the pulse length
from the root of a sinc equation makes those rotations factor out, so an X
turn before and after leaves exp(-iC ZZ).  For some C no root exists and a
two-pulse split is used instead.
"""

import numpy as np

from vzmodel import Schedule
from vzmodel.coupling import feasibility_grid, find_coupling_params, synth_coupling_layer
from vzmodel.errors import CouplingInfeasible
from vzmodel.simulate import schedule_unitary

a = 1.0
sol = find_coupling_params(np.pi / 8, a)
print(f"C=π/8: k={sol.k} t={sol.t:.5f} b={sol.b:.5f} X turn={np.pi - sol.beta:.5f}")

# which C values have no root for k = 0..3?
grid = np.arange(1, 315) * 0.01
gap = [row["C"] for row in feasibility_grid(grid, a) if row["k"] is None]
print(f"no single-pulse solution for {len(gap)} of {len(grid)} grid values, "
      f"C in [{min(gap):.2f}, {max(gap):.2f}]")

try:
    find_coupling_params(np.pi / 2, a)
except CouplingInfeasible as exc:
    print("π/2:", exc)

# layer synthesis still covers these values, with at most six pulses
z = np.array([1, -1])
for C in (0.4, np.pi / 2, 2.0):
    layers, phase = synth_coupling_layer(C, [(0, 1)], a, 4)
    u = schedule_unitary(Schedule(4, a, layers, global_phase=phase))
    zz = np.kron(np.ones(4), np.kron(z, z))  # Z0 Z1 on four qubits
    err = np.abs(u - np.diag(np.exp(-1j * C * zz))).max()
    print(f"C={C:.3f}: {len(layers)} pulses, error {err:.1e}")
