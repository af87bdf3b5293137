"""
Single-qubit gates from three pulses
====================================

Every pulse keeps the X field on every qubit.  A rotation on a subset of
qubits is built from three pulses: a Z field everywhere, a Z field only on
the targets, then the first pulse reversed.
"""

import numpy as np

from vzmodel import AxisAngle, Schedule
from vzmodel.simulate import schedule_unitary
from vzmodel.single_qubit import plan_single_qubit, synth_unitary_layer

a = 1.0

# T and Hadamard as axis-angle rotations
T = AxisAngle(0.0, 0.0, np.pi / 8)
H = AxisAngle(np.pi / 8, 0.0, np.pi / 2)

for name, axis in (("T", T), ("H", H)):
    plan = plan_single_qubit(axis, a)
    print(f"{name}: alpha={plan.angles.alpha:.4f} psi={plan.angles.psi:.4f} "
          f"alpha'={plan.angles.alpha_prime:.4f}")
    print("   durations", [round(x, 4) for x in (plan.t_dagger, plan.t, plan.t_prime)],
          "fields", [round(plan.c_prime, 4), round(plan.c, 4)])

# the axis-angle form of H is -iH; passing the matrix keeps the phase exact
h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
layers, phase = synth_unitary_layer(h, (0, 2), a, 3)
u = schedule_unitary(Schedule(3, a, layers, global_phase=phase))

# H on qubits 0 and 2, identity on qubit 1 (qubit 0 is the last Kronecker factor)
target = np.kron(h, np.kron(np.eye(2), h))
print("pulses:", len(layers), " max |U - H⊗I⊗H| =", f"{np.abs(u - target).max():.1e}")
