"""
A SWAP from half-lattice X fields
=================================

With the X field on only one of two neighbours, a coupling pulse of length
π/(2√2 a) is a Hadamard times a controlled-ZX.  Three of them with a few
Hadamards give SWAP followed by CZ.  That extra CZ is absorbed into the
random angles of an IQP instance.
"""

import numpy as np

from vzmodel import Schedule
from vzmodel.simulate import schedule_unitary
from vzmodel.supremacy import cz_shift, gen_iqp, swap_block_alternating

a = 1.0
layers, phase = swap_block_alternating([(0, 1)], 0, a, 2)
u = schedule_unitary(Schedule(2, a, layers, "alternating", phase))
cz_swap = np.diag([1, 1, 1, -1]) @ np.eye(4)[[0, 2, 1, 3]]
print(f"{len(layers)} pulses, max |U - CZ·SWAP| = {np.abs(u - cz_swap).max():.1e}")
for layer in layers:
    xs = "all" if layer.x_mask is None else layer.x_mask
    print(f"  t={layer.t:.4f} X on {xs} ZZ b={layer.b:.3f} Z c={layer.c:.3f} on {layer.v_mask}")

# one CZ per pair shifts every angle by a multiple of π/4, which keeps the ensemble uniform
inst = gen_iqp(4, seed=1)
shifted, _ = cz_shift(inst, 1)
print("v:", inst.v, "->", shifted.v)
print("w:", inst.w, "->", shifted.w)
