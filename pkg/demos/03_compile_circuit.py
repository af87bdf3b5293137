"""
Compiling a small circuit
=========================

Gate layers are split into pairwise sublayers, each one becomes a few pulses,
and the peephole passes then fold stray X turns into neighbouring rotations.
"""

import numpy as np

from vzmodel import Circuit, CZ, Graph, SWAP, T, W, ZZCoupling, compile, optimize_schedule
from vzmodel.circuit import decompose_layer
from vzmodel.simulate import circuit_state, output_distribution, run_schedule, tvd

g = Graph.chain(5)
circuit = Circuit(g, [
    [W((0, 1, 2, 3, 4))],
    [ZZCoupling(np.pi / 8, g.edges)],  # needs two colour classes on a chain
    [T((0, 4)), CZ(((1, 2),))],
    [SWAP(((2, 3),))],
])

print("sublayers per layer:", [len(decompose_layer(layer, g)[0]) for layer in circuit.layers])

sched, report = compile(circuit)
print("applied layers:", report.applied_layers, report.per_category, report.bound_check)

smaller = optimize_schedule(sched)
print("after passes:", len(smaller), smaller.categories())

p_ref = output_distribution(circuit_state(circuit))
for s in (sched, smaller):
    print(f"TVD to the circuit: {tvd(output_distribution(run_schedule(s)), p_ref):.1e}")
