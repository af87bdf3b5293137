"""Compiler and simulator for gate-free computation with a constant transverse X field.

A program is a sequence of pulses, each switching on a Z-diagonal Hamiltonian
(local Z fields and ZZ couplings) on top of a fixed field ``a Σ X``.  Each
pulse runs for a chosen duration.  This package turns gate-model circuits into
such pulse schedules and checks them against exact simulation.
"""

from .circuit import (
    AppliedLayer, AxisAngle, Circuit, CZ, Graph, Rotation, Schedule, SWAP, T, W, ZZCoupling,
    decompose_layer, edge_color, sublayer_decompose, validate_circuit,
)
from .compiler import DepthReport, absorb_x_rotations, compile, merge_aux_rotations, optimize_schedule
from .coupling import find_coupling_params, kak_params, magic_basis_oracle, solve_sinc, synth_coupling_layer
from .single_qubit import solve_vu_angles, synth_single_qubit_layer
from .supremacy import (
    IqpInstance, binary_decompose, compile_alternating, compile_homogeneous, gen_iqp,
    iqp_distribution, lower_iqp_to_1d,
)
from .simulate import (
    circuit_unitary, layer_unitary, output_distribution, run_schedule, tvd,
    unitary_distance_up_to_phase,
)

__all__ = [name for name in dir() if not name.startswith("_")]
