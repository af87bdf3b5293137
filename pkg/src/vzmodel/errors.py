"""Exception hierarchy. The CLI maps each family to a stable exit code."""


class VZError(Exception):
    """Base class for every error raised by the package."""


class CircuitError(VZError):
    """Malformed or invalid circuit / schedule / instance data."""


class NonCommutingLayer(CircuitError):
    """A circuit layer holds gates that do not commute on shared qubits."""


class SynthesisError(VZError):
    """A gate layer could not be turned into applied layers."""


class CouplingInfeasible(SynthesisError):
    """No offset k gives a root of the coupling-duration equation."""


class DimensionError(VZError):
    """Sizes of operators, states or masks disagree, or exceed the dense limit."""
