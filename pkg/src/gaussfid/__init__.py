"""Quantum and classical fidelities of single-mode Gaussian states."""

from .bench import (
    QuadratureStats,
    TransferFunction,
    apply_transfer,
    estimate_transfer,
    no_entanglement_fidelity,
    reference_fidelity,
    simulate_heterodyne_teleport,
)
from .fidelity import FidelityResult, Regime, classical_fidelity, quantum_fidelity, thermal_fidelity
from .ingest import QuadratureSamples, estimate_state, load_samples, per_angle_stats
from .state import GaussianState, coherent, from_thermal_params, thermal, to_thermal_params, vacuum

__version__ = "0.1.0"
