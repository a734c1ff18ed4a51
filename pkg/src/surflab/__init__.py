"""surflab: a desk-scale distance-3 surface-code memory laboratory.

Simulates the 17-qubit rotated surface-code memory experiment end to end:
noisy stabilizer-circuit execution, detection-event extraction, exact
minimum-weight-perfect-matching correction, post-selection, logical
lifetime fits, and cross-entropy benchmarking of the full device circuit.
"""

from .analysis import (
    ErrorEstimate,
    MemoryFit,
    expected_logical_parity,
    fit_memory_curve,
    lifetime_us,
    logical_errors,
    physical_reference_fidelity,
    post_selection_masks,
)
from .calibration import Calibration, QubitCal
from .circuit import Circuit, Instruction
from .decoder import DecodingGraph, DetectorErrorModel, build_decoder, build_dem, decode
from .detection import (
    DetectorSet,
    build_detectors,
    correlation_matrix,
    detection_events,
    detection_fraction,
    logical_readout,
)
from .engines import RunResult, read_qshot, run, write_qshot
from .noise import NoiseConfig, attach_noise, depolarizing_probability, idle_twirl
from .statevector import StatevectorRunner, exact_distribution
from .surface import CYCLE_NS, Layout, MemoryMeta, memory_circuit
from .tableau import BatchedTableau
from .xeb import (
    XebStudy,
    ideal_probabilities,
    predicted_fidelity,
    run_xeb_study,
    sample_trajectories,
    with_measurement,
    xeb_circuit,
    xeb_fidelity,
)

__version__ = "0.1.0"

__all__ = [
    "BatchedTableau",
    "Calibration",
    "Circuit",
    "CYCLE_NS",
    "DecodingGraph",
    "DetectorErrorModel",
    "DetectorSet",
    "ErrorEstimate",
    "Instruction",
    "Layout",
    "MemoryFit",
    "MemoryMeta",
    "NoiseConfig",
    "QubitCal",
    "RunResult",
    "StatevectorRunner",
    "XebStudy",
    "attach_noise",
    "build_decoder",
    "build_dem",
    "build_detectors",
    "correlation_matrix",
    "decode",
    "depolarizing_probability",
    "detection_events",
    "detection_fraction",
    "exact_distribution",
    "expected_logical_parity",
    "fit_memory_curve",
    "ideal_probabilities",
    "idle_twirl",
    "lifetime_us",
    "logical_errors",
    "logical_readout",
    "memory_circuit",
    "physical_reference_fidelity",
    "post_selection_masks",
    "predicted_fidelity",
    "read_qshot",
    "run",
    "run_xeb_study",
    "sample_trajectories",
    "with_measurement",
    "write_qshot",
    "xeb_circuit",
    "xeb_fidelity",
    "__version__",
]
