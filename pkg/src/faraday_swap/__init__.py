"""Entanglement swapping of cavity-trapped atoms via photonic Faraday rotation."""
from .analysis import Axis, SampleRow, SweepRow, SweepSpec, evaluate_point, sampling_check, sweep
from .cavity import (
    CavityParams,
    FaradayAngles,
    PhasePair,
    empty_reflection,
    faraday_angles,
    phase_shifts,
    reflection_coefficient,
    scattering_map,
)
from .errors import (
    DegenerateState,
    DuplicateSubsystem,
    EmptySweep,
    RegisterMismatch,
    SingularDenominator,
    UnknownOutcome,
    UnknownSubsystem,
)
from .protocols import (
    BellKind,
    CorrectionRule,
    ProtocolReport,
    bell_pair,
    correction_for,
    prepare_atom_photon,
    run_case1,
    run_case2,
)
from .state import (
    Gate1Q,
    MeasurementRecord,
    PureState,
    Subsystem,
    apply_1q,
    apply_diag2,
    fidelity,
    measure,
    tensor,
)

__version__ = "0.1.0"
