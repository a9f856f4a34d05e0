"""Entanglement swapping between distant cavity atoms via photon reflection.

Case 1 uses three cavities: atoms A and B share a Bell pair, atom C is
entangled with a photon by reflection, and a Bell measurement on (photon, B)
swaps the entanglement onto (A, C).  Case 2 uses four cavities holding two
Bell pairs AB and CD; a single photon reflected off D and then B mediates a
measurement on (photon, B, D).  In both cases atom A receives a Pauli
correction chosen from the outcome, leaving AC in (|01> + |10>)/sqrt(2).

Register order is always (A, B, C[, D], photon).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import state as sc
from .cavity import PhasePair, scattering_map
from .errors import DuplicateSubsystem, UnknownOutcome
from .state import A, B, C, D, PHOTON, Gate1Q, PureState, Subsystem

_S2 = 1 / np.sqrt(2)


class BellKind(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


_BELL_AMPS = {
    BellKind.PHI_PLUS: (_S2, 0, 0, _S2),
    BellKind.PHI_MINUS: (_S2, 0, 0, -_S2),
    BellKind.PSI_PLUS: (0, _S2, _S2, 0),
    BellKind.PSI_MINUS: (0, _S2, -_S2, 0),
}


def bell_pair(a: Subsystem, b: Subsystem, kind: BellKind = BellKind.PSI_PLUS) -> PureState:
    if a is b:
        raise DuplicateSubsystem(f"Bell pair needs two subsystems, got {a.value} twice")
    return PureState((a, b), np.array(_BELL_AMPS[kind], dtype=complex))


PAULI_GATES = {
    g.name: g
    for g in (sc.IDENTITY, sc.PAULI_X, sc.I_PAULI_Y, sc.MINUS_I_PAULI_Y, sc.PAULI_Z)
}


@dataclass(frozen=True)
class CorrectionRule:
    outcome: str
    operation: str

    @property
    def gate(self) -> Gate1Q:
        return PAULI_GATES[self.operation]


# rows in the published table order
CORRECTIONS = {
    1: {
        "L0": CorrectionRule("L0", "X"),
        "L1": CorrectionRule("L1", "iY"),
        "R0": CorrectionRule("R0", "Z"),
        "R1": CorrectionRule("R1", "I"),
    },
    2: {
        "R00": CorrectionRule("R00", "-iY"),
        "R01": CorrectionRule("R01", "X"),
        "R10": CorrectionRule("R10", "X"),
        "R11": CorrectionRule("R11", "-iY"),
        "L00": CorrectionRule("L00", "I"),
        "L01": CorrectionRule("L01", "Z"),
        "L10": CorrectionRule("L10", "Z"),
        "L11": CorrectionRule("L11", "I"),
    },
}

MEASURED = {1: (PHOTON, B), 2: (PHOTON, B, D)}


def outcome_label(bits: Sequence[int]) -> str:
    """``(0, 1)`` -> ``"L1"``: polarization first, then atom bits."""
    bits = tuple(bits)
    if not bits or any(bit not in (0, 1) for bit in bits):
        raise UnknownOutcome(f"invalid outcome bits {bits!r}")
    return "LR"[bits[0]] + "".join(str(bit) for bit in bits[1:])


def correction_for(case: int, outcome: str | Sequence[int]) -> CorrectionRule:
    if case not in CORRECTIONS:
        raise ValueError(f"case must be 1 or 2, got {case!r}")
    label = outcome if isinstance(outcome, str) else outcome_label(outcome)
    try:
        return CORRECTIONS[case][label]
    except KeyError:
        raise UnknownOutcome(f"no case-{case} correction for outcome {label!r}") from None


@dataclass(frozen=True)
class Operation:
    name: str
    targets: tuple[Subsystem, ...]


@dataclass
class Trajectory:
    """States after each named protocol step, plus the physical operation log."""

    case: int
    phases: PhasePair
    lossy: bool
    states: dict[str, PureState] = field(default_factory=dict)
    log: list[Operation] = field(default_factory=list)

    @property
    def final(self) -> PureState:
        return self.states[next(reversed(self.states))]

    def touches_jointly(self, *labels: Subsystem) -> bool:
        wanted = set(labels)
        return any(wanted <= set(op.targets) for op in self.log)


class _Runner:
    def __init__(self, traj: Trajectory):
        self.traj = traj
        self.diag = scattering_map(traj.phases, traj.lossy)

    def prepare(self, s: PureState, name: str) -> PureState:
        self.traj.log.append(Operation(name, s.register))
        return s

    def scatter(self, s: PureState, atom: Subsystem) -> PureState:
        self.traj.log.append(Operation("reflect", (atom, PHOTON)))
        return sc.apply_diag2(s, atom, PHOTON, self.diag)

    def hadamard(self, s: PureState, *labels: Subsystem) -> PureState:
        for label in labels:
            self.traj.log.append(Operation("hadamard", (label,)))
            s = sc.apply_1q(s, label, sc.HADAMARD)
        return s

    def record(self, step: str, s: PureState) -> PureState:
        self.traj.states[step] = s
        return s


def _plus(label: Subsystem) -> PureState:
    return sc.qubit(label, _S2, _S2)


def prepare_atom_photon(pp: PhasePair, atom: Subsystem = C, lossy: bool = False) -> PureState:
    """Atom in (|0>+|1>)/sqrt2 reflecting a linearly polarized photon."""
    s = sc.tensor(_plus(atom), _plus(PHOTON))
    return sc.apply_diag2(s, atom, PHOTON, scattering_map(pp, lossy))


def case1_trajectory(pp: PhasePair, lossy: bool = False) -> Trajectory:
    traj = Trajectory(1, pp, lossy)
    run = _Runner(traj)
    ab = run.prepare(bell_pair(A, B), "bell_pair")
    c = run.prepare(_plus(C), "prepare_atom")
    ph = run.prepare(_plus(PHOTON), "prepare_photon")
    cp = run.record("atom_photon", run.scatter(sc.tensor(c, ph), C))
    s = run.record("initial", sc.tensor(ab, cp))
    s = run.record("reflected_b", run.scatter(s, B))
    run.record("hadamards", run.hadamard(s, B, PHOTON))
    return traj


def case2_trajectory(pp: PhasePair, lossy: bool = False) -> Trajectory:
    traj = Trajectory(2, pp, lossy)
    run = _Runner(traj)
    ab = run.prepare(bell_pair(A, B), "bell_pair")
    cd = run.prepare(bell_pair(C, D), "bell_pair")
    ph = run.prepare(_plus(PHOTON), "prepare_photon")
    s = run.record("initial", sc.tensor_all([ab, cd, ph]))
    s = run.record("reflected_d", run.scatter(s, D))
    s = run.record("hadamard_d", run.hadamard(s, D))
    s = run.record("reflected_b", run.scatter(s, B))
    run.record("hadamards", run.hadamard(s, B, PHOTON))
    return traj


TRAJECTORIES = {1: case1_trajectory, 2: case2_trajectory}
TARGET = bell_pair(A, C, BellKind.PSI_PLUS)


@dataclass(frozen=True)
class Branch:
    outcome: str
    probability: float
    correction: str
    fidelity: float | None
    state: PureState | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class ProtocolReport:
    case: int
    branches: tuple[Branch, ...]
    success_probability: float
    phases_used: PhasePair
    lossy: bool = False
    log: tuple[Operation, ...] = field(default=(), repr=False)

    @property
    def mean_fidelity(self) -> float:
        live = [(b.probability, b.fidelity) for b in self.branches if b.fidelity is not None]
        total = sum(p for p, _ in live)
        return sum(p * f for p, f in live) / total

    @property
    def worst_fidelity(self) -> float:
        return min(b.fidelity for b in self.branches if b.fidelity is not None)

    def branch(self, outcome: str) -> Branch:
        for b in self.branches:
            if b.outcome == outcome:
                return b
        raise UnknownOutcome(f"no branch {outcome!r} in report")


def _correct(case: int, record: sc.MeasurementRecord, log: list[Operation]) -> Branch:
    rule = correction_for(case, record.bits)
    if record.collapsed is None:
        return Branch(rule.outcome, record.probability, rule.operation, None)
    log.append(Operation("correct", (A,)))
    fixed = sc.apply_1q(record.collapsed, A, rule.gate)
    return Branch(rule.outcome, record.probability, rule.operation, sc.fidelity(fixed, TARGET), fixed)


def run_case(
    case: int,
    pp: PhasePair,
    mode: str | int = "enumerate",
    lossy: bool = False,
) -> ProtocolReport:
    """Run one swapping protocol and apply the tabulated corrections.

    ``mode`` is ``"enumerate"`` for every measurement branch (reported in
    table order) or an integer seed for a single Born-sampled run.  Branch
    probabilities are absolute, so with loss they sum to the detection
    probability rather than to one.
    """
    if case not in TRAJECTORIES:
        raise ValueError(f"case must be 1 or 2, got {case!r}")
    traj = TRAJECTORIES[case](pp, lossy)
    final = traj.final
    labels = MEASURED[case]
    traj.log.append(Operation("measure", labels))
    if isinstance(mode, str):
        records = sc.measure(final, labels, mode)
        order = list(CORRECTIONS[case])
        records.sort(key=lambda r: order.index(outcome_label(r.bits)))
    else:
        record = sc.measure(final, labels, mode)
        # sampling conditions on detection: report the conditional probability
        records = [
            sc.MeasurementRecord(record.measured, record.probability / final.norm2, record.collapsed)
        ]
    branches = tuple(_correct(case, r, traj.log) for r in records)
    return ProtocolReport(
        case=case,
        branches=branches,
        success_probability=final.norm2,
        phases_used=pp,
        lossy=lossy,
        log=tuple(traj.log),
    )


def run_case1(pp: PhasePair, mode: str | int = "enumerate", lossy: bool = False) -> ProtocolReport:
    return run_case(1, pp, mode, lossy)


def run_case2(pp: PhasePair, mode: str | int = "enumerate", lossy: bool = False) -> ProtocolReport:
    return run_case(2, pp, mode, lossy)
