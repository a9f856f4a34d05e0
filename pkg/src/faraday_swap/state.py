"""Dense state vectors over a labeled register of two-level subsystems.

Amplitudes are stored big-endian over the register: the first label is the
most significant bit.  The photon uses L -> 0 and R -> 1.  States may be
sub-normalized; the squared norm of a conditional branch is its success
probability.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateState, DuplicateSubsystem, RegisterMismatch, UnknownSubsystem

NORM_TOL = 1e-9
UNITARY_TOL = 1e-12


class Subsystem(enum.Enum):
    ATOM_A = "A"
    ATOM_B = "B"
    ATOM_C = "C"
    ATOM_D = "D"
    PHOTON = "photon"

    @property
    def is_photon(self) -> bool:
        return self is Subsystem.PHOTON

    def bit_symbol(self, bit: int) -> str:
        """ASCII symbol for a measured bit, ``L``/``R`` for the photon."""
        if self.is_photon:
            return "LR"[bit]
        return "01"[bit]

    def __repr__(self) -> str:
        return f"Subsystem.{self.name}"


A, B, C, D, PHOTON = (
    Subsystem.ATOM_A,
    Subsystem.ATOM_B,
    Subsystem.ATOM_C,
    Subsystem.ATOM_D,
    Subsystem.PHOTON,
)


def _check_register(register: Sequence[Subsystem]) -> tuple[Subsystem, ...]:
    register = tuple(register)
    for label in register:
        if not isinstance(label, Subsystem):
            raise TypeError(f"register entries must be Subsystem, got {label!r}")
    seen = set()
    for label in register:
        if label in seen:
            raise DuplicateSubsystem(f"{label.value} appears twice in register")
        seen.add(label)
    return register


@dataclass(frozen=True, eq=False)
class PureState:
    register: tuple[Subsystem, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        register = _check_register(self.register)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(register):
            raise ValueError(
                f"need {2 ** len(register)} amplitudes for {len(register)} subsystems, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm2 = float(np.vdot(amps, amps).real)
        if norm2 > 1.0 + NORM_TOL:
            raise ValueError(f"squared norm {norm2!r} exceeds 1")
        amps.setflags(write=False)
        object.__setattr__(self, "register", register)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return len(self.register)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def axis(self, label: Subsystem) -> int:
        try:
            return self.register.index(label)
        except ValueError:
            raise UnknownSubsystem(
                f"{label} not in register {[s.value for s in self.register]}"
            ) from None

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n)

    def normalized(self) -> PureState:
        norm2 = self.norm2
        if norm2 <= 0.0:
            raise DegenerateState("cannot normalize a zero-norm state")
        return PureState(self.register, self.amplitudes / np.sqrt(norm2))

    def reordered(self, register: Sequence[Subsystem]) -> PureState:
        """Same state with the register permuted into ``register`` order."""
        register = _check_register(register)
        if set(register) != set(self.register) or len(register) != self.n:
            raise RegisterMismatch(
                f"cannot reorder {[s.value for s in self.register]} into {[s.value for s in register]}"
            )
        perm = [self.register.index(label) for label in register]
        amps = np.transpose(self.tensor_view(), perm).reshape(-1)
        return PureState(register, amps)

    def __repr__(self) -> str:
        labels = ",".join(s.value for s in self.register)
        return f"PureState([{labels}], norm2={self.norm2:.6g})"


def basis_state(bits: dict[Subsystem, int] | Sequence[tuple[Subsystem, int]]) -> PureState:
    """Computational basis state, e.g. ``basis_state({A: 0, B: 1})``."""
    items = list(bits.items()) if isinstance(bits, dict) else list(bits)
    register = [label for label, _ in items]
    index = 0
    for _, bit in items:
        if bit not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {bit!r}")
        index = 2 * index + bit
    amps = np.zeros(2 ** len(items), dtype=complex)
    amps[index] = 1.0
    return PureState(tuple(register), amps)


def qubit(label: Subsystem, amp0: complex, amp1: complex) -> PureState:
    return PureState((label,), np.array([amp0, amp1], dtype=complex))


def tensor(a: PureState, b: PureState) -> PureState:
    """Kronecker product; ``a``'s labels become the high bits."""
    clash = set(a.register) & set(b.register)
    if clash:
        raise DuplicateSubsystem(f"registers overlap on {sorted(s.value for s in clash)}")
    return PureState(a.register + b.register, np.kron(a.amplitudes, b.amplitudes))


def tensor_all(states: Iterable[PureState]) -> PureState:
    states = list(states)
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


@dataclass(frozen=True, eq=False)
class Gate1Q:
    matrix: np.ndarray
    name: str = ""
    unitary: bool = True

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"single-qubit gate must be 2x2, got {m.shape}")
        if self.unitary and not np.allclose(m.conj().T @ m, np.eye(2), rtol=0, atol=UNITARY_TOL):
            raise ValueError(f"gate {self.name or m!r} flagged unitary but is not")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __repr__(self) -> str:
        return f"Gate1Q({self.name or 'custom'})"


_S2 = 1 / np.sqrt(2)
IDENTITY = Gate1Q(np.eye(2), "I")
HADAMARD = Gate1Q(np.array([[_S2, _S2], [_S2, -_S2]]), "H")
PAULI_X = Gate1Q(np.array([[0, 1], [1, 0]]), "X")
PAULI_Y = Gate1Q(np.array([[0, -1j], [1j, 0]]), "Y")
PAULI_Z = Gate1Q(np.array([[1, 0], [0, -1]]), "Z")
I_PAULI_Y = Gate1Q(1j * PAULI_Y.matrix, "iY")
MINUS_I_PAULI_Y = Gate1Q(-1j * PAULI_Y.matrix, "-iY")


def apply_1q(s: PureState, label: Subsystem, g: Gate1Q) -> PureState:
    ax = s.axis(label)
    t = np.tensordot(g.matrix, s.tensor_view(), axes=([1], [ax]))
    return PureState(s.register, np.moveaxis(t, 0, ax).reshape(-1))


def apply_diag2(s: PureState, a: Subsystem, b: Subsystem, d: Sequence[complex]) -> PureState:
    """Multiply each amplitude by ``d[2*bit_a + bit_b]``."""
    ax_a, ax_b = s.axis(a), s.axis(b)
    if ax_a == ax_b:
        raise DuplicateSubsystem(f"diagonal gate needs two distinct subsystems, got {a.value} twice")
    d = np.asarray(d, dtype=complex).reshape(2, 2)
    shape = [1] * s.n
    shape[ax_a] = shape[ax_b] = 2
    factor = d if ax_a < ax_b else d.T
    return PureState(s.register, (s.tensor_view() * factor.reshape(shape)).reshape(-1))


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """One branch of a projective measurement.

    ``probability`` is the squared norm of the projected branch, so over all
    branches it sums to the pre-measurement squared norm; for a normalized
    input it is the Born probability.  ``collapsed`` is the renormalized
    residual state with the measured subsystems removed, or ``None`` when the
    branch carries no weight.
    """

    measured: tuple[tuple[Subsystem, int], ...]
    probability: float
    collapsed: PureState | None

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(bit for _, bit in self.measured)

    @property
    def label(self) -> str:
        return "".join(s.bit_symbol(bit) for s, bit in self.measured)


ENUMERATE = "enumerate"
# branches lighter than this fraction of the total are treated as empty
NULL_BRANCH = 1e-24


def _project(s: PureState, labels: Sequence[Subsystem], bits: Sequence[int]) -> np.ndarray:
    axes = [s.axis(label) for label in labels]
    index = [slice(None)] * s.n
    for ax, bit in zip(axes, bits):
        index[ax] = bit
    return s.tensor_view()[tuple(index)].reshape(-1)


def _branch(s: PureState, labels: Sequence[Subsystem], bits: Sequence[int], total: float) -> MeasurementRecord:
    rest = tuple(label for label in s.register if label not in labels)
    amps = _project(s, labels, bits)
    weight = float(np.vdot(amps, amps).real)
    collapsed = None
    if weight > NULL_BRANCH * total:
        collapsed = PureState(rest, amps / np.sqrt(weight))
    return MeasurementRecord(tuple(zip(labels, bits)), weight, collapsed)


def outcome_distribution(s: PureState, labels: Sequence[Subsystem]) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """All bit patterns over ``labels`` with their unnormalized branch weights."""
    labels = _check_register(labels)
    patterns = list(itertools.product((0, 1), repeat=len(labels)))
    weights = np.array([np.vdot(a, a).real for a in (_project(s, labels, p) for p in patterns)])
    return patterns, weights


def _born(s: PureState, labels: Sequence[Subsystem]) -> tuple[list[tuple[int, ...]], np.ndarray]:
    patterns, weights = outcome_distribution(s, labels)
    total = weights.sum()
    if total <= 0.0:
        raise DegenerateState("cannot measure a zero-norm state")
    return patterns, weights / total


def measure(
    s: PureState,
    labels: Sequence[Subsystem],
    rng_seed: int | np.random.Generator | str = ENUMERATE,
) -> MeasurementRecord | list[MeasurementRecord]:
    """Projective computational-basis measurement of ``labels``.

    With ``rng_seed="enumerate"`` every branch is returned in lexicographic
    bit order.  Otherwise one branch is drawn from the Born distribution of
    the normalized state using ``numpy.random.default_rng(rng_seed)``.
    """
    labels = _check_register(labels)
    if not labels:
        raise ValueError("nothing to measure")
    for label in labels:
        s.axis(label)
    total = s.norm2
    if total <= 0.0:
        raise DegenerateState("cannot measure a zero-norm state")
    if isinstance(rng_seed, str):
        if rng_seed != ENUMERATE:
            raise ValueError(f"unknown measurement mode {rng_seed!r}")
        patterns = itertools.product((0, 1), repeat=len(labels))
        return [_branch(s, labels, bits, total) for bits in patterns]
    rng = np.random.default_rng(rng_seed)
    patterns, probs = _born(s, labels)
    k = rng.choice(len(patterns), p=probs)
    return _branch(s, labels, patterns[k], total)


def sample_outcomes(
    s: PureState,
    labels: Sequence[Subsystem],
    n: int,
    rng_seed: int | np.random.Generator | None = None,
) -> list[tuple[int, ...]]:
    """Draw ``n`` independent measurement outcomes of ``labels`` on copies of ``s``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(rng_seed)
    patterns, probs = _born(s, labels)
    return [patterns[k] for k in rng.choice(len(patterns), size=n, p=probs)]


def fidelity(a: PureState, b: PureState) -> float:
    """Phase-invariant overlap |<a|b>|^2 of the normalized states."""
    if set(a.register) != set(b.register) or a.n != b.n:
        raise RegisterMismatch(
            f"registers differ: {[s.value for s in a.register]} vs {[s.value for s in b.register]}"
        )
    a = a.normalized()
    b = b.reordered(a.register).normalized()
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2))
