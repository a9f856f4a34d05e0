"""Fidelity sweeps, robustness scans and sampling statistics.

Corrections are always the ideal-point tables, as a fixed classical
controller would apply them, so off-ideal phases degrade the swapped state.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import state as sc
from .cavity import CavityParams, PhasePair, phase_shifts
from .errors import EmptySweep
from .protocols import CORRECTIONS, MEASURED, TRAJECTORIES, outcome_label, run_case

CAVITY_AXES = ("omega_p", "g", "gamma")
PHASE_AXES = ("phi_offset", "phi0_offset")
AXIS_NAMES = CAVITY_AXES + PHASE_AXES
MODES = ("ideal", "lossy")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown sweep axis {self.name!r}; expected one of {AXIS_NAMES}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError(f"axis {self.name}: bounds must be finite")
        if self.start > self.stop:
            raise ValueError(f"axis {self.name}: start must be <= stop")
        if int(self.steps) != self.steps or self.steps < 0:
            raise ValueError(f"axis {self.name}: steps must be a non-negative integer")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.steps))


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[Axis, ...]
    case: int = 1
    mode: str = "ideal"
    base: CavityParams = field(default_factory=CavityParams.canonical)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if self.case not in (1, 2):
            raise ValueError(f"case must be 1 or 2, got {self.case!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate sweep axes in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)


@dataclass(frozen=True)
class SweepRow:
    params: dict[str, float]
    phases: PhasePair
    mean_fidelity: float
    worst_fidelity: float
    success_probability: float


def evaluate_point(
    point: CavityParams | PhasePair,
    case: int = 1,
    mode: str = "ideal",
    params: dict[str, float] | None = None,
) -> SweepRow:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    pp = phase_shifts(point) if isinstance(point, CavityParams) else point
    report = run_case(case, pp, "enumerate", lossy=(mode == "lossy"))
    return SweepRow(
        params=dict(params or {}),
        phases=pp,
        mean_fidelity=report.mean_fidelity,
        worst_fidelity=report.worst_fidelity,
        success_probability=min(report.success_probability, 1.0),
    )


def _grid_point(spec: SweepSpec, values: tuple[float, ...]) -> SweepRow:
    settings = dict(zip(spec.names, (float(v) for v in values)))
    physics = {k: v for k, v in settings.items() if k in CAVITY_AXES}
    pp = phase_shifts(spec.base.replace(**physics)).shifted(
        settings.get("phi_offset", 0.0), settings.get("phi0_offset", 0.0)
    )
    return evaluate_point(pp, spec.case, spec.mode, params=settings)


def sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the Cartesian grid, first axis varying slowest."""
    grids = [a.values() for a in spec.axes]
    if not grids or any(len(g) == 0 for g in grids):
        raise EmptySweep("sweep grid has no points")
    return [_grid_point(spec, values) for values in itertools.product(*grids)]


@dataclass(frozen=True)
class SampleRow:
    outcome: str
    expected: float
    observed: float
    z: float


def _z_score(observed: float, expected: float, n: int) -> float:
    if expected <= 0.0 or expected >= 1.0:
        return 0.0 if observed == expected else math.inf
    return float((observed - expected) * math.sqrt(n / (expected * (1.0 - expected))))


def sampling_check(case: int, pp: PhasePair, n: int, seed: int, lossy: bool = False) -> list[SampleRow]:
    """Compare ``n`` seeded protocol measurements against the Born probabilities.

    Expected probabilities are conditioned on photon detection, matching what
    a sampled run reports.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    final = TRAJECTORIES[case](pp, lossy).final
    labels = MEASURED[case]
    patterns, weights = sc.outcome_distribution(final, labels)
    expected = {outcome_label(p): w / weights.sum() for p, w in zip(patterns, weights)}
    counts = Counter(outcome_label(bits) for bits in sc.sample_outcomes(final, labels, n, seed))
    rows = []
    for outcome in CORRECTIONS[case]:
        observed = counts.get(outcome, 0) / n
        rows.append(SampleRow(outcome, float(expected[outcome]), observed, _z_score(observed, expected[outcome], n)))
    return rows
