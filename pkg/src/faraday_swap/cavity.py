"""Reflection of a single photon off a low-Q cavity holding a trapped atom.

All frequencies and rates are dimensionless multiples of the cavity damping
rate; ``kappa = 1`` is the natural scale.  The coefficients are the
adiabatic steady-state input-output relations, valid in the weak-excitation
regime where the atom stays in its ground manifold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularDenominator


@dataclass(frozen=True)
class CavityParams:
    omega_c: float = 0.0
    omega_0: float = 0.0
    omega_p: float = -0.5
    kappa: float = 1.0
    gamma: float = 0.0
    g: float = 0.5

    def __post_init__(self):
        for name in ("omega_c", "omega_0", "omega_p", "kappa", "gamma", "g"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise TypeError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa!r}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma!r}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g!r}")

    @classmethod
    def canonical(cls, kappa: float = 1.0, omega_c: float = 0.0) -> CavityParams:
        """Parameter point giving phi = pi and phi0 = pi/2 exactly."""
        return cls(
            omega_c=omega_c,
            omega_0=omega_c,
            omega_p=omega_c - kappa / 2,
            kappa=kappa,
            gamma=0.0,
            g=kappa / 2,
        )

    def replace(self, **changes) -> CavityParams:
        return CavityParams(**{**self.__dict__, **changes})


def reflection_coefficient(p: CavityParams) -> complex:
    cav = complex(0.0, p.omega_c - p.omega_p)
    atom = complex(p.gamma / 2, p.omega_0 - p.omega_p)
    if p.g == 0 and atom != 0:
        # the atom factor cancels exactly
        return empty_reflection(p)
    g2 = p.g * p.g
    num = (cav - p.kappa / 2) * atom + g2
    den = (cav + p.kappa / 2) * atom + g2
    if den == 0:
        raise SingularDenominator(
            "atom-cavity reflection is singular at these parameters "
            "(gamma = 0 with a resonant, uncoupled atom)"
        )
    return num / den


def empty_reflection(p: CavityParams) -> complex:
    cav = complex(0.0, p.omega_c - p.omega_p)
    return (cav - p.kappa / 2) / (cav + p.kappa / 2)


def canonical_phase(theta: float) -> float:
    """Wrap an angle into (-pi, pi], keeping pi as +pi."""
    wrapped = math.remainder(theta, 2 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2 * math.pi
    return wrapped


@dataclass(frozen=True)
class PhasePair:
    phi: float
    phi0: float
    mag_r: float = 1.0
    mag_r0: float = 1.0

    def __post_init__(self):
        for name in ("phi", "phi0", "mag_r", "mag_r0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not 0.0 <= self.mag_r <= 1.0 + 1e-12:
            raise ValueError(f"mag_r must lie in [0, 1], got {self.mag_r!r}")
        if not 0.0 <= self.mag_r0 <= 1.0 + 1e-12:
            raise ValueError(f"mag_r0 must lie in [0, 1], got {self.mag_r0!r}")
        object.__setattr__(self, "phi", canonical_phase(self.phi))
        object.__setattr__(self, "phi0", canonical_phase(self.phi0))

    @classmethod
    def ideal(cls) -> PhasePair:
        return cls(math.pi, math.pi / 2)

    def shifted(self, phi_offset: float = 0.0, phi0_offset: float = 0.0) -> PhasePair:
        return PhasePair(self.phi + phi_offset, self.phi0 + phi0_offset, self.mag_r, self.mag_r0)


def _arg(z: complex) -> float:
    return canonical_phase(math.atan2(z.imag, z.real))


def phase_shifts(p: CavityParams) -> PhasePair:
    r = reflection_coefficient(p)
    r0 = empty_reflection(p)
    # |r| can overshoot 1 by an ulp or two when gamma = 0
    return PhasePair(_arg(r), _arg(r0), min(abs(r), 1.0), min(abs(r0), 1.0))


@dataclass(frozen=True)
class FaradayAngles:
    theta_minus: float
    theta_plus: float


def faraday_angles(pp: PhasePair) -> FaradayAngles:
    """Polarization rotation for an atom in |0> (minus) and in |1> (plus)."""
    half = (pp.phi - pp.phi0) / 2
    return FaradayAngles(theta_minus=-half, theta_plus=half)


def scattering_map(pp: PhasePair, lossy: bool = False) -> np.ndarray:
    """Diagonal of the atom-photon reflection, ordered (0,L), (0,R), (1,L), (1,R).

    An atom in |0> only couples the L photon, so L picks up the dressed
    cavity response while R sees an empty cavity; |1> swaps the roles.
    """
    coupled = np.exp(1j * pp.phi)
    empty = np.exp(1j * pp.phi0)
    if lossy:
        coupled = pp.mag_r * coupled
        empty = pp.mag_r0 * empty
    return np.array([coupled, empty, empty, coupled], dtype=complex)
