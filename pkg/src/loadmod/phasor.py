"""Bijective map between a passive complex load and the transmit-current phasor.

A tag that terminates its antenna with a normalized load ``z`` (impedance over
tag resistance, right half-plane by passivity) drives the current phasor

    i = 2*A / (1 + z),

where the scale ``A`` is set by the induced voltage and the tag resistance.
The image of the right half-plane under this map is the closed disk of radius
``A`` centered at ``A``; the disk boundary corresponds to purely reactive
loads.  All functions here work on normalized quantities; conversion to
physical ohms happens at the CLI boundary only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "OPEN_CIRCUIT",
    "is_open_circuit",
    "LinkBudget",
    "current_from_load",
    "load_from_current",
    "reflection_coefficient",
    "disk_contains",
]

# Open-circuit load (z at the point at infinity, current exactly 0).  Kept as
# a named IEEE infinity rather than a large finite float so that it can be
# detected reliably and serialized as the literal token "inf".
OPEN_CIRCUIT: complex = complex(math.inf, 0.0)

# Relative slack for the passivity check Re(z) >= 0; inverse-mapped boundary
# points may carry real parts of a few ulps below zero.
_PASSIVITY_SLACK = 1e-12


def is_open_circuit(z: complex) -> bool:
    """True if ``z`` is the open-circuit sentinel (any complex infinity)."""
    return cmath.isinf(z)


def _default_tol(disk_radius: float) -> float:
    return 1e-12 * disk_radius


def _check_radius(disk_radius: float) -> None:
    if not disk_radius > 0.0:
        raise ValueError(f"disk_radius must be positive, got {disk_radius}")


def current_from_load(z: complex, disk_radius: float) -> complex:
    """Transmit current for a normalized load ``z`` in the right half-plane.

    The open-circuit sentinel maps to 0.  Loads with a genuinely negative
    real part (active loads) are rejected.
    """
    _check_radius(disk_radius)
    z = complex(z)
    if is_open_circuit(z):
        return 0j
    if z.real < -_PASSIVITY_SLACK * (1.0 + abs(z)):
        raise ValueError(f"active load rejected: Re(z) = {z.real} < 0")
    return 2.0 * disk_radius / (1.0 + z)


def load_from_current(i: complex, disk_radius: float, tol: float | None = None) -> complex:
    """Normalized load realizing the current ``i``; inverse of current_from_load.

    ``i`` must lie in the closed disk |i - A| <= A (+tol).  The disk boundary
    point i = 0 returns the open-circuit sentinel.
    """
    _check_radius(disk_radius)
    if tol is None:
        tol = _default_tol(disk_radius)
    i = complex(i)
    if abs(i - disk_radius) > disk_radius + tol:
        raise ValueError(
            f"current {i} outside the disk of radius {disk_radius}: "
            "no passive load realizes it"
        )
    if i == 0:
        return OPEN_CIRCUIT
    return 2.0 * disk_radius / i - 1.0


def reflection_coefficient(z: complex) -> complex:
    """Smith-chart image (z - 1)/(z + 1) of a right-half-plane load."""
    z = complex(z)
    if is_open_circuit(z):
        return 1.0 + 0j
    if z.real < -_PASSIVITY_SLACK * (1.0 + abs(z)):
        raise ValueError(f"active load rejected: Re(z) = {z.real} < 0")
    return (z - 1.0) / (z + 1.0)


def disk_contains(i: complex, disk_radius: float, tol: float | None = None) -> bool:
    """Membership test for the closed current disk |i - A| <= A + tol."""
    _check_radius(disk_radius)
    if tol is None:
        tol = _default_tol(disk_radius)
    elif tol < 0.0:
        raise ValueError("tol must be nonnegative")
    return abs(complex(i) - disk_radius) <= disk_radius + tol


@dataclass(frozen=True)
class LinkBudget:
    """Physical scenario parameters from which disk radius and SNR derive.

    induced_voltage_mag : magnitude of the tag-side induced voltage [V]
    tag_resistance      : tag antenna resistance [ohm]
    mutual_impedance    : tag-receiver mutual impedance [ohm]
    noise_variance      : receiver noise variance [V^2]
    """

    induced_voltage_mag: float
    tag_resistance: float
    mutual_impedance: complex
    noise_variance: float

    def __post_init__(self) -> None:
        if not self.induced_voltage_mag >= 0.0:
            raise ValueError("induced_voltage_mag must be >= 0")
        if not self.tag_resistance > 0.0:
            raise ValueError("tag_resistance must be > 0")
        if self.mutual_impedance == 0:
            raise ValueError("mutual_impedance must be nonzero")
        if not self.noise_variance > 0.0:
            raise ValueError("noise_variance must be > 0")

    @property
    def disk_radius(self) -> float:
        """Current-disk radius A = |v_ind| / (2 R_T) [A]."""
        return self.induced_voltage_mag / (2.0 * self.tag_resistance)

    @property
    def snr(self) -> float:
        """Linear signal-to-noise ratio |Z_M|^2 A^2 / sigma^2."""
        return abs(self.mutual_impedance) ** 2 * self.disk_radius**2 / self.noise_variance
