"""Ring-supported transmit distributions and their load-impedance statistics.

The rate-optimal transmit current for the peak-constrained disk lives on a
finite set of concentric circles centered at the disk center A: radii
r_1 > r_2 > ... >= 0 chosen with probabilities p_k and uniform angle.  The
boundary ring (r_1 = A, always present) maps to purely reactive loads whose
reactance is standard-Cauchy distributed; inner rings map to circles in the
open right half-plane.  This module holds the ring-set container, the exact
geometry of those images, and a reproducible codebook sampler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .phasor import OPEN_CIRCUIT

__all__ = [
    "RingSet",
    "LoadSample",
    "LoadSampleSet",
    "sample_load",
    "cauchy_reactance_pdf",
    "reactance_from_phase",
    "inner_circle_image",
    "theta_from_phi",
]

_PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class RingSet:
    """Concentric-ring transmit distribution: radii [A] and probabilities.

    Invariants enforced on construction: radii strictly decreasing with
    radii[0] equal to the disk radius, the innermost radius >= 0 (a point
    mass at the disk center is allowed), probabilities in [0, 1] summing to
    one.  Probabilities are renormalized to an exact unit sum; inputs whose
    sum is off by more than 1e-9 are rejected.
    """

    disk_radius: float
    radii: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if not self.disk_radius > 0.0:
            raise ValueError("disk_radius must be positive")
        if len(self.radii) < 1:
            raise ValueError("at least one ring required")
        if len(self.radii) != len(self.probs):
            raise ValueError("radii and probs must have equal length")
        if self.radii[0] != self.disk_radius:
            raise ValueError(
                f"outermost radius {self.radii[0]} must equal the disk radius "
                f"{self.disk_radius} (the boundary ring is always present)"
            )
        if any(b >= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly decreasing")
        if self.radii[-1] < 0.0:
            raise ValueError("radii must be nonnegative")
        if any(p < 0.0 or p > 1.0 for p in self.probs):
            raise ValueError("probabilities must lie in [0, 1]")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > _PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        object.__setattr__(self, "probs", tuple(p / total for p in self.probs))

    @classmethod
    def reactive(cls, disk_radius: float) -> "RingSet":
        """Single boundary ring: purely reactive load, uniform-PSK current."""
        return cls(disk_radius, (disk_radius,), (1.0,))

    @property
    def k(self) -> int:
        return len(self.radii)

    @property
    def ratios(self) -> np.ndarray:
        """Radii normalized by the disk radius (outermost entry is 1)."""
        return np.asarray(self.radii) / self.disk_radius


@dataclass(frozen=True)
class LoadSample:
    """One codebook draw: ring index (1-based), angle, current and loads."""

    ring_index: int
    phi: float
    current: complex
    normalized_load: complex
    load_impedance: complex


@dataclass(frozen=True)
class LoadSampleSet:
    """Column-oriented batch of load samples (index/iterate for records)."""

    disk_radius: float
    tag_resistance: float
    ring_index: np.ndarray
    phi: np.ndarray
    current: np.ndarray
    normalized_load: np.ndarray

    @property
    def load_impedance(self) -> np.ndarray:
        return self.tag_resistance * self.normalized_load

    def __len__(self) -> int:
        return len(self.phi)

    def __getitem__(self, idx: int) -> LoadSample:
        return LoadSample(
            ring_index=int(self.ring_index[idx]),
            phi=float(self.phi[idx]),
            current=complex(self.current[idx]),
            normalized_load=complex(self.normalized_load[idx]),
            load_impedance=complex(self.load_impedance[idx]),
        )

    def __iter__(self) -> Iterator[LoadSample]:
        return (self[i] for i in range(len(self)))


def sample_load(rings: RingSet, tag_resistance: float, rng_seed: int, n: int) -> LoadSampleSet:
    """Draw ``n`` load-impedance codebook samples from a ring distribution.

    Ring indices and angles come from two independent PCG64 substreams
    spawned from ``rng_seed`` (stream 0: ring choice, stream 1: angle), so
    codebooks are reproducible across platforms.  Angles are drawn from the
    open interval (-pi, pi), which keeps the open-circuit point (current 0)
    out of codebooks.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not tag_resistance > 0.0:
        raise ValueError("tag_resistance must be positive")
    seq_ring, seq_phi = np.random.SeedSequence(rng_seed).spawn(2)
    rng_ring = np.random.default_rng(seq_ring)
    rng_phi = np.random.default_rng(seq_phi)

    idx = rng_ring.choice(rings.k, size=n, p=np.asarray(rings.probs))
    phi = rng_phi.uniform(-math.pi, math.pi, size=n)
    # uniform() includes the lower endpoint; redraw the measure-zero hits so
    # phi stays inside the open interval
    hits = np.flatnonzero(phi <= -math.pi)
    while hits.size:
        phi[hits] = rng_phi.uniform(-math.pi, math.pi, size=hits.size)
        hits = hits[phi[hits] <= -math.pi]

    a = rings.disk_radius
    radii = np.asarray(rings.radii)
    current = a + radii[idx] * np.exp(1j * phi)
    # current is never 0 here (r = A only reaches 0 at phi = +-pi, excluded)
    normalized_load = 2.0 * a / current - 1.0
    return LoadSampleSet(
        disk_radius=a,
        tag_resistance=tag_resistance,
        ring_index=idx + 1,
        phi=phi,
        current=current,
        normalized_load=normalized_load,
    )


def cauchy_reactance_pdf(x):
    """Density 1/(pi (1 + x^2)) of the boundary-ring load reactance."""
    x = np.asarray(x, dtype=float)
    out = 1.0 / (np.pi * (1.0 + x * x))
    return float(out) if out.ndim == 0 else out


def reactance_from_phase(phi: float) -> float:
    """Reactance x = -tan(phi/2) of the boundary point at angle ``phi``.

    The current A*(1 + e^{j phi}) on the disk boundary is realized by the
    purely reactive load j*x.  phi = +-pi is the open circuit; the returned
    reactance is the corresponding signed infinity.
    """
    if not -math.pi <= phi <= math.pi:
        raise ValueError("phi must lie in [-pi, pi]")
    if phi == math.pi:
        return -math.inf
    if phi == -math.pi:
        return math.inf
    return -math.tan(0.5 * phi)


def inner_circle_image(rings: RingSet, k: int) -> tuple[float, float]:
    """Center and radius of the load-plane circle that ring ``k`` maps to.

    ``k`` is 1-based.  The boundary ring (k = 1) maps to the imaginary axis,
    not a circle, and is rejected; so is a degenerate ring of radius 0
    (which maps to the single point z = 1).
    """
    if not 2 <= k <= rings.k:
        raise ValueError(f"k must be in 2..{rings.k} (ring 1 maps to the imaginary axis)")
    r1 = rings.radii[0]
    rk = rings.radii[k - 1]
    if rk <= 0.0:
        raise ValueError("degenerate ring of radius 0 maps to a point, not a circle")
    denom = r1 * r1 - rk * rk
    return (r1 * r1 + rk * rk) / denom, 2.0 * r1 * rk / denom


def theta_from_phi(phi: float, ratio: float) -> float:
    """Angle on the image circle for a point at angle ``phi`` on ring ``k``.

    ``ratio`` is r_k/r_1 in (0, 1).  The current A + r_k e^{j phi} maps to
    the image circle of inner_circle_image at angle theta + pi.  Returned
    theta is wrapped to (-pi, pi]; for ratio -> 0 it approaches phi, for
    ratio -> 1 it is pushed towards zero.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must lie strictly between 0 and 1")
    if not -math.pi < phi <= math.pi:
        raise ValueError("phi must lie in (-pi, pi]")
    theta = 2.0 * math.atan2(math.sin(phi), ratio + math.cos(phi)) - phi
    # wrap to (-pi, pi]
    theta = math.remainder(theta, 2.0 * math.pi)
    if theta <= -math.pi:
        theta += 2.0 * math.pi
    return theta
