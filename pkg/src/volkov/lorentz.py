"""Minkowski four-vectors, on-shell momenta and light-cone components.

Metric signature is (+, -, -, -); natural units with hbar = c = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# wave vector of the plane wave, propagation along +z so that eta = t - z
K_NULL = np.array([1.0, 0.0, 0.0, 1.0])


class KinematicsError(ValueError):
    """Raised for momenta outside the p_minus > 0 branch."""


def minkowski_dot(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2] - a[..., 3] * b[..., 3]


def lower(v):
    """Covariant components v_mu = g_{mu nu} v^nu."""
    v = np.asarray(v, dtype=float)
    return v * np.array([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class OnShellMomentum:
    """Four-momentum on the positive-energy mass shell."""

    mass: float
    px: float
    py: float
    pz: float

    def __post_init__(self):
        if not self.mass > 0:
            raise KinematicsError(f"mass must be positive, got {self.mass}")

    @classmethod
    def from_vector(cls, mass, p):
        px, py, pz = (float(c) for c in p)
        return cls(float(mass), px, py, pz)

    @property
    def energy(self) -> float:
        return float(np.sqrt(self.mass**2 + self.px**2 + self.py**2 + self.pz**2))

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.px, self.py, self.pz])

    @property
    def perp(self) -> np.ndarray:
        return np.array([self.px, self.py])

    @property
    def four(self) -> np.ndarray:
        return np.array([self.energy, self.px, self.py, self.pz])

    @property
    def p_minus(self) -> float:
        # p0 - pz computed without cancellation for large positive pz
        e = self.energy
        if self.pz > 0:
            return (self.mass**2 + self.px**2 + self.py**2) / (e + self.pz)
        return e - self.pz

    @property
    def p_plus(self) -> float:
        e = self.energy
        if self.pz < 0:
            return (self.mass**2 + self.px**2 + self.py**2) / (e - self.pz)
        return e + self.pz

    def reflected(self) -> "OnShellMomentum":
        """The momentum with spatial part -p (energy unchanged)."""
        return OnShellMomentum(self.mass, -self.px, -self.py, -self.pz)


def lightcone_components(p: OnShellMomentum):
    """Return (p_minus, p_plus) = (p0 - pz, p0 + pz)."""
    return p.p_minus, p.p_plus


def from_lightcone(p_minus, p_perp, m) -> OnShellMomentum:
    """Rebuild the on-shell momentum from (p_minus, p_perp) at mass m."""
    if not p_minus > 0:
        raise KinematicsError(f"p_minus must be positive, got {p_minus}")
    px, py = (float(c) for c in p_perp)
    pz = (m**2 + px**2 + py**2 - p_minus**2) / (2.0 * p_minus)
    return OnShellMomentum(float(m), px, py, pz)


def random_momenta(rng, n, m=1.0, span=2.0, min_p_minus=0.05):
    """Sample n on-shell momenta with components uniform in [-span, span].

    Momenta with p_minus below ``min_p_minus`` are redrawn.
    """
    out = []
    while len(out) < n:
        p = OnShellMomentum.from_vector(m, rng.uniform(-span, span, size=3))
        if p.p_minus >= min_p_minus:
            out.append(p)
    return out
