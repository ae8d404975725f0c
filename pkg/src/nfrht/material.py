"""
Dielectric functions and body-frame susceptibilities.

All frequencies are angular (rad/s). Functions accept scalars or numpy
arrays and follow the crossing symmetry ``f(-w) = conj(f(w))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

DRESSINGS = ("bare", "clausius_mossotti")


class NoRoot(ValueError):
    """Re eps never reaches the requested value inside the reststrahlen band."""


@dataclass(frozen=True)
class LorentzMaterial:
    """
    Single-oscillator (TO/LO) permittivity model.

    Defaults are the silicon carbide parameters, with frequencies in rad/s.
    """

    eps_inf: float = 6.7
    omega_L: float = 1.823e14
    omega_T: float = 1.492e14
    gamma: float = 8.954e11

    def __post_init__(self):
        if not self.eps_inf > 0:
            raise ValueError("eps_inf > 0")
        if not self.omega_T > 0:
            raise ValueError("omega_T > 0")
        if not self.omega_L > self.omega_T:
            raise ValueError("omega_L > omega_T")
        if not self.gamma > 0:
            raise ValueError("gamma > 0")

    def permittivity(self, omega):
        return eps_lorentz(self, omega)


@dataclass(frozen=True)
class ConstantPermittivity:
    """Frequency-independent permittivity; ``value`` applies at positive frequency."""

    value: complex = 1.0 + 0.0j

    def permittivity(self, omega):
        omega = np.asarray(omega, dtype=float)
        out = np.full(omega.shape, complex(self.value))
        out = np.where(omega < 0, np.conj(out), out)
        return out[()] if out.ndim == 0 else out


def eps_lorentz(material: LorentzMaterial, omega):
    """
    Oscillator-model permittivity
    ``eps_inf * (1 + (wL^2 - wT^2) / (wT^2 - w^2 - i*gamma*w))``.

    Negative frequencies return the conjugate of the value at ``|omega|``.
    """
    omega = np.asarray(omega, dtype=float)
    w = np.abs(omega)
    wl2 = material.omega_L ** 2
    wt2 = material.omega_T ** 2
    eps = material.eps_inf * (1.0 + (wl2 - wt2) / (wt2 - w * w - 1j * material.gamma * w))
    eps = np.where(omega < 0, np.conj(eps), eps)
    return eps[()] if eps.ndim == 0 else eps


def chi_body(material, omega, dressing: str = "clausius_mossotti"):
    """
    Body-frame susceptibility of the particle.

    ``bare`` gives ``eps - 1``; ``clausius_mossotti`` gives the dressed
    sphere response ``3 (eps - 1) / (eps + 2)``.
    """
    eps = material.permittivity(omega)
    if dressing == "bare":
        return eps - 1.0
    if dressing == "clausius_mossotti":
        return 3.0 * (eps - 1.0) / (eps + 2.0)
    raise ValueError(f"unknown dressing {dressing!r}; expected one of {DRESSINGS}")


class Resonances(NamedTuple):
    omega_sphere: float
    omega_surface: float


def lossless_root(material: LorentzMaterial, target: float) -> float:
    """Frequency where the lossless permittivity equals ``target`` (a negative number)."""
    e, wl2, wt2 = material.eps_inf, material.omega_L ** 2, material.omega_T ** 2
    return float(np.sqrt((e * wl2 - target * wt2) / (e - target)))


def _root(material: LorentzMaterial, target: float) -> float:
    f = lambda w: float(np.real(eps_lorentz(material, w))) - target
    guess = lossless_root(material, target)
    lo, hi = 0.95 * guess, 1.05 * guess
    if not f(lo) * f(hi) < 0:
        # fall back to the full band, just above the TO pole where Re eps dips lowest
        lo = material.omega_T + material.gamma
        hi = material.omega_L
        if not f(lo) * f(hi) < 0:
            raise NoRoot(f"Re eps never crosses {target} in (omega_T, omega_L)")
    return brentq(f, lo, hi, xtol=1e-12 * guess, rtol=1e-12)


def find_resonances(material: LorentzMaterial) -> Resonances:
    """Sphere (Re eps = -2) and planar-surface (Re eps = -1) resonances of the lossy model."""
    return Resonances(_root(material, -2.0), _root(material, -1.0))
