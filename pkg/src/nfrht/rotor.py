"""
Laboratory-frame response of a particle spinning about the surface normal.

The body-frame susceptibility is shifted by the rotation: the z component
sees ``chi0(w - m*w0)`` and the in-plane components mix the two circular
channels at ``w + w0`` and ``w - w0``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from nfrht.material import DRESSINGS, LorentzMaterial, chi_body


class ModelValidityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ParticleSpec:
    """
    Spherical particle of radius ``radius_a`` (m) whose centre sits at
    ``height_z0`` (m) above the bulk surface, spinning at ``omega0`` (rad/s).
    """

    radius_a: float = 5e-9
    height_z0: float = 10e-9
    omega0: float = 0.0
    material: LorentzMaterial = field(default_factory=LorentzMaterial)
    dressing: str = "clausius_mossotti"

    def __post_init__(self):
        if not self.radius_a > 0:
            raise ValueError("radius_a > 0")
        if not self.height_z0 > self.radius_a:
            raise ValueError("height_z0 > radius_a")
        if not np.isfinite(self.omega0):
            raise ValueError("omega0 must be finite")
        if self.dressing not in DRESSINGS:
            raise ValueError(f"dressing must be one of {DRESSINGS}")
        if self.radius_a > self.height_z0 / 2:
            warnings.warn(
                f"radius {self.radius_a:g} m exceeds half the height {self.height_z0:g} m; "
                "the point-dipole model is outside its range of validity",
                ModelValidityWarning,
                stacklevel=3,
            )

    @property
    def volume(self) -> float:
        return 4.0 / 3.0 * np.pi * self.radius_a ** 3


@dataclass(frozen=True)
class LabSusceptibilityTensor:
    xx: complex
    yy: complex
    zz: complex
    xy: complex
    yx: complex
    omega: float
    m: int

    def as_matrix(self) -> np.ndarray:
        return np.array(
            [[self.xx, self.xy, 0.0], [self.yx, self.yy, 0.0], [0.0, 0.0, self.zz]],
            dtype=complex,
        )


def _shifted_chi(particle: ParticleSpec, omega, m: int):
    chi = lambda w: chi_body(particle.material, w, particle.dressing)
    shift = m * particle.omega0
    c_plus = chi(omega + particle.omega0 - shift)
    c_minus = chi(omega - particle.omega0 - shift)
    c_z = chi(omega - shift)
    return c_plus, c_minus, c_z


def lab_susceptibility(particle: ParticleSpec, omega: float, m: int = 0) -> LabSusceptibilityTensor:
    """Lab-frame susceptibility tensor at frequency ``omega`` for azimuthal index ``m``."""
    c_plus, c_minus, c_z = _shifted_chi(particle, omega, m)
    xx = 0.5 * (c_plus + c_minus)
    xy = (c_plus - c_minus) / 2j
    return LabSusceptibilityTensor(
        xx=complex(xx), yy=complex(xx), zz=complex(c_z),
        xy=complex(xy), yx=complex(-xy), omega=float(omega), m=int(m),
    )


def polarizability_diag_im(particle: ParticleSpec, omega):
    """
    Vectorised ``(Im alpha_xx, Im alpha_zz)`` at ``m = 0`` in m^3.

    ``Im alpha_yy`` equals ``Im alpha_xx``.
    """
    c_plus, c_minus, c_z = _shifted_chi(particle, np.asarray(omega, dtype=float), 0)
    v = particle.volume
    return v * 0.5 * (np.imag(c_plus) + np.imag(c_minus)), v * np.imag(c_z)


def polarizability_im(particle: ParticleSpec, omega: float) -> np.ndarray:
    """``V * Im chi^P_ij(omega, m=0)`` as a real 3x3 array (m^3)."""
    if not omega > 0:
        raise ValueError("omega > 0")
    t = lab_susceptibility(particle, omega, 0)
    return particle.volume * np.imag(t.as_matrix())
