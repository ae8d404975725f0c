"""Radiative heat absorbed by a rotating dielectric nanoparticle above a planar bulk."""

__version__ = "0.1.0"

from nfrht.material import LorentzMaterial, ConstantPermittivity, eps_lorentz, chi_body, find_resonances
from nfrht.rotor import ParticleSpec, lab_susceptibility, polarizability_im
from nfrht.greens import QuadratureConfig, OverlapTensor, bulk_overlap, quasistatic_overlap
from nfrht.spectrum import ScenarioConfig, planck_occupation, spectral_power_density, total_power

__all__ = [
    "LorentzMaterial",
    "ConstantPermittivity",
    "eps_lorentz",
    "chi_body",
    "find_resonances",
    "ParticleSpec",
    "lab_susceptibility",
    "polarizability_im",
    "QuadratureConfig",
    "OverlapTensor",
    "bulk_overlap",
    "quasistatic_overlap",
    "ScenarioConfig",
    "planck_occupation",
    "spectral_power_density",
    "total_power",
]
