"""
Spectral and total heat power absorbed by the rotating particle.

Only the bulk-fluctuation channel is integrated: thermal currents in the
bulk at temperature ``T`` radiate onto the particle,

    dP/dw = (2 hbar / pi) (w^5 / c^4) sum_i Im alpha_ii(w) K_ii(w, z0)
            * Im chi_B(w) * n_T(w),

with ``chi_B = eps_B - 1``. ``K`` is diagonal, so the antisymmetric in-plane
part of ``Im alpha`` never contributes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from nfrht.constants import C, HBAR, K_B
from nfrht.greens import QuadratureConfig, bulk_overlap, quasistatic_kxx
from nfrht.material import LorentzMaterial, find_resonances
from nfrht.quadrature import NonConvergence, integrate
from nfrht.rotor import ParticleSpec, polarizability_diag_im


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Particle, bulk and numerics of one calculation.

    ``omega_window=None`` selects the automatic frequency window.
    ``near_field=True`` swaps the full overlap integral for its closed-form
    quasi-static limit.
    """

    particle: ParticleSpec = field(default_factory=ParticleSpec)
    bulk_material: LorentzMaterial = field(default_factory=LorentzMaterial)
    bulk_temperature: float = 300.0
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    omega_window: tuple[float, float] | None = None
    near_field: bool = False

    def __post_init__(self):
        if not self.bulk_temperature > 0:
            raise ValueError("bulk_temperature > 0")
        if self.omega_window is not None:
            lo, hi = self.omega_window
            if not lo >= 0:
                raise ValueError("omega_window lower bound >= 0")
            if not hi > lo:
                raise ValueError("omega_window upper bound > lower bound")

    def window(self) -> tuple[float, float]:
        if self.omega_window is not None:
            return tuple(float(w) for w in self.omega_window)
        mats = [m for m in (self.particle.material, self.bulk_material) if isinstance(m, LorentzMaterial)]
        w_t = min((m.omega_T for m in mats), default=1e14)
        w_l = max((m.omega_L for m in mats), default=1e14)
        w_cut = max(60 * K_B * self.bulk_temperature / HBAR, 3 * w_l)
        return 1e-3 * w_t, w_cut


@dataclass(frozen=True)
class SpectralResult:
    omega: float
    power_density: float
    error_estimate: float


@dataclass(frozen=True)
class TotalPower:
    """
    Integrated absorbed power (W).

    ``sub_rotation_power`` is the share collected below ``omega0``, where the
    literal in-plane polarizability can turn negative.
    """

    power: float
    error_estimate: float
    sub_rotation_power: float
    n_evaluations: int


def planck_occupation(omega, temperature):
    """Bose-Einstein occupation ``1 / (exp(hbar w / k T) - 1)``."""
    x = HBAR * np.asarray(omega, dtype=float) / (K_B * np.asarray(temperature, dtype=float))
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        small = 1.0 / x - 0.5 + x / 12.0
        regular = np.exp(-x) / -np.expm1(-x)
    n = np.where(x < 1e-6, small, regular)
    return n[()] if n.ndim == 0 else n


def _prefactor(scenario: ScenarioConfig, omega, im_chi_b):
    return (2 * HBAR / np.pi) * omega ** 5 / C ** 4 * im_chi_b * planck_occupation(omega, scenario.bulk_temperature)


def density_and_error(scenario: ScenarioConfig, omegas):
    """Vectorised spectral density and its error estimate on an array of frequencies."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    p = scenario.particle
    eps_b = scenario.bulk_material.permittivity(omegas)
    im_chi_b = np.imag(eps_b)
    a_xx, a_zz = polarizability_diag_im(p, omegas)
    if scenario.near_field:
        kxx = quasistatic_kxx(eps_b, omegas, p.height_z0)
        kzz = 2 * kxx
        exx = ezz = np.zeros_like(kxx)
    else:
        kxx, kzz, exx, ezz = (np.zeros(omegas.size) for _ in range(4))
        for i, (w, e) in enumerate(zip(omegas, eps_b)):
            if e.imag > 0:
                k = bulk_overlap(e, w, p.height_z0, scenario.quadrature)
                kxx[i], kzz[i], exx[i], ezz[i] = k.k_xx, k.k_zz, k.error_xx, k.error_zz
    pref = np.where(im_chi_b != 0, _prefactor(scenario, omegas, im_chi_b), 0.0)
    dens = pref * (2 * a_xx * kxx + a_zz * kzz)
    err = np.abs(pref) * (2 * np.abs(a_xx) * exx + np.abs(a_zz) * ezz)
    return dens, err


def spectral_power_density(scenario: ScenarioConfig, omega: float) -> SpectralResult:
    """Absorbed power per unit angular frequency (W s) at ``omega``."""
    if not omega > 0:
        raise ValueError("omega > 0")
    dens, err = density_and_error(scenario, omega)
    return SpectralResult(float(omega), float(dens[0]), float(err[0]))


def forced_nodes(scenario: ScenarioConfig) -> list[float]:
    """Panel edges at and around the resonances, including rotation-shifted copies."""
    p = scenario.particle
    centres, widths = [], []
    for mat, use in ((p.material, "sphere"), (scenario.bulk_material, "surface")):
        if not isinstance(mat, LorentzMaterial):
            continue
        res = find_resonances(mat)
        main = res.omega_sphere if use == "sphere" else res.omega_surface
        centres += [mat.omega_T, main]
        widths += [mat.gamma, mat.gamma]
        if use == "sphere" and abs(p.omega0) > mat.gamma:
            w0 = abs(p.omega0)
            centres += [abs(main - w0), main + w0, abs(mat.omega_T - w0), mat.omega_T + w0]
            widths += [mat.gamma] * 4
    nodes = []
    for c, g in zip(centres, widths):
        nodes.append(c)
        for s in (1, 4, 16, 64):
            nodes += [c - s * g, c + s * g]
    if p.omega0 != 0:
        nodes.append(abs(p.omega0))
    return nodes


def total_power(scenario: ScenarioConfig) -> TotalPower:
    """Absorbed power (W) integrated over the scenario's frequency window."""
    lo, hi = scenario.window()
    edges = [lo, hi] + [w for w in forced_nodes(scenario) if lo < w < hi]
    q = scenario.quadrature

    def f(w):
        return np.vstack(density_and_error(scenario, w))

    try:
        res = integrate(f, edges, rel_tol=q.rel_tol, abs_tol_floor=q.abs_tol_floor,
                        max_depth=q.max_subdivisions, control=[0])
    except NonConvergence as exc:
        raise NonConvergence(f"frequency integral: {exc}", exc.value[0], exc.error[0] + exc.value[1]) from None
    w0 = abs(scenario.particle.omega0)
    below = res.panel_edges[:, 1] <= w0
    sub = math.fsum(res.panel_values[0, below]) if w0 > 0 else 0.0
    return TotalPower(
        power=float(res.value[0]),
        error_estimate=float(res.error[0] + abs(res.value[1])),
        sub_rotation_power=float(sub),
        n_evaluations=int(res.n_eval),
    )
