"""
Independent reference calculations used to pin and cross-check the main path.

The near-field oracle works in real space: the potential a unit dipole at
height ``z0`` sends into the bulk is the vacuum dipole potential times
``2 / (eps + 1)``; the squared field is summed over a graded cylindrical
grid filling ``z' < 0`` and the grid is refined with Richardson steps. It
shares nothing with :mod:`nfrht.greens` beyond the physical constants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nfrht.constants import C
from nfrht.greens import OverlapTensor, QuadratureConfig, bulk_overlap, quasistatic_overlap
from nfrht.material import LorentzMaterial, eps_lorentz, find_resonances, lossless_root
from nfrht.spectrum import ScenarioConfig, density_and_error, total_power


class GridNotConverged(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleReport:
    name: str
    reference_value: float
    test_value: float
    relative_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.relative_error <= self.tolerance)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (
            f"{tag}  {self.name}: ref={self.reference_value:.10g} test={self.test_value:.10g} "
            f"rel_err={self.relative_error:.3g} tol={self.tolerance:.3g}"
        )


def report(name, reference, test, tolerance) -> OracleReport:
    rel = abs(test - reference) / abs(reference) if reference != 0 else abs(test)
    return OracleReport(name, float(reference), float(test), float(rel), float(tolerance))


def _field_sq_sum(eps, k0, z0, n):
    """Midpoint-rule ``int |E|^2`` for x- and z-oriented unit dipoles on an n x n x 8 grid."""
    # depth below the source h = z0/u, radius rho = h tan(psi)
    u = (np.arange(n) + 0.5) / n
    psi = (np.arange(n) + 0.5) / n * (np.pi / 2)
    phi = np.arange(8) * (2 * np.pi / 8)
    U, PSI, PHI = np.meshgrid(u, psi, phi, indexing="ij")
    h = z0 / U
    rho = h * np.tan(PSI)
    jac = (z0 / U ** 2) * rho * (h / np.cos(PSI) ** 2)
    w = jac * (1.0 / n) * (np.pi / 2 / n) * (2 * np.pi / 8)

    R = np.stack([rho * np.cos(PHI), rho * np.sin(PHI), -h])
    r = np.sqrt(np.sum(R * R, axis=0))
    rhat = R / r
    scale = 2.0 / (eps + 1.0) / (4 * np.pi * k0 ** 2 * r ** 3)

    out = []
    for axis in (0, 2):
        p = np.zeros(3)
        p[axis] = 1.0
        proj = np.tensordot(p, rhat, axes=1)
        E = scale * (3 * proj * rhat - p[:, None, None, None])
        out.append(np.sum(w * np.sum(np.abs(E) ** 2, axis=0)))
    return np.array(out)


def oracle_quasistatic_overlap(eps_bulk, omega, z0, n_start=16, max_levels=6, tol=1e-3) -> OverlapTensor:
    """Real-space electrostatic overlap; raises :class:`GridNotConverged` past ``max_levels``."""
    if not z0 > 0:
        raise ValueError("z0 > 0")
    eps = complex(eps_bulk)
    k0 = omega / C
    n = n_start
    prev_raw = _field_sq_sum(eps, k0, z0, n)
    prev_rich = None
    for _ in range(max_levels):
        n *= 2
        raw = _field_sq_sum(eps, k0, z0, n)
        rich = (4 * raw - prev_raw) / 3
        if prev_rich is not None and np.all(np.abs(rich - prev_rich) <= tol * np.abs(rich)):
            return OverlapTensor(k_xx=float(rich[0]), k_zz=float(rich[1]), regime="quasistatic",
                                 error_xx=float(abs(rich[0] - prev_rich[0])),
                                 error_zz=float(abs(rich[1] - prev_rich[1])))
        prev_raw, prev_rich = raw, rich
    raise GridNotConverged(f"real-space overlap not converged after {max_levels} refinements")


def oracle_fixed_grid_power(scenario: ScenarioConfig, n_points: int = 20000) -> float:
    """Trapezoid integral of the spectral density on a uniform grid over the window."""
    if n_points < 1000:
        raise ValueError("n_points >= 1000")
    lo, hi = scenario.window()
    w = np.linspace(lo, hi, n_points)
    w[0] = max(w[0], np.nextafter(0.0, 1.0))
    dens, _ = density_and_error(scenario, w)
    return float(np.trapezoid(dens, w))


def check_material_identities(material: LorentzMaterial | None = None, n_samples=1000, seed=0) -> list[OracleReport]:
    """Resonance root formulas and the surface-response identity."""
    material = material or LorentzMaterial()
    res = find_resonances(material)
    sphere0 = lossless_root(material, -2.0)
    surface0 = lossless_root(material, -1.0)
    reports = [
        report("sphere resonance: lossy root vs lossless formula", sphere0, res.omega_sphere, 5e-3),
        report("surface resonance: lossy root vs lossless formula", surface0, res.omega_surface, 5e-3),
    ]
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.5 * material.omega_T, 1.5 * material.omega_L, n_samples)
    eps = eps_lorentz(material, w)
    lhs = np.imag((eps - 1) / (eps + 1))
    rhs = 2 * np.imag(eps) / np.abs(eps + 1) ** 2
    worst = float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))
    reports.append(OracleReport("Im[(eps-1)/(eps+1)] = 2 Im eps/|eps+1|^2 (max over samples)",
                                0.0, worst, worst, 1e-12))
    return reports


def run_validation(fast: bool = False) -> list[OracleReport]:
    """Full oracle suite used by ``nfrht validate``."""
    mat = LorentzMaterial()
    reports = check_material_identities(mat)
    reports += [
        report("lossless sphere resonance vs 1.753e14", 1.753e14, lossless_root(mat, -2.0), 5e-3),
        report("lossless surface resonance vs 1.783e14", 1.783e14, lossless_root(mat, -1.0), 5e-3),
    ]

    w, z0 = 1.75e14, 5e-9
    eps = complex(eps_lorentz(mat, w))
    orc = oracle_quasistatic_overlap(eps, w, z0)
    orc2 = oracle_quasistatic_overlap(eps, w, 2 * z0)
    qs = quasistatic_overlap(eps, w, z0)
    reports += [
        report("oracle K_zz/K_xx = 2", 2.0, orc.k_zz / orc.k_xx, 3e-3),
        report("oracle K(2 z0)/K(z0) = 1/8", 0.125, orc2.k_xx / orc.k_xx, 3e-3),
        report("quasistatic K_xx vs real-space oracle", orc.k_xx, qs.k_xx, 5e-3),
        report("quasistatic K_zz vs real-space oracle", orc.k_zz, qs.k_zz, 5e-3),
    ]

    cfg = QuadratureConfig()
    for z in (5e-9, 10e-9):
        for wi in np.linspace(1.6e14, 1.85e14, 3 if fast else 6):
            e = complex(eps_lorentz(mat, wi))
            full = bulk_overlap(e, wi, z, cfg)
            near = quasistatic_overlap(e, wi, z)
            reports.append(report(f"bulk vs quasistatic K_xx (w={wi:.4g}, z0={z:g})", full.k_xx, near.k_xx, 1e-2))
            reports.append(report(f"bulk vs quasistatic K_zz (w={wi:.4g}, z0={z:g})", full.k_zz, near.k_zz, 1e-2))
            reports.append(report(f"bulk K_zz/K_xx (w={wi:.4g}, z0={z:g})", 2.0, full.k_zz / full.k_xx, 2e-2))

    scen = ScenarioConfig(near_field=fast)
    tp = total_power(scen)
    grid = oracle_fixed_grid_power(scen, 20000)
    tol = 3 * tp.error_estimate / abs(tp.power)
    reports.append(report("total power vs fixed-grid trapezoid (tolerance 3x error estimate)", grid, tp.power, tol))
    return reports
