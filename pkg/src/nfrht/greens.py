"""
Geometry factor of the absorbed-power formula for a planar half-space.

For a source point at height ``z0`` in vacuum and integration points filling
the bulk ``z' < 0``, the overlap

    K_ij = int_{z'<0} dr' sum_k G_ik(r, r') conj(G_jk(r, r'))

is diagonal with ``K_yy = K_xx``. The Green tensor obeys
``[curl curl - (w/c)^2 eps] G = I delta`` and is expanded in in-plane plane
waves with vacuum-to-bulk Fresnel transmission. The lateral integral is done
by Parseval, the depth integral analytically, which leaves one radial
integral over the in-plane wavenumber ``k``:

    K_xx = 1/(8 pi) int k dk  exp(-2 Im kz0 z0) / (2 Im kz1)
           * [ 2/|kz0+kz1|^2 + 2 (|kz1|^2+k^2) |kz0|^2 / (k0^4 |eps kz0+kz1|^2) ]
    K_zz = 1/(8 pi) int k dk  exp(-2 Im kz0 z0) / (2 Im kz1)
           * [ 4 (|kz1|^2+k^2) k^2 / (k0^4 |eps kz0+kz1|^2) ]

Both factors of ``1/kz0`` in the plane-wave expansion cancel against the
transmission amplitudes, so the integrand is finite on the light line. K has
units of metres.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from nfrht.constants import C
from nfrht.quadrature import NonConvergence, integrate


class InvalidBulk(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Settings shared by the wavevector and frequency integrals.

    ``max_subdivisions`` bounds the bisection depth of the adaptive rule.
    ``k_cutoff_factor`` sets ``k_max = max(10 w/c, k_cutoff_factor / z0)``.
    """

    rel_tol: float = 1e-6
    abs_tol_floor: float = 1e-30
    k_cutoff_factor: float = 40.0
    max_subdivisions: int = 60

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-2:
            raise ValueError("rel_tol in (0, 1e-2]")
        if not self.abs_tol_floor >= 0:
            raise ValueError("abs_tol_floor >= 0")
        if not self.k_cutoff_factor >= 20:
            raise ValueError("k_cutoff_factor >= 20")
        if not self.max_subdivisions >= 1:
            raise ValueError("max_subdivisions >= 1")


@dataclass(frozen=True)
class OverlapTensor:
    k_xx: float
    k_zz: float
    regime: str
    error_xx: float = 0.0
    error_zz: float = 0.0

    @property
    def k_yy(self) -> float:
        return self.k_xx

    def as_matrix(self) -> np.ndarray:
        return np.diag([self.k_xx, self.k_xx, self.k_zz])


class Fresnel(NamedTuple):
    t_s: complex
    t_p: complex
    r_s: complex
    r_p: complex


def _decaying_sqrt(z):
    q = np.sqrt(np.asarray(z, dtype=complex))
    flip = (q.imag < 0) | ((q.imag == 0) & (q.real < 0))
    return np.where(flip, -q, q)


def kz_in_medium(eps, omega, k_parallel):
    """Normal wavenumber ``sqrt(eps (w/c)^2 - k^2)`` on the branch with ``Im >= 0``."""
    k0 = np.asarray(omega, dtype=float) / C
    k = np.asarray(k_parallel, dtype=float)
    q = _decaying_sqrt(eps * k0 * k0 - k * k)
    return q[()] if q.ndim == 0 else q


def fresnel_ts_tp(eps_bulk, omega, k_parallel) -> Fresnel:
    """Vacuum-to-bulk amplitude coefficients (field amplitudes) for s and p waves."""
    kz0 = kz_in_medium(1.0, omega, k_parallel)
    kz1 = kz_in_medium(eps_bulk, omega, k_parallel)
    n = np.sqrt(np.asarray(eps_bulk, dtype=complex))
    ds = kz0 + kz1
    dp = eps_bulk * kz0 + kz1
    return Fresnel(
        t_s=2 * kz0 / ds,
        t_p=2 * n * kz0 / dp,
        r_s=(kz0 - kz1) / ds,
        r_p=(eps_bulk * kz0 - kz1) / dp,
    )


def _kernel(k, kz0, eps, k0, z0):
    """Radial integrand ``(F_xx, F_zz)`` per unit ``k``."""
    kz1 = _decaying_sqrt(eps * k0 * k0 - k * k)
    pref = k / (8 * np.pi) * np.exp(-2 * kz0.imag * z0) / (2 * kz1.imag)
    ds = np.abs(kz0 + kz1) ** 2
    dp = np.abs(eps * kz0 + kz1) ** 2
    pnorm = (np.abs(kz1) ** 2 + k * k) / (k0 ** 4 * dp)
    fx = pref * (2 / ds + 2 * pnorm * np.abs(kz0) ** 2)
    fz = pref * (4 * pnorm * k * k)
    return np.vstack([fx, fz])


def _k_max(k0, z0, config):
    return max(10 * k0, config.k_cutoff_factor / z0)


def _evanescent_marks(eps, k0, z0, k_max):
    """Interior panel edges (as in-plane wavenumbers above k0)."""
    marks = []
    lo = 0.25 * min(k0, 1 / z0)
    x = lo
    while x < k_max:
        marks.append(np.hypot(k0, x))
        x *= 4
    re = eps.real
    if re < -1:
        marks.append(k0 * np.sqrt(re / (re + 1)))  # bound surface-polariton pole
    return [m for m in marks if k0 < m < k_max]


def bulk_overlap(eps_bulk, omega, z0, config: QuadratureConfig | None = None, split: float = 1.0) -> OverlapTensor:
    """
    Half-space overlap ``K`` at height ``z0`` by adaptive quadrature in ``k``.

    The default ``split = 1`` cuts the domain exactly at the light line and
    substitutes ``k = k0 sin(theta)`` below, ``k^2 = k0^2 + u^2`` above, which
    removes the square-root cusp. Any other ``split`` (in units of ``k0``)
    integrates in plain ``k`` with the cut moved, the cusp left to the
    adaptive rule; it exists for robustness checks.
    """
    config = config or QuadratureConfig()
    eps = complex(eps_bulk)
    if not eps.imag > 0:
        raise InvalidBulk("bulk overlap needs an absorbing bulk (Im eps > 0)")
    if not z0 > 0:
        raise ValueError("z0 > 0")
    k0 = omega / C
    k_max = _k_max(k0, z0, config)
    u_max = np.sqrt(k_max ** 2 - k0 ** 2)
    marks = _evanescent_marks(eps, k0, z0, k_max)

    if split == 1.0:
        # t in [0, 1]: theta = t*pi/2; t in [1, 1 + u_max/k0]: u = (t - 1)*k0
        def f(t):
            out = np.empty((2, t.size))
            prop = t <= 1.0
            th = 0.5 * np.pi * t[prop]
            k = k0 * np.sin(th)
            kz0 = (k0 * np.cos(th)).astype(complex)
            out[:, prop] = _kernel(k, kz0, eps, k0, z0) * (0.5 * np.pi * k0 * np.cos(th))
            u = (t[~prop] - 1.0) * k0
            k = np.sqrt(k0 * k0 + u * u)
            out[:, ~prop] = _kernel(k, 1j * u, eps, k0, z0) * (k0 * u / k)
            return out

        edges = [0.0, 1.0, 1.0 + u_max / k0]
        edges += [1.0 + np.sqrt(m * m - k0 * k0) / k0 for m in marks]
        re = eps.real
        if 0 < re < 1:
            edges.append(np.arcsin(np.sqrt(re)) * 2 / np.pi)
    else:
        def f(t):
            k = t * k0
            kz0 = _decaying_sqrt(k0 * k0 - k * k)
            return _kernel(k, kz0, eps, k0, z0) * k0

        edges = [0.0, split, k_max / k0] + [m / k0 for m in marks]

    try:
        res = integrate(
            f, edges, rel_tol=config.rel_tol, abs_tol_floor=config.abs_tol_floor,
            max_depth=config.max_subdivisions,
        )
    except NonConvergence as exc:
        raise NonConvergence(
            f"overlap integral at omega={omega:g}, z0={z0:g}: {exc}", exc.value, exc.error
        ) from None
    return OverlapTensor(
        k_xx=float(res.value[0]), k_zz=float(res.value[1]), regime="full",
        error_xx=float(res.error[0]), error_zz=float(res.error[1]),
    )


def quasistatic_kxx(eps_bulk, omega, z0):
    """Vectorised near-field ``K_xx = 1 / (16 pi |eps+1|^2 k0^4 z0^3)``."""
    k0 = np.asarray(omega, dtype=float) / C
    return 1.0 / (16 * np.pi * np.abs(np.asarray(eps_bulk) + 1) ** 2 * k0 ** 4 * np.asarray(z0, dtype=float) ** 3)


def quasistatic_overlap(eps_bulk, omega, z0) -> OverlapTensor:
    """Closed-form large-``k`` limit of :func:`bulk_overlap`; ``K_zz = 2 K_xx``."""
    if not z0 > 0:
        raise ValueError("z0 > 0")
    kxx = float(quasistatic_kxx(eps_bulk, omega, z0))
    return OverlapTensor(k_xx=kxx, k_zz=2 * kxx, regime="quasistatic")
