"""
Parameter sweeps over the spectrum/power calculations, CSV and SVG output,
and small series analyses (log-log slope, peak finding).
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from scipy import signal, stats

import nfrht
from nfrht.quadrature import NonConvergence
from nfrht.spectrum import ScenarioConfig, density_and_error, total_power

KINDS = ("spectrum_vs_omega", "power_vs_omega0", "power_vs_z0", "density_vs_omega0_at_peak")
FLAG_OK = "OK"
FLAG_FAIL = "QUAD_FAIL"


class ValidationError(ValueError):
    pass


class InsufficientPoints(ValueError):
    pass


class NonPositiveValue(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    min: float
    max: float
    count: int = 400
    spacing: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise ValidationError("count >= 2")
        if not self.min < self.max:
            raise ValidationError("min < max")
        if self.spacing not in ("linear", "log"):
            raise ValidationError("spacing must be 'linear' or 'log'")
        if self.spacing == "log" and not self.min > 0:
            raise ValidationError("log spacing requires min > 0")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(np.log10(self.min), np.log10(self.max), self.count)
        return np.linspace(self.min, self.max, self.count)


DEFAULT_GRIDS = {
    "spectrum_vs_omega": Grid(1.5e14, 1.9e14, 400, "linear"),
    "power_vs_omega0": Grid(1e9, 1e15, 400, "log"),
    "power_vs_z0": Grid(1e-8, 1e-6, 400, "log"),
    "density_vs_omega0_at_peak": Grid(1e9, 1e15, 400, "log"),
}

# (abscissa name, units, value name, units)
LABELS = {
    "spectrum_vs_omega": ("omega", "rad/s", "power_density", "W s"),
    "power_vs_omega0": ("omega0", "rad/s", "power", "W"),
    "power_vs_z0": ("z0", "m", "power", "W"),
    "density_vs_omega0_at_peak": ("omega0", "rad/s", "power_density", "W s"),
}


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    grid: Grid | None = None
    omega: float = 1.783e14  # probe frequency of density_vs_omega0_at_peak
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"sweep kind must be one of {KINDS}")
        if self.grid is None:
            object.__setattr__(self, "grid", DEFAULT_GRIDS[self.kind])
        if not self.omega > 0:
            raise ValidationError("omega > 0")


@dataclass
class SweepSeries:
    abscissa_name: str
    abscissa_units: str
    value_name: str
    value_units: str
    rows: list = field(default_factory=list)  # (x, value | None, error | None, flag)
    metadata: dict = field(default_factory=dict)

    @property
    def x(self) -> np.ndarray:
        return np.array([r[0] for r in self.rows], dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.array([np.nan if r[1] is None else r[1] for r in self.rows], dtype=float)

    @property
    def n_failed(self) -> int:
        return sum(1 for r in self.rows if r[3] != FLAG_OK)

    def valid(self):
        ok = [r for r in self.rows if r[3] == FLAG_OK]
        return np.array([r[0] for r in ok], dtype=float), np.array([r[1] for r in ok], dtype=float)


def scenario_metadata(scenario: ScenarioConfig) -> dict:
    """Flat, config-file-shaped snapshot of a scenario (values as round-trippable reprs)."""
    p, q = scenario.particle, scenario.quadrature
    meta = {
        "particle.radius_m": p.radius_a,
        "particle.z0_m": p.height_z0,
        "particle.omega0_rad_s": p.omega0,
        "particle.dressing": p.dressing,
        "bulk.temperature_K": scenario.bulk_temperature,
    }
    for name, mat in (("particle", p.material), ("bulk", scenario.bulk_material)):
        if hasattr(mat, "eps_inf"):
            meta[f"material.{name}.eps_inf"] = mat.eps_inf
            meta[f"material.{name}.omega_L_rad_s"] = mat.omega_L
            meta[f"material.{name}.omega_T_rad_s"] = mat.omega_T
            meta[f"material.{name}.gamma_rad_s"] = mat.gamma
        else:
            meta[f"material.{name}.permittivity"] = mat.permittivity(1.0)
    lo, hi = scenario.window()
    meta.update({
        "quadrature.rel_tol": q.rel_tol,
        "quadrature.abs_tol_floor": q.abs_tol_floor,
        "quadrature.k_cutoff_factor": q.k_cutoff_factor,
        "quadrature.max_subdivisions": q.max_subdivisions,
        "quadrature.omega_min_rad_s": lo,
        "quadrature.omega_max_rad_s": hi,
        "quadrature.near_field": scenario.near_field,
    })
    return {k: repr(v) if isinstance(v, float) else str(v) for k, v in meta.items()}


def _point_scenario(kind, scenario, x):
    if kind in ("power_vs_omega0", "density_vs_omega0_at_peak"):
        return replace(scenario, particle=replace(scenario.particle, omega0=float(x)))
    if kind == "power_vs_z0":
        return replace(scenario, particle=replace(scenario.particle, height_z0=float(x)))
    return scenario


def _evaluate(args):
    kind, scenario, x, omega = args
    try:
        s = _point_scenario(kind, scenario, x)
        if kind == "spectrum_vs_omega":
            d, e = density_and_error(s, x)
            return float(d[0]), float(e[0]), FLAG_OK
        if kind == "density_vs_omega0_at_peak":
            d, e = density_and_error(s, omega)
            return float(d[0]), float(e[0]), FLAG_OK
        tp = total_power(s)
        return tp.power, tp.error_estimate, FLAG_OK
    except NonConvergence:
        return None, None, FLAG_FAIL


def default_workers() -> int:
    return int(os.environ.get("NFRHT_WORKERS", "1"))


def run_sweep(spec: SweepSpec, scenario: ScenarioConfig, workers: int | None = None) -> SweepSeries:
    """
    Evaluate one sweep. Grid points are independent; with ``workers > 1``
    they run in a process pool and are reassembled in grid order.
    Quadrature failures are flagged per point rather than aborting.
    """
    xs = spec.grid.points()
    if spec.kind == "power_vs_z0" and np.any(xs <= scenario.particle.radius_a):
        raise ValidationError("height_z0 > radius_a for every grid point")
    if spec.kind == "spectrum_vs_omega" and not xs[0] > 0:
        raise ValidationError("omega > 0 for every grid point")
    workers = default_workers() if workers is None else workers
    jobs = [(spec.kind, scenario, float(x), spec.omega) for x in xs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_evaluate(j) for j in jobs]

    names = LABELS[spec.kind]
    meta = {"tool": f"nfrht {nfrht.__version__}", "sweep.kind": spec.kind}
    meta.update({
        "sweep.min": repr(float(spec.grid.min)), "sweep.max": repr(float(spec.grid.max)),
        "sweep.count": str(spec.grid.count), "sweep.spacing": spec.grid.spacing,
    })
    if spec.kind == "density_vs_omega0_at_peak":
        meta["sweep.omega_rad_s"] = repr(float(spec.omega))
    meta.update(scenario_metadata(scenario))
    rows = [(float(x), v, e, flag) for x, (v, e, flag) in zip(xs, results)]
    return SweepSeries(*names, rows=rows, metadata=meta)


def _fmt(v):
    return "" if v is None else f"{v:.16e}"


def write_csv(series: SweepSeries, fh) -> None:
    """Write ``#`` metadata lines, a header row, then one row per grid point."""
    fh.write(f"# {series.metadata.get('tool', 'nfrht ' + nfrht.__version__)}\n")
    fh.write(f"# x: {series.abscissa_name} [{series.abscissa_units}]\n")
    fh.write(f"# value: {series.value_name} [{series.value_units}]\n")
    for key, val in series.metadata.items():
        if key != "tool":
            fh.write(f"# {key} = {val}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "value", "error_estimate", "flag"])
    for x, v, e, flag in series.rows:
        w.writerow([_fmt(x), _fmt(v), _fmt(e), flag])


def emit_csv(series: SweepSeries, path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            write_csv(series, fh)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


# SVG canvas: 640 x 480 with the plot box spanning x in [80, 620], y in [40, 420]
CANVAS = (640, 480)
BOX = (80.0, 40.0, 620.0, 420.0)
AXES = ("linear", "loglog", "semilogx")


def _axis_transform(vals, log):
    if log:
        if np.any(vals <= 0):
            raise ValidationError("log axis needs strictly positive values")
        return np.log10(vals)
    return vals


def canvas_coordinates(series: SweepSeries, axes: str = "linear"):
    """Map valid rows onto SVG canvas coordinates; returns ``(X, Y, x_range, y_range)``."""
    if axes not in AXES:
        raise ValidationError(f"axes must be one of {AXES}")
    x, y = series.valid()
    if x.size == 0:
        raise ValidationError("no valid points to plot")
    tx = _axis_transform(x, axes in ("loglog", "semilogx"))
    ty = _axis_transform(y, axes == "loglog")
    x0, x1 = tx.min(), tx.max()
    y0, y1 = ty.min(), ty.max()
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    left, top, right, bottom = BOX
    X = left + (tx - x0) / (x1 - x0) * (right - left)
    Y = bottom - (ty - y0) / (y1 - y0) * (bottom - top)
    return X, Y, (x0, x1), (y0, y1)


def _tick_label(v, log):
    return f"1e{v:.3g}" if log else f"{v:.3g}"


def emit_plot(series: SweepSeries, path, axes: str = "linear") -> None:
    """
    Write a standalone SVG line plot.

    Only ``svg``, ``rect``, ``line``, ``polyline`` and ``text`` elements are
    used. Log axes are drawn in log10 of the data with ``1eN`` tick labels.
    """
    X, Y, (x0, x1), (y0, y1) = canvas_coordinates(series, axes)
    left, top, right, bottom = BOX
    xlog, ylog = axes in ("loglog", "semilogx"), axes == "loglog"
    title = f"{series.metadata.get('sweep.kind', series.value_name)}"
    details = ", ".join(
        f"{k.split('.')[-1]}={series.metadata[k]}"
        for k in ("particle.radius_m", "particle.z0_m", "particle.omega0_rad_s", "bulk.temperature_K")
        if k in series.metadata
    )
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS[0]}" height="{CANVAS[1]}" '
        f'viewBox="0 0 {CANVAS[0]} {CANVAS[1]}">',
        f'<rect x="0" y="0" width="{CANVAS[0]}" height="{CANVAS[1]}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
        'fill="none" stroke="black"/>',
        f'<text x="{CANVAS[0] / 2}" y="18" text-anchor="middle" font-size="14">{_esc(title)}</text>',
        f'<text x="{CANVAS[0] / 2}" y="34" text-anchor="middle" font-size="10">{_esc(details)}</text>',
    ]
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        px = left + (right - left) * i / 4
        parts.append(f'<line x1="{px:.3f}" y1="{bottom}" x2="{px:.3f}" y2="{bottom + 5}" stroke="black"/>')
        parts.append(f'<text x="{px:.3f}" y="{bottom + 18}" text-anchor="middle" font-size="10">'
                     f'{_tick_label(fx, xlog)}</text>')
        fy = y0 + (y1 - y0) * i / 4
        py = bottom - (bottom - top) * i / 4
        parts.append(f'<line x1="{left - 5}" y1="{py:.3f}" x2="{left}" y2="{py:.3f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{py + 3:.3f}" text-anchor="end" font-size="10">'
                     f'{_tick_label(fy, ylog)}</text>')
    xl = f"{series.abscissa_name} [{series.abscissa_units}]"
    yl = f"{series.value_name} [{series.value_units}]"
    parts.append(f'<text x="{(left + right) / 2}" y="{CANVAS[1] - 12}" text-anchor="middle" font-size="12">{_esc(xl)}</text>')
    parts.append(f'<text x="16" y="{(top + bottom) / 2}" text-anchor="middle" font-size="12" '
                 f'transform="rotate(-90 16 {(top + bottom) / 2})">{_esc(yl)}</text>')
    pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(X, Y))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f5fa8" stroke-width="1.5"/>')
    parts.append("</svg>")
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(parts) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write plot to {path}: {exc.strerror or exc}") from exc


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


class SlopeFit(NamedTuple):
    slope: float
    stderr: float


def fit_loglog_slope(series: SweepSeries, x_range=None) -> SlopeFit:
    """Least-squares slope of ``log(value)`` against ``log(x)`` inside ``x_range``."""
    x, y = series.valid()
    if x_range is not None:
        lo, hi = x_range
        keep = (x >= lo) & (x <= hi)
        x, y = x[keep], y[keep]
    if x.size < 3:
        raise InsufficientPoints("need at least 3 points in range")
    if np.any(y <= 0) or np.any(x <= 0):
        raise NonPositiveValue("log-log fit needs positive x and values")
    fit = stats.linregress(np.log(x), np.log(y))
    return SlopeFit(float(fit.slope), float(fit.stderr))


class Peak(NamedTuple):
    x: float
    value: float


def find_peaks(series: SweepSeries, min_prominence: float = 0.05) -> list[Peak]:
    """
    Local maxima whose prominence is at least ``min_prominence`` times the
    series maximum, refined by a parabola through the three nearest points.
    Results are ordered by decreasing value.
    """
    x, y = series.valid()
    if x.size < 3:
        raise InsufficientPoints("need at least 3 points")
    top = np.max(np.abs(y))
    idx, _ = signal.find_peaks(y, prominence=min_prominence * top if top > 0 else None)
    peaks = []
    for i in idx:
        xs, ys = x[i - 1: i + 2], y[i - 1: i + 2]
        c2, c1, c0 = np.polyfit(xs - xs[1], ys, 2)
        if c2 < 0:
            dx = -c1 / (2 * c2)
            dx = float(np.clip(dx, xs[0] - xs[1], xs[2] - xs[1]))
            peaks.append(Peak(float(xs[1] + dx), float(c0 + c1 * dx + c2 * dx * dx)))
        else:
            peaks.append(Peak(float(x[i]), float(y[i])))
    return sorted(peaks, key=lambda p: -p.value)
