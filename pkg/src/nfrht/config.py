"""
Scenario configuration files.

Flat ``[section]`` headers with ``key = value`` lines; ``#`` or ``;`` start a
comment. Every key is optional and the defaults reproduce the SiC/SiC
reference scenario (a = 5 nm, z0 = 10 nm, T = 300 K, no rotation)::

    [particle]           radius_m, z0_m, omega0_rad_s, dressing
    [bulk]               temperature_K
    [material.particle]  eps_inf, omega_L_rad_s, omega_T_rad_s, gamma_rad_s
    [material.bulk]      (same keys)
    [quadrature]         rel_tol, abs_tol_floor, k_cutoff_factor, max_subdivisions,
                         omega_min_rad_s, omega_max_rad_s, near_field
    [sweep]              kind, min, max, count, spacing, omega_rad_s

Several sweeps can be given as ``[sweep.<label>]`` sections.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from nfrht.greens import QuadratureConfig
from nfrht.material import LorentzMaterial
from nfrht.rotor import ParticleSpec
from nfrht.spectrum import ScenarioConfig
from nfrht.sweeps import DEFAULT_GRIDS, Grid, SweepSpec, ValidationError


class ParseError(ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _bool(text):
    low = text.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_MATERIAL_KEYS = {"eps_inf": float, "omega_L_rad_s": float, "omega_T_rad_s": float, "gamma_rad_s": float}
SCHEMA = {
    "particle": {"radius_m": float, "z0_m": float, "omega0_rad_s": float, "dressing": str},
    "bulk": {"temperature_K": float},
    "material.particle": _MATERIAL_KEYS,
    "material.bulk": _MATERIAL_KEYS,
    "quadrature": {
        "rel_tol": float, "abs_tol_floor": float, "k_cutoff_factor": float,
        "max_subdivisions": int, "omega_min_rad_s": float, "omega_max_rad_s": float,
        "near_field": _bool,
    },
    "sweep": {"kind": str, "min": float, "max": float, "count": int, "spacing": str, "omega_rad_s": float},
}


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig
    sweeps: list

    @classmethod
    def default(cls) -> "RunConfig":
        return build_config({})


def _strip_comment(line):
    for i, ch in enumerate(line):
        if ch in "#;":
            return line[:i]
    return line


def parse_sections(text: str) -> dict:
    """``{section: {key: value}}`` with values typed per :data:`SCHEMA`."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if body.startswith("["):
            if not body.endswith("]"):
                raise ParseError("unterminated section header", lineno, indent + len(body))
            name = body[1:-1].strip()
            base = "sweep" if name == "sweep" or name.startswith("sweep.") else name
            if base not in SCHEMA:
                raise ParseError(f"unknown section [{name}]", lineno, indent + 1)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", lineno, indent + 1)
            sections[name] = {}
            current = name
            continue
        if "=" not in body:
            raise ParseError("expected 'key = value'", lineno, indent + 1)
        if current is None:
            raise ParseError("key outside of any section", lineno, indent + 1)
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        base = "sweep" if current.startswith("sweep") else current
        if key not in SCHEMA[base]:
            raise ParseError(f"unknown key {key!r} in [{current}]", lineno, indent + 1)
        if key in sections[current]:
            raise ParseError(f"duplicate key {key!r}", lineno, indent + 1)
        eq = raw.index("=")
        rest = raw[eq + 1:]
        vcol = eq + 2 + len(rest) - len(rest.lstrip())
        try:
            sections[current][key] = SCHEMA[base][key](value)
        except ValueError:
            raise ParseError(f"bad value {value!r} for {key}", lineno, vcol) from None
    return sections


def _material(values: dict) -> LorentzMaterial:
    d = LorentzMaterial()
    return LorentzMaterial(
        eps_inf=values.get("eps_inf", d.eps_inf),
        omega_L=values.get("omega_L_rad_s", d.omega_L),
        omega_T=values.get("omega_T_rad_s", d.omega_T),
        gamma=values.get("gamma_rad_s", d.gamma),
    )


def _sweep(label: str, values: dict) -> SweepSpec:
    if "kind" not in values:
        raise ValidationError(f"[{label}] needs a 'kind'")
    kind = values["kind"]
    if kind not in DEFAULT_GRIDS:
        raise ValidationError(f"sweep kind must be one of {tuple(DEFAULT_GRIDS)}")
    g = DEFAULT_GRIDS[kind]
    grid = Grid(
        min=values.get("min", g.min), max=values.get("max", g.max),
        count=values.get("count", g.count), spacing=values.get("spacing", g.spacing),
    )
    extra = {"omega": values["omega_rad_s"]} if "omega_rad_s" in values else {}
    return SweepSpec(kind=kind, grid=grid, label=label, **extra)


def build_config(sections: dict) -> RunConfig:
    try:
        p = sections.get("particle", {})
        dp = ParticleSpec.__dataclass_fields__
        particle = ParticleSpec(
            radius_a=p.get("radius_m", dp["radius_a"].default),
            height_z0=p.get("z0_m", dp["height_z0"].default),
            omega0=p.get("omega0_rad_s", 0.0),
            material=_material(sections.get("material.particle", {})),
            dressing=p.get("dressing", "clausius_mossotti"),
        )
        q = dict(sections.get("quadrature", {}))
        lo, hi = q.pop("omega_min_rad_s", None), q.pop("omega_max_rad_s", None)
        if (lo is None) != (hi is None):
            raise ValidationError("give both omega_min_rad_s and omega_max_rad_s, or neither")
        near = q.pop("near_field", False)
        scenario = ScenarioConfig(
            particle=particle,
            bulk_material=_material(sections.get("material.bulk", {})),
            bulk_temperature=sections.get("bulk", {}).get("temperature_K", 300.0),
            quadrature=QuadratureConfig(**q),
            omega_window=None if lo is None else (lo, hi),
            near_field=near,
        )
        sweeps = [_sweep(name, vals) for name, vals in sections.items() if name.startswith("sweep")]
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    return RunConfig(scenario, sweeps)


def parse_config(text: str) -> RunConfig:
    return build_config(parse_sections(text))


def load_config(path) -> RunConfig:
    """Read and validate a configuration file; an empty file gives the defaults."""
    return parse_config(Path(path).read_text())
