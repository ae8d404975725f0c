import math
from dataclasses import replace

import numpy as np
import pytest

from nfrht.constants import HBAR, K_B
from nfrht.material import ConstantPermittivity
from nfrht.rotor import ParticleSpec
from nfrht.spectrum import (
    ScenarioConfig, density_and_error, planck_occupation, spectral_power_density, total_power,
)
from nfrht.sweeps import SweepSeries, find_peaks

BASE = ScenarioConfig()
NEAR = ScenarioConfig(near_field=True)


def with_particle(scenario, **kw):
    return replace(scenario, particle=replace(scenario.particle, **kw))


def test_scenario_defaults():
    p = BASE.particle
    assert (p.radius_a, p.height_z0, p.omega0, BASE.bulk_temperature) == (5e-9, 10e-9, 0.0, 300.0)


def test_scenario_rejects_bad_temperature():
    with pytest.raises(ValueError):
        ScenarioConfig(bulk_temperature=0.0)


def test_planck_exact_point():
    T = 300.0
    w = math.log(2) * K_B * T / HBAR
    assert planck_occupation(w, T) == pytest.approx(1.0, rel=1e-14)


def test_planck_room_temperature_value():
    # hbar w / k T = 1.0545718e-34 * 1.783e14 / (1.380649e-23 * 300) = 4.5396; 1/(e^4.5396 - 1) = 0.01079
    n = planck_occupation(1.783e14, 300.0)
    assert n == pytest.approx(0.01079, rel=2e-3)


@pytest.mark.parametrize("x", [1e-3, 1e-7, 1e-9, 1e-12])
def test_rayleigh_jeans_limit(x):
    T = 300.0
    w = x * K_B * T / HBAR
    assert planck_occupation(w, T) * HBAR * w == pytest.approx(K_B * T, rel=max(1e-6, x))


def test_series_branch_is_continuous():
    T = 300.0
    w = 1e-6 * K_B * T / HBAR
    below, above = planck_occupation(w * (1 - 1e-9), T), planck_occupation(w * (1 + 1e-9), T)
    assert above == pytest.approx(below, rel=1e-8)


def test_spectrum_peaks():
    w = np.linspace(1.5e14, 1.9e14, 400)
    dens, _ = density_and_error(BASE, w)
    series = SweepSeries("omega", "rad/s", "power_density", "W s", rows=[(x, d, 0.0, "OK") for x, d in zip(w, dens)])
    top = sorted(p.x for p in find_peaks(series)[:2])
    assert abs(top[0] - 1.753e14) / 1.753e14 < 5e-3
    assert abs(top[1] - 1.783e14) / 1.783e14 < 5e-3


def test_cold_bulk_emits_nothing():
    cold = replace(BASE, bulk_temperature=1.0)
    for w in (1.5e14, 1.753e14, 1.9e14):
        assert spectral_power_density(cold, w).power_density == 0.0


def test_density_needs_positive_frequency():
    with pytest.raises(ValueError):
        spectral_power_density(BASE, 0.0)


def test_non_negative_without_rotation():
    w = np.geomspace(1e11, 1e15, 300)
    dens, err = density_and_error(BASE, w)
    assert np.all(dens >= 0)
    assert np.all(err >= 0) and np.all(np.isfinite(dens))


def test_distance_law():
    # z0 = 5 nm needs a < z0; at fixed z0 the power is exactly proportional to a^3
    near = total_power(with_particle(BASE, radius_a=2e-9, height_z0=5e-9))
    far = total_power(with_particle(BASE, radius_a=2e-9))
    assert near.power / far.power == pytest.approx(8, rel=0.05)


def test_slow_rotation_leaves_power_unchanged():
    p0 = total_power(BASE).power
    p1 = total_power(with_particle(BASE, omega0=1e9)).power
    assert abs(p1 - p0) / p0 < 1e-3


def test_vacuum_bulk_gives_zero():
    vac = replace(BASE, bulk_material=ConstantPermittivity(1.0))
    assert total_power(vac).power == 0.0


def test_power_rises_with_temperature():
    temps = [100.0, 200.0, 300.0, 600.0]
    powers = [total_power(replace(NEAR, bulk_temperature=t)).power for t in temps]
    assert all(b > a for a, b in zip(powers, powers[1:]))


def test_volume_scaling():
    small = total_power(with_particle(NEAR, radius_a=2e-9, omega0=3e13)).power
    big = total_power(with_particle(NEAR, radius_a=4e-9, omega0=3e13)).power
    assert big / small == pytest.approx(8, rel=1e-12)


@pytest.mark.parametrize("z0", [5e-9, 10e-9])
def test_near_and_full_agree_at_short_range(z0):
    full = total_power(with_particle(BASE, radius_a=2e-9, height_z0=z0)).power
    near = total_power(with_particle(NEAR, radius_a=2e-9, height_z0=z0)).power
    assert abs(near - full) / full < 0.02


def test_sub_rotation_share_reported():
    res = total_power(with_particle(NEAR, omega0=1e14))
    assert res.sub_rotation_power != 0.0
    assert res.error_estimate >= 0
    assert total_power(NEAR).sub_rotation_power == 0.0


def test_result_error_is_small():
    res = total_power(BASE)
    assert 0 <= res.error_estimate <= 1e-5 * res.power
