import math

import numpy as np
import pytest
from scipy.special import ellipk

from cubicwave.duffing import (
    PhasePoint,
    energy,
    integrate,
    level_set_point,
    level_set_tangent,
    orbit_closure,
    period,
    turning_point,
    vector_field,
    verify,
)


def elliptic_period(x0):
    # test-only oracle: T = 4 K(k^2) / sqrt(1 + x0^2), k^2 = x0^2 / (2 (1 + x0^2))
    return 4 * ellipk(x0 * x0 / (2 * (1 + x0 * x0))) / math.sqrt(1 + x0 * x0)


def test_energy_and_field():
    assert energy(PhasePoint(1, 0)) == 1.5
    assert energy(PhasePoint(0, 0)) == 0
    assert energy(PhasePoint(0, 0.3)) == pytest.approx(0.09)
    assert vector_field(PhasePoint(0, 0)) == PhasePoint(0, 0)
    assert vector_field(PhasePoint(1, 0)) == PhasePoint(0, -2)
    assert vector_field(PhasePoint(0, 1)) == PhasePoint(1, 0)


def test_equilibrium_orbit():
    o = integrate(0.0, 10.0)
    assert np.all(o.X == 0) and np.all(o.Y == 0)
    assert o.samples()[0] == (0.0, PhasePoint(0.0, 0.0))


def test_energy_drift_small_amplitude():
    T = period(0.1)
    o = integrate(0.1, 100 * T, dt=T / 2000)
    assert o.energy_drift() < 1e-10


def test_orbit_stays_on_level_set():
    o = integrate(1.0, 10.0, dt=1e-3)
    assert np.max(np.abs(o.energy - 1.5)) < 1e-10


@pytest.mark.parametrize("x0", [0.05, 0.1, 0.5, 1.0, 2.0, -0.7, 5.0])
def test_period_against_elliptic_integral(x0):
    assert period(x0) == pytest.approx(elliptic_period(x0), rel=1e-13)


def test_period_limits():
    assert period(1e-6) == pytest.approx(2 * math.pi, rel=1e-11)
    assert period(2.0) < 2 * math.pi
    with pytest.raises(ValueError):
        period(0.0)
    assert turning_point(-0.3) == pytest.approx(0.3)


@pytest.mark.parametrize("x0", [0.5, -0.7, 1.0, 2.0])
def test_first_return(x0):
    t_ret, gap = orbit_closure(x0)
    assert gap < 1e-8
    assert abs(t_ret - period(x0)) < 1e-8


def test_time_reversal():
    T = period(0.8)
    o = integrate(0.8, T, dt=T / 4000)
    assert np.max(np.abs(o.X - o.X[::-1])) < 1e-9


def test_level_set():
    a = 0.9
    p0 = level_set_point(a, 0.0)
    assert p0.X == pytest.approx(a * math.sqrt(2) / math.sqrt(1 + math.sqrt(1 + 2 * a * a)))
    assert p0.Y == 0
    p = level_set_point(a, math.pi / 2)
    assert p.X == pytest.approx(0, abs=1e-15) and p.Y == a
    q1, q2 = level_set_point(a, 1.3), level_set_point(a, 1.3 + 2 * math.pi)
    assert q1.X == pytest.approx(q2.X, abs=1e-14) and q1.Y == pytest.approx(q2.Y, abs=1e-14)
    with pytest.raises(ValueError):
        level_set_point(0.0, 1.0)


def test_level_set_identity_random():
    rng = np.random.default_rng(7)
    for a, t in zip(rng.uniform(-3, 3, 1000), rng.uniform(0, 2 * math.pi, 1000)):
        assert abs(energy(level_set_point(a, t)) - a * a) <= 1e-12 * max(1.0, a * a)


def test_tangent_nonzero():
    for a in (0.1, 1.0, 3.0):
        for t in np.linspace(0, 2 * math.pi, 50):
            v = level_set_tangent(a, t)
            assert v.X ** 2 + v.Y ** 2 > 0


def test_oracle_triangle():
    reports = {x: verify(x) for x in (0.05, 0.1)}
    for r in reports.values():
        assert r["gap_quadrature_return"] < 1e-8
        assert r["energy_drift_100_periods"] < 1e-10
    ratio = reports[0.1]["gap_quadrature_series"] / reports[0.05]["gap_quadrature_series"]
    assert 32 <= ratio <= 128
