"""The one-mode reduction ``G'' + G + G**3 = 0``.

Data proportional to ``sin(psi)`` stay proportional to it, and the amplitude
obeys this Duffing equation.  Its conserved energy

    E(X, Y) = Y**2 + X**2 + X**4 / 2

has closed level sets, so every orbit is periodic.  The module gives three
independent handles on the period: quadrature of the energy relation, the
first return of a numerically integrated orbit, and (in :func:`verify`) the
Lindstedt frequency series of :mod:`.resonant`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq


class ClosureError(RuntimeError):
    pass


@dataclass(frozen=True)
class PhasePoint:
    X: float
    Y: float


@dataclass
class Orbit:
    t: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    X0: float

    @property
    def energy(self) -> np.ndarray:
        return self.Y ** 2 + self.X ** 2 + 0.5 * self.X ** 4

    def samples(self) -> list:
        return [(t, PhasePoint(x, y)) for t, x, y in zip(self.t, self.X, self.Y)]

    def energy_drift(self) -> float:
        e = self.energy
        if e[0] == 0:
            return float(np.max(np.abs(e)))
        return float(np.max(np.abs(e - e[0])) / e[0])


def energy(p: PhasePoint) -> float:
    return p.Y ** 2 + p.X ** 2 + 0.5 * p.X ** 4


def vector_field(p: PhasePoint) -> PhasePoint:
    return PhasePoint(p.Y, -p.X * (1.0 + p.X ** 2))


def _rk4_step(x: float, y: float, h: float) -> tuple:
    k1x, k1y = y, -x * (1.0 + x * x)
    x2, y2 = x + 0.5 * h * k1x, y + 0.5 * h * k1y
    k2x, k2y = y2, -x2 * (1.0 + x2 * x2)
    x3, y3 = x + 0.5 * h * k2x, y + 0.5 * h * k2y
    k3x, k3y = y3, -x3 * (1.0 + x3 * x3)
    x4, y4 = x + h * k3x, y + h * k3y
    k4x, k4y = y4, -x4 * (1.0 + x4 * x4)
    return (
        x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x),
        y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y),
    )


def integrate(X0: float, t_end: float, dt: float = 2e-3, Y0: float = 0.0) -> Orbit:
    """Classical RK4 with a fixed step (adjusted so it divides ``t_end``)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    n = max(1, math.ceil(t_end / dt))
    h = t_end / n
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    x, y = float(X0), float(Y0)
    xs[0], ys[0] = x, y
    for k in range(1, n + 1):
        x, y = _rk4_step(x, y, h)
        xs[k], ys[k] = x, y
    return Orbit(np.linspace(0.0, t_end, n + 1), xs, ys, float(X0))


def turning_point(X0: float) -> float:
    """Positive root ``Xmax`` of ``X**2 + X**4/2 = X0**2 + X0**4/2``, i.e. ``|X0|``."""
    a2 = X0 ** 2 + 0.5 * X0 ** 4
    return math.sqrt(-1.0 + math.sqrt(1.0 + 2.0 * a2))


@lru_cache(maxsize=8)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def period(X0: float, quad_points: int = 64) -> float:
    """``T = 4 int_0^Xmax dX / sqrt(a**2 - X**2 - X**4/2)``.

    With ``X = Xmax sin(phi)`` the integrand becomes the smooth function
    ``1 / sqrt(1 + Xmax**2 (1 + sin(phi)**2) / 2)`` on ``[0, pi/2]``.
    """
    if X0 == 0:
        raise ValueError("X0 = 0 is the equilibrium; no period is defined")
    xm2 = turning_point(X0) ** 2
    nodes, weights = _gauss_legendre(quad_points)
    phi = 0.25 * math.pi * (nodes + 1.0)
    integrand = 1.0 / np.sqrt(1.0 + 0.5 * xm2 * (1.0 + np.sin(phi) ** 2))
    return float(4.0 * 0.25 * math.pi * np.dot(weights, integrand))


def level_set_point(a: float, t: float) -> PhasePoint:
    """Point of the closed curve ``E = a**2`` at parameter ``t`` (not a time)."""
    if a == 0:
        raise ValueError("a = 0 collapses the level set to the origin")
    c = math.cos(t)
    x = a * math.sqrt(2.0) * c / math.sqrt(1.0 + math.sqrt(1.0 + 2.0 * a * a * c * c))
    return PhasePoint(x, a * math.sin(t))


def level_set_tangent(a: float, t: float, h: float = 1e-6) -> PhasePoint:
    p, q = level_set_point(a, t + h), level_set_point(a, t - h)
    return PhasePoint((p.X - q.X) / (2 * h), (p.Y - q.Y) / (2 * h))


def orbit_closure(X0: float, tol: float = 1e-12, steps_per_period: int = 4000) -> tuple:
    """First return to ``{Y = 0, X * X0 > 0}``; returns ``(return_time, gap)``.

    The crossing is bracketed on the RK4 grid and refined by root finding on
    the length of a single partial RK4 step from the left bracket.
    """
    if X0 == 0:
        raise ValueError("X0 = 0 does not leave the equilibrium")
    t_est = period(X0)
    h = t_est / steps_per_period
    sgn = 1.0 if X0 > 0 else -1.0
    x, y, t = float(X0), 0.0, 0.0
    limit = 10.0 * t_est
    left_start = True
    while t < limit:
        xn, yn = _rk4_step(x, y, h)
        # skip the departure from the section at t = 0
        if left_start and y * sgn > 0 and yn * sgn <= 0 and xn * sgn > 0:
            def ycross(s, x=x, y=y):
                return _rk4_step(x, y, s)[1]

            s = brentq(ycross, 0.0, h, xtol=tol, rtol=4 * np.finfo(float).eps)
            xr, _ = _rk4_step(x, y, s)
            return t + s, abs(xr - X0)
        x, y, t = xn, yn, t + h
    raise ClosureError(f"no return to the section within {limit:.3g}")


def verify(X0: float, quad_points: int = 64, series_order: int = 5) -> dict:
    """Compare period by quadrature, by first return, and by the frequency series."""
    from .resonant import expand

    state = expand(series_order)
    t_quad = period(X0, quad_points)
    t_ret, gap = orbit_closure(X0)
    t_ser = 2.0 * math.pi / state.frequency(X0)
    orbit = integrate(X0, 100 * t_quad, dt=t_quad / 2000)
    return {
        "x0": X0,
        "period_quadrature": t_quad,
        "period_return": t_ret,
        "period_series": t_ser,
        "gap_quadrature_return": abs(t_quad - t_ret),
        "gap_quadrature_series": abs(t_quad - t_ser),
        "gap_return_series": abs(t_ret - t_ser),
        "closure_gap": gap,
        "energy_drift_100_periods": orbit.energy_drift(),
        "series_thetas": [str(th) for th in state.thetas],
    }
