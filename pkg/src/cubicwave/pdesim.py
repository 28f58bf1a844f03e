"""Sine-pseudospectral simulator for ``-f_tt + f_psipsi = f**3 / sin(psi)**2``.

The field is ``f = sum_{m<N} a_m sin((m+1) psi)``.  Since
``sin((m+1) psi) = sin(psi) U_m(cos psi)``, we have ``f = sin(psi) g`` with
``g = sum a_m U_m(cos psi)`` a polynomial in ``cos psi``, and the nonlinearity
is ``sin(psi) g**3``: a finite sine series with no singularity at the ends.
Its coefficients are taken with a type-I DST on a grid large enough that the
first ``N`` of them are free of aliasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy.fft import dst

from .modes import chebyshev_u_table


class SimulationError(RuntimeError):
    """Numerical blow-up or non-finite values during time stepping."""


@dataclass
class SpectralState:
    a: np.ndarray
    v: np.ndarray
    t: float = 0.0

    @property
    def n_modes(self) -> int:
        return len(self.a)

    @classmethod
    def zeros(cls, n_modes: int) -> "SpectralState":
        return cls(np.zeros(n_modes), np.zeros(n_modes))

    def field(self, psi) -> np.ndarray:
        psi = np.asarray(psi, dtype=float)
        k = np.arange(1, self.n_modes + 1)
        return np.sin(np.multiply.outer(psi, k)) @ self.a


@dataclass(frozen=True)
class EnergyReport:
    kinetic: float
    gradient: float
    potential: float

    @property
    def total(self) -> float:
        return self.kinetic + self.gradient + self.potential

    def to_dict(self) -> dict:
        return {
            "kinetic": self.kinetic,
            "gradient": self.gradient,
            "potential": self.potential,
            "total": self.total,
        }


class _Grid:
    """Collocation grid ``psi_k = k pi / (n+1)``, ``k = 1..n``, with ``n = 3N + 1``."""

    _cache: dict = {}

    def __init__(self, n_modes: int):
        self.N = n_modes
        self.n = 3 * n_modes + 1
        psi = np.arange(1, self.n + 1) * np.pi / (self.n + 1)
        self.sin = np.sin(psi)
        self.U = chebyshev_u_table(n_modes - 1, np.cos(psi))  # (N, n)

    @classmethod
    def get(cls, n_modes: int) -> "_Grid":
        g = cls._cache.get(n_modes)
        if g is None:
            g = cls._cache[n_modes] = cls(n_modes)
        return g


def _gauss_cheb_u(n: int):
    theta = np.arange(1, n + 1) * np.pi / (n + 1)
    return np.cos(theta), np.pi / (n + 1) * np.sin(theta) ** 2


def nonlinearity(a) -> np.ndarray:
    """Sine coefficients of ``f**3 / sin(psi)**2`` for ``f = sum a_m e_m``."""
    a = np.asarray(a, dtype=float)
    grid = _Grid.get(len(a))
    g = a @ grid.U
    h = grid.sin * g ** 3
    return dst(h, type=1)[: grid.N] / (grid.n + 1)


def rhs(state: SpectralState, linear_only: bool = False) -> tuple:
    k2 = np.arange(1, state.n_modes + 1) ** 2
    dv = -k2 * state.a
    if not linear_only:
        dv = dv - nonlinearity(state.a)
    return state.v.copy(), dv


def _check(state: SpectralState, bound: float) -> None:
    if not (np.all(np.isfinite(state.a)) and np.all(np.isfinite(state.v))):
        raise SimulationError(f"non-finite coefficients at t={state.t:.6g}")
    norm = float(np.max(np.abs(state.a)) + np.max(np.abs(state.v)))
    if norm > bound:
        raise SimulationError(
            f"coefficient norm {norm:.3g} exceeds {bound:.3g} at t={state.t:.6g}"
        )


def simulate(
    state0: SpectralState,
    t_end: float,
    dt: float = 1e-3,
    linear_only: bool = False,
    callback: Optional[Callable[[SpectralState], None]] = None,
    blowup: float = 1e3,
) -> SpectralState:
    """RK4 with ``ceil(t_end / dt)`` equal steps ending exactly at ``t_end``.

    ``callback`` is invoked on the initial state and after every step.
    The run aborts with :class:`SimulationError` once the coefficient norm
    exceeds ``blowup`` times its initial size (plus one).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    steps = max(1, math.ceil(t_end / dt)) if t_end > 0 else 0
    h = t_end / steps if steps else 0.0
    a = np.array(state0.a, dtype=float)
    v = np.array(state0.v, dtype=float)
    t0 = state0.t
    bound = blowup * (1.0 + float(np.max(np.abs(a), initial=0) + np.max(np.abs(v), initial=0)))
    k2 = np.arange(1, len(a) + 1) ** 2

    def acc(x):
        out = -k2 * x
        if not linear_only:
            out = out - nonlinearity(x)
        return out

    cur = SpectralState(a, v, t0)
    if callback:
        callback(cur)
    for step in range(1, steps + 1):
        k1a, k1v = v, acc(a)
        k2a, k2v = v + 0.5 * h * k1v, acc(a + 0.5 * h * k1a)
        k3a, k3v = v + 0.5 * h * k2v, acc(a + 0.5 * h * k2a)
        k4a, k4v = v + h * k3v, acc(a + h * k3a)
        a = a + h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        cur = SpectralState(a, v, t0 + step * h)
        _check(cur, bound)
        if callback:
            callback(cur)
    return cur


def energy_report(state: SpectralState, quad_points: Optional[int] = None) -> EnergyReport:
    """``E = 1/2 int (f_t**2 + f_psi**2 + (f**2 / sin)**2 / 2) dpsi`` split in parts.

    The first two parts come from Parseval (``int e_m**2 = pi/2``); the
    potential ``1/4 int sin**2 g**4`` uses Gauss-Chebyshev of the second kind,
    exact once ``quad_points >= 2N - 1``.
    """
    n = state.n_modes
    k = np.arange(1, n + 1)
    kinetic = 0.25 * np.pi * float(np.dot(state.v, state.v))
    gradient = 0.25 * np.pi * float(np.dot(k * state.a, k * state.a))
    nq = quad_points or 2 * n + 2
    y, w = _gauss_cheb_u(nq)
    g = state.a @ chebyshev_u_table(n - 1, y)
    potential = 0.25 * float(np.dot(w, g ** 4))
    return EnergyReport(kinetic, gradient, potential)


def energy_norm(a, v) -> float:
    """``sqrt(int f_t**2 + f_psi**2)`` of the pair ``(a, v)``."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    k = np.arange(1, len(a) + 1)
    return math.sqrt(0.5 * np.pi * float(np.dot(v, v) + np.dot(k * a, k * a)))


def project_initial(state, epsilon: float, n_modes: int) -> SpectralState:
    """Amplitudes ``a_m = sum_lam eps**lam f_lam^(m)(0)`` with zero velocity."""
    if n_modes < 1:
        raise ValueError("need at least one mode")
    return SpectralState(
        np.array(state.initial_amplitudes(epsilon, n_modes)), np.zeros(n_modes)
    )


@dataclass
class PeriodicityResult:
    epsilon: float
    period: float
    error: float
    energy_drift: float
    final: SpectralState


def periodicity_run(
    state, epsilon: float, n_modes: int = 32, dt: float = 1e-3
) -> PeriodicityResult:
    """Evolve the truncated series data over the predicted period."""
    s0 = project_initial(state, epsilon, n_modes)
    if epsilon == 0:
        return PeriodicityResult(0.0, 2 * np.pi, 0.0, 0.0, s0)
    T = 2.0 * np.pi / state.frequency(epsilon)
    e0 = energy_report(s0).total
    drift = [0.0]

    def watch(s):
        drift[0] = max(drift[0], abs(energy_report(s).total - e0))

    s1 = simulate(s0, T, dt, callback=watch)
    err = energy_norm(s1.a - s0.a, s1.v - s0.v)
    rel = drift[0] / e0 if e0 else drift[0]
    return PeriodicityResult(epsilon, T, err, rel, s1)


def periodicity_error(state, epsilon: float, n_modes: int = 32, dt: float = 1e-3) -> float:
    return periodicity_run(state, epsilon, n_modes, dt).error


def convergence_slope(epsilons, errors) -> float:
    """Least-squares slope of ``log(error)`` against ``log(epsilon)``."""
    x = np.log(np.asarray(epsilons, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def hardy_diagnostic(state: SpectralState, p: int, quad_points: int = 256) -> float:
    """Ratio ``(int |f|**p sin**(2-p))**(1/p) / (||f'||_2 + ||f||_2)``; 0 for ``f = 0``."""
    if not 1 <= p <= 6:
        raise ValueError("p must lie in [1, 6]")
    n = state.n_modes
    k = np.arange(1, n + 1)
    right = math.sqrt(0.5 * np.pi * float(np.dot(k * state.a, k * state.a))) + math.sqrt(
        0.5 * np.pi * float(np.dot(state.a, state.a))
    )
    if right == 0:
        return 0.0
    y, w = _gauss_cheb_u(max(quad_points, 2 * n + 2))
    g = state.a @ chebyshev_u_table(n - 1, y)
    left = float(np.dot(w, np.abs(g) ** p)) ** (1.0 / p)
    return left / right


def with_time(state: SpectralState, t: float) -> SpectralState:
    return replace(state, t=t)
