"""Dirichlet eigenmodes on ``[0, pi]`` and their quartic interaction coefficients.

The eigenfunctions are ``e_m(psi) = sin((m+1) psi)`` with frequency ``m + 1``.
The interaction coefficient

    C[i,j,k,m] = (2/pi) * int_0^pi e_i e_j e_k e_m / sin(psi)**2 dpsi

is a nonnegative integer.  Writing ``sin((n+1) psi) = sin(psi) U_n(cos psi)``
turns it into a weighted integral of Chebyshev polynomials of the second
kind, whose product linearization gives a counting formula.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def omega(m: int) -> int:
    """Eigenfrequency of mode ``m``."""
    if m < 0:
        raise ValueError("mode index must be nonnegative")
    return m + 1


def eigen_eval(m: int, psi: float) -> float:
    if not 0.0 <= psi <= math.pi:
        raise ValueError(f"psi={psi!r} outside [0, pi]")
    if psi == 0.0 or psi == math.pi:
        return 0.0
    return math.sin((m + 1) * psi)


def chebyshev_u_eval(n: int, y):
    """``U_n(y)`` by the three-term recurrence; ``y`` scalar or array in [-1, 1]."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    arr = np.asarray(y, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise ValueError("y outside [-1, 1]")
    u_prev = np.zeros_like(arr)
    u = np.ones_like(arr)
    for _ in range(n):
        u_prev, u = u, 2.0 * arr * u - u_prev
    return float(u) if np.ndim(y) == 0 else u


def chebyshev_u_table(n_max: int, y: np.ndarray) -> np.ndarray:
    """Rows ``U_0(y) .. U_{n_max}(y)`` stacked along axis 0."""
    y = np.asarray(y, dtype=float)
    out = np.empty((n_max + 1,) + y.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * y
    for n in range(2, n_max + 1):
        out[n] = 2.0 * y * out[n - 1] - out[n - 2]
    return out


@lru_cache(maxsize=None)
def _count_pairs(i: int, j: int, k: int, m: int) -> int:
    # requires i <= j and k <= m
    target = (m - k) - (j - i)
    if target % 2:
        return 0
    half = target // 2
    return sum(1 for a in range(i + 1) if 0 <= a - half <= k)


def interaction_coeff(i: int, j: int, k: int, m: int) -> int:
    """Exact ``C[i,j,k,m]`` by counting solutions of ``2(a - b) = (m-k) - (j-i)``.

    Indices may be given in any order; each pair is sorted before counting.
    """
    for x in (i, j, k, m):
        if x < 0:
            raise ValueError("mode index must be nonnegative")
    if i > j:
        i, j = j, i
    if k > m:
        k, m = m, k
    return _count_pairs(i, j, k, m)


def interaction_coeff_stepped(i: int, j: int, k: int, m: int) -> int:
    """Same count via the stepped index ranges ``j-i, j-i+2, .., j+i``."""
    if i > j:
        i, j = j, i
    if k > m:
        k, m = m, k
    left = set(range(j - i, j + i + 1, 2))
    right = set(range(m - k, m + k + 1, 2))
    return len(left & right)


def interaction_coeff_quadrature(i: int, j: int, k: int, m: int) -> float:
    """Gauss-Chebyshev (second kind) value of ``C[i,j,k,m]``.

    After ``y = cos(psi)`` the integrand is ``U_i U_j U_k U_m`` against
    ``sqrt(1 - y**2)``; ``n`` nodes integrate degree ``2n - 1`` exactly.
    """
    degree = i + j + k + m
    n = degree // 2 + 2
    theta = np.arange(1, n + 1) * np.pi / (n + 1)
    y = np.cos(theta)
    w = np.pi / (n + 1) * np.sin(theta) ** 2
    table = chebyshev_u_table(max(i, j, k, m), y)
    integrand = table[i] * table[j] * table[k] * table[m]
    return float(2.0 / np.pi * np.dot(w, integrand))


def coefficient_table(max_index: int, nonzero_only: bool = False) -> list:
    """All ``(i, j, k, m, C)`` rows with indices in ``0..max_index``."""
    rows = []
    rng = range(max_index + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                for m in rng:
                    c = interaction_coeff(i, j, k, m)
                    if c or not nonzero_only:
                        rows.append((i, j, k, m, c))
    return rows


def reachable_modes(i: int, j: int, k: int) -> list:
    """Modes ``m`` with ``C[i,j,k,m] != 0``."""
    return [m for m in range(i + j + k + 3) if interaction_coeff(i, j, k, m)]
