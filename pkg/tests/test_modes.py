import itertools
import math

import numpy as np
import pytest

from cubicwave.modes import (
    chebyshev_u_eval,
    chebyshev_u_table,
    coefficient_table,
    eigen_eval,
    interaction_coeff,
    interaction_coeff_quadrature,
    interaction_coeff_stepped,
    omega,
    reachable_modes,
)


def test_omega():
    assert [omega(0), omega(3), omega(12)] == [1, 4, 13]
    with pytest.raises(ValueError):
        omega(-1)


def test_eigen_eval():
    assert eigen_eval(0, math.pi / 2) == 1.0
    assert eigen_eval(1, math.pi / 4) == pytest.approx(1.0)
    for m in range(10):
        assert eigen_eval(m, 0.0) == 0 and eigen_eval(m, math.pi) == 0
    with pytest.raises(ValueError):
        eigen_eval(0, 4.0)


def test_chebyshev_u():
    assert chebyshev_u_eval(0, 0.3) == 1
    assert chebyshev_u_eval(1, 0.5) == 1.0
    with pytest.raises(ValueError):
        chebyshev_u_eval(2, 1.5)
    rng = np.random.default_rng(3)
    psi = rng.uniform(0, math.pi, 100)
    for n in range(21):
        err = np.abs(chebyshev_u_eval(n, np.cos(psi)) * np.sin(psi) - np.sin((n + 1) * psi))
        assert err.max() < 1e-12


def test_product_linearization():
    y = np.random.default_rng(4).uniform(-1, 1, 50)
    table = chebyshev_u_table(45, y)
    for p in range(16):
        for q in range(p, 16):
            rhs = sum(table[q - p + 2 * s] for s in range(p + 1))
            assert np.max(np.abs(table[p] * table[q] - rhs)) < 1e-10


def test_known_values():
    assert interaction_coeff(0, 0, 0, 0) == 1
    assert interaction_coeff(1, 1, 1, 1) == 2
    assert interaction_coeff(0, 1, 0, 0) == 0
    for j in range(6):
        for k in range(6):
            assert interaction_coeff(0, j, k, 0) == int(j == k)
            assert interaction_coeff(j, 0, 0, k) == int(j == k)


def test_quadrature_small_cases():
    assert interaction_coeff_quadrature(0, 0, 0, 0) == pytest.approx(1.0, abs=1e-10)
    for idx in [(2, 2, 2, 2), (0, 1, 2, 3), (1, 1, 1, 1)]:
        assert abs(interaction_coeff_quadrature(*idx) - interaction_coeff(*idx)) < 1e-10


def test_quadrature_against_direct_integral():
    from scipy.integrate import quad

    for idx in [(1, 1, 1, 1), (0, 2, 3, 1), (2, 2, 1, 3)]:
        def f(psi):
            return np.prod([np.sin((i + 1) * psi) for i in idx]) / np.sin(psi) ** 2

        val = 2 / math.pi * quad(f, 1e-12, math.pi - 1e-12, limit=200)[0]
        assert val == pytest.approx(interaction_coeff(*idx), abs=1e-8)


def test_symmetry_and_parity():
    for idx in itertools.product(range(5), repeat=4):
        c = interaction_coeff(*idx)
        assert c >= 0
        if sum(idx) % 2:
            assert c == 0
        assert all(interaction_coeff(*p) == c for p in itertools.permutations(idx))


def test_counting_equals_stepped():
    for idx in itertools.product(range(7), repeat=4):
        assert interaction_coeff(*idx) == interaction_coeff_stepped(*idx)


def test_table_and_reachable():
    rows = coefficient_table(1, nonzero_only=True)
    assert (1, 1, 1, 1, 2) in rows and all(r[-1] for r in rows)
    assert len(coefficient_table(2)) == 81
    assert reachable_modes(0, 0, 0) == [0]
    assert reachable_modes(0, 0, 2) == [2]
