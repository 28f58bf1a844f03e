import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicwave.trigpoly import COS, SIN, SecularSourceError, TrigPoly, duhamel

from conftest import trig_polys

cos, sin = TrigPoly.cos, TrigPoly.sin


def test_additive_inverse_and_identity():
    assert cos(1) + cos(1, -1) == TrigPoly.zero()
    p = cos(3, F(1, 32)) + sin(2, 5, power=1)
    assert p + TrigPoly.zero() == p


def test_add_builds_table_shape():
    f = F(7, 3)
    p = cos(3, F(1, 32)) + cos(1, F(-1, 32)) + cos(1, f)
    assert p.coeff(1) == f - F(1, 32)
    assert p.coeff(3) == F(1, 32)
    assert len(p) == 2


def test_products():
    assert cos(1) * cos(1) == TrigPoly.const(F(1, 2)) + cos(2, F(1, 2))
    assert cos(1) ** 3 == cos(1, F(3, 4)) + cos(3, F(1, 4))
    assert sin(2) * cos(2) == sin(4, F(1, 2))


def test_product_numeric():
    rng = random.Random(1)
    for _ in range(50):
        t = rng.uniform(-10, 10)
        assert (sin(2) * cos(2))(t) == pytest.approx(math.sin(2 * t) * math.cos(2 * t), abs=1e-14)


def test_differentiate():
    assert cos(1).differentiate() == sin(1, -1)
    assert sin(1, power=1).differentiate() == sin(1) + cos(1, power=1)
    u = sin(1, F(1, 2), power=1)
    assert u.differentiate().differentiate() + u == cos(1)


def test_canonical_normalization():
    assert TrigPoly({(0, 0, SIN): 3}) == TrigPoly.zero()
    assert TrigPoly({(0, -2, SIN): 1}) == sin(2, -1)
    assert TrigPoly({(0, -2, COS): 1}) == cos(2)
    a = TrigPoly([((0, 1, COS), 1), ((1, 3, SIN), 2), ((0, 0, COS), 5)])
    b = TrigPoly([((0, 0, COS), 5), ((1, 3, SIN), 2), ((0, 1, COS), 1)])
    assert a.terms == b.terms and hash(a) == hash(b)


def test_rejects_float_coefficients():
    with pytest.raises(TypeError):
        cos(1, 0.5)


def test_secular_part():
    p = sin(1, F(1, 2), power=1) + cos(3)
    assert p.secular_part() == sin(1, F(1, 2), power=1)
    assert cos(1).secular_part() == TrigPoly.zero()
    assert not p.is_periodic() and cos(1).is_periodic()


def test_eval():
    assert cos(1)(0) == 1.0
    assert sin(1, F(1, 2), power=1)(math.pi / 2) == pytest.approx(math.pi / 4)


class TestDuhamel:
    def test_resonant_cosine(self):
        assert duhamel(1, cos(1)) == sin(1, F(1, 2), power=1)

    def test_resonant_sine(self):
        assert duhamel(1, sin(1)) == cos(1, F(-1, 2), power=1) + sin(1, F(1, 2))

    def test_nonresonant(self):
        assert duhamel(1, cos(3)) == (cos(1) - cos(3)).scale(F(1, 8))

    def test_mode_three(self):
        got = duhamel(3, cos(3) * cos(1) ** 2)
        want = cos(3, F(-3, 64)) + cos(1, F(3, 32)) + cos(5, F(-3, 64)) + sin(3, F(1, 4), power=1)
        assert got == want

    def test_constant_source(self):
        u = duhamel(2, TrigPoly.const(1))
        assert u == (TrigPoly.const(1) - cos(2)).scale(F(1, 2))

    def test_secular_source_rejected(self):
        with pytest.raises(SecularSourceError):
            duhamel(1, sin(1, power=1))
        with pytest.raises(ValueError):
            duhamel(0, cos(1))

    def test_general_path(self):
        src = cos(2, 3, power=2) + sin(1, F(1, 3), power=1) + cos(1, power=3)
        for w in (1, 2, 3):
            u = duhamel(w, src, allow_secular=True)
            assert u.differentiate().differentiate() + u.scale(w * w) - src.scale(w) == TrigPoly.zero()
            assert u.value_at_zero() == 0
            assert u.differentiate().value_at_zero() == 0


@settings(max_examples=60, deadline=None)
@given(trig_polys(), trig_polys(), trig_polys())
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@settings(max_examples=40, deadline=None)
@given(trig_polys(), trig_polys(), st.lists(st.floats(0, 4 * math.pi), min_size=5, max_size=20))
def test_evaluation_homomorphism(p, q, taus):
    for t in taus:
        prod = p(t) * q(t)
        assert abs((p * q)(t) - prod) <= 1e-10 * (1 + abs(prod))
        assert (p + q)(t) == pytest.approx(p(t) + q(t), abs=1e-10 * (1 + abs(p(t)) + abs(q(t))))


@settings(max_examples=60, deadline=None)
@given(trig_polys(), st.integers(1, 6), st.booleans())
def test_duhamel_solves_forced_oscillator(src, w, periodic_only):
    if periodic_only:
        src = src.periodic_part()
    u = duhamel(w, src, allow_secular=True)
    assert u.differentiate().differentiate() + u.scale(w * w) - src.scale(w) == TrigPoly.zero()
    assert u.value_at_zero() == 0
    assert u.differentiate().value_at_zero() == 0


@settings(max_examples=30, deadline=None)
@given(trig_polys())
def test_records_roundtrip(p):
    assert TrigPoly.from_records(p.to_records()) == p


def test_text_format():
    p = sin(1, F(1, 2), power=1) + cos(3, -2)
    assert p.to_text() == "-2/1 * tau^0 * cos(3*tau) + 1/2 * tau^1 * sin(1*tau)"
    assert TrigPoly.zero().to_text() == "0"
