from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cubicwave.trigpoly import COS, SIN, TrigPoly


@st.composite
def trig_polys(draw, max_terms=4, max_power=2, max_freq=5):
    n = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(n):
        key = (
            draw(st.integers(0, max_power)),
            draw(st.integers(0, max_freq)),
            draw(st.sampled_from([COS, SIN])),
        )
        c = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 6)))
        terms.append((key, c))
    return TrigPoly(terms)


@pytest.fixture(scope="session")
def state12():
    from cubicwave.resonant import expand

    return expand(12)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
