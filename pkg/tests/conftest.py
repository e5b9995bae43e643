import random
from fractions import Fraction

import pytest

from crnbal.parser import parse_network

TRIANGLE = """\
C1 <-> C2 ; kf = {0}, kr = {3}
C2 <-> C3 ; kf = {1}, kr = {4}
C3 <-> C1 ; kf = {2}, kr = {5}
"""

DEFICIENT_CYCLE = """\
# complexes X1 + X2, X2, 2 X1 + X2 on an irreversible 3-cycle
X1 + X2 -> X2 ; k = {0}
X2 -> 2 X1 + X2 ; k = {1}
2 X1 + X2 -> X1 + X2 ; k = {2}
"""


def fmt(k):
    k = Fraction(k)
    return str(k.numerator) if k.denominator == 1 else f"{k.numerator}/{k.denominator}"


def triangle(kp, km):
    """The reversible 3-cycle on complexes C1, C2, C3 (Z = identity)."""
    return parse_network(TRIANGLE.format(*(fmt(k) for k in list(kp) + list(km))))


def deficient_cycle(kp):
    return parse_network(DEFICIENT_CYCLE.format(*(fmt(k) for k in kp)))


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def triangle_net():
    return triangle((1, 2, 3), (4, 5, 6))


@pytest.fixture
def ab_net():
    return parse_network("A <-> B ; kf = 2, kr = 3")


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(test_acceptance.RESULTS):
        terminalreporter.write_line(test_acceptance.RESULTS[n])
