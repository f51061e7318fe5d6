from fractions import Fraction

import pytest

from gninterp import bump, solve_q
from gninterp.indices import InequalityInstance


@pytest.fixture
def bump1():
    return bump(1, R=1.0)


@pytest.fixture
def bump2():
    return bump(2, R=1.0)


def make_instance(n, k, l, sp, sr, theta) -> InequalityInstance:
    """Balanced instance with sq computed from the other indices."""
    sp, sr, theta = Fraction(sp), Fraction(sr), Fraction(theta)
    sq = solve_q(n, k, l, sp, sr, theta)
    return InequalityInstance(n=n, k=k, l=l, sp=sp, sq=sq, sr=sr, theta=theta)


# One line per acceptance criterion, echoed after the test summary so the
# verdicts stay visible under captured output.
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.line(line)
