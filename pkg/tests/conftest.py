from fractions import Fraction

import pytest

from affwalk.modules import build_free_module
from affwalk.rings import build_gf, build_product, build_zn
from affwalk.walks import Distribution


def F(*args) -> Fraction:
    return Fraction(*args)


def dist(carrier, *weights) -> Distribution:
    return Distribution.from_weights(carrier, [Fraction(w) for w in weights])


@pytest.fixture
def z4():
    return build_zn(4)


@pytest.fixture
def z4_example(z4):
    """The Z/4 instance used throughout: P = (2/5, 1/5, 1/5, 1/5), Q = (1/10, 3/10, 1/5, 2/5)."""
    V = build_free_module(z4, 1)
    P = dist(V, "2/5", "1/5", "1/5", "1/5")
    Q = dist(z4, "1/10", "3/10", "1/5", "2/5")
    return V, P, Q


@pytest.fixture
def gf4():
    return build_gf(2, 2, [1, 1, 1])


@pytest.fixture
def z2xz4():
    return build_product([build_zn(2), build_zn(4)])


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, passed: bool, detail: str = "") -> None:
    line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
