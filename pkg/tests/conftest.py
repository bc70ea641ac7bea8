"""Shared presentations and helpers for the test suite."""

import pytest

from relends import parse_presentation
from relends.presentation import SubgroupSpec, word_from_text

GENUS2 = "generators: a b c d\nrelators: abABcdCD\n"
FREE2 = "generators: a b\nrelators: none\n"
LINE = "generators: a\nrelators: none\n"
TORUS = "generators: a b\nrelators: abAB\n"
TRIVIAL_Q_TEXT = "generators: x\nrelators: x\n"


def sub(p, *texts):
    """Subgroup spec from generator words written in the presentation's letters."""
    return SubgroupSpec(tuple(word_from_text(t, p.generators) for t in texts))


def walk(ball, text):
    # table rows are letters, columns are vertices; uppercase means inverse
    v = 0
    for ch in text:
        i = ball.gen_names.index(ch.lower())
        v = ball.table[2 * i + (1 if ch.isupper() else 0)][v]
        assert v >= 0, f"walk fell off the ball at {ch!r}"
    return v


@pytest.fixture(scope="session")
def f2():
    return parse_presentation(FREE2)


@pytest.fixture(scope="session")
def zline():
    return parse_presentation(LINE)


@pytest.fixture(scope="session")
def genus2():
    return parse_presentation(GENUS2)


@pytest.fixture(scope="session")
def torus():
    return parse_presentation(TORUS)


@pytest.fixture(scope="session")
def trivial():
    return SubgroupSpec(())
