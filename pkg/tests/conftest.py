import random

import pytest

from boxres.ideal import MonomialIdeal


def staircase(p, q, r, s):
    """<z1^p z2^q, z1^r z2^s>."""
    return MonomialIdeal(2, ((p, q), (r, s)))


def random_ideals(count=100, seed=20261018):
    """Proper ideals with m <= 3, l <= 3 generators, exponents <= 4."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = rng.randint(1, 3)
        gens = tuple(tuple(rng.randint(0, 4) for _ in range(m)) for _ in range(rng.randint(1, 3)))
        ideal = MonomialIdeal(m, gens)
        if not ideal.is_unit:
            out.append(ideal)
    return out


def named_ideals():
    return {
        "z1^2 z2^2": MonomialIdeal(2, ((2, 2),)),
        "staircase(2,3,4,1)": staircase(2, 3, 4, 1),
        "staircase(1,4,3,2)": staircase(1, 4, 3, 2),
        "z1^2, z3": MonomialIdeal(3, ((2, 0, 0), (0, 0, 1))),
    }


def corpus():
    return list(named_ideals().values()) + random_ideals()


@pytest.fixture(scope="session")
def ideal_corpus():
    return corpus()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
