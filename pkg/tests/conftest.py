import random
from fractions import Fraction

import pytest

from nctorus import AlgebraElement, PhaseContext
from nctorus.lattice import identity, mat_mul
from nctorus.scalars import PhaseScalar

SL2_GENS = (
    ((1, 1), (0, 1)),
    ((1, 0), (1, 1)),
    ((1, -1), (0, 1)),
    ((1, 0), (-1, 1)),
)


@pytest.fixture
def ctx():
    return PhaseContext()


def random_sl2(rng: random.Random, steps: int = 8):
    m = identity(2)
    for _ in range(steps):
        m = mat_mul(m, rng.choice(SL2_GENS))
    return m


def random_unimodular(rng: random.Random, n: int, ops: int = 12):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(ops):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            m[k][j] += c * m[k][i]
    return tuple(tuple(row) for row in m)


def random_scalar(rng: random.Random) -> PhaseScalar:
    g = PhaseScalar.gaussian(
        Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
        Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
    )
    return g * PhaseScalar.zeta(rng.randint(-2, 2))


def random_element(rng: random.Random, dim: int = 2, max_terms: int = 5,
                   span: int = 6) -> AlgebraElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = tuple(rng.randint(-span, span) for _ in range(dim))
        c = random_scalar(rng)
        terms[m] = terms[m] + c if m in terms else c
    return AlgebraElement(dim, terms)
