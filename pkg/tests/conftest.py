import json
import pathlib
import random
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from fractions import Fraction

from ergolab.algebra import RationalMatrix
from ergolab.torus import AngleValue, GeneratorRegistry

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture()
def registry():
    return GeneratorRegistry()


@pytest.fixture(scope="session")
def pinned():
    with open(FIXTURES / "pinned.json", "r", encoding="utf-8") as fh:
        return json.load(fh)


def random_unit_triangular(rng: random.Random, d: int, lo=-2, hi=2, lower=True):
    rows = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(d):
            if (i > j) if lower else (i < j):
                rows[i][j] = rng.randint(lo, hi)
    return rows


def random_unimodular(rng: random.Random, d: int, ops: int = 4):
    """Product of a few elementary integer row operations (det = +-1)."""
    m = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    for _ in range(ops):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for col in range(d):
            m[i][col] += c * m[j][col]
    return m


def _int_inverse(U):
    """Exact inverse of a unimodular integer matrix, as integers."""
    M = RationalMatrix.from_rows(U)
    d = M.nrows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(d)] for i, r in enumerate(M.rows)]
    for c in range(d):
        piv = next(r for r in range(c, d) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [e * inv for e in aug[c]]
        for r in range(d):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [e - f * g for e, g in zip(aug[r], aug[c])]
    return [[int(e) for e in row[d:]] for row in aug]


def random_unipotent(rng: random.Random, d: int):
    """U L U^{-1}: unit triangular conjugated by a unimodular matrix.

    Unipotent, integer, and usually dense enough to exercise the reduction.
    """
    L = random_unit_triangular(rng, d, lower=rng.random() < 0.5)
    U = random_unimodular(rng, d)
    Ui = _int_inverse(U)
    A = RationalMatrix.from_rows(U) * RationalMatrix.from_rows(L) * RationalMatrix.from_rows(Ui)
    return A.to_int_rows()


def random_angle(rng: random.Random, registry=None, gen_prob=0.0, denom=12):
    v = AngleValue(Fraction(rng.randint(-3 * denom, 3 * denom), denom))
    if registry is not None and rng.random() < gen_prob:
        gens = list(registry)
        g = gens[rng.randrange(len(gens))] if gens and rng.random() < 0.7 else registry.mint()
        v = v + AngleValue.of(g, Fraction(rng.randint(1, 3), rng.randint(1, 2)))
    return v


def random_affine(rng: random.Random, d: int, registry, gen_prob=0.7):
    from ergolab.torus import UnipotentAffineMap

    A = random_unipotent(rng, d)
    b = [random_angle(rng, registry, gen_prob=gen_prob) for _ in range(d)]
    return UnipotentAffineMap(A, b)
