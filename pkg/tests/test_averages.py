import math
import random

import pytest

from ergolab.averages import (
    TrigPolynomial,
    l2_distance_to_product,
    multiple_ergodic_average,
    multiple_ergodic_average_direct,
    product_of_integrals,
)
from ergolab.polynomial import parse_family
from ergolab.torus import (
    AngleValue,
    UnipotentAffineMap,
    sample_generic_point,
)


def example_system(registry):
    alpha = AngleValue.of(registry.mint())
    return UnipotentAffineMap([[1, 0], [2, 1]], [alpha, alpha]), alpha


# ---------------------------------------------------------------------------
# Trig polynomials and integrals
# ---------------------------------------------------------------------------


def test_product_of_integrals_cases():
    ones = [TrigPolynomial.constant(2, 1.0) for _ in range(3)]
    assert product_of_integrals(ones) == complex(1.0, 0.0)
    char = TrigPolynomial.character((1, 0))
    assert product_of_integrals([ones[0], char]) == 0j
    f1 = TrigPolynomial.constant(2, 2.0) + TrigPolynomial.character((0, 1))
    f2 = TrigPolynomial.constant(2, 3.0)
    assert product_of_integrals([f1, f2]) == complex(6.0, 0.0)


def test_trig_polynomial_eval_and_bounds():
    f = TrigPolynomial(1, {(2,): 1.0, (0,): 0.5})
    x = 0.3
    expect = 0.5 + complex(
        math.cos(2 * math.pi * 2 * x), math.sin(2 * math.pi * 2 * x)
    )
    assert f.eval_at((x,)) == pytest.approx(expect)
    assert f.sup_bound == pytest.approx(1.5)
    assert f.integral == 0.5
    with pytest.raises(ValueError):
        TrigPolynomial(2, {(1,): 1.0})


# ---------------------------------------------------------------------------
# The average itself
# ---------------------------------------------------------------------------


def test_constant_functions_average_to_one(registry):
    T, _ = example_system(registry)
    fam = parse_family("n,n^2")
    fs = [TrigPolynomial.constant(2, 1.0), TrigPolynomial.constant(2, 1.0)]
    x = sample_generic_point(2, registry)
    for N in (1, 17, 1000):
        assert multiple_ergodic_average(T, fam, fs, x, N) == complex(1.0, 0.0)


def test_dependent_family_counterexample_is_exact(registry):
    # irrational rotation with {n, 2n} and chi_2, chi_-1: the phases cancel
    # symbolically, so A_N = e^{2 pi i x} for every N and never approaches
    # the product of integrals (0)
    alpha = AngleValue.of(registry.mint())
    rot = UnipotentAffineMap([[1]], [alpha])
    fam = parse_family("n,2n")
    fs = [TrigPolynomial.character((2,)), TrigPolynomial.character((-1,))]
    x = sample_generic_point(1, registry)
    values = {multiple_ergodic_average(rot, fam, fs, x, N) for N in (1, 10, 1000)}
    assert len(values) == 1  # N-independent
    v = values.pop()
    assert abs(v - 0) == 1.0  # exact unit distance from the product 0
    expect = 2 * math.pi * x[0].shadow
    assert v.real == pytest.approx(math.cos(expect), abs=1e-12)
    # the family is genuinely dependent
    from ergolab.polynomial import is_independent

    assert not is_independent(fam)[0]


def test_independent_family_average_small(registry):
    T, _ = example_system(registry)
    fam = parse_family("n,n^2")
    fs = [TrigPolynomial.character((0, 1)), TrigPolynomial.character((1, 0))]
    x = sample_generic_point(2, registry)
    a = multiple_ergodic_average(T, fam, fs, x, 10**5)
    assert abs(a) < 0.05


def test_character_path_matches_direct_evaluation(registry):
    rng = random.Random(91)
    T, _ = example_system(registry)
    fam = parse_family("n,n^2")
    for _ in range(4):
        fs = []
        for _ in range(2):
            terms = {}
            for _ in range(rng.randint(1, 2)):
                m = (rng.randint(-1, 1), rng.randint(-1, 1))
                terms[m] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            fs.append(TrigPolynomial(2, terms))
        x = sample_generic_point(2, registry)
        N = 1000
        a = multiple_ergodic_average(T, fam, fs, x, N)
        b = multiple_ergodic_average_direct(T, fam, fs, x, N)
        assert abs(a - b) < 1e-9

    rot = UnipotentAffineMap([[1]], [AngleValue.of(registry.mint())])
    fam1 = parse_family("n^2")
    f = [TrigPolynomial(1, {(1,): 0.5, (-2,): 1.25})]
    x = sample_generic_point(1, registry)
    a = multiple_ergodic_average(rot, fam1, f, x, 1000)
    b = multiple_ergodic_average_direct(rot, fam1, f, x, 1000)
    assert abs(a - b) < 1e-9


def test_multilinearity_in_coefficients(registry):
    rng = random.Random(97)
    T, _ = example_system(registry)
    fam = parse_family("n,n^2")
    x = sample_generic_point(2, registry)
    N = 300
    f = TrigPolynomial.character((1, 0))
    g = TrigPolynomial.character((0, 1))
    h = TrigPolynomial.character((1, -1))
    for _ in range(5):
        c1 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        c2 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        combined = f.scale(c1) + g.scale(c2)
        lhs = multiple_ergodic_average(T, fam, [combined, h], x, N)
        rhs = c1 * multiple_ergodic_average(
            T, fam, [f, h], x, N
        ) + c2 * multiple_ergodic_average(T, fam, [g, h], x, N)
        assert abs(lhs - rhs) < 1e-12


def test_average_validation(registry):
    T, _ = example_system(registry)
    fam = parse_family("n,n^2")
    x = sample_generic_point(2, registry)
    with pytest.raises(ValueError):
        multiple_ergodic_average(T, fam, [TrigPolynomial.constant(2, 1.0)], x, 10)
    with pytest.raises(ValueError):
        multiple_ergodic_average(
            T,
            fam,
            [TrigPolynomial.constant(1, 1.0), TrigPolynomial.constant(1, 1.0)],
            x,
            10,
        )
    with pytest.raises(ValueError):
        multiple_ergodic_average(
            T,
            fam,
            [TrigPolynomial.constant(2, 1.0), TrigPolynomial.constant(2, 1.0)],
            x,
            0,
        )


# ---------------------------------------------------------------------------
# L2 distance reports
# ---------------------------------------------------------------------------


def test_l2_all_constants_is_exactly_zero(registry):
    T, _ = example_system(registry)
    fam = parse_family("n,n^2")
    fs = [TrigPolynomial.constant(2, 1.0), TrigPolynomial.constant(2, 1.0)]
    report = l2_distance_to_product(T, fam, fs, 100, 3, seed=1)
    assert report.l2_estimate == 0.0
    assert report.product == complex(1.0, 0.0)


def test_l2_single_rotation_bound(registry):
    # k = 1: each sample is a finite geometric series with the closed-form
    # bound |A_N| <= 1 / (N |sin(pi m alpha)|)
    alpha = registry.mint()
    rot = UnipotentAffineMap([[1]], [AngleValue.of(alpha)])
    fam = parse_family("n")
    fs = [TrigPolynomial.character((1,))]
    N = 10**6
    report = l2_distance_to_product(rot, fam, fs, N, 3, seed=5)
    bound = 1.0 / (N * abs(math.sin(math.pi * alpha.value)))
    assert report.l2_estimate < 1e-2
    for v in report.samples:
        assert abs(v) <= bound + 1e-12


def test_l2_estimates_decrease_with_n(registry):
    T, _ = example_system(registry)
    fam = parse_family("n,n^2")
    fs = [TrigPolynomial.character((0, 1)), TrigPolynomial.character((1, 0))]
    r3 = l2_distance_to_product(T, fam, fs, 10**3, 6, seed=13)
    r5 = l2_distance_to_product(T, fam, fs, 10**5, 6, seed=13)
    assert r5.l2_estimate < r3.l2_estimate
    assert r5.sample_count == 6 and r5.N == 10**5


def test_l2_seeded_reproducibility(registry):
    T, _ = example_system(registry)
    fam = parse_family("n,n^2")
    fs = [TrigPolynomial.character((0, 1)), TrigPolynomial.character((1, 0))]
    a = l2_distance_to_product(T, fam, fs, 500, 4, seed=21)
    b = l2_distance_to_product(T, fam, fs, 500, 4, seed=21)
    assert a.samples == b.samples and a.l2_estimate == b.l2_estimate
