import random
from fractions import Fraction

import pytest

from conftest import random_angle

from ergolab.nilexamples import (
    NilElement1,
    NilElement2,
    commutator,
    conjugated_affine,
    phi,
    rotate,
    torus_coordinates,
)
from ergolab.torus import (
    AngleValue,
    GeneratorRegistry,
    is_ergodic,
    torus_congruent,
)


def rand_el1(rng, registry=None, gen_prob=0.0):
    return NilElement1(
        rng.randint(-4, 4),
        random_angle(rng, registry, gen_prob),
        random_angle(rng, registry, gen_prob),
    )


def rand_el2(rng, registry=None, gen_prob=0.0):
    return NilElement2(
        rng.randint(-4, 4),
        random_angle(rng, registry, gen_prob),
        random_angle(rng, registry, gen_prob),
        random_angle(rng, registry, gen_prob),
    )


# ---------------------------------------------------------------------------
# Group laws
# ---------------------------------------------------------------------------


def test_printed_square(registry):
    a = AngleValue.of(registry.mint())
    g = NilElement1(1, a, AngleValue(0))
    assert g * g == NilElement1(2, a * 2, a)


def test_identity_element():
    rng = random.Random(0)
    e1, e2 = NilElement1.identity(), NilElement2.identity()
    for _ in range(20):
        g = rand_el1(rng)
        assert g * e1 == g and e1 * g == g
        h = rand_el2(rng)
        assert h * e2 == h and e2 * h == h


def test_inverses_random():
    rng = random.Random(1)
    reg = GeneratorRegistry()
    for _ in range(100):
        g = rand_el1(rng, reg, 0.3)
        assert g * g.inverse() == NilElement1.identity()
        assert g.inverse() * g == NilElement1.identity()
        h = rand_el2(rng, reg, 0.3)
        assert h * h.inverse() == NilElement2.identity()
        assert h.inverse() * h == NilElement2.identity()


def test_associativity_random():
    rng = random.Random(2)
    reg = GeneratorRegistry()
    for _ in range(200):
        g, h, k = (rand_el1(rng, reg, 0.2) for _ in range(3))
        assert (g * h) * k == g * (h * k)
        g2, h2, k2 = (rand_el2(rng, reg, 0.2) for _ in range(3))
        assert (g2 * h2) * k2 == g2 * (h2 * k2)


def test_nilpotency_class():
    rng = random.Random(3)
    for _ in range(30):
        g, h, k = (rand_el1(rng) for _ in range(3))
        assert commutator(commutator(g, h), k) == NilElement1.identity()
        g2, h2, k2, l2 = (rand_el2(rng) for _ in range(4))
        assert (
            commutator(commutator(commutator(g2, h2), k2), l2)
            == NilElement2.identity()
        )
    # the 3-step group is genuinely 3-step: some double commutator survives
    g2 = NilElement2(1, 1, 0, 0)
    h2 = NilElement2(1, 0, 0, 0)
    k2 = NilElement2(1, 0, 0, 0)
    assert commutator(commutator(g2, h2), k2) != NilElement2.identity()


# ---------------------------------------------------------------------------
# Coset section
# ---------------------------------------------------------------------------


def test_phi_printed_example():
    g = NilElement1(2, Fraction(13, 10), Fraction(27, 10))
    cr = phi(g)
    assert cr.g0 == NilElement1(0, Fraction(3, 10), Fraction(7, 10))
    assert cr.gamma == NilElement1(2, 1, 2)
    assert cr.g0 * cr.gamma == g


def test_phi_lattice_elements_map_to_identity():
    assert phi(NilElement1(3, 4, -2)).g0 == NilElement1.identity()
    assert phi(NilElement2(1, 2, 0, Fraction(5, 2))).g0 == NilElement2.identity()


def test_phi_domain_elements_are_fixed():
    g = NilElement1(0, Fraction(1, 3), Fraction(2, 5))
    cr = phi(g)
    assert cr.g0 == g and cr.gamma == NilElement1.identity()


def test_phi_factorization_random():
    rng = random.Random(4)
    reg = GeneratorRegistry()
    for _ in range(100):
        g = rand_el1(rng, reg, 0.3)
        cr = phi(g)
        assert cr.g0 * cr.gamma == g
        assert cr.gamma.in_lattice() and cr.gamma.m == g.m
        assert 0 <= cr.g0.x1.rational < 1 and 0 <= cr.g0.x2.rational < 1
        h = rand_el2(rng, reg, 0.3)
        cr2 = phi(h)
        assert cr2.g0 * cr2.gamma == h
        assert cr2.gamma.in_lattice()
        assert 0 <= cr2.g0.x3.rational < Fraction(1, 2)


def test_phi_half_lattice_uniqueness():
    # x3 = 3/4 and x3 = 1/4 differ by the lattice step 1/2, so both must
    # land on the same representative
    a = phi(NilElement2(0, 0, 0, Fraction(3, 4))).g0
    b = phi(NilElement2(0, 0, 0, Fraction(1, 4))).g0
    assert a == b == NilElement2(0, 0, 0, Fraction(1, 4))


def test_psi_kernel_is_lattice():
    # psi(x) = 0 on the torus exactly for points of the lattice
    # Z x Z x (1/2)Z, checked over denominators <= 8
    for p1 in range(-8, 9):
        for q in (1, 2, 3, 4, 5, 6, 7, 8):
            x3 = Fraction(p1, q)
            g = NilElement2(0, 0, 0, x3)
            image = torus_coordinates(g)
            is_zero = all(v.congruent(AngleValue(0)) for v in image)
            assert is_zero == ((x3 * 2).denominator == 1)


# ---------------------------------------------------------------------------
# The conjugated affine maps
# ---------------------------------------------------------------------------


def test_conjugated_affine_example_one(registry):
    a1 = AngleValue.of(registry.mint())
    a2 = AngleValue(Fraction(1, 3))
    a = NilElement1(2, a1, a2)
    S = conjugated_affine(a)
    assert S.A == ((1, 0), (2, 1))
    assert S.b[0].congruent(a1) and S.b[1].congruent(a2)


def test_conjugated_affine_example_two_printed_map(registry):
    m1 = 3
    a1 = AngleValue.of(registry.mint())
    a2 = AngleValue(Fraction(1, 5))
    a3 = AngleValue.of(registry.mint(), Fraction(1, 2))
    a = NilElement2(m1, a1, a2, a3)
    S = conjugated_affine(a)
    assert S.A == ((1, 0, 0), (m1, 1, 0), (m1 * m1, 2 * m1, 1))
    assert S.b[0].congruent(a1)
    assert S.b[1].congruent(a2)
    assert S.b[2].congruent(a3 * 2)


def test_conjugated_affine_identity_is_identity():
    for e in (NilElement1.identity(), NilElement2.identity()):
        S = conjugated_affine(e)
        d = S.dimension
        assert S.A == tuple(
            tuple(1 if i == j else 0 for j in range(d)) for i in range(d)
        )
        assert all(v.is_zero() for v in S.b)


def test_conjugacy_commutation_random():
    rng = random.Random(5)
    reg = GeneratorRegistry()
    for _ in range(100):
        a = rand_el1(rng, reg, 0.4)
        g = rand_el1(rng, reg, 0.4)
        S = conjugated_affine(a)
        lhs = torus_coordinates(phi(rotate(a, g)).g0)
        rhs = S.apply(torus_coordinates(phi(g).g0))
        assert torus_congruent(lhs, rhs)
    for _ in range(100):
        a = rand_el2(rng, reg, 0.4)
        g = rand_el2(rng, reg, 0.4)
        S = conjugated_affine(a)
        lhs = torus_coordinates(phi(rotate(a, g)).g0)
        rhs = S.apply(torus_coordinates(phi(g).g0))
        assert torus_congruent(lhs, rhs)


def test_demo_rotation_is_totally_ergodic(registry):
    alpha = AngleValue.of(registry.mint())
    a = NilElement1(2, alpha, alpha)
    S = conjugated_affine(a)
    assert is_ergodic(S)
