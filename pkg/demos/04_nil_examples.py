"""The two nilpotent groups and their affine torus conjugates.

Both groups are Z x R^j with a polynomial product; rotations by a fixed
element descend, through the coset section phi, to unipotent affine maps on
a torus.  The conjugacy is verified here by exact symbolic computation.
"""

from fractions import Fraction

from ergolab import (
    AngleValue,
    GeneratorRegistry,
    NilElement1,
    NilElement2,
    commutator,
    conjugated_affine,
    is_ergodic,
    phi,
    torus_coordinates,
)

registry = GeneratorRegistry()
a_val = AngleValue.of(registry.mint(name="a"))

# the 2-step group: (m, x1, x2) with twist x2 + y2 + m*y1
g = NilElement1(1, a_val, AngleValue(0))
print("g = (1, a, 0); g*g =", g * g)
print("g^-1 =", g.inverse(), "; g g^-1 is identity:", g * g.inverse() == NilElement1.identity())

h = NilElement1(2, AngleValue(Fraction(1, 3)), AngleValue(Fraction(1, 7)))
k = NilElement1(-1, AngleValue(Fraction(2, 5)), a_val)
print("2-step: [[g,h],k] trivial:", commutator(commutator(g, h), k) == NilElement1.identity())

# coset section: unique g0 * gamma factorization
w = NilElement1(2, Fraction(13, 10), Fraction(27, 10))
cr = phi(w)
print("\nphi(2, 13/10, 27/10): g0 =", cr.g0, " gamma =", cr.gamma)

# rotation by a = (2, a, a) becomes the affine map on T^2
a1 = NilElement1(2, a_val, a_val)
S1 = conjugated_affine(a1)
print("\nexample-1 rotation by (2, a, a) has affine conjugate:")
print("  A =", S1.A, " b =", S1.b, " ergodic:", is_ergodic(S1))

# the 3-step group adds x3 + y3 + m*y2 + (1/2) m^2 y1 and the half-integer
# lattice direction; psi doubles the last coordinate to land on T^3
a2 = NilElement2(2, a_val, AngleValue(0), a_val)
S2 = conjugated_affine(a2)
print("\nexample-2 rotation by (2, a, 0, a) has affine conjugate on T^3:")
print("  A =", S2.A)
print("  b =", S2.b)
print("  ergodic:", is_ergodic(S2))

# the conjugacy commutes with the dynamics, exactly
g2 = NilElement2(1, AngleValue(Fraction(3, 4)), a_val, AngleValue(Fraction(1, 6)))
lhs = torus_coordinates(phi(a2 * g2).g0)
rhs = S2.apply(torus_coordinates(phi(g2).g0))
print("  phi(T_a g) == S(phi(g)):", all(u.congruent(v) for u, v in zip(lhs, rhs)))
