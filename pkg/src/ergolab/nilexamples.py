"""The two nilpotent group examples and their affine torus conjugates.

Both groups live on Z x R^j with a polynomial multiplication law; the
identity component G0 = {0} x R^j is abelian, so a rotation by a fixed
element is conjugate, through the coset section phi, to a unipotent affine
map on a torus.  The groups are hard-coded: the reduction chain makes them
the only nilmanifold inputs required, and hard-coding keeps every operation
exact.

Group one (2-step), elements (m, x1, x2):

    g * h = (m + n, x1 + y1, x2 + y2 + m*y1),      lattice Z^3.

Group two (3-step), elements (m, x1, x2, x3):

    g * h = (m + n, x1 + y1, x2 + y2 + m*y1,
             x3 + y3 + m*y2 + (1/2) m^2 y1),       lattice Z^3 x (1/2)Z.

The quotient of G0 by its lattice is T^2 for group one; for group two it is
R^3 / (Z x Z x (1/2)Z) and the doubling map psi(x1, x2, x3) = (x1, x2, 2*x3)
identifies it with T^3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .torus import AngleValue, TorusPoint, UnipotentAffineMap

_HALF = Fraction(1, 2)


def _ang(x) -> AngleValue:
    return AngleValue.coerce(x)


@dataclass(frozen=True)
class NilElement1:
    """Element (m, x1, x2) of the 2-step example group."""

    m: int
    x1: AngleValue
    x2: AngleValue

    def __post_init__(self):
        object.__setattr__(self, "x1", _ang(self.x1))
        object.__setattr__(self, "x2", _ang(self.x2))

    @classmethod
    def identity(cls) -> "NilElement1":
        return cls(0, AngleValue(0), AngleValue(0))

    def __mul__(self, h: "NilElement1") -> "NilElement1":
        return NilElement1(
            self.m + h.m,
            self.x1 + h.x1,
            self.x2 + h.x2 + h.x1 * self.m,
        )

    def inverse(self) -> "NilElement1":
        return NilElement1(-self.m, -self.x1, self.x1 * self.m - self.x2)

    def in_lattice(self) -> bool:
        return (
            self.x1.is_rational()
            and self.x2.is_rational()
            and self.x1.rational.denominator == 1
            and self.x2.rational.denominator == 1
        )


@dataclass(frozen=True)
class NilElement2:
    """Element (m, x1, x2, x3) of the 3-step example group."""

    m: int
    x1: AngleValue
    x2: AngleValue
    x3: AngleValue

    def __post_init__(self):
        object.__setattr__(self, "x1", _ang(self.x1))
        object.__setattr__(self, "x2", _ang(self.x2))
        object.__setattr__(self, "x3", _ang(self.x3))

    @classmethod
    def identity(cls) -> "NilElement2":
        return cls(0, AngleValue(0), AngleValue(0), AngleValue(0))

    def __mul__(self, h: "NilElement2") -> "NilElement2":
        m = self.m
        return NilElement2(
            m + h.m,
            self.x1 + h.x1,
            self.x2 + h.x2 + h.x1 * m,
            self.x3 + h.x3 + h.x2 * m + h.x1 * (_HALF * m * m),
        )

    def inverse(self) -> "NilElement2":
        m = self.m
        return NilElement2(
            -m,
            -self.x1,
            self.x1 * m - self.x2,
            -self.x3 + self.x2 * m - self.x1 * (_HALF * m * m),
        )

    def in_lattice(self) -> bool:
        # lattice is Z x Z x Z x (1/2)Z
        return (
            self.x1.is_rational()
            and self.x2.is_rational()
            and self.x3.is_rational()
            and self.x1.rational.denominator == 1
            and self.x2.rational.denominator == 1
            and (self.x3.rational * 2).denominator == 1
        )


NilElement = NilElement1 | NilElement2


def commutator(g, h):
    return g.inverse() * h.inverse() * g * h


@dataclass(frozen=True)
class CosetRepr:
    """Unique factorization g = g0 * gamma with g0 in the fundamental domain
    of G0 and gamma in the lattice."""

    g0: NilElement
    gamma: NilElement


def _split(x: AngleValue, denom: int = 1) -> tuple[AngleValue, Fraction]:
    """x = u + k with k in (1/denom) Z and u's rational part in [0, 1/denom).

    Generator parts stay entirely on u; only the rational part is reduced.
    """
    r = x.rational
    k = Fraction(floor(r * denom), denom)
    return AngleValue(r - k, x.gens), k


def phi(g: NilElement) -> CosetRepr:
    """Coset section: the G0 part of the unique factorization g = g0 * gamma.

    The discrete coordinate of gamma matches g's; integer parts are chosen
    so g0's rational parts lie in the fundamental domain of the lattice
    ([0,1) per coordinate, [0,1/2) for the half-integer coordinate of the
    3-step group).  Verified by the group law: g0 * gamma = g, exactly.
    """
    if isinstance(g, NilElement1):
        u1, k1 = _split(g.x1)
        u2, k2 = _split(g.x2)
        g0 = NilElement1(0, u1, u2)
        gamma = NilElement1(g.m, AngleValue(k1), AngleValue(k2))
    elif isinstance(g, NilElement2):
        u1, k1 = _split(g.x1)
        u2, k2 = _split(g.x2)
        u3, k3 = _split(g.x3, denom=2)
        g0 = NilElement2(0, u1, u2, u3)
        gamma = NilElement2(g.m, AngleValue(k1), AngleValue(k2), AngleValue(k3))
    else:
        raise TypeError(f"not a nil element: {g!r}")
    # g0 has discrete part 0, so g0 * gamma adds coordinates with no twist
    if g0 * gamma != g:
        raise AssertionError("coset factorization failed")
    return CosetRepr(g0=g0, gamma=gamma)


def torus_coordinates(g0: NilElement) -> TorusPoint:
    """Image of a G0 element on the standard torus (psi doubles the last
    coordinate for the 3-step group)."""
    if isinstance(g0, NilElement1):
        return (g0.x1.mod1(), g0.x2.mod1())
    if isinstance(g0, NilElement2):
        return (g0.x1.mod1(), g0.x2.mod1(), (g0.x3 * 2).mod1())
    raise TypeError(f"not a nil element: {g0!r}")


def rotate(a: NilElement, g: NilElement) -> NilElement:
    """The nilrotation T_a(g Gamma) = (a g) Gamma on coset representatives."""
    return a * g


def conjugated_affine(a: NilElement) -> UnipotentAffineMap:
    """The unipotent affine torus map conjugate to the rotation by ``a``.

    Writing a = a0 * gamma, the conjugate acts on G0 by
    g0 -> a0 * (gamma g0 gamma^{-1}); the linear part depends only on the
    discrete coordinate of a.  For the 3-step group the result is carried
    to T^3 through psi.
    """
    m = a.m
    a0 = phi(a).g0
    if isinstance(a, NilElement1):
        A = ((1, 0), (m, 1))
        b = torus_coordinates(a0)
    elif isinstance(a, NilElement2):
        A = ((1, 0, 0), (m, 1, 0), (m * m, 2 * m, 1))
        b = torus_coordinates(a0)
    else:
        raise TypeError(f"not a nil element: {a!r}")
    return UnipotentAffineMap(A, b)
