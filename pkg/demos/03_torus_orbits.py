"""Exact orbits of unipotent affine torus maps, and ergodicity decisions.

Irrational angles are symbols with declared rational independence; floats
are only shadows.  Orbits have a closed form whose cost is independent of
n, and ergodicity is decided exactly through the invariant-character
criterion, not numerically.
"""

from fractions import Fraction

from ergolab import (
    AngleValue,
    GeneratorRegistry,
    UnipotentAffineMap,
    fixed_character_lattice,
    is_ergodic,
    is_totally_ergodic,
    normalize_shear,
    reduce_to_shear,
    sample_generic_point,
)

registry = GeneratorRegistry()
alpha = AngleValue.of(registry.mint(name="alpha"))  # shadow frac(sqrt 2)

# S(x1, x2) = (x1 + alpha, x2 + 2 x1 + alpha)
S = UnipotentAffineMap([[1, 0], [2, 1]], [alpha, alpha])
origin = (AngleValue(0), AngleValue(0))

print("one step:", S.apply(origin))
print("closed form at n = 10^9:", S.iterate(10**9, origin))
print("(the second coordinate is n^2 * alpha mod 1, computed symbolically)")

# stepping and the closed form agree exactly
x = sample_generic_point(2, registry)
cur = S.iterate(0, x)
for n in range(64):
    assert cur == S.iterate(n, x)
    cur = S.apply(cur)
print("\n64 steps of apply() match the closed form symbol for symbol")

# ergodicity: which characters are invariant, and where do they send b?
print("\nfixed character lattice of A:", fixed_character_lattice(S.A))
print("S ergodic:", is_ergodic(S), "| totally ergodic:", is_totally_ergodic(S))

half = UnipotentAffineMap([[1]], [Fraction(1, 2)])
print("rotation by 1/2 ergodic:", is_ergodic(half))

twin = UnipotentAffineMap([[1, 0], [0, 1]], [alpha, alpha])
print("twin rotation (alpha, alpha) ergodic:", is_ergodic(twin),
      " (m = (1,-1) pairs to zero)")

# reduction to the structured factor and translation normalization
Sh, red = reduce_to_shear(S)
system, offsets = normalize_shear(red.J, red.c)
print("\nshear factor blocks:", system.block_sizes)
print("block translations b_r:", system.b)
print("change-of-variable offsets:", offsets)
