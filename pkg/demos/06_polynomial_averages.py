"""Multiple ergodic averages converging to the product of integrals.

For a totally ergodic unipotent affine map, an independent polynomial
family, and trig-polynomial observables, the averages

    A_N(x) = (1/N) sum_{n<N} f_1(T^{p_1(n)} x) f_2(T^{p_2(n)} x)

converge in L^2 to the product of the integrals.  Dependence between the
polynomials breaks this in a way the symbolic layer detects exactly.
"""

from ergolab import (
    AngleValue,
    GeneratorRegistry,
    TrigPolynomial,
    UnipotentAffineMap,
    l2_distance_to_product,
    multiple_ergodic_average,
    parse_family,
    product_of_integrals,
    sample_generic_point,
)

registry = GeneratorRegistry()
alpha = AngleValue.of(registry.mint(name="alpha"))
T = UnipotentAffineMap([[1, 0], [2, 1]], [alpha, alpha])
fam = parse_family("n,n^2")

# nontrivial characters have integral 0, so the product of integrals is 0
f1 = TrigPolynomial.character((0, 1))
f2 = TrigPolynomial.character((1, 0))
print("product of integrals:", product_of_integrals([f1, f2]))

x = sample_generic_point(2, registry)
for N in (10**2, 10**3, 10**4, 10**5):
    a = multiple_ergodic_average(T, fam, [f1, f2], x, N)
    print(f"  |A_N| at N = {N:>6}: {abs(a):.5f}")

report = l2_distance_to_product(T, fam, [f1, f2], 10**4, x_samples=8, seed=2)
print(f"\nL2 estimate over {report.sample_count} generic samples at N = {report.N}:",
      f"{report.l2_estimate:.5f}")

# the dependent control: {n, 2n} with chi_2 and chi_-1 on a rotation.
# The phases cancel symbolically and A_N never moves.
rot = UnipotentAffineMap([[1]], [alpha])
dep = parse_family("n,2n")
g1, g2 = TrigPolynomial.character((2,)), TrigPolynomial.character((-1,))
y = sample_generic_point(1, registry)
print("\ndependent family {n, 2n} on a rotation:")
for N in (10, 10**3, 10**5):
    a = multiple_ergodic_average(rot, dep, [g1, g2], y, N)
    print(f"  A_N at N = {N:>6}: {a:.6f}  |A_N - 0| = {abs(a)}")
print("the distance is exactly 1 at every N: independence is necessary")
