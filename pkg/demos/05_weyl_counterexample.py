"""Equidistribution of polynomial product orbits, and its exact failure.

Take S(x1, x2) = (x1 + a, x2 + 2 x1 + a) with a irrational, and follow
(S^n x, S^{n^2} x) on T^4.  Starting from the origin the four coordinates
are (na, n^2 a, n^2 a, n^4 a): the middle pair coincide, so the frequency
(0, 1, -1, 0) has an identically-zero phase and its Weyl average is 1 at
every N.  From a generic starting point every nonzero frequency acquires a
nonconstant irrational phase coefficient and the averages decay.
"""

import time

from ergolab import (
    AngleValue,
    GeneratorRegistry,
    UnipotentAffineMap,
    all_frequencies,
    has_nonconstant_irrational_coeff,
    orbit_phase_polynomial,
    parse_family,
    sample_generic_point,
    weyl_sum_phase,
)

registry = GeneratorRegistry()
alpha = AngleValue.of(registry.mint(name="alpha"))
S = UnipotentAffineMap([[1, 0], [2, 1]], [alpha, alpha])
fam = parse_family("n,n^2")
m_star = (0, 1, -1, 0)

origin = (AngleValue(0), AngleValue(0))
R0 = orbit_phase_polynomial(S, origin, fam, m_star)
print("phase at the origin for m = (0,1,-1,0):", "identically zero" if R0.is_zero() else R0.coeffs)
for N in (10, 10**4, 10**6):
    print(f"  |Weyl average| at N = {N}: {weyl_sum_phase(R0, N).magnitude}")

x = sample_generic_point(2, registry)
Rg = orbit_phase_polynomial(S, x, fam, m_star)
print("\nsame frequency from a generic point:")
print("  nonconstant irrational coefficient:", has_nonconstant_irrational_coeff(Rg))
for N in (10**3, 10**5):
    print(f"  |Weyl average| at N = {N}: {weyl_sum_phase(Rg, N).magnitude:.2e}")

# sweep every nonzero frequency with sup norm <= 2 on T^4
N = 10**5
t0 = time.perf_counter()
worst_m, worst = None, 0.0
for m in all_frequencies(4, 2):
    R = orbit_phase_polynomial(S, x, fam, m)
    mag = weyl_sum_phase(R, N).magnitude
    if mag > worst:
        worst_m, worst = m, mag
dt = time.perf_counter() - t0
print(f"\nall 624 frequencies at N = {N}: max |average| = {worst:.4f} at m = {worst_m}")
print(f"({dt:.1f} s with the fixed-point difference-table kernel)")
