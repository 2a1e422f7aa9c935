"""Integer polynomial families and the exact independence test.

A family {p_1, ..., p_k} is independent when no nonzero integer combination
sum m_j p_j is constant.  The test is exact rational rank, never sampling,
and a dependent verdict always ships a checkable integer witness.
"""

from ergolab import IntegerPolynomial, is_independent, parse_family, parse_polynomial

# Polynomials live in the binomial basis c0*C(n,0) + c1*C(n,1) + ...,
# which makes "integer-valued on the integers" automatic.
p = parse_polynomial("n^2+3n-1")
print("p(n) =", p.format_standard())
print("binomial coefficients:", p.format_binomial())
print("values p(-2..3):", [p.eval(n) for n in range(-2, 4)])

# n(n-1)/2 has fractional monomial coefficients but is integer valued
q = IntegerPolynomial.from_standard([0, -0.5, 0.5])
print("\nn(n-1)/2 in binomial basis:", q.format_binomial())

# classic independent families
for text in ("n,n^2", "n^2,n^2+n"):
    ok, witness = is_independent(parse_family(text))
    print(f"\n{{{text}}} independent: {ok}")

# a dependent family, with its witness certificate
fam = parse_family("n^2+n,n^2,n")
ok, witness = is_independent(fam)
print(f"\n{{n^2+n, n^2, n}} independent: {ok}, witness m = {witness}")
combo = IntegerPolynomial.zero()
for w, pi in zip(witness, fam):
    combo = combo + pi.scale(w)
print("witness combination sum m_j p_j =", combo.format_standard(), "(constant)")
