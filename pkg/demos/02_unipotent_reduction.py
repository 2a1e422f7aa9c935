"""Exact shear canonical form of unipotent integer matrices.

Every unipotent integer matrix A admits an integer matrix P with nonzero
determinant and P A = J P, where J is block diagonal with lower-shear
blocks (ones on the diagonal and first subdiagonal).  On the torus P is an
epimorphism, so the affine map x -> Ax + b is a factor of the structured
map y -> Jy + Pb.  Everything below is exact rational arithmetic.
"""

from ergolab import RationalMatrix, is_unipotent, unipotent_canonical_form

A = RationalMatrix.from_rows([[1, 0], [2, 1]])
print("A =", A)
print("unipotent:", is_unipotent(A))

red = unipotent_canonical_form(A)
print("J =", red.J)
print("P =", red.P)
print("block sizes:", red.block_sizes)
print("PA == JP:", red.P * A == red.J * red.P)

# a denser 4x4 example: a conjugated unit-triangular matrix
B = RationalMatrix.from_rows(
    [[-3, 1, -2, -1], [4, 1, 2, 1], [12, -2, 7, 4], [-4, 0, -2, -1]]
)
ok, index = is_unipotent(B)
print("\nB unipotent:", ok, "nilpotency index:", index)
red = unipotent_canonical_form(B)
print("block sizes:", red.block_sizes)
print("P =", red.P)
print("PA == JP:", red.P * B == red.J * red.P)
print("det P =", red.P.det())

# the block structure is forced by the ranks of (A - I)^j
N = B - RationalMatrix.identity(4)
ranks = [4] + [N.pow(j).rank() for j in range(1, 5)]
for j in range(1, 5):
    print(f"#blocks of size >= {j}: {ranks[j - 1] - ranks[j]}")
