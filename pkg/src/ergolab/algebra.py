"""Exact rational linear algebra for unipotent integer matrices.

Matrices carry Fraction entries and every operation is exact.  The main
export is the canonical-form reduction: a unipotent integer matrix A is
conjugated, by an integer matrix P with nonzero determinant, onto a
block-diagonal matrix J whose blocks are lower shears (ones on the diagonal
and the first subdiagonal, zero elsewhere), satisfying P A = J P exactly.

Rows of P are chains of the nilpotent transpose (A - I)^T: if w is a chain
top of length L then the rows (M^(L-1) w)^T, ..., (M w)^T, w^T satisfy the
shear recurrence row_i * (A - I) = row_(i-1), which is precisely P A = J P
for a lower-shear J.  Chain tops are selected deterministically from
row-reduced echelon bases of the kernel filtration, so the output is
reproducible across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Row = tuple[Fraction, ...]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable matrix with exact rational entries."""

    rows: tuple[Row, ...]

    def __post_init__(self):
        rs = tuple(tuple(_frac(e) for e in row) for row in self.rows)
        if rs and any(len(r) != len(rs[0]) for r in rs):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rs)

    # -- construction --------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        return cls(tuple(tuple(_frac(e) for e in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(n))
                for i in range(n)
            )
        )

    @classmethod
    def zeros(cls, n: int, m: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n)))

    # -- shape ----------------------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.rows[ij[0]][ij[1]]

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            tuple(
                tuple(a - b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.ncols != other.nrows:
                raise ValueError(
                    f"cannot multiply {self.nrows}x{self.ncols} by "
                    f"{other.nrows}x{other.ncols}"
                )
            cols = list(zip(*other.rows))
            return RationalMatrix(
                tuple(
                    tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                    for row in self.rows
                )
            )
        return RationalMatrix(
            tuple(tuple(a * _frac(other) for a in r) for r in self.rows)
        )

    __rmul__ = __mul__

    def matvec(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        vv = [_frac(e) for e in v]
        return tuple(sum(a * b for a, b in zip(row, vv)) for row in self.rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows))) if self.rows else self

    def pow(self, k: int) -> "RationalMatrix":
        if not self.is_square():
            raise ValueError("matrix power needs a square matrix")
        if k < 0:
            raise ValueError("negative power")
        out = RationalMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _same_shape(self, other: "RationalMatrix"):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")

    # -- predicates --------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(e == 0 for r in self.rows for e in r)

    def is_integer(self) -> bool:
        return all(e.denominator == 1 for r in self.rows for e in r)

    def to_int_rows(self) -> tuple[tuple[int, ...], ...]:
        if not self.is_integer():
            raise ValueError("matrix has non-integer entries")
        return tuple(tuple(int(e) for e in r) for r in self.rows)

    # -- eliminations ---------------------------------------------------------------

    def rref(self) -> tuple["RationalMatrix", tuple[int, ...]]:
        """Row-reduced echelon form and pivot column indices."""
        m = [list(r) for r in self.rows]
        nr, nc = self.nrows, self.ncols
        pivots = []
        pr = 0
        for c in range(nc):
            sel = None
            for r in range(pr, nr):
                if m[r][c] != 0:
                    sel = r
                    break
            if sel is None:
                continue
            m[pr], m[sel] = m[sel], m[pr]
            inv = 1 / m[pr][c]
            m[pr] = [e * inv for e in m[pr]]
            for r in range(nr):
                if r != pr and m[r][c] != 0:
                    f = m[r][c]
                    m[r] = [e - f * g for e, g in zip(m[r], m[pr])]
            pivots.append(c)
            pr += 1
            if pr == nr:
                break
        return RationalMatrix.from_rows(m), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        if not self.is_square():
            raise ValueError("determinant needs a square matrix")
        m = [list(r) for r in self.rows]
        n = self.nrows
        det = Fraction(1)
        for c in range(n):
            sel = None
            for r in range(c, n):
                if m[r][c] != 0:
                    sel = r
                    break
            if sel is None:
                return Fraction(0)
            if sel != c:
                m[c], m[sel] = m[sel], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for r in range(c + 1, n):
                if m[r][c] != 0:
                    f = m[r][c] * inv
                    m[r] = [e - f * g for e, g in zip(m[r], m[c])]
        return det

    def kernel_basis(self) -> list[tuple[Fraction, ...]]:
        """Basis of the right kernel {v : Av = 0}, from the echelon form.

        Ordered by free column index; each vector has a 1 in its free
        coordinate, so the basis ordering is deterministic.
        """
        red, pivots = self.rref()
        pivset = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for i, pc in enumerate(pivots):
                v[pc] = -red.rows[i][f]
            basis.append(tuple(v))
        return basis

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(str(e) for e in row) for row in self.rows
        )
        return f"RationalMatrix[{body}]"


# ---------------------------------------------------------------------------
# Unipotence
# ---------------------------------------------------------------------------


def is_unipotent(A: RationalMatrix) -> tuple[bool, int]:
    """Whether (A - I)^d = 0, plus the least exponent with a zero power.

    The exponent convention starts at 1: (A-I)^0 = I is never zero for
    d >= 1, so the identity matrix reports index 1.
    """
    if not A.is_square():
        raise ValueError("unipotence test needs a square matrix")
    d = A.nrows
    N = A - RationalMatrix.identity(d)
    power = N
    for k in range(1, d + 1):
        if power.is_zero():
            return True, k
        power = power * N
    return False, -1


@dataclass
class UnipotentReduction:
    """Outcome of the canonical-form reduction P A = J P.

    block_sizes lists the shear block dimensions in nonincreasing order; c
    is the image of the translation part under P, filled by the torus layer
    when the reduction is applied to an affine map rather than a bare
    matrix.
    """

    J: RationalMatrix
    P: RationalMatrix
    block_sizes: tuple[int, ...]
    c: tuple | None = None

    def block_starts(self) -> tuple[int, ...]:
        starts = []
        pos = 0
        for s in self.block_sizes:
            starts.append(pos)
            pos += s
        return tuple(starts)


def shear_block_matrix(block_sizes: Sequence[int]) -> RationalMatrix:
    """Block-diagonal lower-shear matrix with the given block sizes."""
    d = sum(block_sizes)
    rows = [[Fraction(0)] * d for _ in range(d)]
    pos = 0
    for s in block_sizes:
        for i in range(s):
            rows[pos + i][pos + i] = Fraction(1)
            if i > 0:
                rows[pos + i][pos + i - 1] = Fraction(1)
        pos += s
    return RationalMatrix.from_rows(rows)


def _in_span(v: tuple[Fraction, ...], span_rows: list[tuple[Fraction, ...]]) -> bool:
    if not span_rows:
        return all(e == 0 for e in v)
    m = RationalMatrix.from_rows(span_rows)
    r0 = m.rank()
    m2 = RationalMatrix.from_rows(span_rows + [list(v)])
    return m2.rank() == r0


def nilpotent_jordan_chains(M: RationalMatrix) -> list[list[tuple[Fraction, ...]]]:
    """Jordan chains of a nilpotent matrix M over the rationals.

    Each chain is returned as [M^(L-1) w, ..., M w, w] for a chain top w of
    length L; chains come in nonincreasing length order.  Selection is
    deterministic: candidate tops are scanned in the order of the echelon
    kernel bases of M^j.
    """
    d = M.nrows
    # kernel filtration ker M^1 subset ker M^2 subset ...
    power = M
    kernels: list[list[tuple[Fraction, ...]]] = []
    t = 0
    for j in range(1, d + 1):
        kb = power.kernel_basis()
        kernels.append(kb)
        if len(kb) == d:
            t = j
            break
        power = power * M
    if t == 0:
        raise ValueError("matrix is not nilpotent")

    chains: list[list[tuple[Fraction, ...]]] = []
    tops_by_level: list[tuple[int, tuple[Fraction, ...]]] = []  # (length, top)
    for j in range(t, 0, -1):
        dim_j = len(kernels[j - 1])
        dim_jm1 = len(kernels[j - 2]) if j >= 2 else 0
        need = dim_j - dim_jm1
        # vectors of height j contributed by longer chains
        span: list[tuple[Fraction, ...]] = list(kernels[j - 2]) if j >= 2 else []
        inherited = 0
        for length, top in tops_by_level:
            v = top
            for _ in range(length - j):
                v = M.matvec(v)
            span.append(v)
            inherited += 1
        count = 0
        for cand in kernels[j - 1]:
            if count == need - inherited:
                break
            if not _in_span(cand, span):
                span.append(cand)
                tops_by_level.append((j, cand))
                count += 1
        if count != need - inherited:
            raise AssertionError("chain selection failed to complete a basis")

    # tops_by_level was filled longest-first; build the chains
    for length, top in tops_by_level:
        chain = [top]
        for _ in range(length - 1):
            chain.append(M.matvec(chain[-1]))
        chain.reverse()
        chains.append(chain)
    chains.sort(key=lambda ch: -len(ch))
    return chains


def unipotent_canonical_form(A: RationalMatrix) -> UnipotentReduction:
    """Reduce a unipotent integer matrix to block shear normal form.

    Returns J, an integer P with det(P) != 0 and P A = J P exactly, and the
    shear block sizes in nonincreasing order.  Each block of P rows is
    scaled to clear denominators and reduced by the gcd of its entries;
    per-block scalar scaling commutes with the corresponding Jordan block,
    so the conjugation identity is preserved.
    """
    ok, _ = is_unipotent(A)
    if not ok:
        raise ValueError("matrix is not unipotent")
    if not A.is_integer():
        raise ValueError("canonical form expects integer entries")
    d = A.nrows
    ident = RationalMatrix.identity(d)
    if (A - ident).is_zero():
        return UnipotentReduction(J=ident, P=ident, block_sizes=(1,) * d)
    M = (A - ident).transpose()
    chains = nilpotent_jordan_chains(M)

    block_sizes = tuple(len(ch) for ch in chains)
    rows: list[list[Fraction]] = []
    for chain in chains:
        block = [list(v) for v in chain]
        den = 1
        for v in block:
            for e in v:
                den = den * e.denominator // gcd(den, e.denominator)
        ints = [[e * den for e in v] for v in block]
        g = 0
        for v in ints:
            for e in v:
                g = gcd(g, abs(int(e)))
        if g > 1:
            ints = [[e / g for e in v] for v in ints]
        rows.extend(ints)
    P = RationalMatrix.from_rows(rows)
    J = shear_block_matrix(block_sizes)

    if P * A != J * P:
        raise AssertionError("reduction failed: PA != JP")
    if P.det() == 0:
        raise AssertionError("reduction failed: singular P")
    return UnipotentReduction(J=J, P=P, block_sizes=block_sizes)


# ---------------------------------------------------------------------------
# Integer kernels (character lattices)
# ---------------------------------------------------------------------------


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix.

    Zero rows are dropped; pivots are positive and entries above each pivot
    are reduced into [0, pivot).
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    nr, nc = len(m), len(m[0])
    r = 0
    for c in range(nc):
        # clear column c below row r using gcd steps
        while True:
            nonzero = [i for i in range(r + 1, nr) if m[i][c] != 0]
            if not nonzero:
                break
            if m[r][c] == 0:
                i = nonzero[0]
                m[r], m[i] = m[i], m[r]
                continue
            for i in nonzero:
                q = m[i][c] // m[r][c]
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                if m[i][c] != 0:
                    m[r], m[i] = m[i], m[r]
        if m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
            if r == nr:
                break
    return [row for row in m[:r] if any(row)]


def integer_kernel(B: RationalMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated lattice {m in Z^d : B m = 0}.

    Unimodular row reduction of [B^T | I]: rows whose B^T part vanishes have
    kernel vectors in the identity part, and unimodularity makes them a
    basis of the full integer kernel (not merely a finite-index sublattice).
    The basis is returned in Hermite normal form.
    """
    d = B.ncols
    den = 1
    for row in B.rows:
        for e in row:
            den = den * e.denominator // gcd(den, e.denominator)
    Bt = [[int(B.rows[r][c] * den) for r in range(B.nrows)] for c in range(d)]
    aug = [Bt[i] + [int(i == j) for j in range(d)] for i in range(d)]
    nc = B.nrows
    r = 0
    for c in range(nc):
        while True:
            nonzero = [i for i in range(r + 1, d) if aug[i][c] != 0]
            if not nonzero:
                break
            if aug[r][c] == 0:
                i = nonzero[0]
                aug[r], aug[i] = aug[i], aug[r]
                continue
            for i in nonzero:
                q = aug[i][c] // aug[r][c]
                aug[i] = [a - q * b for a, b in zip(aug[i], aug[r])]
                if aug[i][c] != 0:
                    aug[r], aug[i] = aug[i], aug[r]
        if r < d and aug[r][c] != 0:
            r += 1
            if r == d:
                break
    kern = [row[nc:] for row in aug[r:] if all(e == 0 for e in row[:nc])]
    return [tuple(v) for v in hermite_normal_form(kern)]
