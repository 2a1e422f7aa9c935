"""Exact arithmetic on integer-valued polynomials.

A polynomial taking integer values on the integers is stored in the binomial
basis::

    p(n) = c_0*C(n,0) + c_1*C(n,1) + ... + c_d*C(n,d)

with integer coefficients c_j.  Every integer-valued polynomial has a unique
such expansion (c_j is the j-th forward difference of p at 0), so integrality
is a structural invariant rather than a runtime check.  Rational input in the
standard monomial basis is accepted at the boundary and rejected if the
change of basis produces a non-integer coefficient.

The zero polynomial has degree -1 by convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def binomial(n: int, k: int) -> int:
    """C(n, k) for arbitrary integer n and k >= 0.

    Negative n uses the falling-factorial definition, equivalent to
    C(n, k) = (-1)^k * C(k - n - 1, k).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return 1
    if n < 0:
        return (-1) ** k * binomial(k - n - 1, k)
    if k > n:
        return 0
    out = 1
    for i in range(1, k + 1):
        out = out * (n - i + 1) // i
    return out


def _binomial_row(n: int, d: int) -> list[int]:
    """[C(n,0), ..., C(n,d)] computed incrementally (n may be negative)."""
    row = [1]
    for k in range(1, d + 1):
        # C(n,k) = C(n,k-1) * (n-k+1) / k, exact for all integer n
        row.append(row[-1] * (n - k + 1) // k)
    return row


@dataclass(frozen=True)
class IntegerPolynomial:
    """Integer-valued polynomial in the binomial coefficient basis."""

    coeffs_binomial: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs_binomial)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs_binomial", cs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "IntegerPolynomial":
        return cls(())

    @classmethod
    def constant(cls, c: int) -> "IntegerPolynomial":
        return cls((c,))

    @classmethod
    def monomial_n(cls) -> "IntegerPolynomial":
        """The polynomial p(n) = n."""
        return cls((0, 1))

    @classmethod
    def from_standard(cls, coeffs: Sequence[Fraction | int]) -> "IntegerPolynomial":
        """Build from monomial-basis coefficients a_0 + a_1 n + ... + a_d n^d.

        Raises ValueError if the polynomial is not integer-valued on the
        integers (detected by a non-integer binomial coefficient).
        """
        a = [Fraction(c) for c in coeffs]
        d = len(a) - 1
        while d >= 0 and a[d] == 0:
            d -= 1
        if d < 0:
            return cls(())
        # forward differences of the value table at 0..d give the binomial
        # coefficients
        vals = [sum(a[i] * (n ** i) for i in range(d + 1)) for n in range(d + 1)]
        out = []
        for j in range(d + 1):
            out.append(vals[0])
            vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
        cs = []
        for j, c in enumerate(out):
            if c.denominator != 1:
                raise ValueError(
                    f"not integer-valued: binomial coefficient c_{j} = {c}"
                )
            cs.append(int(c))
        return cls(tuple(cs))

    # -- basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs_binomial) - 1

    def is_zero(self) -> bool:
        return not self.coeffs_binomial

    def is_constant(self) -> bool:
        return len(self.coeffs_binomial) <= 1

    def __call__(self, n: int) -> int:
        return self.eval(n)

    def eval(self, n: int) -> int:
        """p(n), exact for every integer n (including negatives)."""
        if not self.coeffs_binomial:
            return 0
        row = _binomial_row(n, self.degree)
        return sum(c * b for c, b in zip(self.coeffs_binomial, row))

    def to_standard(self) -> tuple[Fraction, ...]:
        """Monomial-basis coefficients (a_0, ..., a_d) as exact rationals."""
        if not self.coeffs_binomial:
            return ()
        d = self.degree
        acc = [Fraction(0)] * (d + 1)
        # C(n,j) = n(n-1)...(n-j+1) / j!
        for j, c in enumerate(self.coeffs_binomial):
            if c == 0:
                continue
            mono = [Fraction(1)]  # product of (n - i), i < j
            for i in range(j):
                nxt = [Fraction(0)] * (len(mono) + 1)
                for k, a in enumerate(mono):
                    nxt[k] -= a * i
                    nxt[k + 1] += a
                mono = nxt
            fact = 1
            for i in range(2, j + 1):
                fact *= i
            for k, a in enumerate(mono):
                acc[k] += Fraction(c, fact) * a
        return tuple(acc)

    # -- arithmetic (binomial basis is linear) ------------------------------

    def __add__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        a, b = self.coeffs_binomial, other.coeffs_binomial
        n = max(len(a), len(b))
        return IntegerPolynomial(
            tuple(
                (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                for i in range(n)
            )
        )

    def __sub__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return self + (-other)

    def __neg__(self) -> "IntegerPolynomial":
        return IntegerPolynomial(tuple(-c for c in self.coeffs_binomial))

    def scale(self, k: int) -> "IntegerPolynomial":
        return IntegerPolynomial(tuple(k * c for c in self.coeffs_binomial))

    def add_constant(self, k: int) -> "IntegerPolynomial":
        return self + IntegerPolynomial.constant(k)

    # -- text formats --------------------------------------------------------

    def format_binomial(self) -> str:
        return "[" + ",".join(str(c) for c in self.coeffs_binomial) + "]"

    def format_standard(self, var: str = "n") -> str:
        cs = self.to_standard()
        if not cs:
            return "0"
        parts = []
        for e in range(len(cs) - 1, -1, -1):
            c = cs[e]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                coef = "" if mag == 1 else f"{mag}"
                body = f"{coef}{var}" if e == 1 else f"{coef}{var}^{e}"
            parts.append((sign, body))
        sign0, body0 = parts[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            text += sign + body
        return text

    def __repr__(self) -> str:
        return f"IntegerPolynomial({self.format_standard()!r})"


def binomial_of_poly(p: IntegerPolynomial, j: int, n: int) -> int:
    """C(p(n), j) as an exact integer."""
    if j < 0:
        raise ValueError("j must be non-negative")
    return binomial(p.eval(n), j)


def compose_binomial(p: IntegerPolynomial, j: int) -> IntegerPolynomial:
    """The integer polynomial n -> C(p(n), j).

    Recovered from its value table by forward differences; degree is
    deg(p) * j.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    if j == 0:
        return IntegerPolynomial.constant(1)
    if p.is_zero() or p.is_constant():
        return IntegerPolynomial.constant(binomial(p.eval(0), j))
    d = p.degree * j
    vals = [binomial(p.eval(n), j) for n in range(d + 1)]
    cs = []
    for _ in range(d + 1):
        cs.append(vals[0])
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return IntegerPolynomial(tuple(cs))


# ---------------------------------------------------------------------------
# Families and the independence test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialFamily:
    """Ordered nonempty family p_1, ..., p_k of integer polynomials."""

    polys: tuple[IntegerPolynomial, ...]

    def __post_init__(self):
        if not self.polys:
            raise ValueError("polynomial family must be nonempty")
        object.__setattr__(self, "polys", tuple(self.polys))

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i: int) -> IntegerPolynomial:
        return self.polys[i]

    @property
    def max_degree(self) -> int:
        return max(p.degree for p in self.polys)


def _rank_and_left_kernel(
    rows: list[list[Fraction]],
) -> tuple[int, list[Fraction] | None]:
    """Rank of the row span and, if deficient, one nonzero left-kernel vector.

    The left kernel vector m satisfies sum_i m_i * rows[i] = 0.  Found by
    row-reducing [rows | I] and returning the identity part of the first
    all-zero reduced row.
    """
    k = len(rows)
    w = len(rows[0]) if rows else 0
    aug = [list(r) + [Fraction(int(i == j)) for j in range(k)] for i, r in enumerate(rows)]
    piv_row = 0
    for col in range(w):
        sel = None
        for r in range(piv_row, k):
            if aug[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        aug[piv_row], aug[sel] = aug[sel], aug[piv_row]
        inv = 1 / aug[piv_row][col]
        aug[piv_row] = [e * inv for e in aug[piv_row]]
        for r in range(k):
            if r != piv_row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [e - f * g for e, g in zip(aug[r], aug[piv_row])]
        piv_row += 1
        if piv_row == k:
            break
    rank = piv_row
    if rank == k:
        return rank, None
    return rank, aug[piv_row][w:]


def is_independent(
    fam: PolynomialFamily,
) -> tuple[bool, tuple[int, ...] | None]:
    """Decide whether no nonzero integer combination of the family is constant.

    Constant terms are stripped (they never affect constancy of a
    combination), the remaining binomial coefficients form a k x d rational
    matrix, and the family is independent exactly when that matrix has rank
    k over the rationals.  On failure the returned witness m is an integer
    vector, reduced to coprime entries with positive leading entry, such
    that sum_j m_j * p_j is constant.
    """
    if not isinstance(fam, PolynomialFamily):
        fam = PolynomialFamily(tuple(fam))
    k = len(fam)
    d = max(fam.max_degree, 0)
    rows = [
        [Fraction(p.coeffs_binomial[j]) if j < len(p.coeffs_binomial) else Fraction(0)
         for j in range(1, d + 1)]
        for p in fam
    ]
    if d == 0:
        rows = [[] for _ in fam]
    rank, kern = _rank_and_left_kernel(rows)
    if rank == k:
        return True, None
    assert kern is not None
    den_lcm = 1
    for e in kern:
        den_lcm = _lcm(den_lcm, e.denominator)
    m = [int(e * den_lcm) for e in kern]
    g = 0
    for e in m:
        g = _gcd(g, abs(e))
    if g > 1:
        m = [e // g for e in m]
    for e in m:
        if e != 0:
            if e < 0:
                m = [-x for x in m]
            break
    return False, tuple(m)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _lcm(a: int, b: int) -> int:
    return a * b // _gcd(a, b) if a and b else max(a, b)


# ---------------------------------------------------------------------------
# Text parsing
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"""(?P<sign>[+-]?)\s*
        (?:
            (?P<coef>\d+(?:/\d+)?)\s*\*?\s*(?P<var1>[a-zA-Z])(?:\^(?P<exp1>\d+))?
          | (?P<var2>[a-zA-Z])(?:\^(?P<exp2>\d+))?
          | (?P<const>\d+(?:/\d+)?)
        )\s*""",
    re.VERBOSE,
)


def parse_polynomial(text: str) -> IntegerPolynomial:
    """Parse "n^2+3n-1" (standard basis) or "[c0,c1,...]" (binomial basis)."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial string")
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValueError(f"unterminated binomial coefficient list: {text!r}")
        inner = s[1:-1].strip()
        if not inner:
            return IntegerPolynomial.zero()
        return IntegerPolynomial(tuple(int(tok) for tok in inner.split(",")))
    coeffs: dict[int, Fraction] = {}
    pos = 0
    var_seen = None
    while pos < len(s):
        mt = _TERM_RE.match(s, pos)
        if mt is None or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign = -1 if mt.group("sign") == "-" else 1
        if mt.group("const") is not None:
            e, c = 0, Fraction(mt.group("const"))
        else:
            var = mt.group("var1") or mt.group("var2")
            if var_seen is None:
                var_seen = var
            elif var != var_seen:
                raise ValueError(f"mixed variables {var_seen!r} and {var!r}")
            e = int(mt.group("exp1") or mt.group("exp2") or 1)
            c = Fraction(mt.group("coef")) if mt.group("coef") else Fraction(1)
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = mt.end()
    d = max(coeffs) if coeffs else 0
    return IntegerPolynomial.from_standard([coeffs.get(i, Fraction(0)) for i in range(d + 1)])


def parse_family(text: str) -> PolynomialFamily:
    """Parse a comma-separated family, e.g. "n,n^2".

    Binomial-basis members use bracket syntax and may contain commas, so
    splitting respects brackets.
    """
    parts: list[str] = []
    depth = 0
    cur = ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return PolynomialFamily(tuple(parse_polynomial(p) for p in parts if p.strip()))
