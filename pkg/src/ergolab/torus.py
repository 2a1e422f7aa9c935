"""Exact-plus-float dynamics of unipotent affine maps on the d-torus.

Irrational data is symbolic: an angle is a rational number plus a rational
combination of named generators, where the generators are declared to be
rationally independent together with 1.  Rational independence is the
central hypothesis of everything downstream and is undecidable from floats,
so the symbolic layer carries the guarantee while each generator also owns a
float shadow used only to produce fast numeric sequences.

Angles reduce mod 1 on the rational part only; generator coefficients are
left untouched, which makes symbolic equality canonical.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace
from fractions import Fraction
from math import floor, isqrt, sqrt
from typing import Iterable, Mapping, Sequence

from .algebra import (
    RationalMatrix,
    UnipotentReduction,
    integer_kernel,
    is_unipotent,
    shear_block_matrix,
    unipotent_canonical_form,
)
from .polynomial import binomial


@dataclass(frozen=True)
class Generator:
    """A named symbolic irrational with a float shadow in [0, 1)."""

    name: str
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value < 1.0:
            raise ValueError(f"generator shadow {self.value!r} outside [0, 1)")
        object.__setattr__(self, "_hash", hash((self.name, self.value)))

    def __hash__(self):  # cached: generators key hot coefficient dicts
        return self._hash


def _primes() -> Iterable[int]:
    n = 2
    while True:
        if all(n % q for q in range(2, isqrt(n) + 1)):
            yield n
        n += 1


class RegistryExhausted(RuntimeError):
    pass


class GeneratorRegistry:
    """Append-only registry of symbolic generators.

    Default shadows are frac(sqrt(p)) over successive primes; pass an
    ``rng`` (random.Random) to draw shadows instead.  Minting is guarded by
    a lock so concurrent samplers get disjoint generators.
    """

    def __init__(self, rng=None, limit: int | None = None):
        self._gens: list[Generator] = []
        self._by_name: dict[str, Generator] = {}
        self._lock = threading.Lock()
        self._rng = rng
        self._limit = limit
        self._prime_iter = _primes()

    def __len__(self) -> int:
        return len(self._gens)

    def __iter__(self):
        return iter(self._gens)

    def get(self, name: str) -> Generator:
        return self._by_name[name]

    def register(self, gen: Generator) -> Generator:
        """Adopt an externally constructed generator (e.g. from a file)."""
        with self._lock:
            known = self._by_name.get(gen.name)
            if known is not None:
                if known != gen:
                    raise ValueError(
                        f"generator {gen.name!r} already registered with a "
                        f"different value"
                    )
                return known
            self._gens.append(gen)
            self._by_name[gen.name] = gen
            return gen

    def mint(self, name: str | None = None, value: float | None = None) -> Generator:
        with self._lock:
            if self._limit is not None and len(self._gens) >= self._limit:
                raise RegistryExhausted(
                    f"registry limited to {self._limit} generators"
                )
            if name is None:
                k = len(self._gens) + 1
                while f"g{k}" in self._by_name:
                    k += 1
                name = f"g{k}"
            elif name in self._by_name:
                raise ValueError(f"generator {name!r} already exists")
            if value is None:
                taken = {g.value for g in self._gens}
                while True:
                    if self._rng is not None:
                        value = self._rng.random()
                    else:
                        value = sqrt(next(self._prime_iter)) % 1.0
                    if value not in taken and value != 0.0:
                        break
            gen = Generator(name, value)
            self._gens.append(gen)
            self._by_name[name] = gen
            return gen

    def fresh(self, count: int) -> tuple[Generator, ...]:
        return tuple(self.mint() for _ in range(count))


_ZERO = Fraction(0)


class AngleValue:
    """Exact circle coordinate: rational part + rational combo of generators.

    Immutable.  Arithmetic is exact on the symbolic part; the float shadow
    is recomputed on demand and never stored.  Generator coefficients are
    exact rationals that may be stored as plain ints when integral (ints
    and Fractions hash and compare consistently, and integer coefficients
    dominate along orbits of integer matrices).
    """

    __slots__ = ("rational", "gens")

    def __init__(self, rational=0, gens: Mapping[Generator, Fraction] | None = None):
        if type(rational) is not Fraction:
            rational = Fraction(rational)
        object.__setattr__(self, "rational", rational)
        if gens:
            cleaned = {
                g: (c if type(c) is int or type(c) is Fraction else Fraction(c))
                for g, c in gens.items()
                if c != 0
            }
        else:
            cleaned = {}
        object.__setattr__(self, "gens", cleaned)

    def __setattr__(self, *_):
        raise AttributeError("AngleValue is immutable")

    @classmethod
    def _raw(cls, rational: Fraction, gens: dict) -> "AngleValue":
        """Internal: wrap already-canonical parts without copying."""
        self = object.__new__(cls)
        object.__setattr__(self, "rational", rational)
        object.__setattr__(self, "gens", gens)
        return self

    # -- constructors ---------------------------------------------------------

    @classmethod
    def of(cls, gen: Generator, coeff=1) -> "AngleValue":
        return cls(0, {gen: coeff})

    @classmethod
    def coerce(cls, x) -> "AngleValue":
        if isinstance(x, AngleValue):
            return x
        if isinstance(x, Generator):
            return cls.of(x)
        return cls(Fraction(x))

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other) -> "AngleValue":
        o = AngleValue.coerce(other)
        if not o.gens:
            if o.rational == 0:
                return self
            return AngleValue._raw(self.rational + o.rational, self.gens)
        g = dict(self.gens)
        for k, c in o.gens.items():
            nc = g.get(k)
            nc = c if nc is None else nc + c
            if nc:
                g[k] = nc
            else:
                del g[k]
        return AngleValue._raw(self.rational + o.rational, g)

    __radd__ = __add__

    def __sub__(self, other) -> "AngleValue":
        return self + (-AngleValue.coerce(other))

    def __rsub__(self, other) -> "AngleValue":
        return AngleValue.coerce(other) + (-self)

    def __neg__(self) -> "AngleValue":
        return AngleValue._raw(
            -self.rational, {g: -c for g, c in self.gens.items()}
        )

    def __mul__(self, k) -> "AngleValue":
        if k == 1:
            return self
        if k == 0:
            return AngleValue(0)
        if type(k) is not int and type(k) is not Fraction:
            k = Fraction(k)
        return AngleValue._raw(
            self.rational * k, {g: c * k for g, c in self.gens.items()}
        )

    __rmul__ = __mul__

    def mod1(self) -> "AngleValue":
        r = self.rational
        if 0 <= r < 1:
            return self
        return AngleValue._raw(r - floor(r), self.gens)

    # -- queries -------------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.rational == 0 and not self.gens

    def is_rational(self) -> bool:
        return not self.gens

    def congruent(self, other) -> bool:
        """Equal as points of the circle: difference in Z, no generator part."""
        d = self - AngleValue.coerce(other)
        return not d.gens and d.rational.denominator == 1

    @property
    def shadow(self) -> float:
        """Float image in [0, 1), recomputed from the symbolic data.

        The mod-1 reduction happens in exact arithmetic (generator shadows
        are dyadic rationals), so the result is correct to one rounding even
        when generator coefficients are astronomically large, as they are
        along high orbit iterates.
        """
        x = self.shadow_fraction()
        f = float(x - floor(x))
        return 0.0 if f >= 1.0 else f

    def shadow_fraction(self) -> Fraction:
        """Exact value with generator shadows read as dyadic rationals.

        Float shadows are binary fractions, so the fixed-point Weyl kernel
        can treat them exactly.
        """
        x = self.rational
        for g, c in self.gens.items():
            x += c * Fraction(g.value)
        return x

    def __eq__(self, other) -> bool:
        if not isinstance(other, (AngleValue, int, Fraction, Generator)):
            return NotImplemented
        o = AngleValue.coerce(other)
        return self.rational == o.rational and self.gens == o.gens

    def __hash__(self):
        return hash((self.rational, frozenset(self.gens.items())))

    def __repr__(self) -> str:
        parts = []
        if self.rational != 0 or not self.gens:
            parts.append(str(self.rational))
        for g in sorted(self.gens, key=lambda g: g.name):
            c = self.gens[g]
            parts.append(f"{g.name}" if c == 1 else f"{c}*{g.name}")
        return " + ".join(parts)


TorusPoint = tuple[AngleValue, ...]


def torus_point(*coords) -> TorusPoint:
    return tuple(AngleValue.coerce(c) for c in coords)


def torus_congruent(x: Sequence[AngleValue], y: Sequence[AngleValue]) -> bool:
    return len(x) == len(y) and all(a.congruent(b) for a, b in zip(x, y))


def shadow_point(x: Sequence[AngleValue]) -> tuple[float, ...]:
    return tuple(a.shadow for a in x)


def rationally_independent(values: Sequence[AngleValue]) -> bool:
    """Whether the given angles are rationally independent together with 1.

    A nonzero integer combination sum m_i v_i is rational exactly when its
    generator part vanishes, so independence is full row rank of the
    generator-coefficient matrix over the rationals (a value with empty
    generator part is itself rational and immediately dependent).
    """
    vals = [AngleValue.coerce(v) for v in values]
    if not vals:
        return True
    gens = sorted({g for v in vals for g in v.gens}, key=lambda g: g.name)
    if any(not v.gens for v in vals):
        return False
    rows = [[Fraction(v.gens.get(g, 0)) for g in gens] for v in vals]
    return RationalMatrix.from_rows(rows).rank() == len(vals)


def sample_generic_point(d: int, registry: GeneratorRegistry) -> TorusPoint:
    """Point whose coordinates are fresh generators, one per coordinate.

    Freshness makes the coordinates rationally independent, jointly with
    every previously minted generator, by declaration.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return tuple(AngleValue.of(g) for g in registry.fresh(d))


# ---------------------------------------------------------------------------
# Unipotent affine maps
# ---------------------------------------------------------------------------


IntMatrix = tuple[tuple[int, ...], ...]


def _int_matrix(A) -> IntMatrix:
    rows = tuple(tuple(int(e) for e in row) for row in A)
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square")
    return rows


def _mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    cols = list(zip(*B))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A
    )


def _mat_vec_angles(
    A: IntMatrix,
    x: Sequence[AngleValue],
    offset: Sequence[AngleValue] | None = None,
    reduce: bool = False,
) -> list[AngleValue]:
    """A x (+ offset), accumulated in raw form to avoid temporaries."""
    out = []
    for i, row in enumerate(A):
        if offset is not None:
            base = offset[i]
            rat = base.rational
            gens = dict(base.gens)
        else:
            rat = _ZERO
            gens = {}
        for a, xi in zip(row, x):
            if a == 0:
                continue
            rat += xi.rational if a == 1 else xi.rational * a
            if xi.gens:
                for g, c in xi.gens.items():
                    ca = c if a == 1 else c * a
                    nc = gens.get(g)
                    nc = ca if nc is None else nc + ca
                    if nc:
                        gens[g] = nc
                    else:
                        del gens[g]
        if reduce and not 0 <= rat < 1:
            rat = rat - floor(rat)
        out.append(AngleValue._raw(rat, gens))
    return out


class UnipotentAffineMap:
    """T(x) = A x + b on the d-torus, A an integer unipotent matrix.

    The nilpotency index and the powers of N = A - I are cached at
    construction; orbit iteration uses the exact closed form

        T^n(x) = A^n x + (sum_{i<n} A^i) b,
        A^n = sum_j C(n,j) N^j,   sum_{i<n} A^i = sum_j C(n,j+1) N^j,

    whose cost does not depend on n.  Negative iterates go through the
    exact integer inverse (A is invertible over Z because it is unipotent).
    """

    __slots__ = ("A", "b", "nil_index", "_npowers")

    def __init__(self, A, b: Sequence):
        self.A = _int_matrix(A)
        self.b = tuple(AngleValue.coerce(e).mod1() for e in b)
        d = len(self.A)
        if len(self.b) != d:
            raise ValueError(
                f"translation has length {len(self.b)}, matrix is {d}x{d}"
            )
        rm = RationalMatrix.from_rows(self.A)
        ok, idx = is_unipotent(rm)
        if not ok:
            raise ValueError("linear part is not unipotent")
        self.nil_index = idx
        d_ident = tuple(
            tuple(1 if i == j else 0 for j in range(d)) for i in range(d)
        )
        N = tuple(
            tuple(self.A[i][j] - (1 if i == j else 0) for j in range(d))
            for i in range(d)
        )
        powers = [d_ident]
        for _ in range(idx - 1):
            powers.append(_mat_mul(powers[-1], N))
        self._npowers = tuple(powers)  # N^0 .. N^(idx-1)

    @property
    def dimension(self) -> int:
        return len(self.A)

    def npower(self, j: int) -> IntMatrix:
        """(A - I)^j; zero beyond the nilpotency index."""
        if j < len(self._npowers):
            return self._npowers[j]
        d = self.dimension
        return tuple(tuple(0 for _ in range(d)) for _ in range(d))

    def apply(self, x: Sequence[AngleValue]) -> TorusPoint:
        """One step: A x + b with exact symbolic coordinates, reduced mod 1."""
        if len(x) != self.dimension:
            raise ValueError("point dimension mismatch")
        xv = [AngleValue.coerce(e) for e in x]
        return tuple(_mat_vec_angles(self.A, xv, offset=self.b, reduce=True))

    def matrix_power_coeffs(self, n: int) -> tuple[IntMatrix, IntMatrix]:
        """(A^n, sum_{i<n} A^i) as exact integer matrices, n >= 0."""
        d = self.dimension
        An = [[0] * d for _ in range(d)]
        Sn = [[0] * d for _ in range(d)]
        for j, Nj in enumerate(self._npowers):
            cj = binomial(n, j)
            cj1 = binomial(n, j + 1)
            for i in range(d):
                row = Nj[i]
                Ai = An[i]
                Si = Sn[i]
                for k in range(d):
                    e = row[k]
                    if e:
                        Ai[k] += cj * e
                        Si[k] += cj1 * e
        return (
            tuple(tuple(r) for r in An),
            tuple(tuple(r) for r in Sn),
        )

    def iterate(self, n: int, x: Sequence[AngleValue]) -> TorusPoint:
        """T^n(x) in closed form; n may be negative."""
        if len(x) != self.dimension:
            raise ValueError("point dimension mismatch")
        if n < 0:
            return self.inverse().iterate(-n, x)
        An, Sn = self.matrix_power_coeffs(n)
        xv = [AngleValue.coerce(e) for e in x]
        tr = _mat_vec_angles(Sn, self.b)
        return tuple(_mat_vec_angles(An, xv, offset=tr, reduce=True))

    def inverse(self) -> "UnipotentAffineMap":
        """T^{-1}(x) = A^{-1} x - A^{-1} b, exact over the integers."""
        d = self.dimension
        Ainv = [[0] * d for _ in range(d)]
        for j, Nj in enumerate(self._npowers):
            s = -1 if j % 2 else 1
            for i in range(d):
                for k in range(d):
                    Ainv[i][k] += s * Nj[i][k]
        Ainv_t = tuple(tuple(r) for r in Ainv)
        btr = _mat_vec_angles(Ainv_t, self.b)
        return UnipotentAffineMap(Ainv_t, [-v for v in btr])

    def power(self, q: int) -> "UnipotentAffineMap":
        """T^q as a map of its own (exact closed form)."""
        if q < 0:
            return self.inverse().power(-q)
        An, Sn = self.matrix_power_coeffs(q)
        return UnipotentAffineMap(An, _mat_vec_angles(Sn, self.b))

    def orbit(self, x: Sequence[AngleValue], count: int, start: int = 0):
        """Yield T^n(x) for n = start .. start+count-1 by sequential stepping."""
        cur = self.iterate(start, x)
        for _ in range(count):
            yield cur
            cur = self.apply(cur)

    def __repr__(self) -> str:
        return f"UnipotentAffineMap(A={self.A!r}, b={self.b!r})"


# ---------------------------------------------------------------------------
# Reduction to the shear normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShearSystem:
    """Product of lower-shear blocks: block r moves its top coordinate by
    b_r and every other coordinate by the one above it."""

    block_sizes: tuple[int, ...]
    b: tuple[AngleValue, ...]  # one angle per block

    def __post_init__(self):
        if len(self.block_sizes) != len(self.b):
            raise ValueError("need one translation angle per block")
        object.__setattr__(self, "b", tuple(AngleValue.coerce(e) for e in self.b))

    @property
    def dimension(self) -> int:
        return sum(self.block_sizes)

    def block_starts(self) -> tuple[int, ...]:
        starts, pos = [], 0
        for s in self.block_sizes:
            starts.append(pos)
            pos += s
        return tuple(starts)

    def to_affine_map(self) -> UnipotentAffineMap:
        d = self.dimension
        J = shear_block_matrix(self.block_sizes).to_int_rows()
        c = [AngleValue(0)] * d
        for start, br in zip(self.block_starts(), self.b):
            c[start] = br
        return UnipotentAffineMap(J, c)


def shear_structure(A: IntMatrix) -> tuple[int, ...] | None:
    """Block sizes if A is exactly a block-diagonal lower shear, else None."""
    d = len(A)
    sizes = []
    i = 0
    while i < d:
        if A[i][i] != 1:
            return None
        size = 1
        while i + size < d and A[i + size][i + size - 1] == 1:
            if A[i + size][i + size] != 1:
                return None
            size += 1
        sizes.append(size)
        i += size
    # verify nothing else is set
    expected = shear_block_matrix(tuple(sizes)).to_int_rows()
    return tuple(sizes) if expected == A else None


def reduce_to_shear(T: UnipotentAffineMap) -> tuple[UnipotentAffineMap, UnipotentReduction]:
    """Factor map onto the shear system: P T = S P with S(y) = J y + P b.

    P acts on the torus as an epimorphism y = P x mod 1, so T is a factor
    of S.  The returned reduction carries c = P b.
    """
    red = unipotent_canonical_form(RationalMatrix.from_rows(T.A))
    Pint = red.P.to_int_rows()
    c = tuple(v.mod1() for v in _mat_vec_angles(Pint, T.b))
    S = UnipotentAffineMap(red.J.to_int_rows(), c)
    return S, replace(red, c=c)


def normalize_shear(
    J, c: Sequence[AngleValue]
) -> tuple[ShearSystem, tuple[AngleValue, ...]]:
    """Absorb sub-top translation entries by the change of variables x -> x + a.

    In y-coordinates with x = y + a the map S(x) = J x + c becomes
    S'(y) = J y + (c + (J - I) a).  Within each block, (J - I) a shifts the
    offsets down one slot, so choosing a_{i-1} = -c_i for every non-top row
    cancels everything below the top; the top entry b_r is untouched.
    Returns the normalized system and the offsets a, whose correctness is
    the exact identity c + (J - I) a = advertised form.
    """
    if isinstance(J, RationalMatrix):
        Jm = J.to_int_rows()
    else:
        Jm = _int_matrix(J)
    sizes = shear_structure(Jm)
    if sizes is None:
        raise ValueError("matrix is not in block shear normal form")
    cv = [AngleValue.coerce(e) for e in c]
    if len(cv) != len(Jm):
        raise ValueError("translation dimension mismatch")
    d = len(Jm)
    a = [AngleValue(0)] * d
    tops = []
    pos = 0
    for s in sizes:
        tops.append(cv[pos])
        for i in range(pos + 1, pos + s):
            a[i - 1] = -cv[i]
        pos += s
    system = ShearSystem(tuple(sizes), tuple(v.mod1() for v in tops))
    # exact verification of the conjugation identity
    starts = system.block_starts()
    shifted = _mat_vec_angles(Jm, a)
    for i in range(d):
        new_c = cv[i] + shifted[i] - a[i]
        if i in starts:
            if not new_c.congruent(system.b[starts.index(i)]):
                raise AssertionError("normalization failed on a top coordinate")
        elif not new_c.congruent(AngleValue(0)):
            raise AssertionError("normalization failed below a top coordinate")
    return system, tuple(a)


# ---------------------------------------------------------------------------
# Ergodicity (Hahn's criterion, decided exactly)
# ---------------------------------------------------------------------------


def fixed_character_lattice(A) -> list[tuple[int, ...]]:
    """Basis of {m in Z^d : A^T m = m}, in Hermite normal form.

    These index the characters chi_m(x) = e^{2 pi i m.x} invariant under
    the linear part.
    """
    Am = _int_matrix(A)
    d = len(Am)
    B = RationalMatrix.from_rows(
        [
            [Am[j][i] - (1 if i == j else 0) for j in range(d)]
            for i in range(d)
        ]
    )  # A^T - I
    return integer_kernel(B)


def is_ergodic(T: UnipotentAffineMap) -> bool:
    """Exact Hahn criterion for a unipotent affine torus map.

    T is ergodic iff m.b is irrational for every nonzero m with A^T m = m.
    In the symbolic representation m.b is rational exactly when its
    generator-coefficient vector vanishes, so non-ergodicity is a nonzero
    rational kernel vector of the matrix sending lattice coordinates to
    generator coefficients; that kernel is a rational subspace, hence
    contains a nonzero integer vector iff it is nonzero.  (If m.b were
    rational q, the fixed character indexed by denominator(q) * m would
    violate chi(c) != 1.)
    """
    lattice = fixed_character_lattice(T.A)
    if not lattice:
        return True
    gens = sorted(
        {g for v in T.b for g in v.gens}, key=lambda g: g.name
    )
    if not gens:
        return False  # every m.b is rational; any lattice vector obstructs
    rows = []
    for m in lattice:
        dot = AngleValue(0)
        for mi, bi in zip(m, T.b):
            if mi:
                dot = dot + bi * mi
        rows.append([dot.gens.get(g, _ZERO) for g in gens])
    # columns of G.M = rows here: full column rank over Q <=> trivial kernel
    mat = RationalMatrix.from_rows(rows)
    return mat.rank() == len(lattice)


def is_totally_ergodic(T: UnipotentAffineMap) -> bool:
    """Equivalent to plain ergodicity for unipotent affine maps.

    For fixed m the translation part of T^q pairs as m.(b_q) = q (m.b)
    because A^T m = m, and ker_Z((A^q)^T - I) = ker_Z(A^T - I) since
    I + A + ... + A^(q-1) is invertible over Q for unipotent A (it equals
    q I + nilpotent).  Hence every power of T is ergodic iff T is; tests
    cross-check against explicitly built powers.
    """
    return is_ergodic(T)
