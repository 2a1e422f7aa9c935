"""Weyl sums, orbit phase polynomials and discrepancy estimates.

The quantitative side of equidistribution.  Character averages along an
orbit of a unipotent affine map reduce to exponential sums of a polynomial
phase: the n-th orbit coordinate is a polynomial in n whose coefficients
are exact symbolic angles, built from the binomial expansion of the matrix
power.  Symbolically zero or constant phases are therefore detected exactly
rather than numerically.

The numeric kernel evaluates e^{2 pi i R(n)} for n = 1..N with a forward
difference table (deg(R)+1 running accumulators, one table update per n).
The accumulators are 128-bit fixed-point fractions of the circle, so each
update is an exact mod-1 addition; the only inexactness is the initial
quantization of the anchors, whose binomial growth stays below 1e-16 per
2^20-step segment.  Every segment is re-anchored from the exact symbolic
values, and segment partial sums (Kahan-compensated inside the kernel) are
combined with exact summation in a fixed order, so results do not depend on
the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from numba import njit

from .polynomial import (
    IntegerPolynomial,
    PolynomialFamily,
    binomial,
    compose_binomial,
)
from .torus import (
    AngleValue,
    UnipotentAffineMap,
    shear_structure,
)

Frequency = tuple[int, ...]

_SEGMENT = 1 << 20  # steps between exact re-anchorings
_CHUNK = 1 << 16  # chunk size for sequence summation


# ---------------------------------------------------------------------------
# Phase polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhasePolynomial:
    """Real polynomial phase R(n) with exact symbolic coefficients.

    ``coeffs[i]`` is the coefficient of n^i.  When built from a shear
    system the (r, j) -> R_rj integer-polynomial decomposition
    R(n) = sum_rj R_rj(n) x_rj is attached, along with the witness indices
    (r0, j0) and the witness polynomial R_{r0, j0-1} whose nonconstancy
    drives equidistribution.
    """

    coeffs: tuple[AngleValue, ...]
    decomposition: Mapping[tuple[int, int], IntegerPolynomial] | None = None
    witness_index: tuple[int, int] | None = None
    witness: IntegerPolynomial | None = None

    def __post_init__(self):
        cs = tuple(AngleValue.coerce(c) for c in self.coeffs)
        while cs and cs[-1].is_zero():
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_part(self) -> AngleValue:
        return self.coeffs[0] if self.coeffs else AngleValue(0)

    def evaluate_exact(self, n: int) -> AngleValue:
        acc = AngleValue(0)
        power = 1
        for c in self.coeffs:
            if not c.is_zero():
                acc = acc + c * power
            power *= n
        return acc

    def shift_argument(self, t: int) -> "PhasePolynomial":
        """The polynomial n -> R(n + t), exactly."""
        d = self.degree
        if d < 0:
            return self
        out = [AngleValue(0)] * (d + 1)
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            tp = 1
            for j in range(i, -1, -1):
                # contribution c * C(i, j) * t^(i-j) to n^j ; tp = t^(i-j)
                out[j] = out[j] + c * (binomial(i, j) * tp)
                tp *= t
        return PhasePolynomial(tuple(out))

    def __add__(self, other: "PhasePolynomial") -> "PhasePolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        za = AngleValue(0)
        return PhasePolynomial(
            tuple(
                (a[i] if i < len(a) else za) + (b[i] if i < len(b) else za)
                for i in range(n)
            )
        )


def angle_times_intpoly(angle: AngleValue, p: IntegerPolynomial) -> list[AngleValue]:
    """Monomial coefficients of p(n) * angle as AngleValues."""
    std = p.to_standard()
    return [angle * q if q else AngleValue(0) for q in std]


def _accumulate(target: list[AngleValue], term: Sequence[AngleValue]):
    while len(target) < len(term):
        target.append(AngleValue(0))
    for i, v in enumerate(term):
        if not v.is_zero():
            target[i] = target[i] + v


def has_nonconstant_irrational_coeff(R: PhasePolynomial) -> bool:
    """Weyl part (ii) hypothesis, decided exactly on the symbolic side.

    A coefficient is irrational exactly when its generator part is nonzero,
    by the declared rational independence of the generators with 1.
    """
    return any(bool(c.gens) for c in R.coeffs[1:])


# ---------------------------------------------------------------------------
# Building phases from systems
# ---------------------------------------------------------------------------


def build_phase_polynomial(
    system: UnipotentAffineMap,
    x: Sequence[AngleValue],
    polys: PolynomialFamily,
    m: Sequence[int],
) -> PhasePolynomial:
    """Phase of the character chi_m along the product orbit of a shear system.

    The system must be in block shear normal form (translation only on
    block tops).  The j-th coordinate of the r-th block of T^{p_l(n)} x is

        Q_rjl(n) = x_rj + C(p_l(n),1) x_r(j-1) + ... + C(p_l(n),j) x_r0

    with x_r0 = b_r, so R(n) = sum m_rjl Q_rjl(n) regroups uniquely as
    sum_rj R_rj(n) x_rj with integer polynomials R_rj.  The witness indices
    (r0, j0) pick the largest occupied slot of the first occupied block;
    R_{r0, j0-1} = sum_l m_{r0 j0 l} p_l(n) + const is the nonconstant
    certificate when the family is independent.
    """
    sizes = shear_structure(system.A)
    if sizes is None:
        raise ValueError("system is not in block shear normal form")
    d = system.dimension
    starts = []
    pos = 0
    for s in sizes:
        starts.append(pos)
        pos += s
    startset = set(starts)
    for i, bi in enumerate(system.b):
        if i not in startset and not bi.is_zero():
            raise ValueError(
                "system is not normalized: translation below a block top"
            )
    xs = [AngleValue.coerce(e) for e in x]
    if len(xs) != d:
        raise ValueError("point dimension mismatch")
    k = len(polys)
    m = tuple(int(e) for e in m)
    if len(m) != d * k:
        raise ValueError(
            f"frequency has length {len(m)}, expected d*k = {d}*{k}"
        )

    def m_of(r: int, j: int, l: int) -> int:
        # r, j 1-based block coordinates; l 1-based polynomial index
        return m[(l - 1) * d + starts[r - 1] + (j - 1)]

    def x_of(r: int, j: int) -> AngleValue:
        # j = 0 denotes b_r
        if j == 0:
            return system.b[starts[r - 1]]
        return xs[starts[r - 1] + (j - 1)]

    s = len(sizes)
    decomposition: dict[tuple[int, int], IntegerPolynomial] = {}
    for r in range(1, s + 1):
        for j in range(0, sizes[r - 1] + 1):
            acc = IntegerPolynomial.zero()
            for jp in range(max(j, 1), sizes[r - 1] + 1):
                for l in range(1, k + 1):
                    w = m_of(r, jp, l)
                    if w:
                        acc = acc + compose_binomial(polys[l - 1], jp - j).scale(w)
            decomposition[(r, j)] = acc

    # direct coefficient accumulation (independent grouping, per (r, j, l))
    coeffs: list[AngleValue] = [AngleValue(0)]
    for r in range(1, s + 1):
        for j in range(1, sizes[r - 1] + 1):
            for l in range(1, k + 1):
                w = m_of(r, j, l)
                if not w:
                    continue
                for i in range(0, j + 1):
                    target = x_of(r, j - i)
                    if target.is_zero():
                        continue
                    cb = compose_binomial(polys[l - 1], i).scale(w)
                    _accumulate(coeffs, angle_times_intpoly(target, cb))

    witness_index = None
    witness = None
    for r in range(1, s + 1):
        if any(
            m_of(r, j, l)
            for j in range(1, sizes[r - 1] + 1)
            for l in range(1, k + 1)
        ):
            j0 = max(
                j
                for j in range(1, sizes[r - 1] + 1)
                if any(m_of(r, j, l) for l in range(1, k + 1))
            )
            witness_index = (r, j0)
            witness = decomposition[(r, j0 - 1)]
            break

    return PhasePolynomial(
        tuple(coeffs),
        decomposition=decomposition,
        witness_index=witness_index,
        witness=witness,
    )


def orbit_phase_polynomial(
    T: UnipotentAffineMap,
    x: Sequence[AngleValue],
    polys: PolynomialFamily,
    m: Sequence[int],
) -> PhasePolynomial:
    """Phase of chi_m along (T^{p_1(n)} x, ..., T^{p_k(n)} x), any unipotent T.

    Uses the closed form T^p x = sum_j C(p,j) N^j x + sum_j C(p,j+1) N^j b
    directly in the given coordinates, so no shear reduction is needed; the
    shear case reproduces build_phase_polynomial term for term.
    """
    d = T.dimension
    k = len(polys)
    m = tuple(int(e) for e in m)
    if len(m) != d * k:
        raise ValueError(
            f"frequency has length {len(m)}, expected d*k = {d}*{k}"
        )
    xs = [AngleValue.coerce(e) for e in x]
    if len(xs) != d:
        raise ValueError("point dimension mismatch")
    coeffs: list[AngleValue] = [AngleValue(0)]
    for l in range(k):
        ml = m[l * d : (l + 1) * d]
        if not any(ml):
            continue
        p = polys[l]
        for j in range(T.nil_index):
            Nj = T.npower(j)
            row = tuple(
                sum(ml[i] * Nj[i][c] for i in range(d)) for c in range(d)
            )  # m_l^T N^j
            s_adj = AngleValue(0)
            t_adj = AngleValue(0)
            for c in range(d):
                if row[c]:
                    s_adj = s_adj + xs[c] * row[c]
                    t_adj = t_adj + T.b[c] * row[c]
            if not s_adj.is_zero():
                _accumulate(coeffs, angle_times_intpoly(s_adj, compose_binomial(p, j)))
            if not t_adj.is_zero():
                _accumulate(
                    coeffs, angle_times_intpoly(t_adj, compose_binomial(p, j + 1))
                )
    return PhasePolynomial(tuple(coeffs))


# ---------------------------------------------------------------------------
# Weyl sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylSumResult:
    """Average (1/N) sum e^{2 pi i phase_n} over n = 1..N."""

    N: int
    value: complex

    @property
    def magnitude(self) -> float:
        return abs(self.value)


_TWO_PI = 2.0 * math.pi
_INV64 = 2.0 ** -64


@njit(cache=True, nogil=True)
def _phase_segment_sum(hi, lo, nsteps):  # pragma: no cover - jitted
    """Sum e^{2 pi i v} over nsteps of the 128-bit fixed-point table.

    hi/lo hold the forward differences of the phase at the segment start;
    table updates are exact mod-1 additions (uint64 wraparound with carry).
    Kahan compensation keeps the inner accumulation at ~1 ulp.
    """
    levels = hi.shape[0]
    one = np.uint64(1)
    zero = np.uint64(0)
    s_re = 0.0
    s_im = 0.0
    c_re = 0.0
    c_im = 0.0
    for _ in range(nsteps):
        ph = float(hi[0]) * _INV64
        a = _TWO_PI * ph
        xr = np.cos(a)
        xi = np.sin(a)
        t = xr - c_re
        u = s_re + t
        c_re = (u - s_re) - t
        s_re = u
        t = xi - c_im
        u = s_im + t
        c_im = (u - s_im) - t
        s_im = u
        for j in range(levels - 1):
            nl = lo[j] + lo[j + 1]
            carry = one if nl < lo[j] else zero
            hi[j] = hi[j] + hi[j + 1] + carry
            lo[j] = nl
    return s_re, s_im


def _anchor_table(R: PhasePolynomial, n0: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact forward-difference table of R at n0, quantized to 128 bits."""
    deg = R.degree
    vals = [R.evaluate_exact(n0 + t).shadow_fraction() for t in range(deg + 1)]
    table: list[Fraction] = []
    for _ in range(deg + 1):
        table.append(vals[0])
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    hi = np.empty(deg + 1, dtype=np.uint64)
    lo = np.empty(deg + 1, dtype=np.uint64)
    for j, v in enumerate(table):
        frac = v - math.floor(v)
        q = (frac.numerator << 128) // frac.denominator
        hi[j] = (q >> 64) & 0xFFFFFFFFFFFFFFFF
        lo[j] = q & 0xFFFFFFFFFFFFFFFF
    return hi, lo


def _unit_phasor(phase: float) -> complex:
    """e^{2 pi i phase} snapped to unit modulus (|result| == 1.0 exactly)."""
    a = _TWO_PI * (phase % 1.0)
    re, im = math.cos(a), math.sin(a)
    for _ in range(4):
        h = math.hypot(re, im)
        if h == 1.0:
            break
        re /= h
        im /= h
    return complex(re, im)


def weyl_sum_phase(
    R: PhasePolynomial, N: int, threads: int = 1
) -> WeylSumResult:
    """(1/N) sum_{n=1}^{N} e^{2 pi i R(n)}.

    Symbolically zero phases return exactly 1.0; symbolically constant
    phases return the unit phasor of the constant with no summation.  The
    general case runs the fixed-point difference-table kernel over
    2^20-step segments, each anchored from exact values, with partial sums
    combined by exact summation in segment order (thread-count invariant).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if R.is_zero():
        return WeylSumResult(N, complex(1.0, 0.0))
    if R.is_constant():
        c = R.constant_part().shadow_fraction()
        return WeylSumResult(N, _unit_phasor(float(c - math.floor(c))))

    segments = []
    n0 = 1
    while n0 <= N:
        length = min(_SEGMENT, N - n0 + 1)
        segments.append((n0, length))
        n0 += length

    def run(seg):
        start, length = seg
        hi, lo = _anchor_table(R, start)
        return _phase_segment_sum(hi, lo, length)

    if threads > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, segments))
    else:
        parts = [run(seg) for seg in segments]
    total = complex(
        math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts)
    )
    return WeylSumResult(N, total / N)


def weyl_sum_sequence(
    seq: Iterable[Sequence[float]] | np.ndarray,
    m: Sequence[int],
    N: int,
) -> WeylSumResult:
    """(1/N) sum_{n=1}^{N} e^{2 pi i m . a_n} over a stream of torus points.

    Chunked summation: within a fixed-size chunk numpy's pairwise reduction
    applies, and chunk totals are combined by exact summation, so the
    result is deterministic for a given chunk schedule.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    mv = np.asarray(list(m), dtype=np.float64)
    res: list[float] = []
    ims: list[float] = []
    taken = 0
    if isinstance(seq, np.ndarray):
        if seq.shape[0] < N:
            raise ValueError(f"stream yields {seq.shape[0]} points, need {N}")
        for lo_i in range(0, N, _CHUNK):
            chunk = seq[lo_i : min(lo_i + _CHUNK, N)]
            ang = _TWO_PI * (chunk @ mv)
            res.append(float(np.sum(np.cos(ang))))
            ims.append(float(np.sum(np.sin(ang))))
        taken = N
    else:
        buf: list[Sequence[float]] = []
        it = iter(seq)
        while taken < N:
            buf.clear()
            try:
                while len(buf) < _CHUNK and taken + len(buf) < N:
                    buf.append(next(it))
            except StopIteration:
                raise ValueError(
                    f"stream yields {taken + len(buf)} points, need {N}"
                ) from None
            arr = np.asarray(buf, dtype=np.float64)
            ang = _TWO_PI * (arr @ mv)
            res.append(float(np.sum(np.cos(ang))))
            ims.append(float(np.sum(np.sin(ang))))
            taken += len(buf)
    total = complex(math.fsum(res), math.fsum(ims))
    return WeylSumResult(N, total / N)


def orbit_tuple_shadows(
    T: UnipotentAffineMap,
    x: Sequence[AngleValue],
    polys: PolynomialFamily,
    N: int,
    start: int = 1,
) -> np.ndarray:
    """Float images of (T^{p_1(n)} x, ..., T^{p_k(n)} x) for n = start..start+N-1.

    Exact closed-form iteration per n, shadowed to floats at the end; meant
    for cross-validation at moderate N rather than bulk generation.
    """
    d = T.dimension
    k = len(polys)
    out = np.empty((N, d * k), dtype=np.float64)
    for row, n in enumerate(range(start, start + N)):
        for l, p in enumerate(polys):
            pt = T.iterate(p.eval(n), x)
            for i, v in enumerate(pt):
                out[row, l * d + i] = v.shadow
    return out


def all_frequencies(dim: int, max_abs: int) -> Iterable[Frequency]:
    """All nonzero integer vectors with sup norm <= max_abs."""
    from itertools import product

    for m in product(range(-max_abs, max_abs + 1), repeat=dim):
        if any(m):
            yield m


# ---------------------------------------------------------------------------
# Discrepancy
# ---------------------------------------------------------------------------


def star_discrepancy_1d_exact(points: Sequence[float] | np.ndarray) -> float:
    """Exact star discrepancy of a finite set in [0,1) (sorted-points formula)."""
    xs = np.sort(np.asarray(points, dtype=np.float64))
    n = xs.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(i / n - xs, xs - (i - 1) / n)))


def discrepancy_estimate(
    points,
    mode: str = "grid",
    trials: int = 16,
    seed: int | None = None,
) -> float:
    """Lower-bound estimate of the star discrepancy of points in [0,1)^d.

    grid mode scans the deterministic anchor grid {1/trials, ..., 1}^d via a
    cumulative histogram; random mode draws ``trials`` seeded uniform
    anchors.  The result is a maximum over sampled boxes [0, t), hence a
    lower bound on the true star discrepancy by construction.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    n, d = pts.shape
    if d > 4:
        raise ValueError("discrepancy estimation is guarded to dimension <= 4")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n == 0:
        raise ValueError("empty point set")
    if np.any(pts < 0.0) or np.any(pts >= 1.0):
        raise ValueError("points must lie in [0, 1)^d")
    if mode == "grid":
        edges = [np.linspace(0.0, 1.0, trials + 1)] * d
        counts, _ = np.histogramdd(pts, bins=edges)
        for axis in range(d):
            counts = np.cumsum(counts, axis=axis)
        emp = counts / n
        axes = np.arange(1, trials + 1) / trials
        vol = axes.copy()
        for _ in range(d - 1):
            vol = np.multiply.outer(vol, axes)
        return float(np.max(np.abs(emp - vol)))
    if mode == "random":
        if seed is None:
            raise ValueError("random mode requires a seed")
        rng = np.random.default_rng(seed)
        best = 0.0
        remaining = trials
        while remaining > 0:
            batch = min(remaining, 64)
            anchors = rng.uniform(0.0, 1.0, size=(batch, d))
            inside = np.all(pts[None, :, :] < anchors[:, None, :], axis=2)
            emp = inside.mean(axis=1)
            vol = np.prod(anchors, axis=1)
            best = max(best, float(np.max(np.abs(emp - vol))))
            remaining -= batch
        return best
    raise ValueError(f"unknown mode {mode!r} (expected 'grid' or 'random')")
