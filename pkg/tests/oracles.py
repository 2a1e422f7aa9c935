"""Independent reference computations for Weyl sums and averages.

These paths share no code with the production kernel: phases are evaluated
per n from scratch (no difference table) in 128-bit integer fixed point, so
the only float operations are the final cosine/sine and an exactly-summed
reduction.  Used to freeze regression values and to cross-check the kernel
in tests at moderate N.
"""

from __future__ import annotations

import math

from ergolab.equidist import PhasePolynomial

_SCALE = 1 << 128
_MASK64 = (1 << 64) - 1
_TOP = 2.0 ** -64
_TWO_PI = 2.0 * math.pi


def weyl_sum_direct_fixedpoint(R: PhasePolynomial, N: int) -> complex:
    """(1/N) sum_{n=1}^N e^{2 pi i R(n)} by per-n fixed-point evaluation.

    Coefficients are quantized once to 128 bits; each phase is the exact
    modular sum of coefficient * n^i, so the phase error stays around
    deg * N^deg * 2^-128 (below 1e-14 for N <= 1e6, deg <= 4).
    """
    coeffs = []
    for c in R.coeffs:
        f = c.shadow_fraction()
        f -= math.floor(f)
        coeffs.append((f.numerator << 128) // f.denominator)
    if not coeffs:
        return complex(1.0, 0.0)
    res = []
    ims = []
    for n in range(1, N + 1):
        acc = 0
        power = 1
        for q in coeffs:
            if q:
                acc += q * power
            power *= n
        ph = ((acc % _SCALE) >> 64) * _TOP
        a = _TWO_PI * ph
        res.append(math.cos(a))
        ims.append(math.sin(a))
    return complex(math.fsum(res) / N, math.fsum(ims) / N)


def weyl_sum_direct_exact(R: PhasePolynomial, N: int) -> complex:
    """Same average with each phase reduced mod 1 in exact rationals.

    Slower than the fixed-point path but with zero quantization: the only
    rounding is float(fraction) and the cosine/sine themselves.
    """
    res = []
    ims = []
    for n in range(1, N + 1):
        v = R.evaluate_exact(n).shadow_fraction()
        ph = float(v - math.floor(v))
        a = _TWO_PI * ph
        res.append(math.cos(a))
        ims.append(math.sin(a))
    return complex(math.fsum(res) / N, math.fsum(ims) / N)
