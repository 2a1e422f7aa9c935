"""Regenerate tests/fixtures/pinned.json from independent oracle runs.

Run manually (slow: the 624-frequency sweep evaluates phases per n in
big-integer fixed point).  The committed fixture is the authority the test
suite asserts against; regenerating should reproduce it bit-for-bit on any
platform with IEEE doubles.
"""

from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from oracles import weyl_sum_direct_fixedpoint

from ergolab.equidist import PhasePolynomial, orbit_phase_polynomial
from ergolab.polynomial import parse_family
from ergolab.torus import AngleValue, GeneratorRegistry, UnipotentAffineMap

OUT = pathlib.Path(__file__).parent / "fixtures" / "pinned.json"


def counterexample_setup():
    registry = GeneratorRegistry()
    alpha = registry.mint(name="alpha")  # frac(sqrt 2)
    gamma = registry.mint(name="gamma")  # frac(sqrt 3)
    delta = registry.mint(name="delta")  # frac(sqrt 5)
    av = AngleValue.of(alpha)
    T = UnipotentAffineMap([[1, 0], [2, 1]], [av, av])
    x = (AngleValue.of(gamma), AngleValue.of(delta))
    fam = parse_family("n,n^2")
    return T, x, fam


def main():
    pinned = {}

    # quadratic Weyl sum n^2 * frac(sqrt 2) at N = 1e6
    registry = GeneratorRegistry()
    alpha = registry.mint(name="alpha")
    Rq = PhasePolynomial((AngleValue(0), AngleValue(0), AngleValue.of(alpha)))
    v = weyl_sum_direct_fixedpoint(Rq, 10**6)
    pinned["quadratic_sqrt2_N1e6"] = {"re": v.real, "im": v.imag, "magnitude": abs(v)}
    print("quadratic:", pinned["quadratic_sqrt2_N1e6"])

    # generic-point frequency sweep of the counterexample system at N = 1e5
    # (oracle subset; the full production sweep at N = 1e6 happens in the
    # acceptance test itself)
    T, x, fam = counterexample_setup()
    subset = [
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 0, 1),
        (0, 1, -1, 0),
        (2, -1, 1, -2),
        (-1, -1, 2, -2),
        (2, 2, 2, 2),
        (1, 2, -2, 1),
    ]
    sub = {}
    for m in subset:
        R = orbit_phase_polynomial(T, x, fam, m)
        v = weyl_sum_direct_fixedpoint(R, 10**5)
        sub[",".join(map(str, m))] = {"re": v.real, "im": v.imag, "magnitude": abs(v)}
        print("subset", m, abs(v))
    pinned["counterexample_generic_N1e5_subset"] = sub

    # three of the same frequencies at the acceptance scale N = 1e6
    sub6 = {}
    for m in [(0, 1, 0, 0), (0, 0, 0, 1), (2, 2, 2, 2)]:
        R = orbit_phase_polynomial(T, x, fam, m)
        v = weyl_sum_direct_fixedpoint(R, 10**6)
        sub6[",".join(map(str, m))] = {"re": v.real, "im": v.imag, "magnitude": abs(v)}
        print("subset(1e6)", m, abs(v))
    pinned["counterexample_generic_N1e6_subset"] = sub6

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump(pinned, fh, indent=2, sort_keys=True)
    print("wrote", OUT)


if __name__ == "__main__":
    main()
