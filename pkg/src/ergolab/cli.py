"""Command-line surface: reproducible experiments and paper-scale demos.

Every subcommand validates its inputs before computing (exit 2 with a
message naming the offending field on bad input, exit 1 on an internal
fault) and echoes the resolved configuration in its JSON output, so a run
is reproducible from the artifact alone.  Floats are printed with a fixed
17-significant-digit format; identical configurations and seeds produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import algebra, averages, equidist, nilexamples, polynomial, serialize, torus
from .serialize import ValidationError

PROG = "ergolab"


def _threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("ERGOLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValidationError(f"ERGOLAB_THREADS: not an integer: {env!r}") from exc
    return 1


def _load_json(path: str, field: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"{field}: cannot read {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{field}: invalid JSON in {path!r}: {exc}") from exc


def _emit(payload: dict, out: str | None) -> None:
    text = serialize.render_json(payload) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_freq(text: str, expected: int) -> tuple[int, ...]:
    try:
        vec = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"freq: not an integer vector: {text!r}") from exc
    if len(vec) != expected:
        raise ValidationError(
            f"freq: has {len(vec)} entries, system and family need {expected}"
        )
    return vec


def _load_system(path: str):
    T, registry = serialize.system_from_json(_load_json(path, "system"))
    return T, registry


def _resolve_point(spec: str, T, registry):
    if spec == "generic":
        return torus.sample_generic_point(T.dimension, registry), "generic"
    data = _load_json(spec, "point")
    x = serialize.point_from_json(data, registry)
    if len(x) != T.dimension:
        raise ValidationError(
            f"point: has {len(x)} coordinates, system has {T.dimension}"
        )
    return x, spec


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_independence_check(args) -> int:
    try:
        fam = polynomial.parse_family(args.polys)
    except ValueError as exc:
        raise ValidationError(f"polys: {exc}") from exc
    ok, witness = polynomial.is_independent(fam)
    payload = {
        "independent": ok,
        "witness": list(witness) if witness is not None else None,
        "family": [p.format_standard() for p in fam],
        "family_binomial": [p.format_binomial() for p in fam],
        "config": {"command": "independence-check", "polys": args.polys},
    }
    _emit(payload, args.out)
    return 0


def cmd_reduce(args) -> int:
    M = serialize.matrix_from_json(_load_json(args.matrix, "matrix"), "matrix")
    if not M.is_square():
        raise ValidationError("matrix: must be square")
    if not M.is_integer():
        raise ValidationError("matrix: reduction expects integer entries")
    ok, index = algebra.is_unipotent(M)
    if not ok:
        raise ValidationError("matrix: not unipotent ((A-I)^d != 0)")
    red = algebra.unipotent_canonical_form(M)
    if red.P * M != red.J * red.P:
        raise RuntimeError("internal error: PA = JP failed re-verification")
    payload = {
        "block_sizes": list(red.block_sizes),
        "J": serialize.matrix_to_json(red.J),
        "P": serialize.matrix_to_json(red.P),
        "nilpotency_index": index,
        "config": {"command": "reduce", "matrix": args.matrix},
    }
    _emit(payload, args.out)
    return 0


def cmd_orbit(args) -> int:
    if args.N < 1:
        raise ValidationError("N: must be >= 1")
    T, registry = _load_system(args.system)
    x, point_desc = _resolve_point(args.point, T, registry)
    rows = (
        (n, torus.shadow_point(pt))
        for n, pt in zip(
            range(args.start, args.start + args.N),
            T.orbit(x, args.N, start=args.start),
        )
    )
    if args.out in (None, "-"):
        serialize.write_orbit_csv(sys.stdout, rows, T.dimension)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            serialize.write_orbit_csv(fh, rows, T.dimension)
    return 0


def cmd_weyl_sum(args) -> int:
    if args.N < 1:
        raise ValidationError("N: must be >= 1")
    T, registry = _load_system(args.system)
    try:
        fam = polynomial.parse_family(args.polys)
    except ValueError as exc:
        raise ValidationError(f"polys: {exc}") from exc
    freq = _parse_freq(args.freq, T.dimension * len(fam))
    x, point_desc = _resolve_point(args.point, T, registry)
    threads = _threads(args.threads)
    R = equidist.orbit_phase_polynomial(T, x, fam, freq)
    res = equidist.weyl_sum_phase(R, args.N, threads=threads)
    payload = {
        "N": res.N,
        "re": res.value.real,
        "im": res.value.imag,
        "magnitude": res.magnitude,
        "phase_degree": R.degree,
        "config": {
            "command": "weyl-sum",
            "system": args.system,
            "point": point_desc,
            "polys": args.polys,
            "freq": list(freq),
            "N": args.N,
            "threads": threads,
        },
    }
    _emit(payload, args.out)
    return 0


def cmd_discrepancy(args) -> int:
    import numpy as np

    if args.mode == "random" and args.seed is None:
        raise ValidationError("seed: required when --mode random")
    if args.points is not None:
        try:
            pts = np.loadtxt(args.points, delimiter=",", ndmin=2)
        except (OSError, ValueError) as exc:
            raise ValidationError(f"points: cannot read {args.points!r}: {exc}") from exc
        source = args.points
    else:
        if args.system is None or args.N is None:
            raise ValidationError(
                "points: provide --points CSV, or --system with --N to stream an orbit"
            )
        if args.N < 1:
            raise ValidationError("N: must be >= 1")
        T, registry = _load_system(args.system)
        if T.dimension > 4:
            raise ValidationError("system: discrepancy is guarded to dimension <= 4")
        x, point_desc = _resolve_point(args.point, T, registry)
        pts = np.array(
            [torus.shadow_point(pt) for pt in T.orbit(x, args.N, start=1)]
        )
        source = f"orbit({args.system}, {point_desc}, N={args.N})"
    try:
        est = equidist.discrepancy_estimate(
            pts, mode=args.mode, trials=args.trials, seed=args.seed
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    payload = {
        "estimate": est,
        "mode": args.mode,
        "trials": args.trials,
        "seed": args.seed,
        "count": int(pts.shape[0]),
        "dimension": int(pts.shape[1] if pts.ndim > 1 else 1),
        "config": {
            "command": "discrepancy",
            "points": source,
            "mode": args.mode,
            "trials": args.trials,
            "seed": args.seed,
        },
    }
    _emit(payload, args.out)
    return 0


def cmd_average(args) -> int:
    if args.N < 1:
        raise ValidationError("N: must be >= 1")
    if args.samples < 1:
        raise ValidationError("samples: must be >= 1")
    if args.seed is None:
        raise ValidationError("seed: required (sample points are stochastic)")
    T, registry = _load_system(args.system)
    try:
        fam = polynomial.parse_family(args.polys)
    except ValueError as exc:
        raise ValidationError(f"polys: {exc}") from exc
    fs = serialize.functions_from_json(
        _load_json(args.functions, "functions"), T.dimension
    )
    if len(fs) != len(fam):
        raise ValidationError(
            f"functions: {len(fs)} functions for {len(fam)} polynomials"
        )
    import math as _math
    import random as _random

    sample_registry = torus.GeneratorRegistry(rng=_random.Random(args.seed))
    for gen in registry:
        sample_registry.register(gen)
    threads = _threads(args.threads)
    points = [
        torus.sample_generic_point(T.dimension, sample_registry)
        for _ in range(args.samples)
    ]
    target = averages.product_of_integrals(fs)

    def run_at(n):
        vals = [
            averages.multiple_ergodic_average(T, fam, fs, x, n, threads=threads)
            for x in points
        ]
        sq = _math.fsum(abs(v - target) ** 2 for v in vals) / len(vals)
        return vals, _math.sqrt(sq)

    if args.trace_out:
        lo = min(100, args.N)
        grid = sorted(
            {
                max(1, round(10 ** (e)))
                for e in [
                    _math.log10(lo)
                    + i * (_math.log10(args.N) - _math.log10(lo)) / max(args.trace_points - 1, 1)
                    for i in range(args.trace_points)
                ]
            }
            | {args.N}
        )
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            fh.write("N,l2_estimate,mean_abs\n")
            for n in grid:
                vals, est = run_at(n)
                mean_abs = _math.fsum(abs(v - target) for v in vals) / len(vals)
                fh.write(
                    f"{n},{format(est, '.17g')},{format(mean_abs, '.17g')}\n"
                )
    values, l2 = run_at(args.N)
    payload = {
        "N": args.N,
        "l2_estimate": l2,
        "product_of_integrals": target,
        "samples": [{"re": v.real, "im": v.imag, "abs": abs(v)} for v in values],
        "sample_description": f"{args.samples} generic symbolic points",
        "trace_csv": args.trace_out,
        "config": {
            "command": "average",
            "system": args.system,
            "polys": args.polys,
            "functions": args.functions,
            "N": args.N,
            "samples": args.samples,
            "seed": args.seed,
            "threads": threads,
            "trace_points": args.trace_points if args.trace_out else None,
        },
    }
    _emit(payload, args.out)
    return 0


def _parse_element(text: str, example: int, registry):
    parts = [tok.strip() for tok in text.split(",")]
    want = 3 if example == 1 else 4
    if len(parts) != want:
        raise ValidationError(
            f"element: example {example} needs {want} comma-separated entries"
        )
    try:
        m = int(parts[0])
    except ValueError as exc:
        raise ValidationError(f"element: discrete part must be an integer: {parts[0]!r}") from exc
    coords = []
    for tok in parts[1:]:
        if tok and (tok[0].isalpha() or tok[0] == "_"):
            try:
                gen = registry.get(tok)
            except KeyError:
                gen = registry.mint(name=tok)
            coords.append(torus.AngleValue.of(gen))
        else:
            try:
                coords.append(torus.AngleValue(Fraction(tok)))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValidationError(f"element: bad coordinate {tok!r}") from exc
    if example == 1:
        return nilexamples.NilElement1(m, *coords)
    return nilexamples.NilElement2(m, *coords)


def cmd_demo_nil(args) -> int:
    if args.example not in (1, 2):
        raise ValidationError("example: must be 1 or 2")
    if args.N < 1:
        raise ValidationError("N: must be >= 1")
    registry = torus.GeneratorRegistry()
    a = _parse_element(args.element, args.example, registry)
    S = nilexamples.conjugated_affine(a)
    ergodic = torus.is_ergodic(S)
    x0 = nilexamples.torus_coordinates(
        nilexamples.phi(type(a).identity()).g0
    )
    payload = {
        "example": args.example,
        "element": args.element,
        "affine_map": serialize.system_to_json(S, registry),
        "ergodic": ergodic,
        "totally_ergodic": torus.is_totally_ergodic(S),
        "orbit_csv": args.orbit_out,
        "config": {
            "command": "demo-nil",
            "example": args.example,
            "element": args.element,
            "N": args.N,
        },
    }
    if args.orbit_out:
        rows = (
            (n, torus.shadow_point(pt))
            for n, pt in zip(range(args.N), S.orbit(x0, args.N, start=0))
        )
        with open(args.orbit_out, "w", encoding="utf-8") as fh:
            serialize.write_orbit_csv(fh, rows, S.dimension)
    _emit(payload, args.out)
    return 0


def cmd_demo_counterexample(args) -> int:
    if args.N < 1:
        raise ValidationError("N: must be >= 1")
    threads = _threads(args.threads)
    registry = torus.GeneratorRegistry()
    alpha = registry.mint(name="alpha")  # shadow frac(sqrt 2)
    av = torus.AngleValue.of(alpha)
    T = torus.UnipotentAffineMap([[1, 0], [2, 1]], [av, av])
    fam = polynomial.parse_family("n,n^2")
    m_star = (0, 1, -1, 0)

    origin = torus.torus_point(0, 0)
    R0 = equidist.orbit_phase_polynomial(T, origin, fam, m_star)
    res0 = equidist.weyl_sum_phase(R0, args.N, threads=threads)

    x = torus.sample_generic_point(2, registry)
    worst = None
    for m in equidist.all_frequencies(4, 2):
        R = equidist.orbit_phase_polynomial(T, x, fam, m)
        res = equidist.weyl_sum_phase(R, args.N, threads=threads)
        if worst is None or res.magnitude > worst[1]:
            worst = (m, res.magnitude)
    payload = {
        "origin": {
            "m": list(m_star),
            "magnitude": res0.magnitude,
            "phase_identically_zero": R0.is_zero(),
        },
        "generic": {
            "max_magnitude": worst[1],
            "argmax_m": list(worst[0]),
            "frequencies_checked": 5 ** 4 - 1,
        },
        "N": args.N,
        "config": {
            "command": "demo-counterexample",
            "N": args.N,
            "threads": threads,
        },
    }
    _emit(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog=PROG,
        description="Unipotent torus dynamics, Weyl sums and polynomial ergodic averages.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("independence-check", help="decide independence of a polynomial family")
    p.add_argument("--polys", required=True, help='family, e.g. "n,n^2" or "[0,1],[0,0,1]"')
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_independence_check)

    p = sub.add_parser("reduce", help="shear canonical form of a unipotent integer matrix")
    p.add_argument("--matrix", required=True, help="JSON file: array of arrays of 'p/q' strings")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("orbit", help="stream an orbit to CSV")
    p.add_argument("--system", required=True)
    p.add_argument("--point", default="generic", help="'generic' or a point JSON file")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("weyl-sum", help="character average along a polynomial product orbit")
    p.add_argument("--system", required=True)
    p.add_argument("--point", default="generic")
    p.add_argument("--polys", required=True)
    p.add_argument("--freq", required=True, help="comma-separated integers, length d*k")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_weyl_sum)

    p = sub.add_parser("discrepancy", help="star-discrepancy lower bound of a point set")
    p.add_argument("--points", default=None, help="CSV of points in [0,1)^d")
    p.add_argument("--system", default=None, help="alternative: stream an orbit")
    p.add_argument("--point", default="generic")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--mode", choices=("grid", "random"), default="grid")
    p.add_argument("--trials", type=int, default=16)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("average", help="multiple ergodic average vs product of integrals")
    p.add_argument("--system", required=True)
    p.add_argument("--polys", required=True)
    p.add_argument("--functions", required=True, help="JSON file of trig polynomials")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--trace-out", default=None,
                   help="also sweep N over a log grid and write N,l2,mean CSV")
    p.add_argument("--trace-points", type=int, default=8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("demo-nil", help="nilrotation -> affine torus map, with orbit")
    p.add_argument("--example", type=int, required=True, choices=(1, 2))
    p.add_argument("--element", required=True,
                   help='e.g. "2,a,a" (example 1) or "1,a,0,1/2" (example 2); '
                        "letters mint generators")
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--orbit-out", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_demo_nil)

    p = sub.add_parser(
        "demo-counterexample",
        help="origin orbit of the 2-block example fails equidistribution; generic points pass",
    )
    p.add_argument("--N", type=int, default=100000)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_demo_counterexample)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"{PROG}: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
