"""File formats: system descriptions, matrices, observables, JSON output.

All files are UTF-8 JSON or CSV.  Rationals travel as "p/q" strings so no
exactness is lost; generator shadows travel as JSON floats (Python round-
trips them exactly).  Machine-readable output uses a fixed 17-significant-
digit rendering for floats so identical runs produce byte-identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence, TextIO

from .algebra import RationalMatrix
from .averages import TrigPolynomial
from .torus import AngleValue, Generator, GeneratorRegistry, UnipotentAffineMap


class ValidationError(ValueError):
    """Malformed input file or flag; the message names the offending field."""


def _fraction(text, field: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{field}: not a rational number: {text!r}") from exc


# -- rationals and matrices -------------------------------------------------


def matrix_to_json(M: RationalMatrix) -> list[list[str]]:
    return [[str(e) for e in row] for row in M.rows]


def matrix_from_json(data, field: str = "matrix") -> RationalMatrix:
    if not isinstance(data, list) or not data or not all(
        isinstance(r, list) for r in data
    ):
        raise ValidationError(f"{field}: expected a nonempty array of arrays")
    rows = [
        [_fraction(e, f"{field}[{i}][{j}]") for j, e in enumerate(row)]
        for i, row in enumerate(data)
    ]
    if any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError(f"{field}: ragged rows")
    return RationalMatrix.from_rows(rows)


# -- angles and systems ---------------------------------------------------------


def angle_to_json(v: AngleValue) -> dict:
    out: dict = {"rational": str(v.rational)}
    if v.gens:
        out["gens"] = {g.name: str(c) for g, c in sorted(
            v.gens.items(), key=lambda item: item[0].name
        )}
    return out


def angle_from_json(data, registry: GeneratorRegistry, field: str) -> AngleValue:
    if isinstance(data, (str, int)):
        return AngleValue(_fraction(data, field))
    if not isinstance(data, dict):
        raise ValidationError(f"{field}: expected a rational or an object")
    rational = _fraction(data.get("rational", "0"), f"{field}.rational")
    gens = {}
    for name, coeff in (data.get("gens") or {}).items():
        try:
            gen = registry.get(name)
        except KeyError:
            raise ValidationError(
                f"{field}.gens: unknown generator {name!r}"
            ) from None
        gens[gen] = _fraction(coeff, f"{field}.gens[{name}]")
    return AngleValue(rational, gens)


def system_to_json(T: UnipotentAffineMap, registry: GeneratorRegistry) -> dict:
    return {
        "A": [list(r) for r in T.A],
        "b": [angle_to_json(v) for v in T.b],
        "generators": {g.name: g.value for g in registry},
    }


def system_from_json(data) -> tuple[UnipotentAffineMap, GeneratorRegistry]:
    if not isinstance(data, dict):
        raise ValidationError("system: expected a JSON object")
    registry = GeneratorRegistry()
    for name, value in (data.get("generators") or {}).items():
        try:
            registry.register(Generator(name, float(value)))
        except ValueError as exc:
            raise ValidationError(f"generators[{name}]: {exc}") from exc
    A = data.get("A")
    if not isinstance(A, list) or not A:
        raise ValidationError("A: expected a nonempty integer matrix")
    for i, row in enumerate(A):
        if not isinstance(row, list) or not all(
            isinstance(e, int) and not isinstance(e, bool) for e in row
        ):
            raise ValidationError(f"A[{i}]: expected a row of integers")
    b = data.get("b")
    if not isinstance(b, list):
        raise ValidationError("b: expected an array of angles")
    angles = [
        angle_from_json(e, registry, f"b[{i}]") for i, e in enumerate(b)
    ]
    try:
        T = UnipotentAffineMap(A, angles)
    except ValueError as exc:
        raise ValidationError(f"system: {exc}") from exc
    return T, registry


def point_from_json(data, registry: GeneratorRegistry) -> tuple[AngleValue, ...]:
    coords = data.get("coords") if isinstance(data, dict) else data
    if not isinstance(coords, list) or not coords:
        raise ValidationError("point: expected an array of angles (or {coords: [...]})")
    return tuple(
        angle_from_json(e, registry, f"point[{i}]") for i, e in enumerate(coords)
    )


def point_to_json(x: Sequence[AngleValue]) -> dict:
    return {"coords": [angle_to_json(v) for v in x]}


# -- observables ------------------------------------------------------------------


def functions_from_json(data, dimension: int) -> list[TrigPolynomial]:
    if not isinstance(data, list) or not data:
        raise ValidationError("functions: expected a nonempty array")
    out = []
    for i, fd in enumerate(data):
        if not isinstance(fd, dict) or "terms" not in fd:
            raise ValidationError(f"functions[{i}]: expected an object with 'terms'")
        terms = {}
        for j, td in enumerate(fd["terms"]):
            m = td.get("m")
            if not isinstance(m, list) or len(m) != dimension or not all(
                isinstance(e, int) and not isinstance(e, bool) for e in m
            ):
                raise ValidationError(
                    f"functions[{i}].terms[{j}].m: expected {dimension} integers"
                )
            coeff = complex(float(td.get("re", 0.0)), float(td.get("im", 0.0)))
            terms[tuple(m)] = terms.get(tuple(m), 0j) + coeff
        out.append(TrigPolynomial(dimension, terms))
    return out


def functions_to_json(fs: Sequence[TrigPolynomial]) -> list[dict]:
    return [
        {
            "terms": [
                {"m": list(m), "re": c.real, "im": c.imag}
                for m, c in sorted(f.terms.items())
            ]
        }
        for f in fs
    ]


# -- deterministic JSON output ------------------------------------------------------


def render_json(obj, indent: int = 0) -> str:
    """JSON with floats rendered at a fixed 17 significant digits."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {render_json(v, indent + 1)}"
            for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [render_json(v, indent + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(items) + "]"
        inner = ",\n".join(f"{pad}  {item}" for item in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, complex):
        return render_json({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def write_orbit_csv(
    stream: TextIO, rows, dimension: int, label: str = "x"
) -> None:
    """CSV rows n,x1,...,xd with 17-significant-digit floats."""
    header = "n," + ",".join(f"{label}{i + 1}" for i in range(dimension))
    stream.write(header + "\n")
    for n, point in rows:
        vals = ",".join(format(v, ".17g") for v in point)
        stream.write(f"{n},{vals}\n")
