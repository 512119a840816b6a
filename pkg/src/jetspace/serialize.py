"""JSON/CSV interchange for every domain object.

JSON is the canonical format; floats are printed with 17 significant digits
so every value round-trips exactly.  CSV is a flat projection for tabular
reports.  Multi-index keys serialize as JSON arrays of exponents
(e.g. "[1,0]").
"""

from __future__ import annotations

import dataclasses
import io
import json
import math
from typing import Any, Sequence

from .cubes import Cube, HalfSpacePoint
from .jets import Jet
from .modulus import Modulus
from .poly import Poly
from .selection import ConvexSetSpec, SelectionInstance
from .whitney import CheckReport, PolyField, SampleSet


# ---------------------------------------------------------------------------
# float-exact JSON writer


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2) -> str:
    """Serialize nested dict/list structures with round-trip-exact floats."""
    out = io.StringIO()
    _write(obj, out, indent, 0)
    out.write("\n")
    return out.getvalue()


def _write(obj: Any, out: io.StringIO, indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1))
    closing = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        out.write("{\n")
        for i, (key, val) in enumerate(obj.items()):
            out.write(pad)
            out.write(json.dumps(str(key)))
            out.write(": ")
            _write(val, out, indent, level + 1)
            out.write(",\n" if i < len(obj) - 1 else "\n")
        out.write(closing + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.write("[]")
            return
        out.write("[\n")
        for i, val in enumerate(seq):
            out.write(pad)
            _write(val, out, indent, level + 1)
            out.write(",\n" if i < len(seq) - 1 else "\n")
        out.write(closing + "]")
    elif isinstance(obj, bool):
        out.write("true" if obj else "false")
    elif obj is None:
        out.write("null")
    elif isinstance(obj, float):
        out.write(_fmt_float(obj))
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif dataclasses.is_dataclass(obj):
        _write(dataclasses.asdict(obj), out, indent, level)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Flat CSV projection with round-trip-exact floats and \\n line ends."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, bool):
                cells.append("true" if cell else "false")
            elif isinstance(cell, float):
                cells.append(_fmt_float(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# domain objects <-> dicts


def modulus_to_dict(mod: Modulus) -> dict:
    if mod.family == "table":
        return {"family": "table", "m": mod.m, "knots": [list(k) for k in mod.knots]}
    return {"family": mod.family, "q": mod.q, "m": mod.m}


def modulus_from_dict(d: dict, default_m: int | None = None) -> Modulus:
    family = d.get("family")
    m = d.get("m", default_m)
    if m is None:
        raise ValueError("modulus dict needs an order m")
    if default_m is not None and m != default_m:
        raise ValueError("modulus order conflicts with the context order")
    if family == "table":
        return Modulus.table(d["knots"], int(m))
    if family == "power":
        return Modulus.power(float(d["q"]), int(m))
    if family == "powerlog":
        return Modulus.power_log(float(d["q"]), int(m))
    raise ValueError(f"unknown modulus family {family!r}")


def cube_to_dict(cube: Cube) -> dict:
    return {"x": list(cube.center), "r": cube.radius}


def cube_from_dict(d: dict) -> Cube:
    return Cube(center=tuple(float(v) for v in d["x"]), radius=float(d["r"]))


def halfspace_to_dict(z: HalfSpacePoint) -> dict:
    return {"x": list(z.base), "h": z.height}


def halfspace_from_dict(d: dict) -> HalfSpacePoint:
    return HalfSpacePoint(base=tuple(float(v) for v in d["x"]), height=float(d["h"]))


def _mi_key(alpha: Sequence[int]) -> str:
    return json.dumps(list(alpha), separators=(",", ":"))


def poly_to_dict(poly: Poly) -> dict:
    items = sorted(poly.coef.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    return {
        "n": poly.n,
        "L": poly.degree,
        "coef": {_mi_key(a): c for a, c in items},
    }


def poly_from_dict(d: dict) -> Poly:
    coef = {}
    for key, val in d.get("coef", {}).items():
        alpha = tuple(int(v) for v in json.loads(key))
        coef[alpha] = float(val)
    return Poly(n=int(d["n"]), degree=int(d["L"]), coef=coef)


def jet_to_dict(jet: Jet) -> dict:
    return {"poly": poly_to_dict(jet.poly), "cube": cube_to_dict(jet.cube)}


def jet_from_dict(d: dict) -> Jet:
    return Jet(poly=poly_from_dict(d["poly"]), cube=cube_from_dict(d["cube"]))


def sample_set_to_dict(
    sample: SampleSet, mod: Modulus, k: int, m: int
) -> dict:
    points = []
    for i, p in enumerate(sample.points):
        entry: dict[str, Any] = {"x": list(p)}
        if sample.values is not None:
            entry["f"] = sample.values[i]
        else:
            entry["jet"] = poly_to_dict(sample.jets[i])
        points.append(entry)
    return {
        "n": sample.n,
        "k": k,
        "m": m,
        "omega": modulus_to_dict(mod),
        "points": points,
    }


def sample_set_from_dict(d: dict) -> tuple[SampleSet, Modulus, int, int]:
    n = int(d["n"])
    k = int(d["k"])
    m = int(d["m"])
    mod = modulus_from_dict(d["omega"], default_m=m)
    pts = []
    values: list[float] = []
    jets: list[Poly] = []
    for entry in d["points"]:
        pts.append(tuple(float(v) for v in entry["x"]))
        if "f" in entry:
            values.append(float(entry["f"]))
        elif "jet" in entry:
            jets.append(poly_from_dict(entry["jet"]))
        else:
            raise ValueError("sample point needs either 'f' or 'jet'")
    if values and jets:
        raise ValueError("mixing scalar and jet sample data is not supported")
    sample = SampleSet(
        n=n,
        points=tuple(pts),
        values=tuple(values) if values else None,
        jets=tuple(jets) if jets else None,
    )
    return sample, mod, k, m


def convex_set_to_dict(spec: ConvexSetSpec) -> dict:
    return {
        "base": poly_to_dict(spec.base),
        "dirs": [poly_to_dict(d) for d in spec.directions],
        "ineq": [{"a": list(a), "b": b} for a, b in spec.inequalities],
    }


def convex_set_from_dict(d: dict) -> ConvexSetSpec:
    return ConvexSetSpec(
        base=poly_from_dict(d["base"]),
        directions=tuple(poly_from_dict(x) for x in d.get("dirs", ())),
        inequalities=tuple(
            (tuple(float(v) for v in row["a"]), float(row["b"]))
            for row in d.get("ineq", ())
        ),
    )


def selection_instance_to_dict(inst: SelectionInstance) -> dict:
    return {
        "context": {
            "n": inst.n,
            "k": inst.k,
            "m": inst.m,
            "omega": modulus_to_dict(inst.modulus),
        },
        "nodes": [
            {"cube": cube_to_dict(cube), "set": convex_set_to_dict(spec)}
            for spec, cube in inst.nodes
        ],
    }


def selection_instance_from_dict(d: dict) -> SelectionInstance:
    ctx = d["context"]
    mod = modulus_from_dict(ctx["omega"], default_m=int(ctx["m"]))
    nodes = tuple(
        (convex_set_from_dict(node["set"]), cube_from_dict(node["cube"]))
        for node in d["nodes"]
    )
    return SelectionInstance(
        n=int(ctx["n"]), k=int(ctx["k"]), m=int(ctx["m"]), modulus=mod, nodes=nodes
    )


def poly_field_to_dict(field: PolyField) -> dict:
    return {
        "n": field.n,
        "k": field.k,
        "m": field.m,
        "entries": [
            {"cube": cube_to_dict(q), "poly": poly_to_dict(p)}
            for q, p in field.entries
        ],
    }


def check_report_to_dict(report: CheckReport) -> dict:
    def stat(s):
        witness = None
        if s.witness is not None:
            witness = {
                key: list(val) if isinstance(val, tuple) else val
                for key, val in s.witness.items()
            }
        return {"name": s.name, "lambda_hat": s.lambda_hat, "witness": witness}

    out: dict[str, Any] = {
        "lambda_hat": report.lambda_hat,
        "conditions": [stat(report.pointwise), stat(report.pairwise)],
    }
    if report.interpolation is not None:
        out["interpolation"] = [
            {"cube": cube_to_dict(q), "residual": res}
            for q, res in report.interpolation
        ]
    out["fit_mode"] = report.fit_mode
    out["notes"] = list(report.notes)
    return out
