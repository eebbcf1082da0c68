"""JSON and CSV encodings.

points: angle in radians; Möbius maps: row-major [a, b, c, d];
geodesics: {"tail", "head"}; boxes: [a, b, c, d] angles;
currents/laminations: {"atoms": [{"tail", "head", "weight"}]} (a bare list is accepted);
step functions: [{"box": [...], "weight"}];
maps: {"breaks": [angles], "pieces": [[a, b, c, d], ...]}.
"""
from __future__ import annotations

import csv
import json

from .boundary_maps import PiecewiseMobiusHomeo
from .boxes import Box, liouville_mass
from .currents import AtomicCurrent, MeasuredLamination, StepFunction
from .errors import ContinuityViolation, GeometryError
from .mobius import BoundaryPoint, Geodesic, Mobius
from .sampler import MobiusSampler


def fmt(x) -> str:
    """17 significant digits, enough to round-trip a double."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def point_to_json(p: BoundaryPoint) -> float:
    return float(p.theta)


def point_from_json(x) -> BoundaryPoint:
    return BoundaryPoint(float(x))


def mobius_to_json(m: Mobius) -> list[float]:
    return [float(m.a), float(m.b), float(m.c), float(m.d)]


def mobius_from_json(v) -> Mobius:
    if len(v) != 4:
        raise GeometryError("a Möbius map needs 4 reals")
    return Mobius(*(float(x) for x in v))


def geodesic_to_json(g: Geodesic) -> dict:
    return {"tail": point_to_json(g.tail), "head": point_to_json(g.head)}


def geodesic_from_json(d) -> Geodesic:
    return Geodesic(point_from_json(d["tail"]), point_from_json(d["head"]))


def box_to_json(q: Box) -> list[float]:
    return [float(x) for x in q.angles()]


def box_from_json(v) -> Box:
    if len(v) != 4:
        raise GeometryError("a box needs 4 corner angles")
    return Box.from_angles(*(float(x) for x in v))


def current_to_json(alpha: AtomicCurrent) -> dict:
    return {"atoms": [dict(geodesic_to_json(g), weight=float(w)) for g, w in alpha.atoms]}


def current_from_json(d, lamination: bool = False) -> AtomicCurrent:
    atoms = d["atoms"] if isinstance(d, dict) else d
    cls = MeasuredLamination if lamination else AtomicCurrent
    return cls([(geodesic_from_json(a), float(a["weight"])) for a in atoms])


def lamination_from_json(d) -> MeasuredLamination:
    return current_from_json(d, lamination=True)


def step_function_to_json(xi: StepFunction) -> list[dict]:
    return [{"box": box_to_json(q), "weight": w} for q, w in xi.terms]


def step_function_from_json(v) -> StepFunction:
    return StepFunction([(box_from_json(t["box"]), float(t["weight"])) for t in v])


def map_to_json(f: PiecewiseMobiusHomeo) -> dict:
    return {"breaks": [point_to_json(p) for p in f.breaks],
            "pieces": [mobius_to_json(m) for m in f.pieces]}


def map_from_json(d) -> PiecewiseMobiusHomeo:
    pieces = []
    for i, v in enumerate(d["pieces"]):
        try:
            pieces.append(mobius_from_json(v))
        except GeometryError as exc:
            raise ContinuityViolation(f"piece {i}: {exc}", piece=i) from exc
    return PiecewiseMobiusHomeo([point_from_json(x) for x in d.get("breaks", [])], pieces)


def sampler_to_json(s: MobiusSampler) -> dict:
    return s.to_dict()


def sampler_from_json(d) -> MobiusSampler:
    return MobiusSampler.from_dict(d or {})


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def box_rows(boxes):
    """(box_id, a, b, c, d, mass) rows."""
    return [(i, *q.angles(), liouville_mass(q)) for i, q in enumerate(boxes)]
