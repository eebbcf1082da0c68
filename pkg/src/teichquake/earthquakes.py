"""Elementary and finite-lamination earthquakes acting on boundary maps.

An elementary earthquake of amplitude t along g keeps f on the left of g
and post-composes f with the translation of length t along f(g) on the
right.  Left is the open counterclockwise arc from head(g) to tail(g).
Negative amplitudes give right earthquakes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import _numeric as num
from .boundary_maps import LiouvillePullback, PiecewiseMobiusHomeo, _merge_points
from .boxes import Box
from .currents import AtomicCurrent, MeasuredLamination, is_generic, is_measured_lamination
from .errors import (
    BoxNotAligned,
    ConfigurationUnclassified,
    NonGenericBox,
    NotALamination,
    PointOnGeodesicEndpoint,
)
from .mobius import TOL, BoundaryPoint, Geodesic, _translation_matrix, compose, in_open_arc


@dataclass(frozen=True)
class EarthquakeSpec:
    lamination: AtomicCurrent
    amplitude: float = 1.0

    def __post_init__(self):
        if not is_measured_lamination(self.lamination):
            raise NotALamination("support geodesics cross")


def elementary_earthquake(f: PiecewiseMobiusHomeo, g: Geodesic, t,
                          tol: float | None = None) -> PiecewiseMobiusHomeo:
    if t == 0:
        return f
    tol = TOL.point if tol is None else tol
    x, y = g.tail, g.head
    breaks = _merge_points(list(f.breaks) + [x, y], tol)
    shell = PiecewiseMobiusHomeo(breaks, [f.pieces[0]] * len(breaks), validate=False)
    shift = _translation_matrix(f(x), f(y), t)
    pieces = []
    for mid in shell.arc_midpoints():
        m = f.pieces[f.piece_index(mid)]
        if in_open_arc(mid, x, y):
            m = compose(shift, m)
        pieces.append(m)
    return PiecewiseMobiusHomeo(breaks, pieces, tol=tol)


def earthquake(f: PiecewiseMobiusHomeo, spec, amplitude=None) -> PiecewiseMobiusHomeo:
    """E^{t lambda} f for a finite lamination, atoms taken in canonical order.

    ``spec`` is an ``EarthquakeSpec``, or a lamination together with ``amplitude``.
    """
    if not isinstance(spec, EarthquakeSpec):
        spec = EarthquakeSpec(spec, 1.0 if amplitude is None else amplitude)
    out = f
    for g, w in spec.lamination.atoms:
        out = elementary_earthquake(out, g, spec.amplitude * w)
    return out


def left_earthquake_check(f_before, f_after, lam: AtomicCurrent, boxes, tol: float = 1e-9,
                          point_tol: float | None = None) -> bool:
    """L_before(Q) <= L_after(Q) + tol on boxes whose diagonal a-c is a leaf of ``lam``."""
    before, after = LiouvillePullback(f_before), LiouvillePullback(f_after)
    for k, q in enumerate(boxes):
        diag = q.diagonal()
        aligned = any(
            (diag.tail.coincides(g.tail, point_tol) and diag.head.coincides(g.head, point_tol))
            or (diag.tail.coincides(g.head, point_tol) and diag.head.coincides(g.tail, point_tol))
            for g, _ in lam.atoms
        )
        if not aligned:
            raise BoxNotAligned(f"box {k}: diagonal is not a leaf of the lamination")
    return all(before.mass(q) <= after.mass(q) + tol for q in boxes)


# ---------------------------------------------------------------------------
# Earthquake rays
# ---------------------------------------------------------------------------

class RayRow(NamedTuple):
    t: float
    box_id: int
    normalized_mass: float
    target_mass: float
    abs_err: float


def earthquake_ray_masses(f: PiecewiseMobiusHomeo, lam: AtomicCurrent, ts, boxes,
                          dps: int | str | None = "auto", check_generic: bool = True) -> list[RayRow]:
    """L(E^{t lam} f)(Q) / t for each t and box, next to the target lam(Q).

    With ``dps="auto"`` every amplitude runs at the working precision needed
    to keep the translated points apart.
    """
    boxes = list(boxes)
    for k, q in enumerate(boxes):
        if check_generic and not is_generic(lam, q):
            raise NonGenericBox(f"box {k} has a corner at an atom endpoint; jitter it")
    targets = [lam.mass(q) for q in boxes]
    total = lam.total_weight()
    rows = []
    for t in ts:
        t = float(t)
        digits = num.dps_for_amplitude(t * total) if dps == "auto" else dps
        with num.working_precision(digits):
            pull = LiouvillePullback(earthquake(f, lam, t))
            values = [float(pull.mass(q) / num.lift(t)) for q in boxes]
        for k, (v, target) in enumerate(zip(values, targets)):
            rows.append(RayRow(t, k, v, target, abs(v - target)))
    return rows


def convergence_bound(beta: float, t: float) -> float:
    """(|log beta| + 1) / t bounds |log(e^t beta + 1)/t - 1| for t >= 5."""
    return (abs(math.log(beta)) + 1.0) / t


# ---------------------------------------------------------------------------
# Monotonicity of elementary earthquakes in the endpoints of g
# ---------------------------------------------------------------------------

class MonotonicityReport(NamedTuple):
    case: str
    d_dx: float
    d_dy: float
    max_abs_delta: float
    expected_sign: int
    ok: bool


def _arc_label(p: BoundaryPoint, q: Box) -> str:
    a, b, c, d = q.corners()
    for corner in (a, b, c, d):
        if p.coincides(corner):
            raise PointOnGeodesicEndpoint("geodesic endpoint sits at a box corner")
    for label, (s, e) in (("ab", (a, b)), ("bc", (b, c)), ("cd", (c, d)), ("da", (d, a))):
        if in_open_arc(p, s, e):
            return label
    raise PointOnGeodesicEndpoint("geodesic endpoint sits at a box corner")


def classify(q: Box, g: Geodesic) -> str:
    """'0', 'a' or 'b' according to where the endpoints of g sit relative to q."""
    lx, ly = _arc_label(g.tail, q), _arc_label(g.head, q)
    if lx == ly:
        return "0"
    if {lx, ly} == {"ab", "cd"}:
        return "a"
    if {lx, ly} == {"bc", "da"}:
        return "b"
    raise ConfigurationUnclassified(f"endpoints in arcs {lx} and {ly}")


def monotonicity_probe(f: PiecewiseMobiusHomeo, q: Box, g: Geodesic, t, h: float = 1e-4,
                       zero_tol: float = 1e-10, dps: int | None = 30) -> MonotonicityReport:
    """Finite-difference signs of d L_{E_g^t f}(Q) in each endpoint of g.

    Endpoints move counterclockwise for positive increments.  Case 'a' should
    give negative derivatives, case 'b' positive, case '0' no change at all.
    In case '0' the shift can squeeze the box corners together, and in double
    precision the cross-ratio then loses digits, so that case runs with
    ``dps`` digits.  The signs in cases 'a' and 'b' are robust in floats.
    """
    case = classify(q, g)

    def mass(dx, dy):
        gg = Geodesic(BoundaryPoint(g.tail.theta + dx), BoundaryPoint(g.head.theta + dy))
        return LiouvillePullback(elementary_earthquake(f, gg, num.lift(t))).mass(q)

    with num.working_precision(dps if case == "0" else None):
        base = mass(0, 0)
        mxp, mxm = mass(h, 0), mass(-h, 0)
        myp, mym = mass(0, h), mass(0, -h)
    d_dx = float((mxp - mxm) / (2 * h))
    d_dy = float((myp - mym) / (2 * h))
    delta = max(float(abs(v - base)) for v in (mxp, mxm, myp, mym))
    if case == "0":
        return MonotonicityReport(case, d_dx, d_dy, delta, 0, delta < zero_tol)
    sign = -1 if case == "a" else 1
    ok = d_dx * sign > 0 and d_dy * sign > 0
    return MonotonicityReport(case, d_dx, d_dy, delta, sign, ok)


# ---------------------------------------------------------------------------
# Diagonal earthquakes
# ---------------------------------------------------------------------------

class DiagonalBounds(NamedTuple):
    lower: float
    value: float
    upper: float

    @property
    def strict(self) -> bool:
        return self.lower < self.value < self.upper


def diagonal_bounds_check(f: PiecewiseMobiusHomeo, q: Box, t,
                          dps: int | str | None = "auto") -> DiagonalBounds:
    """t + log(e^{L_f(Q)} - 1) < L_{E^t_ac f}(Q) < t + L_f(Q) for the diagonal a -> c."""
    digits = num.dps_for_amplitude(t) if dps == "auto" else dps
    with num.working_precision(digits):
        tt = num.lift(t)
        before = LiouvillePullback(f).mass(q)
        after = LiouvillePullback(elementary_earthquake(f, q.diagonal(), tt)).mass(q)
        lower = tt + num.log(num.exp(before) - 1)
        upper = tt + before
        return DiagonalBounds(float(lower), float(after), float(upper))


def diagonal_closed_form(beta: float, t: float) -> float:
    """log(e^t beta + 1), the mass after a diagonal earthquake on a box of mass log(beta + 1)."""
    return math.log1p(math.exp(t) * beta) if t < 700 else t + math.log(beta + math.exp(-t))


__all__ = [
    "DiagonalBounds", "EarthquakeSpec", "MeasuredLamination", "MonotonicityReport", "RayRow",
    "classify", "convergence_bound", "diagonal_bounds_check", "diagonal_closed_form",
    "earthquake", "earthquake_ray_masses", "elementary_earthquake", "left_earthquake_check",
    "monotonicity_probe",
]
