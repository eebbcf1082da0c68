"""Boundary points, Möbius maps, oriented geodesics and crossratios.

Points of the circle at infinity are stored as angles on the unit circle.
The upper half-plane is only a view: the Cayley transform sends the angle
``theta`` to the real number ``tan(theta / 2)``, so ``theta = pi`` is the point
at infinity.  Möbius maps are 2x2 real matrices of determinant one acting on
the half-plane chart; on angles they act linearly on the half-angle vector
``(sin(theta/2), cos(theta/2))``, which avoids any special case at infinity.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _numeric as num
from .errors import (
    DegeneratePoints,
    DegenerateTriple,
    GeometryError,
    NotOrientationPreserving,
    OrientationMismatch,
    PointOnGeodesicEndpoint,
)


@dataclass
class Tolerances:
    point: float = 1e-10
    det: float = 1e-12
    compare: float = 1e-9


TOL = Tolerances()


# ---------------------------------------------------------------------------
# Boundary points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the circle at infinity, as an angle in [0, 2pi)."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", num.mod_two_pi(num.lift(self.theta)))

    @classmethod
    def from_real(cls, x) -> "BoundaryPoint":
        """Point of the half-plane chart; ``math.inf`` (either sign) is infinity."""
        if math.isinf(float(x)):
            return cls(num.pi())
        return cls(2 * num.atan2(num.lift(x), num.lift(1)))

    @classmethod
    def from_complex(cls, w: complex) -> "BoundaryPoint":
        return cls(math.atan2(w.imag, w.real))

    def to_real(self) -> float:
        if self.theta == num.pi():
            return math.inf
        s, c = self.half_vector()
        if c == 0:
            return math.inf
        return s / c

    def to_complex(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))

    def half_vector(self):
        h = self.theta / 2
        return num.sin(h), num.cos(h)

    def distance(self, other: "BoundaryPoint"):
        """Circular distance in radians."""
        d = abs(self.theta - other.theta)
        tp = num.two_pi()
        return min(d, tp - d)

    def coincides(self, other: "BoundaryPoint", tol: float | None = None) -> bool:
        return self.distance(other) < (TOL.point if tol is None else tol)

    def __float__(self):
        return float(self.theta)


def _from_half_vector(s, c) -> BoundaryPoint:
    return BoundaryPoint(2 * num.atan2(s, c))


def ccw_offset(start: BoundaryPoint, end: BoundaryPoint):
    """Length of the counterclockwise arc from ``start`` to ``end``."""
    return num.mod_two_pi(end.theta - start.theta)


def in_open_arc(p: BoundaryPoint, start: BoundaryPoint, end: BoundaryPoint) -> bool:
    """Whether ``p`` lies strictly inside the counterclockwise arc (start, end)."""
    off = ccw_offset(start, p)
    return 0 < off < ccw_offset(start, end)


def in_closed_arc(p, start, end, tol: float | None = None) -> bool:
    if p.coincides(start, tol) or p.coincides(end, tol):
        return True
    return in_open_arc(p, start, end)


def is_ccw(p1: BoundaryPoint, p2: BoundaryPoint, p3: BoundaryPoint) -> bool:
    """Whether three distinct points occur counterclockwise in this order."""
    return 0 < ccw_offset(p1, p2) < ccw_offset(p1, p3)


# ---------------------------------------------------------------------------
# Möbius maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mobius:
    """z -> (a z + b) / (c z + d) on the half-plane chart, normalized to det 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = (num.lift(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if not det > 0:
            raise NotOrientationPreserving(f"determinant {float(det)!r} is not positive")
        if abs(det - 1) > TOL.det:
            r = num.sqrt(det)
            a, b, c, d = a / r, b / r, c / r, d / r
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, v)

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m) -> "Mobius":
        return cls(m[0][0], m[0][1], m[1][0], m[1][1])

    @classmethod
    def rotation(cls, psi) -> "Mobius":
        """Rotation of the disk by ``psi``: theta -> theta + psi."""
        h = num.lift(psi) / 2
        return cls(num.cos(h), num.sin(h), -num.sin(h), num.cos(h))

    @classmethod
    def dilation(cls, a) -> "Mobius":
        """z -> exp(a) z, the translation of length a along (0, inf)."""
        e = num.exp(num.lift(a) / 2)
        return cls(e, 0, 0, 1 / e)

    @classmethod
    def shear(cls, n) -> "Mobius":
        """z -> z + n."""
        return cls(1, n, 0, 1)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[float(self.a), float(self.b)], [float(self.c), float(self.d)]])

    def det(self):
        return self.a * self.d - self.b * self.c

    def __call__(self, p: BoundaryPoint) -> BoundaryPoint:
        return apply(self, p)

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return compose(self, other)

    def inverse(self) -> "Mobius":
        return invert(self)

    def is_close(self, other: "Mobius", tol: float | None = None) -> bool:
        """Equality in PSL(2,R): matrices agree up to sign."""
        tol = TOL.compare if tol is None else tol
        m, n = self.matrix, other.matrix
        return bool(np.max(np.abs(m - n)) < tol or np.max(np.abs(m + n)) < tol)


def apply(m: Mobius, p: BoundaryPoint) -> BoundaryPoint:
    s, c = p.half_vector()
    return _from_half_vector(m.a * s + m.b * c, m.c * s + m.d * c)


def compose(m1: Mobius, m2: Mobius) -> Mobius:
    """The map p -> m1(m2(p))."""
    return Mobius(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )


def invert(m: Mobius) -> Mobius:
    return Mobius(m.d, -m.b, -m.c, m.a)


# ---------------------------------------------------------------------------
# Geodesics
# ---------------------------------------------------------------------------

class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    def opposite(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class Geodesic:
    """An oriented complete geodesic, given by its endpoints at infinity."""

    tail: BoundaryPoint
    head: BoundaryPoint

    def __post_init__(self):
        if self.tail.coincides(self.head):
            raise DegeneratePoints("geodesic endpoints coincide")

    @classmethod
    def from_angles(cls, tail, head) -> "Geodesic":
        return cls(BoundaryPoint(tail), BoundaryPoint(head))

    @classmethod
    def from_reals(cls, tail, head) -> "Geodesic":
        return cls(BoundaryPoint.from_real(tail), BoundaryPoint.from_real(head))

    def reverse(self) -> "Geodesic":
        return Geodesic(self.head, self.tail)

    def endpoints(self):
        return self.tail, self.head


def reverse(g: Geodesic) -> Geodesic:
    return g.reverse()


def _translation_matrix(tail: BoundaryPoint, head: BoundaryPoint, t) -> Mobius:
    """Hyperbolic translation by ``t`` along tail -> head (head attracting).

    Built from the eigenvectors directly, so it is usable for image geodesics
    whose endpoints are closer than the point tolerance.
    """
    hs, hc = head.half_vector()
    us, uc = tail.half_vector()
    e = num.exp(num.lift(t) / 2)
    ie = 1 / e
    det_p = hs * uc - us * hc
    return Mobius(
        (hs * uc * e - us * hc * ie) / det_p,
        hs * us * (ie - e) / det_p,
        hc * uc * (e - ie) / det_p,
        (uc * hs * ie - hc * us * e) / det_p,
    )


def translation_along(g: Geodesic, t) -> Mobius:
    """The isometry fixing both ends of ``g`` moving points by ``t`` toward its head."""
    return _translation_matrix(g.tail, g.head, t)


def translation_length(m: Mobius) -> float:
    """Unsigned translation length of a hyperbolic element, 2 arccosh(|trace|/2)."""
    tr = abs(float(m.a + m.d))
    return 2.0 * math.acosh(max(tr / 2.0, 1.0))


def _orientation(p1, p2, p3) -> int:
    if is_ccw(p1, p2, p3):
        return 1
    return -1


def _to_standard(p1, p2, p3):
    """Matrix sending p1, p2, p3 to 0, 1, infinity (not normalized)."""
    v1, v2, v3 = p1.half_vector(), p2.half_vector(), p3.half_vector()

    def br(u, v):
        return u[0] * v[1] - u[1] * v[0]

    k1 = br(v3, v2)
    k3 = br(v1, v2)
    # rows annihilate v1 (-> 0) and v3 (-> infinity)
    return [[-k1 * v1[1], k1 * v1[0]], [-k3 * v3[1], k3 * v3[0]]]


def mobius_from_triples(src, dst, tol: float | None = None) -> Mobius:
    """The unique Möbius map sending src[i] to dst[i] for i = 0, 1, 2."""
    for triple in (src, dst):
        p1, p2, p3 = triple
        if p1.coincides(p2, tol) or p2.coincides(p3, tol) or p1.coincides(p3, tol):
            raise DegenerateTriple("triple has coincident points")
    if _orientation(*src) != _orientation(*dst):
        raise OrientationMismatch("triples have opposite cyclic orientation")
    s = _to_standard(*src)
    t = _to_standard(*dst)
    # dst^-1 o src with adjugate inverse
    ti = [[t[1][1], -t[0][1]], [-t[1][0], t[0][0]]]
    m = [
        [ti[0][0] * s[0][0] + ti[0][1] * s[1][0], ti[0][0] * s[0][1] + ti[0][1] * s[1][1]],
        [ti[1][0] * s[0][0] + ti[1][1] * s[1][0], ti[1][0] * s[0][1] + ti[1][1] * s[1][1]],
    ]
    return Mobius.from_matrix(m)


# ---------------------------------------------------------------------------
# Crossratios
# ---------------------------------------------------------------------------

def _crossratio_angles(ta, tb, tc, td):
    """(a-c)(b-d) / ((a-d)(b-c)) for points e^{i theta} of the unit circle.

    Each chord difference is e^{i(s+t)/2} 2i sin((s-t)/2); the phases cancel,
    leaving a ratio of sines with no chart pole anywhere.
    """
    return (num.sin((ta - tc) / 2) * num.sin((tb - td) / 2)) / (
        num.sin((ta - td) / 2) * num.sin((tb - tc) / 2)
    )


def crossratio(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint, d: BoundaryPoint,
               tol: float | None = None):
    pts = (a, b, c, d)
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i].coincides(pts[j], tol):
                raise DegeneratePoints(f"points {i} and {j} coincide")
    return _crossratio_angles(a.theta, b.theta, c.theta, d.theta)


def crossratio_complex(z1: complex, z2: complex, z3: complex, z4: complex) -> complex:
    """The crossratio formula evaluated literally in any complex chart."""
    return (z1 - z3) * (z2 - z4) / ((z1 - z4) * (z2 - z3))


def crossratio_halfplane(x1: float, x2: float, x3: float, x4: float) -> float:
    """Crossratio of four points of the extended real line (one may be infinite)."""
    xs = [x1, x2, x3, x4]
    inf = [math.isinf(x) for x in xs]
    if sum(inf) > 1:
        raise DegeneratePoints("more than one point at infinity")
    if not any(inf):
        return (x1 - x3) * (x2 - x4) / ((x1 - x4) * (x2 - x3))
    # drop the factors containing the infinite point; their ratio tends to 1
    k = inf.index(True)
    num_pairs = [(0, 2), (1, 3)]
    den_pairs = [(0, 3), (1, 2)]
    top = 1.0
    for i, j in num_pairs:
        if k not in (i, j):
            top *= xs[i] - xs[j]
    bot = 1.0
    for i, j in den_pairs:
        if k not in (i, j):
            bot *= xs[i] - xs[j]
    # the two dropped factors are (inf - x)/(inf - y) or (x - inf)/(y - inf) -> 1
    return top / bot


# ---------------------------------------------------------------------------
# Sides and crossings
# ---------------------------------------------------------------------------

def side_of(g: Geodesic, p: BoundaryPoint, tol: float | None = None) -> Side:
    """LEFT iff ``p`` is in the open counterclockwise arc from head(g) to tail(g)."""
    if p.coincides(g.tail, tol) or p.coincides(g.head, tol):
        raise PointOnGeodesicEndpoint("point is an endpoint of the geodesic")
    return Side.LEFT if in_open_arc(p, g.head, g.tail) else Side.RIGHT


def geodesics_cross(g1: Geodesic, g2: Geodesic, tol: float | None = None) -> bool:
    """Whether the two geodesics meet in the interior of the disk."""
    for p in g1.endpoints():
        for q in g2.endpoints():
            if p.coincides(q, tol):
                return False
    inside = [in_open_arc(q, g1.tail, g1.head) for q in g2.endpoints()]
    return inside[0] != inside[1]


__all__ = [
    "BoundaryPoint", "Geodesic", "GeometryError", "Mobius", "Side", "TOL", "Tolerances",
    "apply", "ccw_offset", "compose", "crossratio", "crossratio_complex",
    "crossratio_halfplane", "geodesics_cross", "in_closed_arc", "in_open_arc", "invert",
    "is_ccw", "mobius_from_triples", "reverse", "side_of", "translation_along",
    "translation_length",
]
