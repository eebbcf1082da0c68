"""Boxes of geodesics [a,b] x [c,d] and their Liouville masses."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _numeric as num
from .errors import InvalidBox
from .mobius import (
    BoundaryPoint,
    Geodesic,
    Mobius,
    _crossratio_angles,
    ccw_offset,
    crossratio,
    in_closed_arc,
)

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class Box:
    """All geodesics with tail in the arc [a,b] and head in the arc [c,d].

    The corners must be pairwise distinct and occur counterclockwise.
    """

    a: BoundaryPoint
    b: BoundaryPoint
    c: BoundaryPoint
    d: BoundaryPoint

    def __post_init__(self):
        pts = self.corners()
        for i in range(4):
            for j in range(i + 1, 4):
                if pts[i].coincides(pts[j]):
                    raise InvalidBox(f"corners {'abcd'[i]} and {'abcd'[j]} coincide")
        ob, oc, od = (ccw_offset(self.a, p) for p in (self.b, self.c, self.d))
        if not (ob < oc < od):
            raise InvalidBox("corners are not in counterclockwise order")

    @classmethod
    def from_angles(cls, a, b, c, d) -> "Box":
        return cls(*(BoundaryPoint(x) for x in (a, b, c, d)))

    @classmethod
    def from_reals(cls, a, b, c, d) -> "Box":
        """Corners given in the half-plane chart (``math.inf`` allowed)."""
        return cls(*(BoundaryPoint.from_real(x) for x in (a, b, c, d)))

    def corners(self):
        return (self.a, self.b, self.c, self.d)

    def angles(self):
        return tuple(p.theta for p in self.corners())

    def diagonal(self) -> Geodesic:
        """The geodesic a -> c."""
        return Geodesic(self.a, self.c)


STANDARD_BOX = Box.from_angles(0.0, math.pi / 2, math.pi, 3 * math.pi / 2)


def standard_box() -> Box:
    """[1, i] x [-1, -i], rebuilt so it picks up the active precision."""
    pi = num.pi()
    return Box.from_angles(0, pi / 2, pi, 3 * pi / 2)


def liouville_mass(q: Box):
    return num.log(crossratio(q.a, q.b, q.c, q.d))


def ortho(q: Box) -> Box:
    """The orthogonal box [b,c] x [d,a]."""
    return Box(q.b, q.c, q.d, q.a)


def is_symmetric(q: Box, tol: float = 1e-9) -> bool:
    return abs(liouville_mass(q) - num.log(num.lift(2))) <= tol


def image_box(phi: Mobius, q: Box) -> Box:
    return Box(*(phi(p) for p in q.corners()))


def box_contains(q: Box, g: Geodesic, tol: float | None = None) -> bool:
    """Closed-arc membership: tail in [a,b] and head in [c,d]."""
    return in_closed_arc(g.tail, q.a, q.b, tol) and in_closed_arc(g.head, q.c, q.d, tol)


def ortho_residual(mass, mass_perp):
    """exp(-L(Q)) + exp(-L(Q^perp)) - 1, which vanishes for Liouville masses."""
    if isinstance(mass, np.ndarray) or isinstance(mass_perp, np.ndarray):
        return np.exp(-np.asarray(mass)) + np.exp(-np.asarray(mass_perp)) - 1.0
    return num.exp(-mass) + num.exp(-mass_perp) - 1


def box_from_triple_image(phi: Mobius) -> Box:
    """phi applied to the standard box; every symmetric box arises this way."""
    return image_box(phi, standard_box())


# ---------------------------------------------------------------------------
# Vectorized helpers (double precision)
# ---------------------------------------------------------------------------

def liouville_mass_angles(angles: np.ndarray) -> np.ndarray:
    """Masses of boxes given as an (N, 4) array of corner angles."""
    angles = np.asarray(angles, dtype=float)
    a, b, c, d = angles[..., 0], angles[..., 1], angles[..., 2], angles[..., 3]
    cr = (np.sin((a - c) / 2) * np.sin((b - d) / 2)) / (np.sin((a - d) / 2) * np.sin((b - c) / 2))
    return np.log(cr)


def boxes_to_array(boxes) -> np.ndarray:
    return np.array([[float(x) for x in q.angles()] for q in boxes], dtype=float).reshape(-1, 4)


def _mass_unchecked(a, b, c, d):
    return num.log(_crossratio_angles(a.theta, b.theta, c.theta, d.theta))
