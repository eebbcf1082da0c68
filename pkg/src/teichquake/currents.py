"""Geodesic currents seen through their masses on boxes.

Atomic currents store each atom once, unoriented; both orientations of the
geodesic carry the full weight, so every current here is balanced.  Anything
with a ``mass(box)`` method counts as a box measure; a vectorized
``mass_angles`` (corner angles of shape (N, 4) -> masses (N,)) is used by the
sampling estimators when available.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Protocol, runtime_checkable

import numpy as np

from . import sampler as _sampler
from .boxes import STANDARD_BOX, Box, box_contains, boxes_to_array
from .errors import EmptyFamily, GeometryError, NotALamination, NotAtomic
from .mobius import TOL, BoundaryPoint, Geodesic, Mobius, geodesics_cross
from .sampler import MobiusSampler

TWO_PI = 2 * math.pi


@runtime_checkable
class BoxMeasure(Protocol):
    def mass(self, q: Box) -> float: ...


class Atom(NamedTuple):
    geodesic: Geodesic
    weight: float


def _canonical(g: Geodesic) -> Geodesic:
    return g if g.tail.theta < g.head.theta else g.reverse()


def _same_unoriented(g: Geodesic, h: Geodesic, tol) -> bool:
    return (g.tail.coincides(h.tail, tol) and g.head.coincides(h.head, tol)) or (
        g.tail.coincides(h.head, tol) and g.head.coincides(h.tail, tol)
    )


class AtomicCurrent:
    """A finite sum of weighted Dirac masses on unoriented geodesics."""

    def __init__(self, atoms=(), tol: float | None = None):
        tol = TOL.point if tol is None else tol
        merged: list[list] = []
        for item in atoms:
            g, w = (item.geodesic, item.weight) if isinstance(item, Atom) else item
            if not w > 0:
                raise GeometryError(f"atom weight must be positive, got {w!r}")
            g = _canonical(g)
            for entry in merged:
                if _same_unoriented(entry[0], g, tol):
                    entry[1] += w
                    break
            else:
                merged.append([g, w])
        merged.sort(key=lambda e: (float(e[0].tail.theta), float(e[0].head.theta)))
        self.atoms: tuple[Atom, ...] = tuple(Atom(g, w) for g, w in merged)

    def __repr__(self):
        return f"{type(self).__name__}({len(self.atoms)} atoms)"

    def __len__(self):
        return len(self.atoms)

    def __eq__(self, other):
        if not isinstance(other, AtomicCurrent) or len(self) != len(other):
            return False
        return all(
            _same_unoriented(a.geodesic, b.geodesic, TOL.point) and abs(a.weight - b.weight) < TOL.compare
            for a, b in zip(self.atoms, other.atoms)
        )

    def total_weight(self) -> float:
        return sum(a.weight for a in self.atoms)

    def scaled(self, s: float):
        if not s > 0:
            raise GeometryError("scale must be positive")
        return type(self)([(a.geodesic, s * a.weight) for a in self.atoms])

    def mass(self, q: Box) -> float:
        total = 0.0
        for g, w in self.atoms:
            if box_contains(q, g) or box_contains(q, g.reverse()):
                total += w
        return total

    def endpoint_array(self) -> np.ndarray:
        return np.array([[float(g.tail.theta), float(g.head.theta)] for g, _ in self.atoms]).reshape(-1, 2)

    def weight_array(self) -> np.ndarray:
        return np.array([float(w) for _, w in self.atoms])

    def mass_angles(self, corners: np.ndarray) -> np.ndarray:
        corners = np.asarray(corners, dtype=float).reshape(-1, 4)
        if not self.atoms:
            return np.zeros(len(corners))
        ends = self.endpoint_array()
        x, y = ends[:, 0][None, :], ends[:, 1][None, :]
        a, b, c, d = (corners[:, i][:, None] for i in range(4))
        fwd = _in_closed_arc(x, a, b) & _in_closed_arc(y, c, d)
        rev = _in_closed_arc(y, a, b) & _in_closed_arc(x, c, d)
        return ((fwd | rev) * self.weight_array()[None, :]).sum(axis=1)


def _in_closed_arc(p, start, end, tol: float | None = None):
    tol = TOL.point if tol is None else tol
    off = np.mod(p - start, TWO_PI)
    length = np.mod(end - start, TWO_PI)
    near_start = np.minimum(off, TWO_PI - off) < tol
    dend = np.abs(np.mod(p - end + math.pi, TWO_PI) - math.pi)
    return (off < length) | near_start | (dend < tol)


def is_measured_lamination(alpha: AtomicCurrent) -> bool:
    atoms = alpha.atoms
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            if geodesics_cross(atoms[i].geodesic, atoms[j].geodesic):
                return False
    return True


class MeasuredLamination(AtomicCurrent):
    """An atomic current whose support geodesics pairwise do not cross."""

    def __init__(self, atoms=(), tol: float | None = None):
        super().__init__(atoms, tol)
        if not is_measured_lamination(self):
            raise NotALamination("support geodesics cross")


class DifferenceMeasure:
    """The signed measure alpha - beta."""

    def __init__(self, alpha, beta):
        self.alpha, self.beta = alpha, beta

    def mass(self, q: Box) -> float:
        return float(self.alpha.mass(q)) - float(self.beta.mass(q))

    def mass_angles(self, corners):
        return masses_of(self.alpha, corners) - masses_of(self.beta, corners)


def masses_of(alpha, corners: np.ndarray) -> np.ndarray:
    """Vectorized masses of boxes given by corner angles; falls back to a loop."""
    corners = np.asarray(corners, dtype=float).reshape(-1, 4)
    if hasattr(alpha, "mass_angles"):
        return np.asarray(alpha.mass_angles(corners), dtype=float)
    out = np.empty(len(corners))
    for i, row in enumerate(corners):
        out[i] = float(alpha.mass(Box.from_angles(*row)))
    return out


@dataclass(frozen=True)
class StepFunction:
    """sum_i w_i * indicator(Q_i)."""

    terms: tuple

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple((q, float(w)) for q, w in terms))

    @classmethod
    def indicator(cls, q: Box, weight: float = 1.0) -> "StepFunction":
        return cls([(q, weight)])


def mass(alpha, q: Box):
    return alpha.mass(q)


def is_generic(alpha, q: Box, tol: float | None = None) -> bool:
    """No atom of ``alpha`` has an endpoint at a corner of ``q``."""
    if not hasattr(alpha, "atoms"):
        raise NotAtomic("genericity is decided only for atomic currents")
    for g, _ in alpha.atoms:
        for p in g.endpoints():
            for corner in q.corners():
                if p.coincides(corner, tol):
                    return False
    return True


def jitter_box(q: Box, eps: float = 1e-6) -> Box:
    """Rotate every corner by a fixed small angle, the standard way to restore genericity."""
    return Box(*(BoundaryPoint(p.theta + eps) for p in q.corners()))


def integrate(alpha, xi: StepFunction) -> float:
    return sum(w * float(alpha.mass(q)) for q, w in xi.terms)


def pushforward(alpha: AtomicCurrent, h):
    """Image of ``alpha`` under a boundary homeomorphism ``h`` (any callable on points)."""
    atoms = [(Geodesic(h(g.tail), h(g.head)), w) for g, w in alpha.atoms]
    return type(alpha)(atoms)


def weak_seminorm(alpha, xi: StepFunction) -> float:
    return abs(integrate(alpha, xi))


def _pulled_corners(inv: np.ndarray, q: Box) -> np.ndarray:
    ang = np.array([float(x) for x in q.angles()])
    return _sampler.apply_matrices_to_angles(inv, np.broadcast_to(ang, (len(inv), 4)))


def _integral_objective(alpha, xi: StepFunction):
    """phi -> |integral of xi o phi d alpha| = |sum_i w_i alpha(phi^-1 Q_i)|."""

    def objective(mats: np.ndarray) -> np.ndarray:
        inv = _sampler.inverse_matrices(mats)
        total = np.zeros(len(mats))
        for q, w in xi.terms:
            total += w * masses_of(alpha, _pulled_corners(inv, q))
        return np.abs(total)

    return objective


def uniform_seminorm_estimate(alpha, xi: StepFunction, sampler: MobiusSampler | None = None) -> float:
    """Lower bound for sup over Möbius phi of |integral of xi o phi d alpha|."""
    sampler = sampler or MobiusSampler()
    if not xi.terms:
        return 0.0
    value, _ = _sampler.maximize(_integral_objective(alpha, xi), sampler)
    return max(value, 0.0)


def uniform_seminorm_witness(alpha, xi: StepFunction, sampler: MobiusSampler | None = None):
    """Like ``uniform_seminorm_estimate`` but also returns the maximizing map."""
    sampler = sampler or MobiusSampler()
    value, mat = _sampler.maximize(_integral_objective(alpha, xi), sampler)
    return max(value, 0.0), Mobius.from_matrix(mat)


def current_metric_estimate(alpha, beta, family, sampler: MobiusSampler | None = None) -> float:
    """sum_{i>=1} 2^-i min(1, ||alpha - beta||_{xi_i}) over the given finite family.

    The seminorms are maximized over the sampler's fixed sample set only (no
    refinement), so the estimate is an honest pseudometric: it satisfies the
    triangle inequality exactly.
    """
    family = list(family)
    if not family:
        raise EmptyFamily("metric needs at least one test function")
    sampler = sampler or MobiusSampler()
    diff = DifferenceMeasure(alpha, beta)
    total = 0.0
    for i, xi in enumerate(family, start=1):
        if xi.terms:
            est, _ = _sampler.maximize(_integral_objective(diff, xi), sampler, refine=False)
        else:
            est = 0.0
        total += 2.0 ** (-i) * min(1.0, max(est, 0.0))
    return total


def standard_indicator() -> StepFunction:
    return StepFunction.indicator(STANDARD_BOX)


__all__ = [
    "Atom", "AtomicCurrent", "BoxMeasure", "DifferenceMeasure", "MeasuredLamination",
    "StepFunction", "boxes_to_array", "current_metric_estimate", "integrate", "is_generic",
    "is_measured_lamination", "jitter_box", "mass", "masses_of", "pushforward",
    "standard_indicator", "uniform_seminorm_estimate", "uniform_seminorm_witness",
    "weak_seminorm",
]
