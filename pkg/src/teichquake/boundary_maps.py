"""Piecewise-Möbius circle homeomorphisms and their Liouville pullbacks.

A map is stored as counterclockwise breakpoints p_0 < p_1 < ... (as angles)
and one Möbius piece per arc: piece i acts on the closed arc [p_i, p_{i+1}],
indices mod n.  No breakpoints means a single global Möbius map.
"""
from __future__ import annotations

import bisect
import math
from typing import NamedTuple

import numpy as np

from . import _numeric as num
from . import sampler as _sampler
from .boxes import LOG2, Box, _mass_unchecked, standard_box
from .errors import ContinuityViolation
from .mobius import (
    TOL,
    BoundaryPoint,
    Mobius,
    ccw_offset,
    compose,
    invert,
    mobius_from_triples,
)
from .sampler import MobiusSampler

STANDARD_TRIPLE_ANGLES = (0.0, math.pi / 2, math.pi)


def standard_triple():
    pi = num.pi()
    return tuple(BoundaryPoint(x) for x in (0, pi / 2, pi))


def _scale(m: Mobius) -> float:
    return max(1.0, float(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d))


class PiecewiseMobiusHomeo:
    """An orientation-preserving circle homeomorphism made of Möbius arcs."""

    def __init__(self, breaks=(), pieces=(), validate: bool = True, tol: float | None = None):
        breaks = list(breaks)
        pieces = list(pieces)
        if not breaks:
            if len(pieces) != 1:
                raise ContinuityViolation("a map without breakpoints needs exactly one piece")
        elif len(pieces) != len(breaks):
            raise ContinuityViolation("need one piece per breakpoint")
        order = sorted(range(len(breaks)), key=lambda i: breaks[i].theta)
        self.breaks: tuple[BoundaryPoint, ...] = tuple(breaks[i] for i in order)
        self.pieces: tuple[Mobius, ...] = tuple(pieces[i] for i in order) if breaks else tuple(pieces)
        self._thetas = [p.theta for p in self.breaks]
        self._float_cache = None
        if validate:
            self.validate(tol)

    @classmethod
    def from_mobius(cls, m: Mobius) -> "PiecewiseMobiusHomeo":
        return cls((), (m,))

    @classmethod
    def identity(cls) -> "PiecewiseMobiusHomeo":
        return cls.from_mobius(Mobius.identity())

    def __repr__(self):
        return f"PiecewiseMobiusHomeo({len(self.breaks)} breaks)"

    def __len__(self):
        return len(self.pieces)

    # -- validation ---------------------------------------------------------

    def validate(self, tol: float | None = None):
        tol = TOL.point if tol is None else tol
        n = len(self.breaks)
        if n <= 1:
            return
        for i in range(n):
            j = (i + 1) % n
            p = self.breaks[j]
            left, right = self.pieces[i](p), self.pieces[j](p)
            slack = tol * max(_scale(self.pieces[i]), _scale(self.pieces[j]))
            if left.distance(right) > slack:
                raise ContinuityViolation(
                    f"pieces {i} and {j} disagree at breakpoint {j} by {float(left.distance(right)):.3e}",
                    piece=i,
                )
        images = [self.pieces[i](self.breaks[i]) for i in range(n)]
        turning = sum(ccw_offset(images[i], images[(i + 1) % n]) for i in range(n))
        if abs(float(turning) - 2 * math.pi) > 1e-6:
            raise ContinuityViolation(
                f"image arcs do not tile the circle (total turning {float(turning):.6f})"
            )

    # -- evaluation ---------------------------------------------------------

    def piece_index(self, p: BoundaryPoint) -> int:
        if not self.breaks:
            return 0
        i = bisect.bisect_right(self._thetas, p.theta) - 1
        return i if i >= 0 else len(self.breaks) - 1

    def __call__(self, p: BoundaryPoint) -> BoundaryPoint:
        return self.pieces[self.piece_index(p)](p)

    def _float_data(self):
        if self._float_cache is None:
            br = np.array([float(t) for t in self._thetas])
            mats = np.array([m.matrix for m in self.pieces]).reshape(-1, 2, 2)
            self._float_cache = (br, mats)
        return self._float_cache

    def apply_angles(self, theta) -> np.ndarray:
        """Vectorized evaluation on an array of angles (double precision)."""
        theta = np.asarray(theta, dtype=float)
        br, mats = self._float_data()
        if len(br) == 0:
            idx = np.zeros(theta.shape, dtype=int)
        else:
            idx = np.searchsorted(br, theta, side="right") - 1
            idx = np.where(idx < 0, len(br) - 1, idx)
        m = mats[idx]
        s, c = np.sin(theta / 2), np.cos(theta / 2)
        s2 = m[..., 0, 0] * s + m[..., 0, 1] * c
        c2 = m[..., 1, 0] * s + m[..., 1, 1] * c
        return np.mod(2 * np.arctan2(s2, c2), 2 * math.pi)

    def arc_midpoints(self):
        n = len(self.breaks)
        out = []
        for i in range(n):
            start = self.breaks[i]
            off = ccw_offset(start, self.breaks[(i + 1) % n]) if n > 1 else num.two_pi()
            out.append(BoundaryPoint(start.theta + off / 2))
        return out


def apply_map(f: PiecewiseMobiusHomeo, p: BoundaryPoint) -> BoundaryPoint:
    return f(p)


def _merge_points(points, tol):
    pts = sorted(points, key=lambda p: p.theta)
    out: list[BoundaryPoint] = []
    for p in pts:
        if out and p.coincides(out[-1], tol):
            continue
        out.append(p)
    if len(out) > 1 and out[0].coincides(out[-1], tol):
        out.pop()
    return out


def post_compose(m: Mobius, f: PiecewiseMobiusHomeo) -> PiecewiseMobiusHomeo:
    """m o f; same breakpoints."""
    return PiecewiseMobiusHomeo(f.breaks, [compose(m, q) for q in f.pieces], validate=False)


def pre_compose(f: PiecewiseMobiusHomeo, m: Mobius) -> PiecewiseMobiusHomeo:
    """f o m; breakpoints pulled back by m."""
    mi = invert(m)
    return PiecewiseMobiusHomeo([mi(p) for p in f.breaks], [compose(q, m) for q in f.pieces],
                                validate=False)


def invert_map(f: PiecewiseMobiusHomeo) -> PiecewiseMobiusHomeo:
    if not f.breaks:
        return PiecewiseMobiusHomeo((), (invert(f.pieces[0]),))
    breaks = [f.pieces[i](f.breaks[i]) for i in range(len(f.breaks))]
    return PiecewiseMobiusHomeo(breaks, [invert(m) for m in f.pieces], validate=False)


def compose_maps(f: PiecewiseMobiusHomeo, g: PiecewiseMobiusHomeo,
                 tol: float | None = None) -> PiecewiseMobiusHomeo:
    """The map p -> f(g(p))."""
    tol = TOL.point if tol is None else tol
    if not g.breaks:
        return pre_compose(f, g.pieces[0])
    if not f.breaks:
        return post_compose(f.pieces[0], g)
    g_inv = invert_map(g)
    breaks = _merge_points(list(g.breaks) + [g_inv(p) for p in f.breaks], tol)
    shell = PiecewiseMobiusHomeo(breaks, [Mobius.identity()] * len(breaks), validate=False)
    pieces = []
    for mid in shell.arc_midpoints():
        gi = g.piece_index(mid)
        fj = f.piece_index(g.pieces[gi](mid))
        pieces.append(compose(f.pieces[fj], g.pieces[gi]))
    out = PiecewiseMobiusHomeo(breaks, pieces, validate=False)
    out.validate(tol)
    return out


# ---------------------------------------------------------------------------
# Liouville pullback
# ---------------------------------------------------------------------------

class LiouvillePullback:
    """The box measure Q -> L(f(Q)) = log crossratio(f(a), f(b), f(c), f(d))."""

    def __init__(self, f: PiecewiseMobiusHomeo):
        self.map = f

    def mass(self, q: Box):
        f = self.map
        return _mass_unchecked(f(q.a), f(q.b), f(q.c), f(q.d))

    def mass_angles(self, corners) -> np.ndarray:
        corners = np.asarray(corners, dtype=float).reshape(-1, 4)
        img = self.map.apply_angles(corners)
        a, b, c, d = img[:, 0], img[:, 1], img[:, 2], img[:, 3]
        with np.errstate(divide="ignore", invalid="ignore"):
            cr = (np.sin((a - c) / 2) * np.sin((b - d) / 2)) / (np.sin((a - d) / 2) * np.sin((b - c) / 2))
            return np.log(cr)


def liouville_current(f: PiecewiseMobiusHomeo) -> LiouvillePullback:
    return LiouvillePullback(f)


# ---------------------------------------------------------------------------
# Teichmüller classes
# ---------------------------------------------------------------------------

def normalize3(f: PiecewiseMobiusHomeo, src=None, dst=None, tol: float | None = None):
    """Post-compose f with the Möbius map sending f(src) to dst."""
    src = standard_triple() if src is None else tuple(src)
    dst = standard_triple() if dst is None else tuple(dst)
    m = mobius_from_triples(tuple(f(p) for p in src), dst, tol)
    return post_compose(m, f)


def weyl_points(count: int, offset: float = 0.5):
    """Low-discrepancy points on the circle (golden-ratio rotation)."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    return [BoundaryPoint(2 * math.pi * ((offset + k * phi) % 1.0)) for k in range(count)]


def max_class_distance(f, g, samples: int = 256) -> float:
    """Largest circular distance between the normalized maps on the test points."""
    nf, ng = normalize3(f), normalize3(g)
    pts = list(f.breaks) + list(g.breaks) + weyl_points(samples)
    return max(float(nf(p).distance(ng(p))) for p in pts)


def class_equal(f, g, tol: float = 1e-9, samples: int = 256) -> bool:
    """Whether f and g differ by post-composition with a Möbius map."""
    return max_class_distance(f, g, samples) <= tol


# ---------------------------------------------------------------------------
# Quasisymmetric constant
# ---------------------------------------------------------------------------

def _breakpoint_biased(f: PiecewiseMobiusHomeo, count: int, seed: int, radius: float = 0.05):
    """Matrices psi with psi^-1(Q_std) symmetric and one corner near a breakpoint."""
    if not f.breaks or count <= 0:
        return np.empty((0, 2, 2))
    rng = np.random.default_rng(seed + 1)
    br = np.array([float(p.theta) for p in f.breaks])
    near = br[rng.integers(0, len(br), count)] + rng.uniform(-radius, radius, count)
    u = np.sort(rng.uniform(0, 2 * math.pi, (count, 2)), axis=1)
    a, b, c = near, near + u[:, 0], near + u[:, 1]
    psi = _sampler.standardizing_matrices(a, b, c)
    # the near point becomes corner a, b, c or d of the pulled-back box
    roll = rng.integers(0, 4, count)
    rot = np.array([_sampler._local_generator(0, -k * math.pi / 2) for k in range(4)])
    psi = np.einsum("sij,sjk->sik", rot[roll], psi)
    ok = np.all(np.isfinite(psi), axis=(1, 2))
    return psi[ok]


def qs_constant_estimate(f: PiecewiseMobiusHomeo, sampler: MobiusSampler | None = None) -> float:
    """Lower bound for sup over symmetric boxes Q of L(f(Q)) / log 2.

    Half of the evaluation budget goes to symmetric boxes with a corner within
    0.05 rad of a breakpoint of f.  With a rotation count divisible by 4 the
    grid contains Q_std and its orthogonal box, so the result is at least 1
    up to rounding.
    """
    sampler = sampler or MobiusSampler()
    pull = LiouvillePullback(f)
    std = np.array([float(x) for x in standard_box().angles()])

    def objective(mats):
        inv = _sampler.inverse_matrices(mats)
        corners = _sampler.apply_matrices_to_angles(inv, np.broadcast_to(std, (len(inv), 4)))
        return pull.mass_angles(corners) / LOG2

    def extra(s):
        return _breakpoint_biased(f, len(s.grid_params()) + s.random_samples, s.seed)

    value, _ = _sampler.maximize(objective, sampler, extra=extra)
    return value


# ---------------------------------------------------------------------------
# Projective rigidity
# ---------------------------------------------------------------------------

def rigid_scale(mass, mass_perp, tol: float = 1e-15) -> float:
    """The unique t > 0 with exp(-t L) + exp(-t L_perp) = 1.

    The left side is strictly decreasing in t, so bisection is exact up to
    ``tol``.  For Liouville masses of a box and its orthogonal box the answer
    is 1: no nontrivial multiple of a Liouville current is again Liouville.
    """
    mass, mass_perp = float(mass), float(mass_perp)

    def g(t):
        return math.exp(-t * mass) + math.exp(-t * mass_perp) - 1.0

    lo, hi = 1e-12, 1.0
    while g(hi) > 0:
        hi *= 2.0
    while g(lo) < 0:
        lo /= 2.0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class ScalingSolution(NamedTuple):
    t: float
    t_ortho: float
    fit_residual: float

    def consistent(self, tol: float = 1e-9) -> bool:
        return abs(self.t - self.t_ortho) <= tol and self.fit_residual <= tol


def solve_scaling(l1, l1_perp, l2, l2_perp) -> ScalingSolution:
    """Recover t from L2 = t L1 on a box and its orthogonal box.

    ``t`` is the least-squares fit of (L2, L2_perp) against (L1, L1_perp);
    ``t_ortho`` is the scale forced on t L1 by the ortho identity.  When both
    pairs are Liouville masses the two can only agree at t = 1.
    """
    l1, l1_perp, l2, l2_perp = (float(x) for x in (l1, l1_perp, l2, l2_perp))
    t = (l1 * l2 + l1_perp * l2_perp) / (l1 * l1 + l1_perp * l1_perp)
    residual = max(abs(l2 - t * l1), abs(l2_perp - t * l1_perp))
    return ScalingSolution(t, rigid_scale(l1, l1_perp), residual)
