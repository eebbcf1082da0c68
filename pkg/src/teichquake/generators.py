"""Seeded random boxes, maps and laminations for experiments and tests."""
from __future__ import annotations

import math

import numpy as np

from .boundary_maps import PiecewiseMobiusHomeo
from .boxes import Box
from .currents import MeasuredLamination
from .earthquakes import earthquake
from .mobius import BoundaryPoint, Geodesic, Mobius

TWO_PI = 2 * math.pi


def _circ_gap(x: float, y: float) -> float:
    d = abs(x - y) % TWO_PI
    return min(d, TWO_PI - d)


def _min_cyclic_gap(angles) -> float:
    s = np.sort(np.mod(angles, TWO_PI))
    gaps = np.diff(np.concatenate([s, [s[0] + TWO_PI]]))
    return float(gaps.min())


def random_point(rng) -> BoundaryPoint:
    return BoundaryPoint(rng.uniform(0, TWO_PI))


def random_box(rng, min_gap: float = 1e-3, avoid=(), margin: float = 0.0) -> Box:
    """Uniform corners, resampled until corners are ``min_gap`` apart and
    ``margin`` away from every angle in ``avoid``."""
    avoid = np.asarray(list(avoid), dtype=float)
    while True:
        th = np.sort(rng.uniform(0, TWO_PI, 4))
        if _min_cyclic_gap(th) < min_gap:
            continue
        if avoid.size and min(_circ_gap(t, x) for t in th for x in avoid) < margin:
            continue
        return Box.from_angles(*th)


def random_mobius(rng, scale: float = 1.0) -> Mobius:
    """Rotation, then a dilation and shear with Gaussian parameters of size ``scale``."""
    rot = Mobius.rotation(rng.uniform(0, TWO_PI))
    dil = Mobius.dilation(scale * rng.normal())
    sh = Mobius.shear(scale * rng.normal())
    return sh @ dil @ rot


def _noncrossing_pairs(idx: list[int], rng) -> list[tuple[int, int]]:
    if not idx:
        return []
    j = int(rng.choice(range(1, len(idx), 2)))
    return ([(idx[0], idx[j])] + _noncrossing_pairs(idx[1:j], rng)
            + _noncrossing_pairs(idx[j + 1:], rng))


def random_lamination(rng, atoms: int, weights=(0.2, 1.0), min_sep: float = 0.05) -> MeasuredLamination:
    """``atoms`` pairwise disjoint leaves with endpoints at least ``min_sep`` apart."""
    while True:
        th = np.sort(rng.uniform(0, TWO_PI, 2 * atoms))
        if atoms and _min_cyclic_gap(th) < min_sep:
            continue
        pairs = _noncrossing_pairs(list(range(2 * atoms)), rng)
        leaves = [
            (Geodesic.from_angles(th[i], th[j]), float(rng.uniform(*weights)))
            for i, j in pairs
        ]
        return MeasuredLamination(leaves)


def random_piecewise_map(rng, max_pieces: int = 16, amplitude=(0.2, 2.0)) -> PiecewiseMobiusHomeo:
    """A random Möbius map followed by an earthquake on at most max_pieces/2 leaves."""
    k = int(rng.integers(1, max_pieces // 2 + 1))
    lam = random_lamination(rng, k)
    base = PiecewiseMobiusHomeo.from_mobius(random_mobius(rng))
    return earthquake(base, lam, float(rng.uniform(*amplitude)))


def lamination_endpoints(lam) -> list[float]:
    return [float(p.theta) for g, _ in lam.atoms for p in g.endpoints()]


def random_generic_box(rng, lam, margin: float = 0.05, min_gap: float = 0.05) -> Box:
    """A box whose corners stay ``margin`` away from every atom endpoint."""
    return random_box(rng, min_gap=min_gap, avoid=lamination_endpoints(lam), margin=margin)


def escaping_geodesic(n: int, center: float = math.pi / 4, scale: float = 1.0) -> Geodesic:
    """Endpoints center -+ scale/(2n): the geodesics leave every compact set of G(D)."""
    half = scale / (2.0 * n)
    return Geodesic.from_angles(center - half, center + half)
