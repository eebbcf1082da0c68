import math

import numpy as np
import pytest

from teichquake import (
    AtomicCurrent,
    Box,
    EarthquakeSpec,
    Geodesic,
    MeasuredLamination,
    PiecewiseMobiusHomeo,
    class_equal,
    diagonal_bounds_check,
    diagonal_closed_form,
    earthquake,
    earthquake_ray_masses,
    elementary_earthquake,
    left_earthquake_check,
    liouville_current,
    monotonicity_probe,
    standard_box,
)
from teichquake.earthquakes import classify, convergence_bound
from teichquake.errors import BoxNotAligned, ConfigurationUnclassified, NonGenericBox, NotALamination
from teichquake.generators import random_generic_box, random_lamination, random_mobius, random_piecewise_map

LOG2 = math.log(2)
IDENT = PiecewiseMobiusHomeo.identity()


def L(f, q):
    return float(liouville_current(f).mass(q))


# -- elementary earthquakes ----------------------------------------------------

def test_zero_amplitude(rng):
    f = random_piecewise_map(rng)
    assert class_equal(elementary_earthquake(f, Geodesic.from_angles(0.3, 2.0), 0.0), f)


def test_diagonal_log3():
    q = standard_box()
    assert L(elementary_earthquake(IDENT, q.diagonal(), LOG2), q) == pytest.approx(math.log(3), abs=1e-12)


def test_corners_on_one_side_unchanged(rng):
    q = standard_box()
    f = random_piecewise_map(rng)
    for g in (Geodesic.from_angles(0.2, 1.2), Geodesic.from_angles(1.2, 0.2)):
        assert L(elementary_earthquake(f, g, 1.3), q) == pytest.approx(L(f, q), abs=1e-9)


def test_orientation_independent(rng):
    for _ in range(10):
        f = random_piecewise_map(rng)
        lam = random_lamination(rng, 1)
        g = lam.atoms[0].geodesic
        t = rng.uniform(0.1, 2.0)
        assert class_equal(elementary_earthquake(f, g, t), elementary_earthquake(f, g.reverse(), t), 1e-8)


def test_result_is_valid_homeomorphism(rng):
    f = random_piecewise_map(rng)
    out = elementary_earthquake(f, Geodesic.from_angles(1.0, 4.0), 2.0)
    out.validate()


# -- composite earthquakes ----------------------------------------------------

def test_single_atom_matches_elementary(rng):
    g = Geodesic.from_angles(0.5, 2.5)
    lam = MeasuredLamination([(g, 0.7)])
    f = random_piecewise_map(rng)
    assert class_equal(earthquake(f, EarthquakeSpec(lam, 1.5)), elementary_earthquake(f, g, 1.05), 1e-9)


def test_disjoint_atoms_commute(rng):
    for _ in range(10):
        g1, g2 = (a.geodesic for a in random_lamination(rng, 2).atoms)
        f = random_piecewise_map(rng)
        one = elementary_earthquake(elementary_earthquake(f, g1, 0.8), g2, 1.1)
        two = elementary_earthquake(elementary_earthquake(f, g2, 1.1), g1, 0.8)
        assert class_equal(one, two, 1e-8)


def test_crossing_atoms_rejected():
    crossing = AtomicCurrent([(Geodesic.from_angles(0, math.pi), 1.0),
                              (Geodesic.from_angles(math.pi / 2, 3 * math.pi / 2), 1.0)])
    with pytest.raises(NotALamination):
        EarthquakeSpec(crossing)
    with pytest.raises(NotALamination):
        earthquake(IDENT, crossing, 1.0)


@pytest.mark.parametrize("s", [0.3, 0.7, 1.1])
@pytest.mark.parametrize("t", [0.3, 0.7, 1.1])
def test_flow_property(s, t):
    rng = np.random.default_rng(int(10 * s + 100 * t))
    lam = random_lamination(rng, 3)
    f = random_piecewise_map(rng, max_pieces=6)
    twice = earthquake(earthquake(f, lam, s), lam, t)
    assert class_equal(twice, earthquake(f, lam, s + t), 1e-8)


# -- left earthquake inequality --------------------------------------------------

def _aligned_boxes(rng, lam, count=5):
    """Boxes whose diagonal a -> c is a leaf of lam, other corners random."""
    out = []
    for _ in range(count):
        g = lam.atoms[int(rng.integers(len(lam.atoms)))].geodesic
        a, c = float(g.tail.theta), float(g.head.theta)
        arc = (c - a) % (2 * math.pi)
        back = 2 * math.pi - arc
        b = a + rng.uniform(0.1, 0.9) * arc
        d = c + rng.uniform(0.1, 0.9) * back
        out.append(Box.from_angles(a, b, c, d))
    return out


def test_left_earthquake_inequality(rng):
    for _ in range(10):
        lam = random_lamination(rng, 4)
        f = random_piecewise_map(rng, max_pieces=6)
        boxes = _aligned_boxes(rng, lam)
        assert left_earthquake_check(f, earthquake(f, lam, rng.uniform(0.1, 3.0)), lam, boxes)
        assert left_earthquake_check(f, earthquake(f, lam, 0.0), lam, boxes, tol=0.0)


def test_right_earthquake_fails_check():
    q = standard_box()
    lam = MeasuredLamination([(q.diagonal(), 1.0)])
    after = earthquake(IDENT, lam, -1.0)
    # closed form: log(e^{-1} + 1) < log 2
    assert L(after, q) == pytest.approx(diagonal_closed_form(1.0, -1.0), abs=1e-12)
    assert not left_earthquake_check(IDENT, after, lam, [q])


def test_misaligned_box():
    lam = MeasuredLamination([(Geodesic.from_angles(0.2, 2.0), 1.0)])
    with pytest.raises(BoxNotAligned):
        left_earthquake_check(IDENT, IDENT, lam, [standard_box()])


# -- earthquake rays ------------------------------------------------------------

def test_ray_diagonal_atom():
    q = standard_box()
    lam = MeasuredLamination([(q.diagonal(), 1.0)])
    with pytest.raises(NonGenericBox):
        earthquake_ray_masses(IDENT, lam, [1.0], [q])
    rows = earthquake_ray_masses(IDENT, lam, [5.0, 10.0, 50.0], [q], check_generic=False)
    for r in rows:
        assert r.normalized_mass == pytest.approx(diagonal_closed_form(1.0, r.t) / r.t, abs=1e-12)
        assert r.abs_err <= convergence_bound(1.0, r.t)
    assert rows[-1].abs_err < 0.02


def test_ray_box_away_from_support():
    # atom inside arc (a, b): no leaf in Q, and Q^perp is crossed by nothing either
    q = standard_box()
    lam = MeasuredLamination([(Geodesic.from_angles(0.3, 1.2), 1.0)])
    rows = earthquake_ray_masses(IDENT, lam, [10.0, 100.0], [q])
    assert rows[-1].target_mass == 0
    assert rows[-1].normalized_mass < 0.01


def test_ray_two_atoms_additive():
    q = standard_box()
    g1 = Geodesic.from_angles(0.3, math.pi + 0.5)
    g2 = Geodesic.from_angles(0.6, math.pi + 0.2)
    lam = MeasuredLamination([(g1, 0.5), (g2, 0.25)])
    rows = earthquake_ray_masses(IDENT, lam, [10.0, 20.0, 40.0, 80.0], [q])
    assert rows[0].target_mass == pytest.approx(0.75)
    errs = [r.abs_err for r in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.05
    # the normalized mass stays within L_f(Q)/t of the target (box bounds of the proof)
    for r in rows:
        assert r.normalized_mass <= 0.75 + (LOG2 + 1) / r.t


def test_ray_random_lamination(rng):
    lam = random_lamination(rng, 5)
    boxes = [random_generic_box(rng, lam) for _ in range(5)]
    rows = earthquake_ray_masses(IDENT, lam, [50.0, 200.0], boxes)
    assert max(r.abs_err for r in rows if r.t == 200.0) < 0.02


def test_diagonal_convergence_rate():
    q = standard_box()
    lam = MeasuredLamination([(q.diagonal(), 1.0)])
    for beta in (0.5, 1.0, 3.0):
        for t in (5.0, 10.0, 30.0):
            err = abs(diagonal_closed_form(beta, t) / t - 1)
            assert err <= convergence_bound(beta, t)
    rows = earthquake_ray_masses(IDENT, lam, [5.0, 8.0, 13.0], [q], check_generic=False)
    assert all(r.abs_err <= convergence_bound(1.0, r.t) for r in rows)


# -- monotonicity ---------------------------------------------------------------

def test_monotone_cases():
    q = standard_box()  # corners 0, pi/2, pi, 3pi/2
    rep = monotonicity_probe(IDENT, q, Geodesic.from_angles(0.7, 3.9), 1.0)
    assert rep.case == "a" and rep.d_dx < 0 and rep.d_dy < 0 and rep.ok
    rep = monotonicity_probe(IDENT, q, Geodesic.from_angles(2.2, 5.5), 1.0)
    assert rep.case == "b" and rep.d_dx > 0 and rep.d_dy > 0 and rep.ok
    rep = monotonicity_probe(IDENT, q, Geodesic.from_angles(0.3, 1.1), 1.0)
    assert rep.case == "0" and rep.max_abs_delta < 1e-10 and rep.ok


def test_monotone_orientation_of_g_irrelevant():
    q = standard_box()
    g = Geodesic.from_angles(0.7, 3.9)
    assert classify(q, g) == classify(q, g.reverse()) == "a"


def test_unclassified_configuration():
    with pytest.raises(ConfigurationUnclassified):
        monotonicity_probe(IDENT, standard_box(), Geodesic.from_angles(0.7, 2.2), 1.0)


def test_monotone_with_distorted_map(rng):
    f = random_piecewise_map(rng, max_pieces=6)
    q = standard_box()
    rep = monotonicity_probe(f, q, Geodesic.from_angles(0.7, 3.9), 0.5)
    assert rep.ok


# -- diagonal bounds ------------------------------------------------------------

def test_diagonal_bounds_log2():
    lo, val, hi = diagonal_bounds_check(IDENT, standard_box(), LOG2)
    assert (lo, val, hi) == pytest.approx((LOG2, math.log(3), 2 * LOG2), abs=1e-12)
    assert lo < val < hi


def test_diagonal_bounds_small_t():
    lo, val, hi = diagonal_bounds_check(IDENT, standard_box(), 1e-6)
    assert val == pytest.approx(LOG2, abs=1e-6)
    assert hi - val < 1e-6
    assert lo < val < hi


@pytest.mark.parametrize("beta", [0.5, 1.0, 3.0])
def test_diagonal_large_t(beta):
    q = Box.from_reals(0.0, beta, math.inf, -1.0)
    lo, val, hi = diagonal_bounds_check(IDENT, q, 20.0)
    assert val - 20.0 == pytest.approx(math.log(beta), abs=1e-6)
    assert lo < val < hi


def test_diagonal_bounds_under_mobius(rng):
    f = PiecewiseMobiusHomeo.from_mobius(random_mobius(rng))
    bounds = diagonal_bounds_check(f, standard_box(), 2.0)
    assert bounds.strict
    assert bounds.value == pytest.approx(diagonal_closed_form(1.0, 2.0), abs=1e-9)
