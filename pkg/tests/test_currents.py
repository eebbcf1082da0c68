import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ccw_angles
from teichquake import (
    AtomicCurrent,
    BoundaryPoint,
    Box,
    Geodesic,
    MeasuredLamination,
    Mobius,
    MobiusSampler,
    PiecewiseMobiusHomeo,
    StepFunction,
    apply,
    current_metric_estimate,
    image_box,
    integrate,
    is_generic,
    is_measured_lamination,
    jitter_box,
    liouville_current,
    mass,
    ortho,
    pushforward,
    standard_box,
    uniform_seminorm_estimate,
    uniform_seminorm_witness,
    weak_seminorm,
)
from teichquake.errors import EmptyFamily, NotALamination, NotAtomic
from teichquake.generators import escaping_geodesic, random_box, random_lamination, random_mobius

SMALL = MobiusSampler(rotations=16, dilation_steps=9, shear_steps=9, random_samples=64, refine_rounds=2)


def D(w):
    return BoundaryPoint.from_complex(w)


def unit(g):
    return AtomicCurrent([(g, 1.0)])


# -- construction ------------------------------------------------------------

def test_atoms_merge_across_orientation():
    g = Geodesic.from_angles(2.0, 0.5)
    alpha = AtomicCurrent([(g, 1.0), (g.reverse(), 0.5)])
    assert len(alpha) == 1
    assert alpha.atoms[0].weight == pytest.approx(1.5)
    assert alpha.atoms[0].geodesic.tail.theta < alpha.atoms[0].geodesic.head.theta


def test_nonpositive_weight_rejected():
    with pytest.raises(ValueError):
        AtomicCurrent([(Geodesic.from_angles(0, 1), 0.0)])


# -- masses ------------------------------------------------------------------

def test_diagonal_atom_masses():
    q = standard_box()
    alpha = unit(q.diagonal())
    assert mass(alpha, q) == 1.0
    # closed arcs: the reversed diagonal c -> a touches ortho(Q) only at its corners
    assert mass(alpha, ortho(q)) == 1.0
    a, b, c, d = (float(x) for x in ortho(q).angles())
    e = 1e-6
    assert mass(alpha, Box.from_angles(a + e, b - e, c + e, d - e)) == 0.0


def test_one_atom_in_box_one_crossing():
    q = standard_box()
    inside = Geodesic.from_angles(0.3, math.pi + 0.3)
    across = Geodesic.from_angles(math.pi / 2 + 0.2, 3 * math.pi / 2 + 0.2)  # tail in [b, c]
    assert mass(AtomicCurrent([(inside, 1.0), (across, 1.0)]), q) == 1.0


@given(ccw_angles(k=4, min_gap=1e-2), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_balanced(q, x, y):
    if abs(math.remainder(x - y, 2 * math.pi)) < 1e-6:
        return
    box = Box.from_angles(*q)
    alpha = unit(Geodesic.from_angles(x, y))
    assert mass(alpha, box) == mass(alpha, ortho(ortho(box)))


# -- laminations -------------------------------------------------------------

def test_lamination_examples():
    assert is_measured_lamination(unit(Geodesic.from_angles(0, 1)))
    crossing = AtomicCurrent([(Geodesic(D(1), D(-1)), 1.0), (Geodesic(D(1j), D(-1j)), 1.0)])
    assert not is_measured_lamination(crossing)
    with pytest.raises(NotALamination):
        MeasuredLamination(crossing.atoms)
    nested = AtomicCurrent([(Geodesic.from_angles(1 - 0.1 * k, 1 + 0.1 * k + 0.05), 1.0) for k in range(5)])
    assert is_measured_lamination(nested)


def test_random_laminations_are_laminations(rng):
    for _ in range(20):
        assert is_measured_lamination(random_lamination(rng, 8))


# -- genericity ---------------------------------------------------------------

def test_genericity():
    q = standard_box()
    assert is_generic(unit(Geodesic.from_angles(0.3, math.pi + 0.3)), q)
    assert not is_generic(unit(Geodesic.from_angles(0.0, 2.0)), q)
    assert is_generic(unit(Geodesic.from_angles(0.0, 2.0)), jitter_box(q))
    with pytest.raises(NotAtomic):
        is_generic(liouville_current(PiecewiseMobiusHomeo.identity()), q)


def test_random_boxes_generic(rng):
    for _ in range(50):
        assert is_generic(random_lamination(rng, 6), random_box(rng))


# -- integration -------------------------------------------------------------

def test_integrate_examples():
    q = standard_box()
    alpha = unit(q.diagonal())
    assert integrate(alpha, StepFunction.indicator(q)) == 1.0
    q1 = Box.from_angles(0.0, 0.5, 1.0, 1.5)
    q2 = Box.from_angles(3.0, 3.5, 4.0, 4.5)
    two = AtomicCurrent([(q1.diagonal(), 1.0), (q2.diagonal(), 1.0)])
    assert integrate(two, StepFunction([(q1, 2.0), (q2, -1.0)])) == 1.0
    ident = liouville_current(PiecewiseMobiusHomeo.identity())
    assert integrate(ident, StepFunction.indicator(q)) == pytest.approx(math.log(2))


# -- pushforward -------------------------------------------------------------

def test_pushforward(rng):
    alpha = random_lamination(rng, 5)
    assert pushforward(alpha, lambda p: p) == alpha
    phi = random_mobius(rng)
    moved = pushforward(alpha, lambda p: apply(phi, p))
    assert moved.total_weight() == pytest.approx(alpha.total_weight())
    for _ in range(50):
        q = random_box(rng)
        assert mass(moved, image_box(phi, q)) == pytest.approx(mass(alpha, q))
    back = pushforward(moved, lambda p: apply(phi.inverse(), p))
    assert back == alpha


# -- seminorms ---------------------------------------------------------------

def test_weak_seminorm_examples():
    xi = StepFunction.indicator(standard_box())
    assert weak_seminorm(AtomicCurrent(), xi) == 0
    assert weak_seminorm(unit(standard_box().diagonal()), xi) == 1
    for n in range(5, 12):
        assert weak_seminorm(unit(escaping_geodesic(n)), xi) == 0


def test_uniform_estimate_examples():
    xi = StepFunction.indicator(standard_box())
    assert uniform_seminorm_estimate(AtomicCurrent(), xi, SMALL) == 0
    g = Geodesic.from_angles(2.0, 2.01)
    value, phi = uniform_seminorm_witness(unit(g), xi, SMALL)
    assert value == 1.0
    # the witness really captures g in phi^-1(Q_std)
    assert mass(unit(g), image_box(phi.inverse(), standard_box())) == 1.0


def test_uniform_dominates_weak(rng):
    for _ in range(5):
        alpha = random_lamination(rng, 4)
        xi = StepFunction([(random_box(rng), 1.0), (random_box(rng), -0.5)])
        assert uniform_seminorm_estimate(alpha, xi, SMALL) >= weak_seminorm(alpha, xi)


def test_uniform_monotone_under_enlargement(rng):
    for _ in range(3):
        alpha = random_lamination(rng, 3)
        xi = StepFunction([(random_box(rng), 1.0), (random_box(rng), -1.0)])
        small = uniform_seminorm_estimate(alpha, xi, SMALL)
        assert uniform_seminorm_estimate(alpha, xi, SMALL.enlarged()) >= small


# -- metric ------------------------------------------------------------------

def test_metric_examples(rng):
    fam = [StepFunction.indicator(standard_box())]
    alpha = random_lamination(rng, 3)
    assert current_metric_estimate(alpha, alpha, fam, SMALL) == 0
    with pytest.raises(EmptyFamily):
        current_metric_estimate(alpha, alpha, [], SMALL)
    a = unit(Geodesic.from_angles(0.2, 0.3))
    b = unit(Geodesic.from_angles(3.0, 3.1))
    d = current_metric_estimate(a, b, fam, SMALL)
    assert 0 < d <= 0.5


def test_metric_triangle(rng):
    fam = [StepFunction.indicator(standard_box()), StepFunction.indicator(random_box(rng), 0.5)]
    for _ in range(5):
        a, b, c = (random_lamination(rng, 3) for _ in range(3))
        dab = current_metric_estimate(a, b, fam, SMALL)
        dac = current_metric_estimate(a, c, fam, SMALL)
        dcb = current_metric_estimate(c, b, fam, SMALL)
        assert 0 <= dab <= 1
        assert dab <= dac + dcb + 1e-9
