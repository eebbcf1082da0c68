"""Earthquakes, geodesic currents and Liouville measures on the circle.

Points live on the unit circle as angles; the upper half-plane is the chart
x = tan(theta / 2). Everything is float64 unless a block runs under
``working_precision(dps)``, in which case the same code runs in mpmath.
"""
from ._numeric import dps_for_amplitude, working_precision
from .boundary_maps import (
    LiouvillePullback,
    PiecewiseMobiusHomeo,
    ScalingSolution,
    class_equal,
    compose_maps,
    invert_map,
    liouville_current,
    max_class_distance,
    normalize3,
    post_compose,
    pre_compose,
    qs_constant_estimate,
    rigid_scale,
    solve_scaling,
)
from .boxes import (
    STANDARD_BOX,
    Box,
    box_contains,
    image_box,
    is_symmetric,
    liouville_mass,
    ortho,
    ortho_residual,
    standard_box,
)
from .currents import (
    AtomicCurrent,
    DifferenceMeasure,
    MeasuredLamination,
    StepFunction,
    current_metric_estimate,
    integrate,
    is_generic,
    is_measured_lamination,
    jitter_box,
    mass,
    pushforward,
    uniform_seminorm_estimate,
    uniform_seminorm_witness,
    weak_seminorm,
)
from .earthquakes import (
    EarthquakeSpec,
    diagonal_bounds_check,
    diagonal_closed_form,
    earthquake,
    earthquake_ray_masses,
    elementary_earthquake,
    left_earthquake_check,
    monotonicity_probe,
)
from .errors import *  # noqa: F401,F403
from .mobius import (
    TOL,
    BoundaryPoint,
    Geodesic,
    Mobius,
    Side,
    Tolerances,
    apply,
    compose,
    crossratio,
    crossratio_complex,
    crossratio_halfplane,
    geodesics_cross,
    invert,
    mobius_from_triples,
    reverse,
    side_of,
    translation_along,
    translation_length,
)
from .sampler import MobiusSampler, maximize

__version__ = "0.1.0"
