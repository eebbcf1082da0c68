"""Pass/fail thresholds shared by the lab experiments and the acceptance tests."""

ORTHO_RESIDUAL = 1e-8
ORTHO_RUNTIME_S = 5.0
STANDARD_BOX_MASS = 1e-12
SYMMETRIC_IMAGE = 1e-9
DIAGONAL_CLOSED_FORM = 1e-9
MONOTONE_ZERO_DELTA = 1e-10
MONOTONE_STEP = 1e-4
MONOTONE_RUNTIME_S = 10.0
RAY_FINAL_ERROR = 0.02
RAY_RUNTIME_S = 60.0
COMMUTE_CLASS_TOL = 1e-8
WEAKSTAR_WEAK_ZERO = 1e-12
WEAKSTAR_UNIFORM_MIN = 0.999
RIGIDITY_SCALE = 1e-9
QS_MOBIUS_LOW = 1e-9
QS_MOBIUS_HIGH = 1e-6
QS_FLOOR = 1e-9
SEQUENCE_ERROR = 0.05
QUAKE_CONVERGE_FINAL = 0.02
