"""Numerical tolerances shared by every module.

Keeping them in one table means test calibration has a single knob.
"""

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NORM_TOL = 1e-10
PSD_TOL = 1e-9  # eigenvalues above -PSD_TOL are clamped to zero
COMPLETENESS_TOL = 1e-10

# default |f_sim - f_closed| threshold for self-verification
VERIFY_TOL = 1e-8
VERIFY_TOL_ENV = "TELECLONING_VERIFY_TOL"

CLASSICAL_FIDELITY = 2.0 / 3.0
# offset used for "just above the classical bound"
ABOVE_CLASSICAL_EPS = 1e-6

BOUNDARY_XTOL = 1e-7
MAX_RECEIVERS = 4
