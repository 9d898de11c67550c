"""Normal-plus-nilpotent decomposition of matrices and its functional calculus.

The main entry points are :func:`decompose` (``T = N + Q`` from the ordered
Schur flag), :func:`parse` with :func:`calc_contour` / :func:`calc_triangular`
(holomorphic functions of matrices) and :func:`run_suite` (all checks).
"""

from .decomp import Decomposition, decompose, hs_flag, multiplicative_form
from .holo import Contour, auto_contour, calc_contour, calc_normal, calc_triangular, parse
from .ordering import MODULUS, REAL_IMAG, OrderingTag
from .tracial import BrownMeasure, brown_measure, fk_determinant, is_nilpotent
from .verify import CheckResult, SuiteConfig, VerificationReport, replay_check, run_suite

__all__ = [
    "MODULUS",
    "REAL_IMAG",
    "BrownMeasure",
    "CheckResult",
    "Contour",
    "Decomposition",
    "OrderingTag",
    "SuiteConfig",
    "VerificationReport",
    "auto_contour",
    "brown_measure",
    "calc_contour",
    "calc_normal",
    "calc_triangular",
    "decompose",
    "fk_determinant",
    "hs_flag",
    "is_nilpotent",
    "multiplicative_form",
    "parse",
    "replay_check",
    "run_suite",
]
