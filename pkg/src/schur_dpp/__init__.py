"""Schur measures and Schur processes as determinantal point processes.

Exact brute-force correlation functions, contour-integral correlation
kernels, q-difference operators at q = t and the contour machinery that
links them.
"""

from .errors import *  # noqa: F401,F403
from .kernels import (
    KernelRequest,
    KernelResult,
    default_radii,
    det_correlation_measure,
    det_correlation_process,
    kernel_K,
    kernel_L,
    rho_measure_qz_contour,
    rho_measure_series_coefficient,
    rho_process_qz_contour,
)
from .measures import (
    ProcessSpec,
    rho_measure_bruteforce,
    rho_process_bruteforce,
    schur_measure_weight,
    schur_process_weight,
    verify_normalization,
)
from .operators import (
    QParameterSet,
    apply_tilde_d1,
    apply_tilde_d1_contour,
    c_contour,
    c_series,
    eigenvalue_er,
    nested_operator_contour,
    nested_operator_direct,
)
from .partitions import EMPTY, Partition, enumerate_partitions, point_config_measure
from .quadrature import ContourSpec, cauchy_determinant_check, integrate
from .symmetric import Specialization, cauchy_F, schur, skew_schur

__version__ = "0.1.0"
