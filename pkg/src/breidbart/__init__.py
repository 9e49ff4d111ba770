"""Intermediate (Breidbart) states between two mutually unbiased quNit bases.

Tools for intercept/resend and optimal-cloning eavesdropping information,
a Bell functional with quantum value 2 sqrt(N) and local bound 2, and its
robustness to disturbance, noise and detector inefficiency.
"""
from .bell import (
    BellFunctional,
    CorrelationMap,
    MeasurementConfig,
    ValueTable,
    bell_value,
    calibrate_correlation_maps,
    critical_disturbance,
    detector_threshold,
    disturbance_bell,
    joint_prob,
    lambda_mix,
    lambda_sep,
    lhv_max,
    max_entangled,
)
from .cases import basis_variant_case3, real_basis_case3
from .eavesdrop import (
    crossing_decomposition_residual,
    crossing_fidelity,
    intercept_resend_info,
    rho_disturbed,
    shannon_info,
    simulate_intercept_resend,
)
from .exceptions import AmbiguousStateError, DomainError
from .linalg import eig_hermitian, principal_unitary_sqrt, tensor, trace_product
from .mub import (
    fourier_basis,
    intermediate_of_pair,
    intermediate_state,
    intermediate_via_mixture,
    m_overlap,
    povm_residual,
)

__version__ = "0.1.0"
