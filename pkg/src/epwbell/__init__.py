"""Sign-correlation (EPR/EPW) numerics for Gaussian Wigner states."""

from ._backend import BACKEND
from .bell import (
    DeltaLimitParams,
    Method,
    SignCorrelationResult,
    F_closed,
    F_finite_s,
    F_quadrature,
    S_chained_closed,
    S_closed,
    S_finite_s,
    effective_K,
    opposite_sign_probability,
    time_asymmetry_scan,
    w_closed,
)
from .lhv import McConfig, McEstimate, PhasePoint, estimate_D, estimate_S, lhv_audit
from .phase_space import (
    GaussianState,
    ModePairParams,
    PositionMarginal,
    TimePair,
    beamsplitter_transform,
    coherent_wigner,
    evaluate_density,
    free_evolution,
    marginal_positions,
    squeezed_vacuum_wigner,
    tensor,
)

__version__ = "0.1.0"
