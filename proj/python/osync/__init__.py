"""Orthogonal group synchronization: projected power method, dual
certificates and landscape diagnostics."""

from ._core import (
    Certificate,
    Problem,
    SolveResult,
    bm_inequality_audit,
    bound_bm,
    bound_cvx,
    brute_force_z2,
    certify,
    check_fixed_point,
    distance_to_sync,
    hessian_quadform,
    objective,
    phase_transition,
    riemannian_gradient,
    sample_socp_test,
    sigma_from_kappa,
    solve,
)

__all__ = [
    "Certificate",
    "Problem",
    "SolveResult",
    "bm_inequality_audit",
    "bound_bm",
    "bound_cvx",
    "brute_force_z2",
    "certify",
    "check_fixed_point",
    "distance_to_sync",
    "hessian_quadform",
    "objective",
    "phase_transition",
    "riemannian_gradient",
    "sample_socp_test",
    "sigma_from_kappa",
    "solve",
]
