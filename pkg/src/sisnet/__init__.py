"""Networked SIS epidemic dynamics: equilibria, stability certificates, simulation."""

from .certificates import (
    CertificateError,
    LyapunovCertificate,
    StabilityVerdict,
    check_j_pstar_direction,
    classify_stability,
    diag_certificate_critical,
    diag_certificate_hurwitz,
    lambda_endemic,
    lambda_tilde,
)
from .equilibrium import (
    EquilibriumReport,
    FixedPointProblem,
    apply_T,
    endemic_state_scc,
    equilibrium_cascade,
    jacobian_at,
    solve_fixed_point,
)
from .game import (
    best_response_gradient,
    concavity_check,
    diagonal_dominance_check,
    distributed_condition,
    objective,
)
from .graph import (
    Digraph,
    ParseError,
    SccDecomposition,
    connectivity_class,
    is_irreducible,
    parse_edge_list,
    scc_decompose,
    sources_and_near_sources,
)
from .model import (
    EpidemicNetwork,
    SubsystemView,
    steady_state_residual,
    subsystem,
    vector_field,
)
from .simulate import Trajectory, converge, integrate, lyapunov_trace
from .spectral import (
    PfEigenpair,
    basic_reproduction_number,
    component_reproduction_numbers,
    metzler_abscissa,
    pf_eigenpair,
    spectral_radius_nonneg,
)

__all__ = [
    "CertificateError",
    "Digraph",
    "EpidemicNetwork",
    "EquilibriumReport",
    "FixedPointProblem",
    "LyapunovCertificate",
    "ParseError",
    "PfEigenpair",
    "SccDecomposition",
    "StabilityVerdict",
    "SubsystemView",
    "Trajectory",
    "apply_T",
    "basic_reproduction_number",
    "best_response_gradient",
    "check_j_pstar_direction",
    "classify_stability",
    "component_reproduction_numbers",
    "concavity_check",
    "connectivity_class",
    "converge",
    "diag_certificate_critical",
    "diag_certificate_hurwitz",
    "diagonal_dominance_check",
    "distributed_condition",
    "endemic_state_scc",
    "equilibrium_cascade",
    "integrate",
    "is_irreducible",
    "jacobian_at",
    "lambda_endemic",
    "lambda_tilde",
    "lyapunov_trace",
    "metzler_abscissa",
    "objective",
    "parse_edge_list",
    "pf_eigenpair",
    "scc_decompose",
    "solve_fixed_point",
    "sources_and_near_sources",
    "spectral_radius_nonneg",
    "steady_state_residual",
    "subsystem",
    "vector_field",
]
