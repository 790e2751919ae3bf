"""Photocount statistics: Bernoulli loss transform, its inverse, stability analysis."""

from ._photocount import (
    CompoundPoissonParams,
    Error,
    NormalizationPolicy,
    Origin,
    Pmf,
    PoissonParams,
    SignedDistribution,
    SimplexCheck,
    SimulationRun,
    StabilityReport,
    TransformSpec,
    Verdict,
    analyze,
    build_matrix,
    compound_poisson_Mn,
    compound_poisson_pmf,
    compound_poisson_xi,
    contains,
    contraction_ratio,
    criterion_holds,
    eta_critical,
    find_Mn_empirical,
    forward,
    geometric_tolerance,
    inverse,
    inverse_sum_extended,
    inverse_via_solve,
    pmf_from_values,
    poisson_Mn,
    poisson_pmf,
    reconstruction_error,
    round_trip_error_extended,
    series_term,
    simulate,
    vertices,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
