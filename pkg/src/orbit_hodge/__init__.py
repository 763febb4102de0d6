"""Computer algebra for compactified adjoint orbits of sl(n+1): Groebner
bases, free resolutions, sheaf cohomology, and Hodge diamonds over prime
fields."""

from .gb import IdealHandle, eliminate, homogenize_ideal, ideal, intersect, saturate
from .hodge import HodgeDiamond, cotangent_module, hodge_diamond, hodge_number
from .invariants import InvariantReport, hilbert_series, invariant_report
from .orbit import (
    FibreSpec,
    OrbitSpec,
    critical_values,
    expected_minimal_flag_diamond,
    fibre_compactification,
    generic_traceless_matrix,
    minimal_polynomial_ideal,
    orbit_compactification,
    potential_polynomial,
)
from .poly import (
    AlgebraError,
    ComputationError,
    DomainError,
    Polynomial,
    RingContext,
    UsageError,
    parse_polynomial,
    ring,
)
from .resolve import (
    FreeResolution,
    GradedFreeModule,
    GradedMap,
    PresentedModule,
    exterior_power,
    free_resolution,
    graded_component_basis,
    map_rank_in_degree,
    syzygies,
)

__version__ = "0.1.0"
