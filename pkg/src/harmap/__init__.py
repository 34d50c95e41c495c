"""Harmonic 2-spheres in CP^2 from holomorphic polynomial triples.

Exact ramification data and stratum sampling over the Gaussian
rationals, the Gauss-transform construction of non-minimal harmonic
maps with zero-tolerance containment certificates, and a numerical
verification layer for the degree/energy/dimension bookkeeping.
"""

from .eellswood import (
    ComponentDescriptor,
    HarmonicMapRep,
    classify_component,
    containment_residual,
    evaluate,
    evaluate_robust,
    gauss_transform,
    orthogonality_residual,
)
from .errors import (
    HarmapError,
    IndeterminateRank,
    IntegrationFailure,
    NearSingular,
    NotAMap,
    NotFull,
    PathFailure,
    SamplingFailure,
)
from .exact import (
    MINUS_INF,
    BiPoly,
    GaussianRational,
    Poly,
    hermitian_pairing,
    poly_derivative,
    poly_divrem,
    poly_gcd,
    poly_gcd_many,
)
from .holomap import (
    AssociatedCurve,
    Divisor,
    HoloMap,
    apply_automorphism,
    dependency_identity_check,
    is_full,
    mirror,
    ramification_data,
    ramification_index,
    validate,
    wedge_curve,
)
from .paths import StratumPath, connect, index_criterion, verify_path
from .quadrature import (
    QuadratureConfig,
    VerificationReport,
    integrate_invariants,
    tension_convergence,
    tension_residual,
    verify_harmonic_map,
)
from .strata import (
    LMatrix,
    StratumPoint,
    build_L,
    codimension_check,
    component_table,
    degeneration_family,
    divisor_points,
    divisor_roundtrip,
    kernel_exact,
    random_full_map,
    sample_stratum,
    stratum_embed,
    stratum_factor,
)

__version__ = "0.1.0"
