"""Exact toric blow-up checks: polytopes, moments, chops, and weight windows."""

from .blowup import (
    BlowupSpec,
    TowerState,
    blow_up_vertex,
    free_fixed_points,
    max_chop_parameter,
    start_tower,
    tower_step,
)
from .errors import (
    ChartMismatch,
    ChopTooDeep,
    CuspcheckError,
    DegenerateFacet,
    DegeneratePolytope,
    DimensionMismatch,
    EmptyPolytope,
    EmptySpectrum,
    FormalExtensionWarning,
    InputValidationError,
    InteractingChops,
    InvalidPolytope,
    MissingEvaluationData,
    NotAVertex,
    NotUnimodular,
    SingularGram,
    UnboundedPolytope,
    UnsupportedDegree,
)
from .extremal import (
    AffineFunction,
    ExtremalSolveReport,
    extremal_affine,
    relative_futaki,
    restrict_affine,
)
from .indicial import (
    SIGN_CONVENTION,
    IndicialRoot,
    ModelCoefficients,
    SpectralPair,
    WeightCertificate,
    certify_weight,
    indicial_roots,
    roots_in_window,
    spectra_from_data,
)
from .moments import (
    BoundaryMomentData,
    FacetMoments,
    MomentData,
    Poly2,
    boundary_moments,
    integrate_polynomial,
    polytope_moments,
)
from .obstruction import (
    BalanceResult,
    HypothesesReport,
    MomentConfiguration,
    ObstructionReport,
    check_balance,
    check_facet_condition,
    check_genericity,
    check_hypotheses,
    check_kernel_condition,
    toric_configuration,
)
from .polytope import (
    DelzantPolytope,
    DelzantReport,
    Facet,
    FacetChart,
    Vertex,
    apply_unimodular,
    enumerate_vertices,
    facet_polytope,
    is_delzant,
)
from .rational import format_rational, parse_rational

__version__ = "1.0.0"

__all__ = [
    "AffineFunction",
    "BalanceResult",
    "BlowupSpec",
    "BoundaryMomentData",
    "ChartMismatch",
    "ChopTooDeep",
    "CuspcheckError",
    "DegenerateFacet",
    "DegeneratePolytope",
    "DelzantPolytope",
    "DelzantReport",
    "DimensionMismatch",
    "EmptyPolytope",
    "EmptySpectrum",
    "ExtremalSolveReport",
    "Facet",
    "FacetChart",
    "FacetMoments",
    "FormalExtensionWarning",
    "HypothesesReport",
    "IndicialRoot",
    "InputValidationError",
    "InteractingChops",
    "InvalidPolytope",
    "MissingEvaluationData",
    "ModelCoefficients",
    "MomentConfiguration",
    "MomentData",
    "NotAVertex",
    "NotUnimodular",
    "ObstructionReport",
    "Poly2",
    "SIGN_CONVENTION",
    "SingularGram",
    "SpectralPair",
    "TowerState",
    "UnboundedPolytope",
    "UnsupportedDegree",
    "Vertex",
    "WeightCertificate",
    "__version__",
    "apply_unimodular",
    "blow_up_vertex",
    "boundary_moments",
    "certify_weight",
    "check_balance",
    "check_facet_condition",
    "check_genericity",
    "check_hypotheses",
    "check_kernel_condition",
    "enumerate_vertices",
    "extremal_affine",
    "facet_polytope",
    "format_rational",
    "free_fixed_points",
    "indicial_roots",
    "integrate_polynomial",
    "is_delzant",
    "max_chop_parameter",
    "parse_rational",
    "polytope_moments",
    "relative_futaki",
    "restrict_affine",
    "roots_in_window",
    "spectra_from_data",
    "start_tower",
    "toric_configuration",
    "tower_step",
]
