"""Constrained theta-graphs and empirical verification of their spanning ratios."""

from .bounds import (
    ConfigType,
    FamilySpec,
    Lemma3Config,
    classify_configuration,
    family_of,
    lemma2_check,
    lemma3_check,
    lemma3_rhs,
    path_bound,
    spanning_ratio_bound,
)
from .errors import (
    AlphaOutOfRange,
    BoundaryDegeneracy,
    DegenerateDenominator,
    GeneralPositionViolation,
    IndexOutOfRange,
    InvalidInstance,
    NotInCone,
    ParseError,
    PreconditionViolated,
    ThetaSpannerError,
    UnsupportedConeCount,
)
from .geometry import (
    CanonicalTriangle,
    ConeSystem,
    Orientation,
    Point,
    Segment,
    canonical_triangle,
    cone_of,
    orientation,
    projection_length,
    proper_intersection,
    validate_general_position,
)
from .io import load_instance, save_instance
from .svg import render_svg
from .theta import Subcone, ThetaGraph, build_constrained_theta, build_unconstrained_theta, subcone_members, subcones
from .verify import (
    RatioReport,
    adversarial_search,
    pair_ratio_report,
    random_instance,
    shortest_paths,
    tightness_fixture,
)
from .visibility import ConvexChain, Instance, VisibilityGraph, convex_chain, verify_chain, visibility_graph, visible

__version__ = "0.1.0"

__all__ = [
    "AlphaOutOfRange",
    "BoundaryDegeneracy",
    "CanonicalTriangle",
    "ConeSystem",
    "ConfigType",
    "ConvexChain",
    "DegenerateDenominator",
    "FamilySpec",
    "GeneralPositionViolation",
    "IndexOutOfRange",
    "Instance",
    "InvalidInstance",
    "Lemma3Config",
    "NotInCone",
    "Orientation",
    "ParseError",
    "Point",
    "PreconditionViolated",
    "RatioReport",
    "Segment",
    "Subcone",
    "ThetaGraph",
    "ThetaSpannerError",
    "UnsupportedConeCount",
    "VisibilityGraph",
    "adversarial_search",
    "build_constrained_theta",
    "build_unconstrained_theta",
    "canonical_triangle",
    "classify_configuration",
    "cone_of",
    "convex_chain",
    "family_of",
    "lemma2_check",
    "lemma3_check",
    "lemma3_rhs",
    "load_instance",
    "orientation",
    "pair_ratio_report",
    "path_bound",
    "projection_length",
    "proper_intersection",
    "random_instance",
    "render_svg",
    "save_instance",
    "shortest_paths",
    "spanning_ratio_bound",
    "subcone_members",
    "subcones",
    "tightness_fixture",
    "validate_general_position",
    "verify_chain",
    "visibility_graph",
    "visible",
]
