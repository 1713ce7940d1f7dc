"""Construction and verification toolkit for finite higher-rank graphs."""

from .degree import Degree
from .skeleton import (
    GraphError,
    KGraph,
    Path,
    PathError,
    build_graph,
    check_hexagon,
    check_row_finite_no_source,
    compose,
    enumerate_paths,
    normalize,
    segment,
    validate_graph,
)
from .skew import QmodZ, SkewError, Weights, build_skew_graph, solve_fiber_congruence, validate_weights

__all__ = [
    "Degree",
    "GraphError",
    "KGraph",
    "Path",
    "PathError",
    "QmodZ",
    "SkewError",
    "Weights",
    "build_graph",
    "build_skew_graph",
    "check_hexagon",
    "check_row_finite_no_source",
    "compose",
    "enumerate_paths",
    "normalize",
    "segment",
    "solve_fiber_congruence",
    "validate_graph",
    "validate_weights",
]
