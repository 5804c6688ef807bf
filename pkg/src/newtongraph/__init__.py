"""Combinatorial validation and comparison of postcritically finite Newton graphs."""

from . import errors
from .graph_dynamics import (
    GraphMap,
    WeakGraphMap,
    build_graph_map,
    build_weak_graph_map,
    check_regular_extension,
    critical_points,
    edge_orbit,
    local_degree,
    promote,
)
from .newton_axioms import (
    AbstractNewtonGraph,
    ChannelDiagram,
    ExtendedNewtonGraph,
    HubbardTreeSpec,
    RaySpec,
    channel_diagram,
    ray_orbit,
    ray_period_data,
    trees_separated,
    validate_channel_diagram,
    validate_extended,
    validate_newton_graph,
)
from .planar_map import (
    PlanarMap,
    build_planar_map,
    canonical_code,
    canonical_form,
    face_components,
    map_isomorphisms,
    remove_edges,
)
from .reporting import (
    Report,
    ReportItem,
)
from .thurston import (
    ArcPreimage,
    ArcSystemSpec,
    CurvePreimage,
    MulticurveSpec,
    RayOrbitTwistData,
    arc_matrix,
    is_irreducible,
    leading_eigenvalue,
    obstruction_verdict,
    orbifold_hyperbolic_sufficient,
    rays_equivalent,
    solve_tree_twists,
    thurston_matrix,
)

__all__ = [
    "errors",
    "PlanarMap",
    "build_planar_map",
    "canonical_code",
    "canonical_form",
    "face_components",
    "map_isomorphisms",
    "remove_edges",
    "AbstractNewtonGraph",
    "ChannelDiagram",
    "ExtendedNewtonGraph",
    "HubbardTreeSpec",
    "RaySpec",
    "channel_diagram",
    "ray_orbit",
    "ray_period_data",
    "trees_separated",
    "validate_channel_diagram",
    "validate_extended",
    "validate_newton_graph",
    "Report",
    "ReportItem",
    "GraphMap",
    "WeakGraphMap",
    "build_graph_map",
    "build_weak_graph_map",
    "check_regular_extension",
    "critical_points",
    "edge_orbit",
    "local_degree",
    "promote",
    "ArcPreimage",
    "ArcSystemSpec",
    "CurvePreimage",
    "MulticurveSpec",
    "RayOrbitTwistData",
    "arc_matrix",
    "is_irreducible",
    "leading_eigenvalue",
    "obstruction_verdict",
    "orbifold_hyperbolic_sufficient",
    "rays_equivalent",
    "solve_tree_twists",
    "thurston_matrix",
]
