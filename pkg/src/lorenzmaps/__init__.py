"""Combinatorics of Lorenz interval maps.

Kneading sequences, branch partitions and cutting times; detection and
application of renormalizations; and the island structure of the
two-parameter monotone family in the parameter plane.
"""

from .core import (
    LorenzMap,
    Side,
    SignedPoint,
    check_map_invariants,
    make_affine_map,
    make_quadratic_map,
    map_from_dict,
)
from .family import (
    BoundaryClassification,
    ConeRelation,
    HyperbolicReport,
    Island,
    IslandBoundary,
    ParamPoint,
    RealizeReport,
    ScanGrid,
    classify_boundary_point,
    classify_hyperbolic,
    cone_relation,
    family_map,
    fiber_bisect,
    fiber_range,
    realize_kneading,
    realize_kneading_search,
    scan_archipelago,
    trace_island_boundary,
)
from .renorm import (
    NestingRelation,
    Renormalization,
    RenormType,
    TypeProbe,
    check_nesting,
    detect_renormalizations,
    find_periodic_boundary,
    probe_type,
    renormalize,
    return_map_kneading,
    verify_renormalization,
)
from .symbolic import (
    Branch,
    BranchPartition,
    EquivalenceReport,
    KneadingPair,
    branch_partition,
    check_combinatorial_equivalence,
    compare_words,
    cutting_times,
    kneading,
    partition_mesh,
    partition_tower,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BranchPartition",
    "BoundaryClassification",
    "ConeRelation",
    "EquivalenceReport",
    "HyperbolicReport",
    "Island",
    "IslandBoundary",
    "KneadingPair",
    "LorenzMap",
    "NestingRelation",
    "ParamPoint",
    "RealizeReport",
    "Renormalization",
    "RenormType",
    "ScanGrid",
    "Side",
    "SignedPoint",
    "TypeProbe",
    "branch_partition",
    "check_combinatorial_equivalence",
    "check_map_invariants",
    "check_nesting",
    "classify_boundary_point",
    "classify_hyperbolic",
    "compare_words",
    "cone_relation",
    "cutting_times",
    "detect_renormalizations",
    "family_map",
    "fiber_bisect",
    "fiber_range",
    "find_periodic_boundary",
    "kneading",
    "make_affine_map",
    "make_quadratic_map",
    "map_from_dict",
    "partition_mesh",
    "partition_tower",
    "probe_type",
    "realize_kneading",
    "realize_kneading_search",
    "renormalize",
    "return_map_kneading",
    "scan_archipelago",
    "trace_island_boundary",
    "verify_renormalization",
]
