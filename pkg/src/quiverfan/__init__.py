"""Exact toric geometry of quiver flow polytopes.

Given a finite connected quiver without oriented cycles and an integral
weight, this package builds the flow polytope and the fan of the moduli
space of stable thin sincere representations, computes line-bundle
cohomology on it, and analyzes the endomorphism algebra of the universal
bundle.  All computations use exact rational arithmetic.
"""

from .errors import (
    DisconnectedQuiver,
    DuplicateId,
    FanNotComplete,
    FanNotSmooth,
    InstanceTooLarge,
    InternalInconsistency,
    MalformedInput,
    NotASpanningTree,
    NotAWalk,
    NotGeneralPosition,
    OrientedCycle,
    QuiverFanError,
    QuotientHasOrientedCycle,
    StableArrowSetNotFull,
    UnboundedPolytope,
    UnknownVertex,
)
from .quiver import (
    Arrow,
    Flow,
    Quiver,
    Walk,
    Weight,
    canonical_weight,
    count_all_paths,
    enumerate_paths,
    incidence_matrix,
    parse_quiver,
    walk_flow,
    weight_of_flow,
)
from .stability import (
    StabilityVerdict,
    Wall,
    WeightPosition,
    classify_subquiver,
    enumerate_walls,
    spanning_trees,
    stable_arrow_set,
    stable_trees,
    weight_position,
)
from .lattice import (
    CirculationBasis,
    FlowPolytope,
    LatticePointSet,
    bruteforce_vertices,
    circulation_basis,
    flow_polytope,
    lattice_points,
    polytope_vertices,
    reflexivity_report,
    tree_completion,
)
from .fan import (
    Fan,
    FanChecks,
    MaxCone,
    RayGenerator,
    build_fan,
    drop_cone,
    fan_checks,
    monte_carlo_cover_check,
)
from .cohomology import (
    CohomologyTable,
    ExtReport,
    ToricCohomology,
    ext_table,
    global_generation,
    kodaira_suite,
    line_bundle_cohomology,
    reduced_betti_numbers,
)
from .algebra import (
    BundleIsoClasses,
    EndAlgebraReport,
    ExceptionalReport,
    QuotientQuiver,
    bundle_iso_classes,
    end_algebra_report,
    exceptional_check,
    hom_dim,
)

__version__ = "0.1.0"
