"""Exact lattice and polytope engine for flow polytopes.

All polytopes are handled in the coordinates of a circulation basis: the
fundamental cycles of a fixed reference spanning tree span the lattice of
zero-weight integral flows (the incidence matrix of an acyclic connected
quiver is totally unimodular, so this really is a lattice basis, and we
assert as much at build time).  A base point of the affine fiber for a
weight comes from the tree-completion formula, which pins down a flow from
its values off a spanning tree.

Lattice points are enumerated by an exact bounding-box scan: per-coordinate
bounds come from rational LPs, candidates are filtered exactly.  Boxes with
more than MAX_BOX_CANDIDATES candidates are refused.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd

from . import exactlp
from .errors import (
    InstanceTooLarge,
    InternalInconsistency,
    MalformedInput,
    NotASpanningTree,
    NotGeneralPosition,
    UnboundedPolytope,
)
from .linalg import affine_rank, det_int, rank, solve_square, vector_gcd
from .quiver import Flow, Quiver, Weight, canonical_weight, weight_of_flow
from .stability import _is_spanning_tree, spanning_trees, stable_trees, weight_position

MAX_BOX_CANDIDATES = 10**7


def _tree_components(quiver: Quiver, tree_ids: frozenset[str], removed: str) -> tuple[set[str], set[str]]:
    """Source-side and target-side vertex sets of a tree after removing one arrow."""
    removed_arrow = quiver.arrow(removed)
    adjacency = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        if a.id in tree_ids and a.id != removed:
            adjacency[a.source].append(a.target)
            adjacency[a.target].append(a.source)
    side = {removed_arrow.source}
    frontier = [removed_arrow.source]
    while frontier:
        v = frontier.pop()
        for w in adjacency[v]:
            if w not in side:
                side.add(w)
                frontier.append(w)
    other = set(quiver.vertices) - side
    return side, other


def tree_completion(quiver: Quiver, tree, weight: Weight, eps: Flow | None = None) -> Flow:
    """The unique flow with the given weight agreeing with ``eps`` off the tree.

    On a tree arrow the value is the weight collected on its source side,
    corrected by the eps-flow crossing between the two sides.  Integral
    weight and eps give an integral result.
    """
    tree_ids = frozenset(tree)
    arrow_ids = set(quiver.arrow_ids())
    if len(tree_ids) != quiver.n_vertices - 1 or not tree_ids <= arrow_ids:
        raise NotASpanningTree(f"{sorted(tree_ids)} is not a spanning tree")
    if not _is_spanning_tree(quiver, [quiver.arrow(t) for t in sorted(tree_ids)]):
        raise NotASpanningTree(f"{sorted(tree_ids)} contains an undirected cycle")
    if eps is None:
        eps = Flow.zero(quiver)
    values = list(eps.values)
    for arrow_id in tree_ids:
        source_side, target_side = _tree_components(quiver, tree_ids, arrow_id)
        total = sum(weight[v] for v in source_side)
        for a in quiver.arrows:
            if a.id == arrow_id:
                continue
            if a.source in target_side and a.target in source_side:
                total += eps[a.id]
            elif a.source in source_side and a.target in target_side:
                total -= eps[a.id]
        values[quiver.arrow_index(arrow_id)] = eps[arrow_id] + total
    flow = Flow(quiver, tuple(values))
    if weight_of_flow(quiver, flow) != weight:
        raise InternalInconsistency("tree completion does not map to the requested weight")
    return flow


class CirculationBasis:
    """Fundamental-cycle basis of the lattice of integral zero-weight flows."""

    def __init__(self, quiver: Quiver):
        self.quiver = quiver
        trees = spanning_trees(quiver)
        self.tree: tuple[str, ...] = trees[0]
        tree_set = frozenset(self.tree)
        self.nontree: tuple[str, ...] = tuple(a.id for a in quiver.arrows if a.id not in tree_set)
        circulations = []
        for arrow_id in self.nontree:
            eps = Flow(
                quiver,
                tuple(1 if a.id == arrow_id else 0 for a in quiver.arrows),
            )
            circulations.append(tree_completion(quiver, self.tree, Weight.zero(quiver), eps))
        self.circulations: tuple[Flow, ...] = tuple(circulations)
        self._check_basis()

    @property
    def dim(self) -> int:
        return len(self.circulations)

    def _check_basis(self):
        for arrow_id, circ in zip(self.nontree, self.circulations):
            if weight_of_flow(self.quiver, circ) != Weight.zero(self.quiver):
                raise InternalInconsistency("fundamental cycle has non-zero weight")
            for other in self.nontree:
                expected = 1 if other == arrow_id else 0
                if circ[other] != expected:
                    raise InternalInconsistency("non-tree block of the cycle matrix is not the identity")
        # Saturation: gcd of the maximal minors of the basis matrix must be 1,
        # so integer flows with zero weight are integer combinations.
        matrix = [[int(c.values[i]) for c in self.circulations] for i in range(self.quiver.n_arrows)]
        if self.dim:
            g = 0
            for rows in combinations(range(self.quiver.n_arrows), self.dim):
                minor = det_int([matrix[r] for r in rows])
                g = gcd(g, abs(minor))
                if g == 1:
                    break
            if g != 1:
                raise InternalInconsistency("circulation basis does not span the full lattice")

    def ray_coordinates(self, arrow_id: str) -> tuple[int, ...]:
        """Coordinates of the dual image of an arrow's unit vector: j-th entry
        is the arrow's value in the j-th basis circulation."""
        idx = self.quiver.arrow_index(arrow_id)
        return tuple(int(c.values[idx]) for c in self.circulations)

    def coordinates_of(self, circulation: Flow) -> tuple:
        """Basis coordinates of a zero-weight flow (its non-tree values)."""
        return tuple(circulation[a] for a in self.nontree)

    def flow_of(self, coords) -> Flow:
        values = [0] * self.quiver.n_arrows
        for x, circ in zip(coords, self.circulations):
            if x:
                values = [v + x * c for v, c in zip(values, circ.values)]
        return Flow(self.quiver, tuple(values))


@lru_cache(maxsize=None)
def circulation_basis(quiver: Quiver) -> CirculationBasis:
    return CirculationBasis(quiver)


def _row_satisfied(row, point, strict=False) -> bool:
    coeffs, rel, rhs = row
    value = sum(c * x for c, x in zip(coeffs, point))
    if rel == ">=":
        return value > rhs if strict else value >= rhs
    return value < rhs if strict else value <= rhs


def _floor(x) -> int:
    return x.numerator // x.denominator if isinstance(x, Fraction) else int(x)


def _ceil(x) -> int:
    return -((-x).numerator // (-x).denominator) if isinstance(x, Fraction) else int(x)


_EMPTY = "empty"


def _propagate_bounds(rows, dim):
    """Cheap valid coordinate bounds by interval propagation.

    Rows are normalized to a.x >= rhs.  Returns (lo, hi) lists with None for
    bounds the propagation could not derive, or the string _EMPTY when a row
    is provably unsatisfiable over the current intervals.  The pass count is
    capped, so this terminates even on empty systems; the bounds are always
    valid, never assumed tight.
    """
    norm = []
    for coeffs, rel, rhs in rows:
        if rel == ">=":
            norm.append((coeffs, rhs))
        else:
            norm.append((tuple(-c for c in coeffs), -rhs))
    lo = [None] * dim
    hi = [None] * dim

    def term_upper(j, c):
        bound = hi[j] if c > 0 else lo[j]
        return None if bound is None else c * bound

    for _ in range(3):
        changed = False
        for coeffs, rhs in norm:
            support = [j for j, c in enumerate(coeffs) if c != 0]
            uppers = {j: term_upper(j, coeffs[j]) for j in support}
            known = [j for j in support if uppers[j] is not None]
            total_known = sum(uppers[j] for j in known)
            if len(known) == len(support) and total_known < rhs:
                return _EMPTY, _EMPTY
            if len(known) < len(support) - 1:
                continue
            for i in support:
                if len(known) == len(support) - 1 and uppers[i] is not None:
                    continue
                others = total_known - (uppers[i] if uppers[i] is not None else 0)
                c = coeffs[i]
                value = Fraction(rhs - others, c)
                if c > 0:
                    if lo[i] is None or value > lo[i]:
                        lo[i] = value
                        changed = True
                else:
                    if hi[i] is None or value < hi[i]:
                        hi[i] = value
                        changed = True
        for j in range(dim):
            if lo[j] is not None and hi[j] is not None and lo[j] > hi[j]:
                return _EMPTY, _EMPTY
        if not changed:
            break
    return lo, hi


def box_of_rows(rows, dim, check_feasibility: bool = True):
    """Feasibility, boundedness and an integer bounding box of an H-system.

    Returns (feasible, bounded, lo, hi); lo/hi are valid integer bounds per
    coordinate when feasible and bounded.  Interval propagation supplies
    most bounds; rational LPs settle whatever it leaves open.  With
    ``check_feasibility=False`` an empty system may be reported feasible --
    the caller's scan then simply finds no points.
    """
    if dim == 0:
        ok = all(_row_satisfied(row, ()) for row in rows)
        return ok, True, [], []
    lo, hi = _propagate_bounds(rows, dim)
    if lo is _EMPTY:
        return False, True, [], []
    if check_feasibility and exactlp.feasible_point(list(rows), dim) is None:
        return False, True, [], []
    for j in range(dim):
        for side, current in (("max", hi), ("min", lo)):
            if current[j] is not None:
                continue
            objective = [1 if i == j else 0 for i in range(dim)]
            result = exactlp.solve_lp(objective, list(rows), dim, sense=side)
            if result.status == exactlp.INFEASIBLE:
                return False, True, [], []
            if result.status == exactlp.UNBOUNDED:
                return True, False, [], []
            current[j] = result.value
    return True, True, [_ceil(x) for x in lo], [_floor(x) for x in hi]


def integer_points_of_rows(rows, dim, check_feasibility: bool = True) -> list[tuple[int, ...]]:
    """All integer solutions of an H-system by bounding-box scan.

    Raises UnboundedPolytope when the system is feasible but unbounded and
    InstanceTooLarge when the candidate box is absurd.
    """
    feasible, bounded, lo, hi = box_of_rows(rows, dim, check_feasibility)
    if not feasible:
        return []
    if not bounded:
        raise UnboundedPolytope("cannot enumerate lattice points of an unbounded polyhedron")
    candidates = 1
    for low, high in zip(lo, hi):
        candidates *= max(0, high - low + 1)
        if candidates > MAX_BOX_CANDIDATES:
            raise InstanceTooLarge(f"bounding box has more than {MAX_BOX_CANDIDATES} candidates")
    points = []
    for point in product(*(range(low, high + 1) for low, high in zip(lo, hi))):
        if all(_row_satisfied(row, point) for row in rows):
            points.append(point)
    return points


class FlowPolytope:
    """H-description of the flows with a given weight and lower bounds on
    a constrained arrow subset, in circulation-basis coordinates."""

    def __init__(self, quiver: Quiver, weight: Weight, constrained=None, bounds=None):
        if not weight.is_integral:
            raise MalformedInput("flow polytopes need an integral weight")
        self.quiver = quiver
        self.weight = weight
        self.constrained: tuple[str, ...] = (
            quiver.arrow_ids() if constrained is None else tuple(constrained)
        )
        unknown = set(self.constrained) - set(quiver.arrow_ids())
        if unknown:
            raise MalformedInput(f"constrained arrows not in the quiver: {sorted(unknown)}")
        self.bounds = {a: 0 for a in self.constrained}
        if bounds:
            for a, c in bounds.items():
                if a not in self.bounds:
                    raise MalformedInput(f"bound for unconstrained arrow {a!r}")
                self.bounds[a] = int(c)
        self.basis = circulation_basis(quiver)
        self.base_point = tree_completion(quiver, self.basis.tree, weight)
        self.rows = tuple(
            (self.basis.ray_coordinates(a), ">=", self.bounds[a] - self.base_point[a])
            for a in self.constrained
        )
        feasible, bounded, lo, hi = box_of_rows(self.rows, self.dim)
        self.feasible = feasible
        self.bounded = bounded
        self._box = (lo, hi)
        full = self.constrained == quiver.arrow_ids() and all(c == 0 for c in self.bounds.values())
        if full and feasible and not bounded:
            raise InternalInconsistency("a full flow polytope of an acyclic quiver must be compact")

    @property
    def dim(self) -> int:
        return self.basis.dim

    def point_from_coords(self, coords) -> Flow:
        return self.base_point + self.basis.flow_of(coords)

    def coords_of_point(self, flow: Flow):
        return self.basis.coordinates_of(flow - self.base_point)

    def contains(self, flow: Flow, strict: bool = False) -> bool:
        if weight_of_flow(self.quiver, flow) != self.weight:
            return False
        for a in self.constrained:
            if flow[a] < self.bounds[a] or (strict and flow[a] == self.bounds[a]):
                return False
        return True

    def affine_dimension(self) -> int:
        """Dimension of the affine hull (-1 when empty), via implicit equalities."""
        if not self.feasible:
            return -1
        implicit = []
        for coeffs, _, rhs in self.rows:
            top = exactlp.maximize(list(coeffs), list(self.rows), self.dim)
            if top.status == exactlp.OPTIMAL and top.value == rhs:
                implicit.append(list(coeffs))
        return self.dim - (rank(implicit) if implicit else 0)

    def __repr__(self):
        status = "empty" if not self.feasible else ("bounded" if self.bounded else "unbounded")
        return f"FlowPolytope({status}, weight={self.weight.values}, constrained={len(self.constrained)})"


def flow_polytope(quiver: Quiver, weight: Weight, constrained=None, bounds=None) -> FlowPolytope:
    return FlowPolytope(quiver, weight, constrained, bounds)


class LatticePointSet:
    """The integral points of a bounded flow polytope, with the interior sublist."""

    def __init__(self, polytope: FlowPolytope, points, interior):
        self.polytope = polytope
        self.points: tuple[Flow, ...] = tuple(points)
        self.interior: tuple[Flow, ...] = tuple(interior)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def interior_count(self) -> int:
        return len(self.interior)


def lattice_points(polytope: FlowPolytope) -> LatticePointSet:
    """Enumerate the lattice points of a bounded polytope exactly.

    The empty polytope yields an empty point set; unboundedness is an error.
    """
    if not polytope.feasible:
        return LatticePointSet(polytope, (), ())
    if not polytope.bounded:
        raise UnboundedPolytope("polytope is unbounded; refusing to enumerate")
    lo, hi = polytope._box
    candidates = 1
    for low, high in zip(lo, hi):
        candidates *= max(0, high - low + 1)
        if candidates > MAX_BOX_CANDIDATES:
            raise InstanceTooLarge(f"bounding box has more than {MAX_BOX_CANDIDATES} candidates")
    coords = [
        point
        for point in product(*(range(low, high + 1) for low, high in zip(lo, hi)))
        if all(_row_satisfied(row, point) for row in polytope.rows)
    ]
    coords.sort()
    points, interior = [], []
    for x in coords:
        flow = polytope.point_from_coords(x)
        points.append(flow)
        if all(_row_satisfied(row, x, strict=True) for row in polytope.rows):
            interior.append(flow)
    return LatticePointSet(polytope, points, interior)


def bruteforce_vertices(polytope: FlowPolytope) -> tuple[Flow, ...]:
    """Vertices of the H-polytope by scanning basic solutions.

    Generic and slow; used for cross-checks against the stable-tree route.
    """
    if not polytope.feasible:
        return ()
    d = polytope.dim
    if d == 0:
        return (polytope.base_point,)
    found = set()
    for rows in combinations(polytope.rows, d):
        matrix = [list(r[0]) for r in rows]
        rhs = [r[2] for r in rows]
        x = solve_square(matrix, rhs)
        if x is None:
            continue
        if all(_row_satisfied(row, x) for row in polytope.rows):
            found.add(tuple(x))
    flows = [polytope.point_from_coords(x) for x in sorted(found)]
    return tuple(flows)


def polytope_vertices(polytope: FlowPolytope, fan_weight: Weight) -> dict[tuple[str, ...], Flow]:
    """Vertices of the full flow polytope indexed by the stable trees.

    Requires the weight to be in general position and the polytope to be the
    plain one (all arrows constrained at zero).
    """
    quiver = polytope.quiver
    if polytope.weight != fan_weight:
        raise MalformedInput("polytope weight differs from the fan weight")
    if polytope.constrained != quiver.arrow_ids() or any(c != 0 for c in polytope.bounds.values()):
        raise MalformedInput("vertex/tree correspondence needs the plain flow polytope")
    if not weight_position(quiver, fan_weight).general_position:
        raise NotGeneralPosition("vertex/tree correspondence needs a weight in general position")
    result = {}
    seen = set()
    for tree in stable_trees(quiver, fan_weight):
        vertex = tree_completion(quiver, tree, fan_weight)
        if not polytope.contains(vertex):
            raise InternalInconsistency(f"completion of stable tree {tree} left the polytope")
        if vertex.values in seen:
            raise InternalInconsistency("two stable trees produced the same vertex")
        seen.add(vertex.values)
        result[tree] = vertex
    return result


class ReflexivityReport:
    def __init__(self, quiver, interior_points, reflexive, facets, lattice_point_count):
        self.quiver = quiver
        self.interior_points = interior_points
        self.reflexive = reflexive
        self.facets = facets  # list of (arrow_id, primitive normal?, lattice distance as Fraction)
        self.lattice_point_count = lattice_point_count

    def to_json_dict(self) -> dict:
        return {
            "interior_points": self.interior_points,
            "reflexive": self.reflexive,
            "lattice_point_count": self.lattice_point_count,
            "facets": [
                {"arrow": a, "primitive_normal": prim, "distance": str(dist)}
                for a, prim, dist in self.facets
            ],
        }


def reflexivity_report(quiver: Quiver) -> ReflexivityReport:
    """Check reflexivity of the canonical-weight polytope.

    Reflexive means: the all-ones flow is the unique interior lattice point,
    and every facet has lattice distance one from it (primitive inner normal
    with right-hand side -1 after centering there).
    """
    theta = canonical_weight(quiver)
    if not weight_position(quiver, theta).general_position:
        raise NotGeneralPosition("canonical weight lies on a wall or has empty moduli")
    polytope = flow_polytope(quiver, theta)
    points = lattice_points(polytope)
    ones = Flow.ones(quiver)
    unique_interior = points.interior == (ones,)
    vertices = list(polytope_vertices(polytope, theta).values())
    vertex_coords = [polytope.coords_of_point(v) for v in vertices]
    d = polytope.dim
    facets = []
    all_distance_one = True
    for a in quiver.arrow_ids() if d > 0 else ():
        tight = [c for v, c in zip(vertices, vertex_coords) if v[a] == 0]
        if not tight or affine_rank(tight) != d - 1:
            continue
        normal = polytope.basis.ray_coordinates(a)
        g = vector_gcd(normal)
        # Centered at the all-ones flow the inequality reads <normal, y> >= -1,
        # so the lattice distance of the facet is 1/gcd(normal).
        distance = Fraction(1, g)
        primitive = g == 1
        facets.append((a, primitive, distance))
        if not primitive:
            all_distance_one = False
    reflexive = unique_interior and all_distance_one
    return ReflexivityReport(quiver, points.interior_count, reflexive, facets, points.count)
