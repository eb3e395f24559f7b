"""The defining fan of the moduli space, built from stable trees.

Ray generators are the images of the arrows' unit vectors in the lattice
dual to the circulation lattice; in the coordinates dual to the circulation
basis the ray of an arrow is simply its value in each basis circulation.
Maximal cones are indexed by the stable spanning trees: the cone of a tree
is spanned by the rays of the arrows outside it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from itertools import combinations

from . import exactlp
from .errors import InternalInconsistency, MalformedInput, NotGeneralPosition, StableArrowSetNotFull
from .lattice import circulation_basis
from .linalg import det_int, solve_square
from .quiver import Quiver, Weight
from .stability import stable_arrow_set, stable_trees, weight_position


@dataclass(frozen=True)
class RayGenerator:
    arrow: str
    coords: tuple[int, ...]


@dataclass(frozen=True)
class MaxCone:
    tree: tuple[str, ...]
    rays: tuple[str, ...]


@dataclass(frozen=True)
class Fan:
    quiver: Quiver
    weight: Weight
    rays: tuple[RayGenerator, ...]
    max_cones: tuple[MaxCone, ...]

    @property
    def dim(self) -> int:
        return self.quiver.moduli_dimension

    def ray_coords(self, arrow: str) -> tuple[int, ...]:
        for ray in self.rays:
            if ray.arrow == arrow:
                return ray.coords
        raise MalformedInput(f"no ray for arrow {arrow!r}")

    def cone_matrix(self, cone: MaxCone) -> list[list[int]]:
        """Rows are the coordinates of the cone's rays."""
        return [list(self.ray_coords(a)) for a in cone.rays]

    def cone_contains(self, cone: MaxCone, point) -> bool:
        """Exact membership in a full-dimensional simplicial cone."""
        matrix = self.cone_matrix(cone)
        coeffs = solve_square([list(col) for col in zip(*matrix)], list(point))
        return coeffs is not None and all(c >= 0 for c in coeffs)

    def cone_membership_coeffs(self, cone: MaxCone, point):
        matrix = self.cone_matrix(cone)
        return solve_square([list(col) for col in zip(*matrix)], list(point))

    def to_json_dict(self, checks: "FanChecks | None" = None) -> dict:
        doc = {
            "rays": {r.arrow: list(r.coords) for r in self.rays},
            "max_cones": [{"tree": list(c.tree), "rays": list(c.rays)} for c in self.max_cones],
        }
        if checks is not None:
            doc["smooth"] = checks.smooth
            doc["complete"] = checks.complete
        return doc


def build_fan(quiver: Quiver, weight: Weight) -> Fan:
    """Assemble the fan of the moduli space for a weight in general position.

    Refuses weights on walls and quivers whose stable arrow set is a proper
    subset of the arrows; in the latter case the caller should pass the
    quotient quiver instead.
    """
    if not weight.is_integral:
        raise MalformedInput("fan construction needs an integral weight")
    if not weight_position(quiver, weight).general_position:
        raise NotGeneralPosition("weight lies on a wall or the moduli space is empty")
    full = stable_arrow_set(quiver, weight)
    if full != quiver.arrow_ids():
        missing = sorted(set(quiver.arrow_ids()) - set(full))
        raise StableArrowSetNotFull(
            f"arrows {missing} are not in the stable arrow set; build the fan of the quotient quiver"
        )
    basis = circulation_basis(quiver)
    rays = tuple(RayGenerator(a, basis.ray_coordinates(a)) for a in quiver.arrow_ids())
    if len({r.coords for r in rays}) != len(rays) or any(
        all(c == 0 for c in r.coords) for r in rays
    ):
        raise InternalInconsistency("ray generators are not distinct and non-zero")
    cones = []
    covered = set()
    for tree in stable_trees(quiver, weight):
        tree_set = set(tree)
        cone_rays = tuple(a for a in quiver.arrow_ids() if a not in tree_set)
        covered.update(cone_rays)
        cones.append(MaxCone(tree=tree, rays=cone_rays))
    if quiver.moduli_dimension > 0 and covered != set(quiver.arrow_ids()):
        raise InternalInconsistency("some ray lies in no maximal cone")
    return Fan(quiver=quiver, weight=weight, rays=rays, max_cones=tuple(cones))


@dataclass(frozen=True)
class FanChecks:
    smooth: bool
    complete: bool
    pairwise_intersections_ok: bool
    offending: tuple[str, ...] = ()

    @property
    def all_ok(self) -> bool:
        return self.smooth and self.complete and self.pairwise_intersections_ok


def fan_checks(fan: Fan, include_pairwise: bool = True) -> FanChecks:
    """Verify smoothness, completeness and the fan property, all exactly.

    Smooth: every maximal cone is unimodular.  Complete: the fan is pure of
    top dimension and boundary-free (every facet of a maximal cone is shared
    by exactly two of them).  Pairwise: any two maximal cones meet in a
    common face, certified by a separating linear functional; this scan is
    quadratic in the number of cones and can be switched off for bulk runs.
    """
    d = fan.dim
    offending: list[str] = []
    smooth = True
    pure = True
    for cone in fan.max_cones:
        if len(cone.rays) != d:
            pure = False
            smooth = False
            offending.append(f"cone {cone.rays} is not simplicial of top dimension")
            continue
        determinant = det_int(fan.cone_matrix(cone))
        if determinant == 0:
            pure = False
        if determinant not in (1, -1):
            smooth = False
            offending.append(f"cone {cone.rays} has determinant {determinant}")

    if d == 0:
        complete = len(fan.max_cones) == 1
        if not complete:
            offending.append("zero-dimensional fan must consist of the origin cone only")
    else:
        complete = pure
        facet_count: dict[frozenset, int] = {}
        for cone in fan.max_cones:
            if len(cone.rays) != d:
                continue
            for facet in combinations(cone.rays, d - 1):
                facet_count[frozenset(facet)] = facet_count.get(frozenset(facet), 0) + 1
        for facet, count in sorted(facet_count.items(), key=lambda kv: sorted(kv[0])):
            if count != 2:
                complete = False
                offending.append(f"facet {sorted(facet)} lies in {count} maximal cones")

    pairwise = True
    if include_pairwise and d > 0:
        for left, right in combinations(fan.max_cones, 2):
            common = set(left.rays) & set(right.rays)
            constraints = []
            for a in left.rays:
                coeffs = list(fan.ray_coords(a))
                constraints.append((coeffs, "==", 0) if a in common else (coeffs, ">=", 1))
            for a in right.rays:
                if a not in common:
                    constraints.append((list(fan.ray_coords(a)), "<=", -1))
            if exactlp.feasible_point(constraints, d) is None:
                pairwise = False
                offending.append(f"cones {left.rays} and {right.rays} do not meet in a common face")
    return FanChecks(
        smooth=smooth,
        complete=complete,
        pairwise_intersections_ok=pairwise,
        offending=tuple(offending),
    )


def drop_cone(fan: Fan, index: int) -> Fan:
    """A copy of the fan with one maximal cone removed (for diagnostics/tests)."""
    cones = fan.max_cones[:index] + fan.max_cones[index + 1 :]
    return replace(fan, max_cones=cones)


def monte_carlo_cover_check(fan: Fan, seed: int, samples: int = 1000) -> bool:
    """Seeded covering cross-check: every sampled direction lies in exactly
    one maximal cone.

    Samples on a cone boundary sit in two cones for the trivial reason of
    being shared faces, so they are discarded and redrawn.
    """
    rng = random.Random(seed)
    d = fan.dim
    if d == 0:
        return len(fan.max_cones) == 1
    done = 0
    while done < samples:
        point = tuple(rng.randint(-999, 999) for _ in range(d))
        if all(x == 0 for x in point):
            continue
        containing = 0
        boundary = False
        for cone in fan.max_cones:
            coeffs = fan.cone_membership_coeffs(cone, point)
            if coeffs is None:
                continue
            if all(c > 0 for c in coeffs):
                containing += 1
            elif all(c >= 0 for c in coeffs):
                boundary = True
        if boundary:
            continue
        if containing != 1:
            return False
        done += 1
    return True
