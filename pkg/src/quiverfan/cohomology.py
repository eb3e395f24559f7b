"""Line-bundle cohomology on the moduli space via sign patterns.

Cohomology of an equivariant line bundle class is graded by the circulation
lattice.  A graded piece at a lattice point only depends on which rays see
the point strictly below the bundle's order function; for a smooth fan that
set S determines a subcomplex K_S of the fan's nerve (the ray subsets of S
spanning cones), and the graded piece in degree l is the reduced cohomology
of K_S in degree l-1, with the convention that the empty complex contributes
exactly to degree zero.  Summing over lattice points means counting the
integer points of one chamber per realized pattern and weighting by the
reduced Betti numbers of K_S.

Everything is exact: chambers are counted by the lattice engine, Betti
numbers come from fraction-free ranks of boundary matrices over the
rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    FanNotComplete,
    FanNotSmooth,
    InstanceTooLarge,
    InternalInconsistency,
    MalformedInput,
    UnboundedPolytope,
)
from .fan import Fan, FanChecks, build_fan, fan_checks
from .lattice import circulation_basis, flow_polytope, integer_points_of_rows, tree_completion
from .linalg import rank_int
from .quiver import Flow, Quiver, Weight, canonical_weight, weight_of_flow
from .stability import stable_trees

MAX_RAYS = 20


def reduced_betti_numbers(candidate_faces, top_dim: int) -> tuple[int, ...]:
    """Reduced rational Betti numbers of the complex generated by the faces.

    ``candidate_faces`` are vertex sets (any hashables); the complex consists
    of all their subsets, always including the empty face.  The result has
    ``top_dim + 1`` entries: entry l is the reduced Betti number in degree
    l - 1, so entry 0 is 1 exactly for the empty complex.
    """
    faces: set[frozenset] = {frozenset()}
    for face in candidate_faces:
        face = frozenset(face)
        for size in range(1, len(face) + 1):
            for sub in combinations(sorted(face, key=str), size):
                faces.add(frozenset(sub))
    by_size: dict[int, list[tuple]] = {}
    for face in faces:
        by_size.setdefault(len(face), []).append(tuple(sorted(face, key=str)))
    for size in by_size:
        by_size[size].sort()
    max_size = max(by_size)
    ranks = {}  # size s -> rank of boundary C_s -> C_{s-1}
    for size in range(1, max_size + 1):
        sources = by_size.get(size, [])
        targets = {face: i for i, face in enumerate(by_size.get(size - 1, []))}
        matrix = [[0] * len(sources) for _ in targets]
        for col, face in enumerate(sources):
            for drop in range(size):
                sub = face[:drop] + face[drop + 1 :]
                matrix[targets[sub]][col] = (-1) ** drop
        ranks[size] = rank_int(matrix) if matrix else 0
    betti = []
    for l in range(top_dim + 1):
        size = l  # faces with l vertices sit in homological degree l-1
        count = len(by_size.get(size, []))
        betti.append(count - ranks.get(size, 0) - ranks.get(size + 1, 0))
    return tuple(betti)


@dataclass(frozen=True)
class PatternContribution:
    """One realized sign pattern: the rays strictly below, the chamber's
    lattice point count, and the reduced Betti numbers it multiplies."""

    pattern: tuple[str, ...]
    point_count: int
    betti: tuple[int, ...]


@dataclass(frozen=True)
class CohomologyTable:
    weight: Weight
    h: tuple[int, ...]
    contributions: tuple[PatternContribution, ...] = ()

    @property
    def euler(self) -> int:
        return sum((-1) ** l * value for l, value in enumerate(self.h))

    def to_json_dict(self, detail: bool = False) -> dict:
        doc = {"weight": self.weight.to_json_dict(), "h": list(self.h), "euler": self.euler}
        if detail:
            doc["contributions"] = [
                {"pattern": list(c.pattern), "points": c.point_count, "betti": list(c.betti)}
                for c in self.contributions
            ]
        return doc


class ToricCohomology:
    """Cohomology engine bound to one fan; caches the nerve subcomplexes."""

    def __init__(self, quiver: Quiver, fan_weight: Weight, fan: Fan | None = None):
        self.quiver = quiver
        self.fan = fan if fan is not None else build_fan(quiver, fan_weight)
        if self.fan.quiver != quiver:
            raise MalformedInput("fan belongs to a different quiver")
        checks = fan_checks(self.fan)
        if not checks.smooth:
            raise FanNotSmooth("; ".join(checks.offending))
        if not checks.complete:
            raise FanNotComplete("; ".join(checks.offending))
        self.checks: FanChecks = checks
        self.basis = circulation_basis(quiver)
        self.rays: tuple[str, ...] = quiver.arrow_ids()
        if len(self.rays) > MAX_RAYS:
            raise InstanceTooLarge(f"more than {MAX_RAYS} rays")
        self._cone_ray_sets = [frozenset(c.rays) for c in self.fan.max_cones]
        self._betti_cache: dict[frozenset, tuple[int, ...]] = {}

    @property
    def dim(self) -> int:
        return self.fan.dim

    def _betti(self, pattern: frozenset) -> tuple[int, ...]:
        cached = self._betti_cache.get(pattern)
        if cached is None:
            faces = [pattern & rays for rays in self._cone_ray_sets]
            cached = reduced_betti_numbers(faces, self.dim)
            self._betti_cache[pattern] = cached
        return cached

    def divisor_representative(self, weight: Weight) -> Flow:
        if not weight.is_integral:
            raise MalformedInput("line bundle classes must be integral weights")
        return tree_completion(self.quiver, self.basis.tree, weight)

    def table(self, weight: Weight, divisor: Flow | None = None, keep_contributions: bool = True) -> CohomologyTable:
        """The full cohomology vector of the line bundle class of ``weight``.

        ``divisor`` may fix a particular integral flow representing the class;
        the table is independent of that choice.
        """
        if divisor is None:
            divisor = self.divisor_representative(weight)
        else:
            if not divisor.is_integral:
                raise MalformedInput("divisor representative must be integral")
            if weight_of_flow(self.quiver, divisor) != weight:
                raise MalformedInput("divisor representative has the wrong class")
        d = self.dim
        h = [0] * (d + 1)
        contributions = []
        m = len(self.rays)
        ray_coords = {a: self.basis.ray_coordinates(a) for a in self.rays}
        for mask in range(1 << m):
            pattern = frozenset(self.rays[i] for i in range(m) if mask >> i & 1)
            betti = self._betti(pattern)
            if all(b == 0 for b in betti):
                continue
            rows = []
            for a in self.rays:
                bound = -divisor[a]
                if a in pattern:
                    rows.append((ray_coords[a], "<=", bound - 1))
                else:
                    rows.append((ray_coords[a], ">=", bound))
            try:
                points = integer_points_of_rows(rows, d, check_feasibility=False)
            except UnboundedPolytope as exc:
                raise InternalInconsistency(
                    f"chamber of pattern {sorted(pattern)} is unbounded but has reduced cohomology"
                ) from exc
            if not points:
                continue
            count = len(points)
            for l in range(d + 1):
                h[l] += count * betti[l]
            contributions.append(
                PatternContribution(
                    pattern=tuple(a for a in self.rays if a in pattern),
                    point_count=count,
                    betti=betti,
                )
            )
        return CohomologyTable(
            weight=weight,
            h=tuple(h),
            contributions=tuple(contributions) if keep_contributions else (),
        )

    def section_polytope(self, weight: Weight):
        """The polytope whose lattice points are the global sections."""
        return flow_polytope(self.quiver, weight)


def line_bundle_cohomology(quiver: Quiver, fan_weight: Weight, weight: Weight, divisor: Flow | None = None) -> CohomologyTable:
    return ToricCohomology(quiver, fan_weight).table(weight, divisor)


@dataclass(frozen=True)
class GlobalGenerationReport:
    weight: Weight
    globally_generated: bool
    full_dimensional: bool

    def to_json_dict(self) -> dict:
        return {
            "weight": self.weight.to_json_dict(),
            "globally_generated": self.globally_generated,
            "full_dimensional": self.full_dimensional,
        }


def global_generation(quiver: Quiver, fan_weight: Weight, weight: Weight, engine: ToricCohomology | None = None) -> GlobalGenerationReport:
    """Check global generation and full-dimensionality of the section polytope.

    The bundle is globally generated iff for every maximal cone the unique
    flow with the given weight vanishing outside the cone's tree is a point
    of the section polytope, i.e. the tree completion is non-negative.
    """
    if engine is None:
        engine = ToricCohomology(quiver, fan_weight)
    if not weight.is_integral:
        raise MalformedInput("line bundle classes must be integral weights")
    polytope = flow_polytope(quiver, weight)
    if not polytope.bounded:
        raise UnboundedPolytope("section polytope is unbounded")
    generated = True
    for tree in stable_trees(quiver, fan_weight):
        generator = tree_completion(quiver, tree, weight)
        if not generator.is_regular:
            generated = False
            break
    full = polytope.affine_dimension() == quiver.moduli_dimension
    return GlobalGenerationReport(weight=weight, globally_generated=generated, full_dimensional=full)


@dataclass(frozen=True)
class ExtReport:
    """Cohomology tables of all the summand quotients of the universal bundle."""

    fan_weight: Weight
    pairs: dict
    ext: tuple[int, ...]
    vanishing_holds: bool

    def table(self, p: str, q: str) -> CohomologyTable:
        return self.pairs[(p, q)]

    def hom_dim(self, p: str, q: str) -> int:
        return self.pairs[(p, q)].h[0]

    def to_json_dict(self) -> dict:
        return {
            "pairs": {f"{p}->{q}": list(t.h) for (p, q), t in self.pairs.items()},
            "ext": list(self.ext),
            "vanishing_holds": self.vanishing_holds,
        }


def ext_table(quiver: Quiver, weight: Weight, engine: ToricCohomology | None = None) -> ExtReport:
    """Ext dimensions of the universal bundle: one table per ordered vertex pair.

    The (p, q) table is the cohomology of the class +1 at p, -1 at q; the
    aggregate ext vector sums over all ordered pairs.
    """
    if engine is None:
        engine = ToricCohomology(quiver, weight)
    d = engine.dim
    pairs = {}
    ext = [0] * (d + 1)
    for p in quiver.vertices:
        for q in quiver.vertices:
            table = engine.table(Weight.pair(quiver, p, q), keep_contributions=False)
            pairs[(p, q)] = table
            for l in range(d + 1):
                ext[l] += table.h[l]
    vanishing = all(value == 0 for value in ext[1:])
    return ExtReport(fan_weight=weight, pairs=pairs, ext=tuple(ext), vanishing_holds=vanishing)


@dataclass(frozen=True)
class KodairaEntry:
    weight: Weight
    globally_generated: bool
    full_dimensional: bool
    checked: bool
    table: CohomologyTable | None
    ok: bool


@dataclass(frozen=True)
class KodairaReport:
    entries: tuple[KodairaEntry, ...]

    @property
    def violations(self) -> tuple[KodairaEntry, ...]:
        return tuple(e for e in self.entries if e.checked and not e.ok)

    @property
    def all_ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "checked": sum(1 for e in self.entries if e.checked),
            "violations": [e.weight.to_json_dict() for e in self.violations],
            "all_ok": self.all_ok,
        }


def kodaira_suite(quiver: Quiver, fan_weight: Weight, weights) -> KodairaReport:
    """Higher-cohomology vanishing for twists by the anti-canonical class.

    For every class in the list that is globally generated with a
    full-dimensional section polytope, the class minus the canonical weight
    must have vanishing cohomology in all positive degrees.  Any violation
    falsifies the implementation and is reported with its full table.
    """
    engine = ToricCohomology(quiver, fan_weight)
    theta_c = canonical_weight(quiver)
    entries = []
    for weight in weights:
        report = global_generation(quiver, fan_weight, weight, engine=engine)
        checked = report.globally_generated and report.full_dimensional
        table = None
        ok = True
        if checked:
            table = engine.table(weight - theta_c, keep_contributions=False)
            ok = all(value == 0 for value in table.h[1:])
        entries.append(
            KodairaEntry(
                weight=weight,
                globally_generated=report.globally_generated,
                full_dimensional=report.full_dimensional,
                checked=checked,
                table=table,
                ok=ok,
            )
        )
    return KodairaReport(entries=tuple(entries))
