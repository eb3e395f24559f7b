"""The endomorphism algebra of the universal bundle.

Summands of the universal bundle are indexed by vertices; two summands are
isomorphic exactly when their vertices are joined by a walk avoiding the
stable arrow set, so the isomorphism classes are the components of the
complement graph and contracting them yields the quotient quiver.  Hom
dimensions are computed twice on purpose: as lattice-point counts of the
section polytopes and, when the stable arrow set is everything, as path
counts; a mismatch is a bug, never a tolerated difference.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cohomology import ExtReport, ToricCohomology, ext_table
from .errors import (
    InternalInconsistency,
    MalformedInput,
    NotGeneralPosition,
    OrientedCycle,
    QuotientHasOrientedCycle,
    StableArrowSetNotFull,
)
from .lattice import flow_polytope, lattice_points
from .quiver import Arrow, Quiver, Weight, count_all_paths, enumerate_paths
from .stability import stable_arrow_set, weight_position


@dataclass(frozen=True)
class BundleIsoClasses:
    """Partition of the vertices by isomorphism of the bundle summands."""

    quiver: Quiver
    classes: tuple[tuple[str, ...], ...]  # each class sorted by input order

    def class_of(self, vertex: str) -> tuple[str, ...]:
        for cls in self.classes:
            if vertex in cls:
                return cls
        raise MalformedInput(f"unknown vertex {vertex!r}")

    def representative(self, vertex: str) -> str:
        return self.class_of(vertex)[0]

    @property
    def all_singletons(self) -> bool:
        return all(len(cls) == 1 for cls in self.classes)


class QuotientQuiver:
    """The quiver obtained by contracting all arrows outside the stable set.

    ``quiver`` is None when the contraction creates an oriented cycle; the
    localized algebra is then infinite-dimensional and downstream geometry
    refuses to proceed.
    """

    def __init__(self, parent: Quiver, iso: BundleIsoClasses, kept_arrows):
        self.parent = parent
        self.iso = iso
        self.kept_arrows = tuple(kept_arrows)
        reps = tuple(cls[0] for cls in iso.classes)
        arrows = [
            Arrow(a.id, iso.representative(a.source), iso.representative(a.target))
            for a in parent.arrows
            if a.id in set(kept_arrows)
        ]
        try:
            self.quiver: Quiver | None = Quiver(reps, arrows)
            self.acyclic = True
        except OrientedCycle as exc:
            self.quiver = None
            self.acyclic = False
            self._cycle_detail = exc.detail

    def as_quiver(self) -> Quiver:
        if self.quiver is None:
            raise QuotientHasOrientedCycle(self._cycle_detail)
        return self.quiver

    def project_vertex(self, vertex: str) -> str:
        return self.iso.representative(vertex)

    def induce_weight(self, weight: Weight) -> Weight:
        """Sum the weight over each identified class."""
        quotient = self.as_quiver()
        values = []
        for cls in self.iso.classes:
            values.append(sum(weight[v] for v in cls))
        return Weight(quotient, tuple(values))

    def to_json_dict(self) -> dict:
        doc = {
            "classes": [list(cls) for cls in self.iso.classes],
            "arrows": list(self.kept_arrows),
            "acyclic": self.acyclic,
        }
        if self.quiver is not None:
            doc["quiver"] = self.quiver.to_json_dict()
        return doc


def bundle_iso_classes(quiver: Quiver, weight: Weight) -> tuple[BundleIsoClasses, QuotientQuiver]:
    """Isomorphism classes of the universal bundle's summands and the quotient quiver."""
    _require_general_position(quiver, weight)
    kept = stable_arrow_set(quiver, weight)
    dropped = [a for a in quiver.arrows if a.id not in set(kept)]
    parent = {v: v for v in quiver.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in dropped:
        parent[find(a.source)] = find(a.target)
    groups: dict[str, list[str]] = {}
    for v in quiver.vertices:
        groups.setdefault(find(v), []).append(v)
    classes = tuple(
        tuple(sorted(group, key=quiver.vertex_index))
        for group in sorted(groups.values(), key=lambda g: min(quiver.vertex_index(v) for v in g))
    )
    iso = BundleIsoClasses(quiver=quiver, classes=classes)
    return iso, QuotientQuiver(quiver, iso, kept)


def _require_general_position(quiver: Quiver, weight: Weight):
    if not weight.is_integral:
        raise MalformedInput("stability weight must be integral here")
    if not weight_position(quiver, weight).general_position:
        raise NotGeneralPosition("weight lies on a wall or the moduli space is empty")


def hom_dim(quiver: Quiver, weight: Weight, p: str, q: str) -> int:
    """dim Hom between the summands at p and q.

    Counted as lattice points of the section polytope of the class +1 at p,
    -1 at q, constrained on the stable arrow set; when that set is all of
    Q_1 the count must equal the number of paths from p to q.
    """
    _require_general_position(quiver, weight)
    kept = stable_arrow_set(quiver, weight)
    polytope = flow_polytope(quiver, Weight.pair(quiver, p, q), constrained=kept)
    count = lattice_points(polytope).count
    if kept == quiver.arrow_ids():
        paths = len(enumerate_paths(quiver, p, q))
        if paths != count:
            raise InternalInconsistency(
                f"Hom({p},{q}) = {count} lattice points but {paths} paths"
            )
    return count


@dataclass(frozen=True)
class EndAlgebraReport:
    quiver: Quiver
    weight: Weight
    hom_matrix: tuple[tuple[int, ...], ...]  # vertex input order
    total_dim: int
    is_basic: bool
    is_path_algebra: bool
    full_arrow_set: bool
    iso_classes: BundleIsoClasses
    quotient: QuotientQuiver
    basic_dim: int | None  # dim of the Morita-reduced algebra; None if not finite-dim

    def hom(self, p: str, q: str) -> int:
        return self.hom_matrix[self.quiver.vertex_index(p)][self.quiver.vertex_index(q)]

    def to_json_dict(self) -> dict:
        doc = {
            "hom_matrix": [list(row) for row in self.hom_matrix],
            "dim": self.total_dim,
            "is_basic": self.is_basic,
            "is_path_algebra": self.is_path_algebra,
            "localization": {
                "inverted_arrows": sorted(
                    set(self.quiver.arrow_ids()) - set(self.quotient.kept_arrows)
                ),
                "quotient": self.quotient.to_json_dict(),
                "basic_dim": self.basic_dim,
            },
        }
        return doc


def end_algebra_report(quiver: Quiver, weight: Weight) -> EndAlgebraReport:
    """Hom matrix and structure flags of the endomorphism algebra.

    The algebra is the path algebra of the quiver itself exactly when the
    stable arrow set is all arrows; then the total dimension must equal the
    path count.  Otherwise the basic form is the path algebra of the
    quotient quiver, reported descriptively.
    """
    _require_general_position(quiver, weight)
    matrix = tuple(
        tuple(hom_dim(quiver, weight, p, q) for q in quiver.vertices) for p in quiver.vertices
    )
    for i, p in enumerate(quiver.vertices):
        if matrix[i][i] != 1:
            raise InternalInconsistency(f"Hom({p},{p}) = {matrix[i][i]} but summands are line bundles")
    total = sum(sum(row) for row in matrix)
    iso, quotient = bundle_iso_classes(quiver, weight)
    full = stable_arrow_set(quiver, weight) == quiver.arrow_ids()
    is_path_algebra = full
    if full and total != count_all_paths(quiver):
        raise InternalInconsistency(
            f"End dimension {total} differs from the path count {count_all_paths(quiver)}"
        )
    basic_dim = count_all_paths(quotient.as_quiver()) if quotient.acyclic else None
    return EndAlgebraReport(
        quiver=quiver,
        weight=weight,
        hom_matrix=matrix,
        total_dim=total,
        is_basic=iso.all_singletons,
        is_path_algebra=is_path_algebra,
        full_arrow_set=full,
        iso_classes=iso,
        quotient=quotient,
        basic_dim=basic_dim,
    )


@dataclass(frozen=True)
class ExceptionalReport:
    quiver: Quiver  # the quiver the geometry ran on (quotient when reduced)
    weight: Weight
    reduced: bool
    sequence: tuple[str, ...]
    each_exceptional: bool
    ordered_vanishing: bool  # Hom and Ext vanish against the order
    strong: bool  # no higher Ext in any direction
    directed: bool  # Hom-support is a partial order
    ext: ExtReport
    hom_matrix: tuple[tuple[int, ...], ...]

    @property
    def is_strong_exceptional_sequence(self) -> bool:
        return self.each_exceptional and self.ordered_vanishing and self.strong

    def to_json_dict(self) -> dict:
        return {
            "sequence": list(self.sequence),
            "each_exceptional": self.each_exceptional,
            "ordered_vanishing": self.ordered_vanishing,
            "strong_exceptional": self.is_strong_exceptional_sequence,
            "directed": self.directed,
            "reduced_to_quotient": self.reduced,
            "ext": list(self.ext.ext),
        }


def exceptional_check(quiver: Quiver, weight: Weight) -> ExceptionalReport:
    """Verify that the summands form a strong exceptional sequence.

    The candidate order is a topological sort of the (possibly quotient)
    quiver.  Checked: every summand is exceptional, Hom and all Ext vanish
    against the order, no higher Ext in any direction, and the Hom-support
    relation is a partial order (directedness).
    """
    _require_general_position(quiver, weight)
    full = stable_arrow_set(quiver, weight) == quiver.arrow_ids()
    reduced = not full
    if full:
        base, base_weight = quiver, weight
    else:
        _, quotient = bundle_iso_classes(quiver, weight)
        base = quotient.as_quiver()
        base_weight = quotient.induce_weight(weight)
        if not weight_position(base, base_weight).general_position:
            raise NotGeneralPosition("induced weight on the quotient quiver is not in general position")
        if stable_arrow_set(base, base_weight) != base.arrow_ids():
            raise StableArrowSetNotFull(
                "stable arrow set still not full after one quotient reduction"
            )
    engine = ToricCohomology(base, base_weight)
    ext = ext_table(base, base_weight, engine=engine)
    matrix = tuple(
        tuple(hom_dim(base, base_weight, p, q) for q in base.vertices) for p in base.vertices
    )
    for p in base.vertices:
        for q in base.vertices:
            if ext.hom_dim(p, q) != matrix[base.vertex_index(p)][base.vertex_index(q)]:
                raise InternalInconsistency(
                    f"section count and cohomology h^0 disagree on ({p},{q})"
                )

    sequence = base.topological_order
    each_exceptional = all(
        ext.table(q, q).h == (1,) + (0,) * engine.dim for q in base.vertices
    )
    ordered = True
    position = {v: i for i, v in enumerate(sequence)}
    for p in base.vertices:
        for q in base.vertices:
            if position[p] > position[q] and any(v != 0 for v in ext.table(p, q).h):
                ordered = False
    strong = ext.vanishing_holds

    def hom(p, q):
        return matrix[base.vertex_index(p)][base.vertex_index(q)]

    directed = True
    for p in base.vertices:
        for q in base.vertices:
            if hom(p, q) and hom(q, p) and p != q:
                directed = False
            for r in base.vertices:
                if hom(p, q) and hom(q, r) and not hom(p, r):
                    directed = False
    return ExceptionalReport(
        quiver=base,
        weight=base_weight,
        reduced=reduced,
        sequence=sequence,
        each_exceptional=each_exceptional,
        ordered_vanishing=ordered,
        strong=strong,
        directed=directed,
        ext=ext,
        hom_matrix=matrix,
    )
