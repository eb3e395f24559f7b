"""Stability of subquivers, stable trees, walls, and weight classification.

A subquiver (all vertices, a subset of the arrows) is stable for a weight
when every proper non-trivial vertex subset closed under successors has
negative total weight; semistable with <= 0.  Subsets are enumerated by
brute force over all 2^n - 2 candidates, which is fine at desk scale
(n <= ~12); a min-cut based check could replace the scan later without
changing any output.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import InstanceTooLarge
from .quiver import Quiver, Weight, canonical_weight

MAX_BRUTE_FORCE_VERTICES = 20


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of the successor-closed subset scan.

    ``witness`` is the lexicographically first subset (as vertices in input
    order) attaining the maximal weight sum; it is present exactly when the
    subquiver is not stable.
    """

    verdict: str  # 'stable' | 'strictly_semistable' | 'unstable'
    witness: tuple[str, ...] | None

    @property
    def is_stable(self) -> bool:
        return self.verdict == "stable"

    @property
    def is_semistable(self) -> bool:
        return self.verdict in ("stable", "strictly_semistable")

    def to_json_dict(self) -> dict:
        names = {"stable": "stable", "strictly_semistable": "semistable", "unstable": "unstable"}
        return {"verdict": names[self.verdict], "witness": list(self.witness) if self.witness else None}


@dataclass(frozen=True)
class Wall:
    """A partition of the vertices into two connected parts.

    The part containing the first vertex in input order is the plus side;
    t_plus / t_minus count the arrows crossing out of / into it.
    """

    plus: tuple[str, ...]
    minus: tuple[str, ...]
    t_plus: int
    t_minus: int

    @property
    def wall_type(self) -> tuple[int, int]:
        return (self.t_plus, self.t_minus)

    def to_json_dict(self) -> dict:
        return {"partition_plus": list(self.plus), "t_plus": self.t_plus, "t_minus": self.t_minus}


def _guard_size(quiver: Quiver):
    if quiver.n_vertices > MAX_BRUTE_FORCE_VERTICES:
        raise InstanceTooLarge(
            f"{quiver.n_vertices} vertices exceeds the brute-force subset budget ({MAX_BRUTE_FORCE_VERTICES})"
        )


def successor_closed_subsets(quiver: Quiver, arrow_ids: frozenset[str]):
    """Yield all proper non-trivial vertex subsets closed under successors.

    Closure is relative to the subquiver given by ``arrow_ids``: whenever a
    subset contains the source of a kept arrow it must contain its target.
    Subsets come out as sorted index tuples in increasing lexicographic order.
    """
    _guard_size(quiver)
    n = quiver.n_vertices
    arrows = [
        (quiver.vertex_index(a.source), quiver.vertex_index(a.target))
        for a in quiver.arrows
        if a.id in arrow_ids
    ]
    for size in range(1, n):
        for subset in combinations(range(n), size):
            members = set(subset)
            if all(t in members for s, t in arrows if s in members):
                yield subset


def classify_subquiver(quiver: Quiver, arrow_ids, weight: Weight) -> StabilityVerdict:
    """Classify the subquiver on ``arrow_ids`` as stable / strictly semistable / unstable."""
    arrow_ids = frozenset(arrow_ids)
    best_sum = None
    best_subset = None
    for subset in successor_closed_subsets(quiver, arrow_ids):
        total = sum(weight.values[i] for i in subset)
        if best_sum is None or total > best_sum or (total == best_sum and subset < best_subset):
            best_sum, best_subset = total, subset
    if best_sum is None or best_sum < 0:
        return StabilityVerdict("stable", None)
    witness = tuple(quiver.vertices[i] for i in best_subset)
    return StabilityVerdict("strictly_semistable" if best_sum == 0 else "unstable", witness)


def _is_spanning_tree(quiver: Quiver, arrow_subset) -> bool:
    parent = list(range(quiver.n_vertices))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in arrow_subset:
        ri, rj = find(quiver.vertex_index(a.source)), find(quiver.vertex_index(a.target))
        if ri == rj:
            return False
        parent[ri] = rj
    return True


@lru_cache(maxsize=None)
def spanning_trees(quiver: Quiver) -> tuple[tuple[str, ...], ...]:
    """All spanning trees of the underlying graph, as sorted arrow-id tuples.

    Enumeration is lexicographic in arrow input order.
    """
    n = quiver.n_vertices
    trees = []
    for subset in combinations(quiver.arrows, n - 1):
        if _is_spanning_tree(quiver, subset):
            trees.append(tuple(a.id for a in subset))
    return tuple(trees)


@lru_cache(maxsize=None)
def stable_trees(quiver: Quiver, weight: Weight) -> tuple[tuple[str, ...], ...]:
    """The spanning trees that are stable subquivers for the weight."""
    return tuple(
        tree for tree in spanning_trees(quiver) if classify_subquiver(quiver, tree, weight).is_stable
    )


@lru_cache(maxsize=None)
def stable_arrow_set(quiver: Quiver, weight: Weight) -> tuple[str, ...]:
    """Arrows whose removal leaves a stable subquiver."""
    all_ids = quiver.arrow_ids()
    kept = []
    for arrow_id in all_ids:
        rest = frozenset(a for a in all_ids if a != arrow_id)
        if classify_subquiver(quiver, rest, weight).is_stable:
            kept.append(arrow_id)
    return tuple(kept)


def _connected_subset(quiver: Quiver, subset: set[int]) -> bool:
    if not subset:
        return False
    edges = [
        (quiver.vertex_index(a.source), quiver.vertex_index(a.target))
        for a in quiver.arrows
        if quiver.vertex_index(a.source) in subset and quiver.vertex_index(a.target) in subset
    ]
    seen = {next(iter(subset))}
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        for s, t in edges:
            for u, w in ((s, t), (t, s)):
                if u == v and w not in seen:
                    seen.add(w)
                    frontier.append(w)
    return seen == subset


@lru_cache(maxsize=None)
def enumerate_walls(quiver: Quiver) -> tuple[Wall, ...]:
    """All walls: vertex partitions with both full subquivers connected.

    Orientation is canonical (the first vertex sits on the plus side), so
    each geometric wall is listed once.
    """
    _guard_size(quiver)
    n = quiver.n_vertices
    walls = []
    if n == 1:
        return ()
    rest = list(range(1, n))
    for mask in range(2 ** (n - 1) - 1):
        plus = {0} | {rest[i] for i in range(n - 1) if mask >> i & 1}
        minus = set(range(n)) - plus
        if not _connected_subset(quiver, plus) or not _connected_subset(quiver, minus):
            continue
        t_plus = t_minus = 0
        for a in quiver.arrows:
            s, t = quiver.vertex_index(a.source), quiver.vertex_index(a.target)
            if s in plus and t in minus:
                t_plus += 1
            elif s in minus and t in plus:
                t_minus += 1
        walls.append(
            Wall(
                plus=tuple(quiver.vertices[i] for i in sorted(plus)),
                minus=tuple(quiver.vertices[i] for i in sorted(minus)),
                t_plus=t_plus,
                t_minus=t_minus,
            )
        )
    return tuple(walls)


@dataclass(frozen=True)
class CanonicalDiagnostics:
    """Wall-criterion predictions for the canonical weight, with cross-checks.

    The predictions say: general position holds iff no (t,t)-wall exists, and
    the stable arrow set is all of Q_1 iff there is no (1,0)- and no
    (1,1)-wall.  Both are compared against the direct computations.
    """

    has_tt_wall: bool
    has_10_or_11_wall: bool
    predicted_general_position: bool
    predicted_full_arrow_set: bool
    actual_full_arrow_set: bool
    general_position_matches: bool
    full_arrow_set_matches: bool

    def to_json_dict(self) -> dict:
        return {
            "has_tt_wall": self.has_tt_wall,
            "has_10_or_11_wall": self.has_10_or_11_wall,
            "predicted_general_position": self.predicted_general_position,
            "predicted_full_arrow_set": self.predicted_full_arrow_set,
            "actual_full_arrow_set": self.actual_full_arrow_set,
            "general_position_matches": self.general_position_matches,
            "full_arrow_set_matches": self.full_arrow_set_matches,
        }


@dataclass(frozen=True)
class WeightPosition:
    """Where a weight sits relative to the wall system."""

    weight: Weight
    walls_hit: tuple[Wall, ...]
    moduli_nonempty: bool
    general_position: bool
    canonical: CanonicalDiagnostics | None

    def to_json_dict(self) -> dict:
        doc = {
            "general_position": self.general_position,
            "moduli_nonempty": self.moduli_nonempty,
            "walls_hit": [w.to_json_dict() for w in self.walls_hit],
        }
        if self.canonical is not None:
            doc["canonical_diagnostics"] = self.canonical.to_json_dict()
        return doc


@lru_cache(maxsize=None)
def weight_position(quiver: Quiver, weight: Weight) -> WeightPosition:
    """Report which walls the weight lies on and whether it is in general position.

    General position requires missing every wall and a non-empty moduli space
    (equivalently, at least one stable spanning tree).  For the canonical
    weight the report also carries the wall-criterion predictions and their
    cross-check against the direct computation.
    """
    hit = []
    for wall in enumerate_walls(quiver):
        if sum(weight[v] for v in wall.plus) == 0:
            hit.append(wall)
    nonempty = len(stable_trees(quiver, weight)) > 0
    general = not hit and nonempty
    diagnostics = None
    if weight == canonical_weight(quiver):
        walls = enumerate_walls(quiver)
        has_tt = any(w.t_plus == w.t_minus for w in walls)
        has_10_11 = any(sorted(w.wall_type) in ([0, 1], [1, 1]) for w in walls)
        actual_full = stable_arrow_set(quiver, weight) == quiver.arrow_ids()
        diagnostics = CanonicalDiagnostics(
            has_tt_wall=has_tt,
            has_10_or_11_wall=has_10_11,
            predicted_general_position=not has_tt,
            predicted_full_arrow_set=not has_10_11,
            actual_full_arrow_set=actual_full,
            general_position_matches=(not has_tt) == general,
            full_arrow_set_matches=(not has_10_11) == actual_full,
        )
    return WeightPosition(
        weight=weight,
        walls_hit=tuple(hit),
        moduli_nonempty=nonempty,
        general_position=general,
        canonical=diagnostics,
    )
