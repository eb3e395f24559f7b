"""Quivers, weights, flows and walks, with the elementary operations on them.

A quiver here is always finite, connected, and without oriented cycles.
Weights live on vertices and sum to zero; flows live on arrows.  The input
map sends a flow to the weight given by the net outflow at each vertex.
All arithmetic is exact: values are Python ints or ``fractions.Fraction``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    DisconnectedQuiver,
    DuplicateId,
    MalformedInput,
    NotAWalk,
    OrientedCycle,
    UnknownVertex,
)

Scalar = Union[int, Fraction]


def _norm(value: Scalar) -> Scalar:
    """Collapse integral Fractions to int so equal values compare cleanly."""
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedInput(f"not an exact number: {value!r}")
    return value


def parse_scalar(raw) -> Scalar:
    """Parse an int or a rational written as 'n/d' (or 'n') into an exact value."""
    if isinstance(raw, bool):
        raise MalformedInput(f"not an exact number: {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        try:
            return _norm(Fraction(raw))
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad rational literal {raw!r}") from exc
    raise MalformedInput(f"numbers must be integers or 'n/d' strings, got {raw!r}")


def format_scalar(value: Scalar):
    """Inverse of parse_scalar: ints stay ints, proper fractions become 'n/d'."""
    value = _norm(value)
    return value if isinstance(value, int) else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


class Quiver:
    """A connected quiver without oriented cycles.

    Vertices and arrows are identified by strings and keep their input
    order; dense indices in that order are used internally everywhere.
    Instances are immutable and hashable.
    """

    def __init__(self, vertices: Sequence[str], arrows: Iterable[Arrow]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.arrows: tuple[Arrow, ...] = tuple(arrows)
        if not self.vertices:
            raise MalformedInput("quiver needs at least one vertex")
        self._vertex_index = {}
        for v in self.vertices:
            if v in self._vertex_index:
                raise DuplicateId(f"duplicate vertex id {v!r}")
            self._vertex_index[v] = len(self._vertex_index)
        self._arrow_index = {}
        for a in self.arrows:
            if a.id in self._arrow_index:
                raise DuplicateId(f"duplicate arrow id {a.id!r}")
            if a.id in self._vertex_index:
                raise DuplicateId(f"arrow id {a.id!r} collides with a vertex id")
            if a.source not in self._vertex_index:
                raise UnknownVertex(f"arrow {a.id!r} has unknown source {a.source!r}")
            if a.target not in self._vertex_index:
                raise UnknownVertex(f"arrow {a.id!r} has unknown target {a.target!r}")
            self._arrow_index[a.id] = len(self._arrow_index)
        self._check_connected()
        self._topological_order = self._check_acyclic()
        self.out_arrows = {v: tuple(a for a in self.arrows if a.source == v) for v in self.vertices}
        self.in_arrows = {v: tuple(a for a in self.arrows if a.target == v) for v in self.vertices}

    # -- validation -------------------------------------------------------

    def _check_connected(self):
        parent = list(range(len(self.vertices)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a in self.arrows:
            ri, rj = find(self._vertex_index[a.source]), find(self._vertex_index[a.target])
            parent[ri] = rj
        roots = {find(i) for i in range(len(self.vertices))}
        if len(roots) > 1:
            comps = {}
            for v in self.vertices:
                comps.setdefault(find(self._vertex_index[v]), []).append(v)
            raise DisconnectedQuiver(f"components: {sorted(comps.values())}")

    def _check_acyclic(self) -> tuple[str, ...]:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.target] += 1
        order = []
        ready = [v for v in self.vertices if indeg[v] == 0]
        while ready:
            ready.sort(key=self._vertex_index.__getitem__)
            v = ready.pop(0)
            order.append(v)
            for a in self.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        ready.append(a.target)
        if len(order) < len(self.vertices):
            stuck = [v for v in self.vertices if v not in order]
            raise OrientedCycle(f"oriented cycle through {stuck}")
        return tuple(order)

    # -- basic accessors ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @property
    def moduli_dimension(self) -> int:
        """#arrows - #vertices + 1; the dimension of the moduli space."""
        return self.n_arrows - self.n_vertices + 1

    @property
    def topological_order(self) -> tuple[str, ...]:
        """Vertices in topological order, ties broken by input order."""
        return self._topological_order

    def vertex_index(self, v: str) -> int:
        try:
            return self._vertex_index[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def arrow_index(self, arrow_id: str) -> int:
        try:
            return self._arrow_index[arrow_id]
        except KeyError:
            raise UnknownVertex(f"unknown arrow {arrow_id!r}") from None

    def arrow(self, arrow_id: str) -> Arrow:
        return self.arrows[self.arrow_index(arrow_id)]

    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def _key(self):
        return (self.vertices, self.arrows)

    def __eq__(self, other):
        return isinstance(other, Quiver) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Quiver({self.n_vertices} vertices, {self.n_arrows} arrows)"

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "source": a.source, "target": a.target} for a in self.arrows],
        }


def parse_quiver(document) -> Quiver:
    """Parse and validate a quiver from JSON text or an already-parsed dict.

    The schema is ``{"vertices": [str, ...], "arrows": [{"id", "source",
    "target"}, ...]}``.  Schema violations raise MalformedInput; violations
    of the quiver invariants raise the specific domain error.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise MalformedInput("quiver document must be a JSON object")
    extra = set(document) - {"vertices", "arrows"}
    if extra:
        raise MalformedInput(f"unexpected keys {sorted(extra)}")
    vertices = document.get("vertices")
    arrows = document.get("arrows")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise MalformedInput("'vertices' must be a list of strings")
    if not isinstance(arrows, list):
        raise MalformedInput("'arrows' must be a list")
    parsed = []
    for entry in arrows:
        if not isinstance(entry, dict) or set(entry) != {"id", "source", "target"}:
            raise MalformedInput(f"bad arrow record: {entry!r}")
        if not all(isinstance(entry[k], str) for k in ("id", "source", "target")):
            raise MalformedInput(f"arrow fields must be strings: {entry!r}")
        parsed.append(Arrow(entry["id"], entry["source"], entry["target"]))
    return Quiver(vertices, parsed)


@dataclass(frozen=True)
class Weight:
    """An exact function on vertices summing to zero, stored in vertex order."""

    quiver: Quiver
    values: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.values) != self.quiver.n_vertices:
            raise MalformedInput("weight has wrong length")
        object.__setattr__(self, "values", tuple(_norm(v) for v in self.values))
        if sum(self.values) != 0:
            raise MalformedInput(f"weight does not sum to zero: {self.values}")

    @classmethod
    def from_mapping(cls, quiver: Quiver, mapping: Mapping[str, Scalar]) -> "Weight":
        missing = set(quiver.vertices) - set(mapping)
        unknown = set(mapping) - set(quiver.vertices)
        if missing or unknown:
            raise MalformedInput(f"weight keys mismatch: missing {sorted(missing)}, unknown {sorted(unknown)}")
        return cls(quiver, tuple(mapping[v] for v in quiver.vertices))

    @classmethod
    def zero(cls, quiver: Quiver) -> "Weight":
        return cls(quiver, (0,) * quiver.n_vertices)

    @classmethod
    def pair(cls, quiver: Quiver, p: str, q: str) -> "Weight":
        """The weight with value +1 at p, -1 at q, and 0 elsewhere."""
        ip, iq = quiver.vertex_index(p), quiver.vertex_index(q)
        values = [0] * quiver.n_vertices
        values[ip] += 1
        values[iq] -= 1
        return cls(quiver, tuple(values))

    def __getitem__(self, vertex: str) -> Scalar:
        return self.values[self.quiver.vertex_index(vertex)]

    def __add__(self, other: "Weight") -> "Weight":
        self._same(other)
        return Weight(self.quiver, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Weight") -> "Weight":
        self._same(other)
        return Weight(self.quiver, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "Weight":
        return Weight(self.quiver, tuple(-a for a in self.values))

    def __mul__(self, k: Scalar) -> "Weight":
        return Weight(self.quiver, tuple(k * a for a in self.values))

    __rmul__ = __mul__

    def _same(self, other: "Weight"):
        if self.quiver != other.quiver:
            raise MalformedInput("weights live on different quivers")

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.values)

    def as_mapping(self) -> dict[str, Scalar]:
        return dict(zip(self.quiver.vertices, self.values))

    def to_json_dict(self) -> dict:
        return {v: format_scalar(x) for v, x in zip(self.quiver.vertices, self.values)}


@dataclass(frozen=True)
class Flow:
    """An exact function on arrows, stored in arrow order."""

    quiver: Quiver
    values: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.values) != self.quiver.n_arrows:
            raise MalformedInput("flow has wrong length")
        object.__setattr__(self, "values", tuple(_norm(v) for v in self.values))

    @classmethod
    def from_mapping(cls, quiver: Quiver, mapping: Mapping[str, Scalar]) -> "Flow":
        ids = set(quiver.arrow_ids())
        missing, unknown = ids - set(mapping), set(mapping) - ids
        if missing or unknown:
            raise MalformedInput(f"flow keys mismatch: missing {sorted(missing)}, unknown {sorted(unknown)}")
        return cls(quiver, tuple(mapping[a.id] for a in quiver.arrows))

    @classmethod
    def zero(cls, quiver: Quiver) -> "Flow":
        return cls(quiver, (0,) * quiver.n_arrows)

    @classmethod
    def ones(cls, quiver: Quiver) -> "Flow":
        return cls(quiver, (1,) * quiver.n_arrows)

    def __getitem__(self, arrow_id: str) -> Scalar:
        return self.values[self.quiver.arrow_index(arrow_id)]

    def __add__(self, other: "Flow") -> "Flow":
        self._same(other)
        return Flow(self.quiver, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Flow") -> "Flow":
        self._same(other)
        return Flow(self.quiver, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "Flow":
        return Flow(self.quiver, tuple(-a for a in self.values))

    def __mul__(self, k: Scalar) -> "Flow":
        return Flow(self.quiver, tuple(k * a for a in self.values))

    __rmul__ = __mul__

    def _same(self, other: "Flow"):
        if self.quiver != other.quiver:
            raise MalformedInput("flows live on different quivers")

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.values)

    @property
    def is_regular(self) -> bool:
        """True when every value is >= 0, i.e. the flow respects arrow directions."""
        return all(v >= 0 for v in self.values)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(a.id for a, v in zip(self.quiver.arrows, self.values) if v != 0)

    def as_mapping(self) -> dict[str, Scalar]:
        return dict(zip(self.quiver.arrow_ids(), self.values))

    def to_json_dict(self) -> dict:
        return {a: format_scalar(v) for a, v in zip(self.quiver.arrow_ids(), self.values)}


class Walk:
    """A sequence of arrows traversed forward or in reverse, head to tail.

    No arrow may repeat.  An empty walk needs an explicit base vertex.
    A walk whose steps are all forward is a path.
    """

    def __init__(self, quiver: Quiver, steps: Sequence[tuple[str, bool]], start: str | None = None):
        self.quiver = quiver
        self.steps = tuple((arrow_id, bool(forward)) for arrow_id, forward in steps)
        if not self.steps:
            if start is None:
                raise NotAWalk("empty walk needs an explicit base vertex")
            quiver.vertex_index(start)
            self.start = start
            self.end = start
            return
        seen = set()
        here = None
        for arrow_id, forward in self.steps:
            arrow = quiver.arrow(arrow_id)
            if arrow_id in seen:
                raise NotAWalk(f"arrow {arrow_id!r} repeats")
            seen.add(arrow_id)
            tail, head = (arrow.source, arrow.target) if forward else (arrow.target, arrow.source)
            if here is None:
                here = tail
                self.start = tail
            elif here != tail:
                raise NotAWalk(f"step {arrow_id!r} starts at {tail!r}, walk is at {here!r}")
            here = head
        self.end = here
        if start is not None and start != self.start:
            raise NotAWalk(f"walk starts at {self.start!r}, not {start!r}")

    @property
    def is_path(self) -> bool:
        return all(forward for _, forward in self.steps)


def incidence_matrix(quiver: Quiver) -> list[list[int]]:
    """The (#vertices x #arrows) matrix with +1 at sources and -1 at targets."""
    matrix = [[0] * quiver.n_arrows for _ in quiver.vertices]
    for j, a in enumerate(quiver.arrows):
        matrix[quiver.vertex_index(a.source)][j] += 1
        matrix[quiver.vertex_index(a.target)][j] -= 1
    return matrix


def weight_of_flow(quiver: Quiver, flow: Flow) -> Weight:
    """The input map: net outflow of the flow at each vertex."""
    totals = [0] * quiver.n_vertices
    for a, value in zip(quiver.arrows, flow.values):
        totals[quiver.vertex_index(a.source)] += value
        totals[quiver.vertex_index(a.target)] -= value
    return Weight(quiver, tuple(totals))


def walk_flow(quiver: Quiver, walk: Walk) -> Flow:
    """Characteristic flow of a walk: +1 on forward steps, -1 on reversed ones."""
    values = [0] * quiver.n_arrows
    for arrow_id, forward in walk.steps:
        values[quiver.arrow_index(arrow_id)] = 1 if forward else -1
    return Flow(quiver, tuple(values))


def canonical_weight(quiver: Quiver) -> Weight:
    """The weight of the all-ones flow: out-degree minus in-degree per vertex."""
    return weight_of_flow(quiver, Flow.ones(quiver))


def enumerate_paths(quiver: Quiver, p: str, q: str) -> tuple[tuple[str, ...], ...]:
    """All directed paths from p to q as arrow-id sequences.

    The empty path is included when p == q.  Paths come out in lexicographic
    order with respect to arrow input order, so results are reproducible.
    """
    quiver.vertex_index(p)
    quiver.vertex_index(q)
    found = []
    stack: list[str] = []

    def visit(v: str):
        if v == q:
            found.append(tuple(stack))
        for a in quiver.out_arrows[v]:
            stack.append(a.id)
            visit(a.target)
            stack.pop()

    visit(p)
    return tuple(found)


def count_all_paths(quiver: Quiver) -> int:
    """Total number of directed paths (trivial ones included); dim of the path algebra."""
    order = quiver.topological_order
    paths_from = {}
    for v in reversed(order):
        paths_from[v] = 1 + sum(paths_from[a.target] for a in quiver.out_arrows[v])
    return sum(paths_from[v] for v in quiver.vertices)
