"""Shared fixtures: the named corpus quivers and a seeded random generator."""

from __future__ import annotations

import random

import pytest

from quiverfan import Arrow, Quiver


def mk_quiver(vertices, arrows) -> Quiver:
    """Build a quiver from 'v1 v2 ...' and (id, source, target) triples."""
    if isinstance(vertices, str):
        vertices = vertices.split()
    return Quiver(vertices, [Arrow(*triple) for triple in arrows])


PENTAGON = [
    ("a1", "1", "2"),
    ("a2", "1", "3"),
    ("a3", "2", "3"),
    ("a4", "2", "4"),
    ("a5", "3", "4"),
]


@pytest.fixture
def pentagon() -> Quiver:
    """The worked four-vertex example whose polytope is a pentagon."""
    return mk_quiver("1 2 3 4", PENTAGON)


@pytest.fixture
def kronecker() -> Quiver:
    return mk_quiver("1 2", [("b1", "1", "2"), ("b2", "1", "2")])


@pytest.fixture
def square() -> Quiver:
    """Commuting square; its canonical weight sits on a (1,1)-wall."""
    return mk_quiver(
        "1 2 3 4",
        [("s1", "1", "2"), ("s2", "1", "3"), ("s3", "2", "4"), ("s4", "3", "4")],
    )


@pytest.fixture
def single_arrow() -> Quiver:
    return mk_quiver("1 2", [("a", "1", "2")])


@pytest.fixture
def bridge() -> Quiver:
    """Kronecker with a pendant arrow; the pendant is never stable to remove."""
    return mk_quiver("1 2 3", [("b1", "1", "2"), ("b2", "1", "2"), ("c", "2", "3")])


@pytest.fixture
def double_kronecker() -> Quiver:
    """Two Kronecker stages in a chain; the moduli space is a product of two lines."""
    return mk_quiver(
        "1 2 3",
        [("b1", "1", "2"), ("b2", "1", "2"), ("b3", "2", "3"), ("b4", "2", "3")],
    )


@pytest.fixture
def triple_arrow() -> Quiver:
    """Three parallel arrows; the moduli space is the projective plane."""
    return mk_quiver("1 2", [("b1", "1", "2"), ("b2", "1", "2"), ("b3", "1", "2")])


@pytest.fixture
def chain3() -> Quiver:
    """Three Kronecker stages; the moduli space is a product of three lines."""
    return mk_quiver(
        "1 2 3 4",
        [
            ("b1", "1", "2"),
            ("b2", "1", "2"),
            ("b3", "2", "3"),
            ("b4", "2", "3"),
            ("b5", "3", "4"),
            ("b6", "3", "4"),
        ],
    )


def geometry_corpus_factories():
    """Corpus quivers whose canonical weight is general with full stable arrow set."""
    return {
        "pentagon": lambda: mk_quiver("1 2 3 4", PENTAGON),
        "kronecker": lambda: mk_quiver("1 2", [("b1", "1", "2"), ("b2", "1", "2")]),
        "double_kronecker": lambda: mk_quiver(
            "1 2 3", [("b1", "1", "2"), ("b2", "1", "2"), ("b3", "2", "3"), ("b4", "2", "3")]
        ),
        "triple_arrow": lambda: mk_quiver(
            "1 2", [("b1", "1", "2"), ("b2", "1", "2"), ("b3", "1", "2")]
        ),
        "chain3": lambda: mk_quiver(
            "1 2 3 4",
            [
                ("b1", "1", "2"),
                ("b2", "1", "2"),
                ("b3", "2", "3"),
                ("b4", "2", "3"),
                ("b5", "3", "4"),
                ("b6", "3", "4"),
            ],
        ),
    }


def random_quiver(rng: random.Random, min_vertices=3, max_vertices=5, max_arrows=8) -> Quiver:
    """A random connected acyclic quiver, possibly with parallel arrows.

    Acyclicity comes from orienting every arrow along a random vertex
    permutation; connectivity from seeding a random spanning tree first.
    """
    n = rng.randint(min_vertices, max_vertices)
    names = [f"v{i}" for i in range(1, n + 1)]
    order = list(range(n))
    rng.shuffle(order)
    arrows = []
    for i in range(1, n):
        j = rng.randrange(i)
        arrows.append((order[j], order[i]))
    extra = rng.randint(0, max_arrows - (n - 1))
    for _ in range(extra):
        i = rng.randrange(n - 1)
        j = rng.randint(i + 1, n - 1)
        arrows.append((order[i], order[j]))
    return mk_quiver(
        names, [(f"a{k}", names[s], names[t]) for k, (s, t) in enumerate(arrows, start=1)]
    )


def random_integral_weight(rng: random.Random, quiver: Quiver, bound=5):
    from quiverfan import Weight

    values = [rng.randint(-bound, bound) for _ in range(quiver.n_vertices - 1)]
    values.append(-sum(values))
    return Weight(quiver, tuple(values))
