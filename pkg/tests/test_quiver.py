"""Core quiver types: parsing, incidence, flows, walks, paths."""

import json
import random

import pytest

from quiverfan import (
    DisconnectedQuiver,
    DuplicateId,
    Flow,
    MalformedInput,
    NotAWalk,
    OrientedCycle,
    Quiver,
    UnknownVertex,
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
from quiverfan.linalg import rank

from conftest import mk_quiver, random_quiver


PENTAGON_DOC = {
    "vertices": ["1", "2", "3", "4"],
    "arrows": [
        {"id": "a1", "source": "1", "target": "2"},
        {"id": "a2", "source": "1", "target": "3"},
        {"id": "a3", "source": "2", "target": "3"},
        {"id": "a4", "source": "2", "target": "4"},
        {"id": "a5", "source": "3", "target": "4"},
    ],
}


def test_parse_pentagon_document():
    quiver = parse_quiver(PENTAGON_DOC)
    assert quiver.moduli_dimension == 2
    assert quiver.vertices == ("1", "2", "3", "4")
    assert quiver.arrow_ids() == ("a1", "a2", "a3", "a4", "a5")


def test_parse_accepts_json_text():
    quiver = parse_quiver(json.dumps(PENTAGON_DOC))
    assert quiver.n_arrows == 5


def test_parse_single_arrow():
    quiver = parse_quiver(
        {"vertices": ["1", "2"], "arrows": [{"id": "a", "source": "1", "target": "2"}]}
    )
    assert quiver.moduli_dimension == 0


def test_parse_rejects_two_cycle():
    with pytest.raises(OrientedCycle):
        parse_quiver(
            {
                "vertices": ["1", "2"],
                "arrows": [
                    {"id": "a", "source": "1", "target": "2"},
                    {"id": "b", "source": "2", "target": "1"},
                ],
            }
        )


def test_parse_rejects_disconnected():
    with pytest.raises(DisconnectedQuiver):
        parse_quiver({"vertices": ["1", "2", "3"], "arrows": [{"id": "a", "source": "1", "target": "2"}]})


def test_parse_rejects_duplicate_ids():
    with pytest.raises(DuplicateId):
        parse_quiver(
            {
                "vertices": ["1", "2"],
                "arrows": [
                    {"id": "a", "source": "1", "target": "2"},
                    {"id": "a", "source": "1", "target": "2"},
                ],
            }
        )
    with pytest.raises(DuplicateId):
        parse_quiver({"vertices": ["1", "1"], "arrows": []})


def test_parse_rejects_schema_violations():
    with pytest.raises(MalformedInput):
        parse_quiver("not json {")
    with pytest.raises(MalformedInput):
        parse_quiver({"vertices": "1 2", "arrows": []})
    with pytest.raises(MalformedInput):
        parse_quiver({"vertices": ["1"], "arrows": [{"id": "a", "source": "1"}]})
    with pytest.raises(UnknownVertex):
        parse_quiver({"vertices": ["1", "2"], "arrows": [{"id": "a", "source": "1", "target": "9"}]})


def test_incidence_matrix_pentagon(pentagon):
    assert incidence_matrix(pentagon) == [
        [1, 1, 0, 0, 0],
        [-1, 0, 1, 1, 0],
        [0, -1, -1, 0, 1],
        [0, 0, 0, -1, -1],
    ]


def test_incidence_matrix_small(single_arrow, kronecker):
    assert incidence_matrix(single_arrow) == [[1], [-1]]
    assert incidence_matrix(kronecker) == [[1, 1], [-1, -1]]


def test_incidence_rank_is_vertices_minus_one(pentagon, kronecker, chain3):
    for quiver in (pentagon, kronecker, chain3):
        assert rank(incidence_matrix(quiver)) == quiver.n_vertices - 1


def test_weight_of_flow_examples(pentagon):
    assert weight_of_flow(pentagon, Flow.ones(pentagon)).values == (2, 1, -1, -2)
    assert weight_of_flow(pentagon, Flow.zero(pentagon)) == Weight.zero(pentagon)
    characteristic = Flow.from_mapping(pentagon, {"a1": 1, "a4": 1, "a2": 0, "a3": 0, "a5": 0})
    assert weight_of_flow(pentagon, characteristic).values == (1, 0, 0, -1)


def test_weight_of_flow_matches_incidence_product(pentagon):
    rng = random.Random(7)
    matrix = incidence_matrix(pentagon)
    for _ in range(25):
        values = tuple(rng.randint(-4, 4) for _ in range(pentagon.n_arrows))
        flow = Flow(pentagon, values)
        weight = weight_of_flow(pentagon, flow)
        product = tuple(sum(row[j] * values[j] for j in range(len(values))) for row in matrix)
        assert weight.values == product
        assert sum(weight.values) == 0


def test_rational_flow_gives_rational_weight(kronecker):
    from fractions import Fraction

    flow = Flow(kronecker, (Fraction(1, 2), Fraction(1, 3)))
    weight = weight_of_flow(kronecker, flow)
    assert weight.values == (Fraction(5, 6), Fraction(-5, 6))
    assert not weight.is_integral


def test_weight_must_sum_to_zero(pentagon):
    with pytest.raises(MalformedInput):
        Weight(pentagon, (1, 0, 0, 0))


def test_walk_flow_examples(pentagon):
    walk = Walk(pentagon, [("a2", True), ("a3", False)])
    flow = walk_flow(pentagon, walk)
    assert flow.values == (0, 1, -1, 0, 0)
    assert weight_of_flow(pentagon, flow).values == (1, -1, 0, 0)

    empty = Walk(pentagon, [], start="2")
    assert walk_flow(pentagon, empty) == Flow.zero(pentagon)

    path = Walk(pentagon, [("a1", True), ("a3", True), ("a5", True)])
    assert path.is_path
    assert walk_flow(pentagon, path).values == (1, 0, 1, 0, 1)


def test_walk_endpoint_weight_property(pentagon):
    rng = random.Random(3)
    for _ in range(50):
        quiver = random_quiver(rng)
        # grow a random walk greedily
        here = rng.choice(quiver.vertices)
        steps = []
        used = set()
        for _ in range(rng.randint(0, quiver.n_arrows)):
            options = []
            for a in quiver.arrows:
                if a.id in used:
                    continue
                if a.source == here:
                    options.append((a.id, True, a.target))
                if a.target == here:
                    options.append((a.id, False, a.source))
            if not options:
                break
            arrow_id, forward, nxt = rng.choice(options)
            steps.append((arrow_id, forward))
            used.add(arrow_id)
            here = nxt
        walk = Walk(quiver, steps, start=None if steps else "v1")
        weight = weight_of_flow(quiver, walk_flow(quiver, walk))
        if walk.start == walk.end:
            assert weight == Weight.zero(quiver)
        else:
            expected = Weight.pair(quiver, walk.start, walk.end)
            assert weight == expected


def test_walk_rejects_broken_incidence(pentagon):
    with pytest.raises(NotAWalk):
        Walk(pentagon, [("a1", True), ("a2", True)])  # a2 starts at 1, walk is at 2
    with pytest.raises(NotAWalk):
        Walk(pentagon, [("a1", True), ("a1", False)])  # arrow repeats
    with pytest.raises(NotAWalk):
        Walk(pentagon, [])  # needs a base vertex


def test_canonical_weight_examples(pentagon, kronecker, single_arrow):
    assert canonical_weight(pentagon).values == (2, 1, -1, -2)
    assert canonical_weight(kronecker).values == (2, -2)
    assert canonical_weight(single_arrow).values == (1, -1)


def test_enumerate_paths_pentagon(pentagon):
    paths = enumerate_paths(pentagon, "1", "4")
    assert paths == (("a1", "a3", "a5"), ("a1", "a4"), ("a2", "a5"))
    assert enumerate_paths(pentagon, "1", "1") == ((),)
    assert enumerate_paths(pentagon, "4", "1") == ()
    with pytest.raises(UnknownVertex):
        enumerate_paths(pentagon, "1", "9")


def test_path_count_lower_bound(pentagon):
    total = sum(
        len(enumerate_paths(pentagon, p, q)) for p in pentagon.vertices for q in pentagon.vertices
    )
    assert total == count_all_paths(pentagon) == 14
    assert total >= pentagon.n_vertices + pentagon.n_arrows


def test_count_all_paths_random_agrees_with_enumeration():
    rng = random.Random(11)
    for _ in range(30):
        quiver = random_quiver(rng)
        total = sum(
            len(enumerate_paths(quiver, p, q)) for p in quiver.vertices for q in quiver.vertices
        )
        assert total == count_all_paths(quiver)
        assert total >= quiver.n_vertices + quiver.n_arrows
