"""Stability classification, stable trees, walls, and weight position."""

import random

import pytest

from quiverfan import (
    Weight,
    canonical_weight,
    classify_subquiver,
    enumerate_walls,
    spanning_trees,
    stable_arrow_set,
    stable_trees,
    weight_position,
)

from conftest import random_quiver


def test_classify_stable_tree(pentagon):
    theta = canonical_weight(pentagon)
    verdict = classify_subquiver(pentagon, ("a1", "a2", "a4"), theta)
    assert verdict.verdict == "stable"
    assert verdict.witness is None


def test_classify_unstable_tree_witness(pentagon):
    theta = canonical_weight(pentagon)
    verdict = classify_subquiver(pentagon, ("a1", "a2", "a5"), theta)
    assert verdict.verdict == "unstable"
    assert verdict.witness == ("2",)


def test_classify_zero_weight_semistable(pentagon):
    verdict = classify_subquiver(pentagon, pentagon.arrow_ids(), Weight.zero(pentagon))
    assert verdict.verdict == "strictly_semistable"
    assert verdict.witness is not None


def test_spanning_trees_pentagon(pentagon):
    trees = spanning_trees(pentagon)
    assert len(trees) == 8
    assert ("a1", "a2", "a3") not in trees  # undirected 3-cycle
    assert ("a3", "a4", "a5") not in trees


def test_stable_trees_pentagon(pentagon):
    theta = canonical_weight(pentagon)
    assert stable_trees(pentagon, theta) == (
        ("a1", "a2", "a4"),
        ("a1", "a3", "a4"),
        ("a1", "a3", "a5"),
        ("a2", "a3", "a5"),
        ("a2", "a4", "a5"),
    )


def test_stable_trees_kronecker(kronecker):
    assert stable_trees(kronecker, canonical_weight(kronecker)) == (("b1",), ("b2",))


def test_stable_trees_zero_weight(pentagon):
    assert stable_trees(pentagon, Weight.zero(pentagon)) == ()


def test_stable_arrow_set_pentagon(pentagon):
    theta = canonical_weight(pentagon)
    assert stable_arrow_set(pentagon, theta) == pentagon.arrow_ids()


def test_stable_arrow_set_square_is_proper_subset(square):
    theta = canonical_weight(square)
    assert theta.values == (2, 0, 0, -2)
    kept = stable_arrow_set(square, theta)
    assert set(kept) < set(square.arrow_ids())
    # removing any single arrow leaves a tight successor-closed subset here
    assert kept == ()


def test_stable_arrow_set_single_arrow(single_arrow):
    assert stable_arrow_set(single_arrow, Weight(single_arrow, (1, -1))) == ()


def test_walls_pentagon(pentagon):
    walls = enumerate_walls(pentagon)
    assert len(walls) == 6
    by_plus = {w.plus: w.wall_type for w in walls}
    assert by_plus == {
        ("1",): (2, 0),
        ("1", "2"): (3, 0),
        ("1", "3"): (2, 1),
        ("1", "2", "3"): (2, 0),
        ("1", "2", "4"): (2, 1),
        ("1", "3", "4"): (1, 2),
    }
    assert not any(w.t_plus == w.t_minus for w in walls)
    assert not any(sorted(w.wall_type) in ([0, 1], [1, 1]) for w in walls)


def test_walls_square_has_11_wall(square):
    walls = enumerate_walls(square)
    types = {w.plus: w.wall_type for w in walls}
    assert types[("1", "3", "4")] == (1, 1)  # the side opposite vertex 2
    assert types[("1", "2", "4")] == (1, 1)


def test_walls_single_arrow(single_arrow):
    walls = enumerate_walls(single_arrow)
    assert len(walls) == 1
    assert walls[0].plus == ("1",)
    assert walls[0].wall_type == (1, 0)


def test_walls_are_canonically_oriented_and_unique():
    rng = random.Random(5)
    for _ in range(40):
        quiver = random_quiver(rng)
        walls = enumerate_walls(quiver)
        partitions = {frozenset(w.plus) for w in walls}
        assert len(partitions) == len(walls)
        first = quiver.vertices[0]
        for wall in walls:
            assert first in wall.plus
            assert set(wall.plus) | set(wall.minus) == set(quiver.vertices)
            assert not set(wall.plus) & set(wall.minus)


def test_weight_position_pentagon(pentagon):
    report = weight_position(pentagon, canonical_weight(pentagon))
    assert report.general_position
    assert report.moduli_nonempty
    assert report.walls_hit == ()
    diag = report.canonical
    assert diag is not None
    assert diag.general_position_matches and diag.full_arrow_set_matches
    assert diag.actual_full_arrow_set


def test_weight_position_square(square):
    report = weight_position(square, canonical_weight(square))
    assert not report.general_position
    assert any(w.wall_type == (1, 1) for w in report.walls_hit)
    diag = report.canonical
    assert diag.has_tt_wall and diag.has_10_or_11_wall
    assert diag.general_position_matches and diag.full_arrow_set_matches


def test_weight_position_zero_hits_every_wall(pentagon):
    report = weight_position(pentagon, Weight.zero(pentagon))
    assert not report.general_position
    assert len(report.walls_hit) == len(enumerate_walls(pentagon))


def test_stability_monotone_under_adding_arrows():
    """Adding arrows only shrinks the family of successor-closed subsets,
    so the maximal weight sum cannot go up."""
    from quiverfan.stability import successor_closed_subsets

    rng = random.Random(17)
    for _ in range(40):
        quiver = random_quiver(rng)
        ids = list(quiver.arrow_ids())
        rng.shuffle(ids)
        cut = rng.randint(0, len(ids))
        small = frozenset(ids[:cut])
        big = frozenset(quiver.arrow_ids())
        small_sets = set(successor_closed_subsets(quiver, small))
        big_sets = set(successor_closed_subsets(quiver, big))
        assert big_sets <= small_sets
        for _ in range(3):
            from conftest import random_integral_weight

            theta = random_integral_weight(rng, quiver)
            max_small = max(
                (sum(theta.values[i] for i in s) for s in small_sets), default=None
            )
            max_big = max((sum(theta.values[i] for i in s) for s in big_sets), default=None)
            if max_big is not None:
                assert max_small is not None and max_big <= max_small


def test_stable_tree_iff_completion_positive():
    """Cross-module check: a spanning tree is stable exactly when its
    completion is strictly positive on the tree."""
    from quiverfan import tree_completion

    rng = random.Random(23)
    checked = 0
    for _ in range(40):
        quiver = random_quiver(rng)
        theta = canonical_weight(quiver)
        for tree in spanning_trees(quiver):
            completion = tree_completion(quiver, tree, theta)
            positive = all(completion[a] > 0 for a in tree)
            stable = classify_subquiver(quiver, tree, theta).is_stable
            assert positive == stable
            checked += 1
    assert checked > 100
