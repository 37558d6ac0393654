import random
from itertools import combinations

import pytest
from helpers import cycle_graph, path_graph

from dlhom.core import BOTTOM, TOP, BipartiteTarget, make_target
from dlhom.target import (
    GADGET_ROLES,
    ArcRepresentation,
    DecompositionError,
    DisjointUnion,
    Leaf,
    SkewSum,
    build_chain_target,
    check_forbidden,
    evaluate_decomposition,
    random_arc_representation,
    random_decomposition,
    skew_decompose,
    target_from_arcs,
    tree_edges,
    tree_from_json,
    tree_to_json,
    validate_arc_representation,
)


def alternating(g):
    return BipartiteTarget(g, tuple(TOP if v % 2 == 0 else BOTTOM for v in range(g.n)))


C4 = make_target(4, [(0, 2), (0, 3), (1, 2), (1, 3)], [TOP, TOP, BOTTOM, BOTTOM])


class TestForbidden:
    def test_p6(self):
        found = check_forbidden(alternating(path_graph(6)))
        assert found.kind == "P6" and found.witness == tuple(range(6))

    def test_c6(self):
        assert check_forbidden(alternating(cycle_graph(6))).kind == "C6"

    def test_small_targets_have_no_witness(self):
        assert check_forbidden(make_target(1, [], [TOP])).decomposable_candidate
        assert check_forbidden(C4).witness is None

    def test_p6_inside_p7(self):
        assert check_forbidden(alternating(path_graph(7))).kind == "P6"


class TestDecompose:
    def test_k1(self):
        assert skew_decompose(make_target(1, [], [TOP])) == Leaf(0, TOP)

    def test_k2(self):
        assert skew_decompose(make_target(2, [(0, 1)], [TOP, BOTTOM])) == SkewSum(Leaf(0, TOP), Leaf(1, BOTTOM))

    def test_c4_round_trip(self):
        tree = skew_decompose(C4)
        assert isinstance(tree, SkewSum)
        assert evaluate_decomposition(tree) == C4

    def test_p6_and_c6_are_not_decomposable(self):
        assert skew_decompose(alternating(path_graph(6))) is None
        assert skew_decompose(alternating(cycle_graph(6))) is None

    def test_p5_is_decomposable(self):
        h = alternating(path_graph(5))
        assert evaluate_decomposition(skew_decompose(h)) == h

    def test_disconnected(self):
        h = make_target(5, [(0, 1), (2, 3)], [TOP, BOTTOM, TOP, BOTTOM, BOTTOM])
        tree = skew_decompose(h)
        assert isinstance(tree, DisjointUnion)
        assert evaluate_decomposition(tree) == h


class TestEvaluate:
    def test_leaf(self):
        assert evaluate_decomposition(Leaf(0, BOTTOM)) == make_target(1, [], [BOTTOM])

    def test_skew_of_leaves(self):
        assert evaluate_decomposition(SkewSum(Leaf(0, TOP), Leaf(1, BOTTOM))) == make_target(2, [(0, 1)], [TOP, BOTTOM])

    def test_c4_tree(self):
        tree = SkewSum(DisjointUnion(Leaf(0, TOP), Leaf(1, TOP)), DisjointUnion(Leaf(2, BOTTOM), Leaf(3, BOTTOM)))
        assert evaluate_decomposition(tree) == C4

    @pytest.mark.parametrize("tree", [SkewSum(Leaf(0, BOTTOM), Leaf(1, BOTTOM)), SkewSum(Leaf(0, TOP), Leaf(1, TOP))])
    def test_empty_sides_are_rejected(self, tree):
        with pytest.raises(DecompositionError):
            evaluate_decomposition(tree)

    def test_shared_vertex_rejected(self):
        with pytest.raises(DecompositionError):
            evaluate_decomposition(DisjointUnion(Leaf(0, TOP), Leaf(0, TOP)))

    @pytest.mark.parametrize("seed", range(40))
    def test_random_trees_round_trip(self, seed):
        rng = random.Random(seed)
        tree = random_decomposition(list(range(rng.randint(1, 7))), rng)
        h = evaluate_decomposition(tree)
        assert check_forbidden(h).witness is None
        again = skew_decompose(h)
        assert evaluate_decomposition(again) == h
        assert tree_from_json(tree_to_json(tree)) == tree
        assert tree_edges(tree) == h.graph.edges


class TestArcs:
    def test_k2_valid(self):
        rep = ArcRepresentation(8, 0, 4, ((7, 1), (3, 5)))
        assert validate_arc_representation(make_target(2, [(0, 1)], [TOP, BOTTOM]), rep).ok

    def test_two_northern_arcs_must_be_non_adjacent(self):
        rep = ArcRepresentation(8, 0, 4, ((7, 1), (0, 2)))
        check = validate_arc_representation(make_target(2, [(0, 1)], [TOP, TOP]), rep)
        assert not check.ok

    def test_overlapping_edge_reports_pair(self):
        rep = ArcRepresentation(8, 0, 4, ((7, 3), (3, 5)))
        check = validate_arc_representation(make_target(2, [(0, 1)], [TOP, BOTTOM]), rep)
        assert not check.ok and check.pair == (0, 1)

    def test_arc_needs_exactly_one_pole(self):
        rep = ArcRepresentation(8, 0, 4, ((0, 4),))
        assert not validate_arc_representation(make_target(1, [], [TOP]), rep).ok

    @pytest.mark.parametrize("seed", range(30))
    def test_random_models_give_bipartite_targets(self, seed):
        rep = random_arc_representation(6, random.Random(seed))
        h = target_from_arcs(rep)
        assert validate_arc_representation(h, rep).ok
        assert all(h.side[a] != h.side[b] for a, b in h.graph.edges)
        assert ArcRepresentation.from_json(rep.to_json()) == rep


@pytest.mark.parametrize("ell", [1, 2, 3])
class TestChainTarget:
    def test_count_and_shape(self, ell):
        ct = build_chain_target(ell)
        h = ct.target
        assert h.n == (ell + 1) + 6 * ell * ell
        assert len(h.components) == 1
        assert validate_arc_representation(h, ct.rep).ok
        assert all(h.side[a] != h.side[b] for a, b in h.graph.edges)
        for i in ct.value:
            assert ct.rep.is_northern(i)
        for gad in ct.gadget.values():
            assert ct.rep.is_northern(gad["v1"]) and ct.rep.is_northern(gad["v2"])
            for role in ("u1", "u2", "w1", "w2"):
                assert ct.rep.is_southern(gad[role])

    def test_intersection_table(self, ell):
        ct = build_chain_target(ell)
        adj = ct.target.nbrs
        for (r, r2), gad in ct.gadget.items():
            u1, u2, v1, v2, w1, w2 = (gad[x] for x in GADGET_ROLES)
            for i, a in enumerate(ct.value):
                assert (u1 in adj[a]) == (i > r)
                assert u2 in adj[a] and w1 in adj[a]
                assert (w2 in adj[a]) == (i <= r2)
                assert v1 not in adj[a] and v2 not in adj[a]
            assert v1 in adj[u2] and v2 not in adj[u2]
            assert v2 in adj[u1] and v1 not in adj[u1]
            assert w2 in adj[v1] and w1 not in adj[v1]
            assert w1 in adj[v2] and w2 not in adj[v2]


def test_chain_target_needs_positive_ell():
    with pytest.raises(ValueError):
        build_chain_target(0)


def test_exhaustive_five_vertex_equivalence():
    # every labelled bipartite graph on 5 vertices with every proper side labelling
    n = 5
    pairs = list(combinations(range(n), 2))
    for labels in range(1 << n):
        side = tuple(TOP if labels >> v & 1 else BOTTOM for v in range(n))
        cross = [(a, b) for a, b in pairs if side[a] != side[b]]
        for mask in range(1 << len(cross)):
            h = make_target(n, [e for i, e in enumerate(cross) if mask >> i & 1], side)
            tree = skew_decompose(h)
            assert tree is not None  # no 6-vertex pattern fits
            assert evaluate_decomposition(tree) == h
