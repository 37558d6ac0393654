import random

import pytest
from helpers import all_homs, brute_min_deletion, complete_graph, k1, k2, path_graph, size_of

from dlhom.core import DlhomInstance, UndirectedGraph, full_lists, verify_solution
from dlhom.generate import random_decomposable_target, random_graph, random_lists
from dlhom.lhom import arc_consistency, lhom_decide, solve_exact_oracle


def test_arc_consistency_trims_forced_neighbour():
    state = arc_consistency(path_graph(2), (frozenset({0}), frozenset({0, 1})), k2())
    assert state.lists == (frozenset({0}), frozenset({1}))
    assert not state.emptied


def test_arc_consistency_is_idempotent():
    once = arc_consistency(path_graph(3), full_lists(3, 2), k2())
    assert arc_consistency(path_graph(3), once.lists, k2()) == once


def test_arc_consistency_empties_on_loopless_k1():
    assert arc_consistency(path_graph(2), full_lists(2, 1), k1()).emptied


def test_triangle_to_edge_has_no_hom():
    assert lhom_decide(complete_graph(3), full_lists(3, 2), k2()) is None


def test_single_vertex():
    assert lhom_decide(UndirectedGraph(1), (frozenset({1}),), k2()) == {0: 1}


def test_path_to_edge_alternates():
    phi = lhom_decide(path_graph(3), full_lists(3, 2), k2())
    assert phi[0] == phi[2] != phi[1]


@pytest.mark.parametrize("seed", range(150))
def test_propagation_and_search_against_enumeration(seed):
    rng = random.Random(seed)
    h = random_decomposable_target(rng.randint(1, 4), rng)
    g = random_graph(rng.randint(1, 6), rng.choice((0.2, 0.4, 0.6)), rng)
    lists = random_lists(g.n, h, rng.choice((0.5, 0.8)), rng)
    homs = list(all_homs(g, lists, h))
    state = arc_consistency(g, lists, h)
    assert all(state.lists[v] <= lists[v] for v in range(g.n))
    as_set = lambda maps: {tuple(sorted(p.items())) for p in maps}
    assert as_set(homs) == as_set(all_homs(g, state.lists, h))
    found = lhom_decide(g, lists, h)
    assert (found is None) == (not homs)
    if found is not None:
        assert found in homs


def test_oracle_examples():
    tri = DlhomInstance(complete_graph(3), k2(), full_lists(3, 2), 1)
    assert size_of(solve_exact_oracle(tri)) == 1
    p3 = DlhomInstance(path_graph(3), k1(), full_lists(3, 1), 1)
    assert solve_exact_oracle(p3).deleted == {1}
    easy = DlhomInstance(path_graph(4), k2(), full_lists(4, 2), 0)
    assert size_of(solve_exact_oracle(easy)) == 0


def test_oracle_canonical_choice():
    # two disjoint edges into K1: first lexicographic optimum is {0, 2}
    g = UndirectedGraph(4, frozenset({(0, 1), (2, 3)}))
    assert solve_exact_oracle(DlhomInstance(g, k1(), full_lists(4, 1), 2)).deleted == {0, 2}


@pytest.mark.parametrize("seed", range(60))
def test_oracle_minimum_and_monotone(seed):
    rng = random.Random(1000 + seed)
    h = random_decomposable_target(rng.randint(1, 4), rng)
    g = random_graph(rng.randint(1, 6), 0.45, rng)
    lists = random_lists(g.n, h, 0.7, rng)
    prev = None
    for k in range(4):
        inst = DlhomInstance(g, h, lists, k)
        sol = solve_exact_oracle(inst)
        assert size_of(sol) == brute_min_deletion(inst)
        if sol is not None:
            assert verify_solution(inst, sol)[0]
        if prev is not None:
            assert sol is not None
        prev = sol
