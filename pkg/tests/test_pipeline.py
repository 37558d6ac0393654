import random
from itertools import combinations

import pytest
from helpers import all_homs, brute_min_deletion, complete_graph, has_hom, k1, k2, path_graph, size_of

from dlhom.core import BOTTOM, TOP, DlhomInstance, UndirectedGraph, full_lists, make_target, verify_solution
from dlhom.encoders import encode_multiway_cut, encode_oct, encode_vertex_cover
from dlhom.generate import corpus_spec, gen_random
from dlhom.lhom import solve_exact_oracle
from dlhom.pipeline import (
    BipCompInstance,
    ContractError,
    FsfcIgInstance,
    bipcomp_from_guess,
    detect_conflicts,
    disjoint_compression,
    guess_partial_homs,
    iterative_compression_drive,
    prune_bad_components,
    restrict_to_fixed_side,
    solve_bipcomp,
    solve_dlhom,
    solve_fsfc_ig,
)

TWO_EDGES = make_target(4, [(0, 1), (2, 3)], [TOP, BOTTOM, TOP, BOTTOM])


def oracle_step(inst, w0):
    sol = solve_exact_oracle(inst)
    return None if sol is None else sol.deleted


class TestIterativeCompression:
    def test_edgeless(self):
        inst = DlhomInstance(UndirectedGraph(4), k1(), full_lists(4, 1), 0)
        assert iterative_compression_drive(inst, oracle_step).deleted == set()

    def test_triangle_budget_zero(self):
        inst = DlhomInstance(complete_graph(3), k2(), full_lists(3, 2), 0)
        assert iterative_compression_drive(inst, oracle_step) is None

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle(self, seed):
        inst = gen_random(corpus_spec(random.Random(seed), max_n=7))
        sol = iterative_compression_drive(inst, oracle_step)
        assert (sol is None) == (solve_exact_oracle(inst) is None)
        if sol is not None:
            assert verify_solution(inst, sol)[0]


class TestDisjointCompression:
    def test_old_solution_is_guessed_whole(self):
        inst = DlhomInstance(complete_graph(3), k2(), full_lists(3, 2), 1)
        sol = disjoint_compression(inst, {0})
        assert sol is not None and len(sol.deleted) <= 1

    def test_budget_zero_fails(self):
        inst = DlhomInstance(complete_graph(3), k2(), full_lists(3, 2), 0)
        assert disjoint_compression(inst, {0}) is None

    def test_precondition(self):
        inst = DlhomInstance(complete_graph(3), k2(), full_lists(3, 2), 1)
        with pytest.raises(ContractError):
            disjoint_compression(inst, set())

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_oracle(self, seed):
        inst = gen_random(corpus_spec(random.Random(100 + seed), max_n=7))
        best = solve_exact_oracle(DlhomInstance(inst.g, inst.h, inst.lists, inst.g.n))
        w0 = best.deleted
        sol = disjoint_compression(inst, w0)
        assert (sol is None) == (solve_exact_oracle(inst) is None)


class TestPartialHoms:
    def test_empty_old_solution(self):
        guesses = list(guess_partial_homs(path_graph(3), full_lists(3, 2), set(), k2()))
        assert len(guesses) == 1
        assert guesses[0].gamma == {} and guesses[0].lists == full_lists(3, 2)

    def test_neighbour_is_trimmed(self):
        guesses = {g.gamma[0]: g for g in guess_partial_homs(path_graph(2), full_lists(2, 2), {0}, k2())}
        assert guesses[0].lists[1] == {1}
        assert guesses[1].lists[1] == {0}

    @pytest.mark.parametrize("seed", range(30))
    def test_count_and_fixed_lists(self, seed):
        rng = random.Random(seed)
        inst = gen_random(corpus_spec(rng, max_n=7))
        w0 = frozenset(rng.sample(range(inst.g.n), min(inst.g.n, rng.randint(0, 3))))
        guesses = list(guess_partial_homs(inst.g, inst.lists, w0, inst.h))
        assert len(guesses) <= inst.h.n ** len(w0)
        assert len(guesses) == len(list(all_homs(inst.g, inst.lists, inst.h, w0)))
        for guess in guesses:
            for u in range(inst.g.n):
                if u not in w0 and inst.g.adj[u] & w0:
                    lst = guess.lists[u]
                    assert (not lst and u in guess.forced) or inst.h.list_class(lst) is not None


def _bipcomp(g, lists, n0, h=TWO_EDGES, k=1):
    return BipCompInstance(g, h, lists, n0, {}, k)


class TestConflicts:
    def test_component_conflict(self):
        inst = _bipcomp(path_graph(2), (frozenset({0}), frozenset({3})), {0, 1})
        assert [(c.u, c.v, c.kind) for c in detect_conflicts(inst)] == [(0, 1, "component")]

    def test_parity_conflict(self):
        lists = (frozenset({0}), frozenset({0, 1}), frozenset({1}))
        inst = _bipcomp(path_graph(3), lists, {0, 2})
        assert [(c.u, c.v, c.kind) for c in detect_conflicts(inst)] == [(0, 2, "parity")]

    def test_separate_components_never_conflict(self):
        g = UndirectedGraph(2)
        assert detect_conflicts(_bipcomp(g, (frozenset({0}), frozenset({3})), {0, 1})) == []

    def test_anchor_lists_must_be_fixed(self):
        with pytest.raises(ContractError):
            detect_conflicts(_bipcomp(path_graph(2), (frozenset({0, 2}), frozenset({1})), {0}))


class TestRestrict:
    def test_forced_by_parity(self):
        inst = BipCompInstance(path_graph(2), k2(), (frozenset({0}), frozenset({0, 1})), {0}, {1: 1}, 0)
        out = restrict_to_fixed_side(inst)
        assert out.lists == (frozenset({0}), frozenset({1}))

    def test_unanchored_component_dropped(self):
        g = UndirectedGraph(4, frozenset({(0, 1), (2, 3)}))
        inst = BipCompInstance(g, k2(), (frozenset({0}),) + full_lists(3, 2), {0}, {}, 0)
        out = restrict_to_fixed_side(inst)
        assert out.origin == (0, 1) and out.g.n == 2

    def test_conflict_is_a_contract_error(self):
        inst = _bipcomp(path_graph(2), (frozenset({0}), frozenset({3})), {0, 1})
        with pytest.raises(ContractError):
            restrict_to_fixed_side(inst)

    def test_identity_on_consistent_lists(self):
        lists = (frozenset({0}), frozenset({1}), frozenset({0}))
        out = restrict_to_fixed_side(BipCompInstance(path_graph(3), k2(), lists, {0}, {}, 0))
        assert out.lists == lists


def _bipcomp_corpus(count, seed=0):
    """Conflict-free and conflicted compression instances built from random DL-Hom inputs."""
    rng = random.Random(seed)
    while count:
        inst = gen_random(corpus_spec(rng, max_n=8))
        best = solve_exact_oracle(DlhomInstance(inst.g, inst.h, inst.lists, inst.g.n))
        if not best.deleted:
            continue
        w0 = best.deleted
        for guess in guess_partial_homs(inst.g, inst.lists, w0, inst.h):
            bc, _ = bipcomp_from_guess(inst.g, inst.h, inst.lists, w0, guess, inst.k)
            if bc.k < 0:
                continue
            yield bc
            count -= 1
            break


def _brute_bipcomp(bc):
    for s in range(bc.k + 1):
        for w in combinations(range(bc.g.n), s):
            if has_hom(bc.g, bc.lists, bc.h, set(range(bc.g.n)) - set(w)):
                return s
    return None


@pytest.mark.parametrize("bc", list(_bipcomp_corpus(60)))
def test_bipcomp_against_brute_force(bc):
    found = solve_bipcomp(bc)
    expect = _brute_bipcomp(bc)
    assert (found is None) == (expect is None)
    if found is not None:
        assert has_hom(bc.g, bc.lists, bc.h, set(range(bc.g.n)) - found)
    if not detect_conflicts(bc) and bc.n0:
        # restriction keeps the answer
        ig = restrict_to_fixed_side(bc)
        assert (solve_fsfc_ig(ig) is None) == (expect is None)


class TestPrune:
    def test_good_components_only(self):
        inst = FsfcIgInstance(path_graph(3), k2(), (frozenset({0}), frozenset({1}), frozenset({0})), {0}, 1)
        res = prune_bad_components(inst, {2})
        assert res.forced == set() and res.bad == set()
        assert res.instance.k == 1 and res.instance.g.n == 3

    def test_bad_component_forces_its_neighbour(self):
        lists = (frozenset({0}), frozenset({1}), frozenset({0}), frozenset({0}))
        g = UndirectedGraph(4, frozenset({(0, 1), (1, 2), (2, 3)}))
        res = prune_bad_components(FsfcIgInstance(g, k2(), lists, {0}, 1), {2, 3})
        assert res.forced == {1} and res.bad == {2, 3}
        assert res.instance.k == 0 and res.origin == (0,)

    def test_budget_exceeded(self):
        lists = (frozenset({0}), frozenset({1}), frozenset({0}), frozenset({0}))
        g = UndirectedGraph(4, frozenset({(0, 1), (1, 2), (2, 3)}))
        assert prune_bad_components(FsfcIgInstance(g, k2(), lists, {0}, 0), {2, 3}).instance is None


class TestSolveDlhom:
    def test_vertex_cover_of_p3(self):
        enc = encode_vertex_cover(path_graph(3), 1)
        assert solve_dlhom(enc.instance).deleted == {1}

    def test_oct_of_triangle(self):
        assert solve_dlhom(encode_oct(complete_graph(3), 0).instance) is None
        assert size_of(solve_dlhom(encode_oct(complete_graph(3), 1).instance)) == 1

    def test_multiway_cut_of_path(self):
        enc = encode_multiway_cut(path_graph(3), [0, 2], 1)
        sol = solve_dlhom(enc.instance)
        assert sol is not None and len(enc.back_map(sol)) == 1

    def test_invalid_instance(self):
        bad = DlhomInstance(UndirectedGraph(1), make_target(2, [(0, 1)], [TOP, TOP]), full_lists(1, 2), 0)
        with pytest.raises(ContractError):
            solve_dlhom(bad)

    def test_non_decomposable_target_still_exact(self):
        p6 = make_target(6, [(i, i + 1) for i in range(5)], [TOP, BOTTOM] * 3)
        inst = DlhomInstance(complete_graph(4), p6, full_lists(4, 6), 2)
        assert size_of(solve_dlhom(inst)) == size_of(solve_exact_oracle(inst)) == 2

    @pytest.mark.parametrize("seed", range(100))
    def test_matches_brute_force(self, seed):
        inst = gen_random(corpus_spec(random.Random(5000 + seed), max_n=8))
        sol = solve_dlhom(inst)
        assert size_of(sol) == brute_min_deletion(inst)
        if sol is not None:
            assert verify_solution(inst, sol)[0]
