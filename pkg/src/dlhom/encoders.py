"""Vertex Cover, Odd Cycle Transversal and Multiway Cut as deletion list-homomorphism instances."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, FrozenSet, Optional, Sequence, Tuple

from .core import BOTTOM, TOP, DeletionSolution, DlhomInstance, UndirectedGraph, adjacency, make_target, restrict
from .core import components, two_coloring


@dataclass(frozen=True)
class EncodedProblem:
    kind: str  # "vc", "oct" or "multiway"
    graph: UndirectedGraph
    terminals: Tuple[int, ...]
    instance: DlhomInstance
    back_map: Callable[[DeletionSolution], FrozenSet[int]] = field(compare=False, repr=False)


def _identity(sol: DeletionSolution) -> FrozenSet[int]:
    return frozenset(sol.deleted)


def encode_vertex_cover(g: UndirectedGraph, k: int) -> EncodedProblem:
    h = make_target(1, [], [TOP])
    lists = tuple(frozenset((0,)) for _ in range(g.n))
    return EncodedProblem("vc", g, (), DlhomInstance(g, h, lists, k), _identity)


def encode_oct(g: UndirectedGraph, k: int) -> EncodedProblem:
    h = make_target(2, [(0, 1)], [TOP, BOTTOM])
    lists = tuple(frozenset((0, 1)) for _ in range(g.n))
    return EncodedProblem("oct", g, (), DlhomInstance(g, h, lists, k), _identity)


def subdivide(g: UndirectedGraph) -> UndirectedGraph:
    """Edge (u, v) with u < v becomes u - s - v where s = n + rank of (u, v) in sorted order."""
    edges = []
    for rank, (u, v) in enumerate(g.sorted_edges()):
        s = g.n + rank
        edges += [(u, s), (v, s)]
    return UndirectedGraph(g.n + len(g.edges), frozenset(edges))


def encode_multiway_cut(g: UndirectedGraph, terminals: Sequence[int], k: int) -> EncodedProblem:
    """Terminal t_i gets the i-th edge {2i, 2i+1} of a d-edge matching; everything else gets the whole matching.

    Terminals may be deleted like any other vertex.  A deleted subdivision
    vertex is mapped back to the smaller endpoint of its edge.
    """
    terminals = tuple(terminals)
    d = len(terminals)
    if d < 2:
        raise ValueError("multiway cut needs at least two terminals")
    if len(set(terminals)) != d:
        raise ValueError("terminals must be distinct")
    if any(not 0 <= t < g.n for t in terminals):
        raise ValueError("terminal out of range")
    h = make_target(2 * d, [(2 * i, 2 * i + 1) for i in range(d)], [TOP, BOTTOM] * d)
    gs = subdivide(g)
    everything = frozenset(range(2 * d))
    lists = [everything] * gs.n
    for i, t in enumerate(terminals):
        lists[t] = frozenset((2 * i, 2 * i + 1))
    edges = g.sorted_edges()

    def back(sol: DeletionSolution) -> FrozenSet[int]:
        out = set()
        for v in sol.deleted:
            out.add(v if v < g.n else edges[v - g.n][0])
        return frozenset(out)

    return EncodedProblem("multiway", g, terminals, DlhomInstance(gs, h, tuple(lists), k), back)


# --- brute-force solvers for the source problems -------------------------------------


def _smallest(n: int, k: int, good: Callable[[FrozenSet[int]], bool]) -> Optional[FrozenSet[int]]:
    for size in range(min(k, n) + 1):
        for w in combinations(range(n), size):
            if good(frozenset(w)):
                return frozenset(w)
    return None


def brute_vertex_cover(g: UndirectedGraph, k: int) -> Optional[FrozenSet[int]]:
    return _smallest(g.n, k, lambda w: all(u in w or v in w for u, v in g.edges))


def brute_oct(g: UndirectedGraph, k: int) -> Optional[FrozenSet[int]]:
    adj = adjacency(g)
    return _smallest(g.n, k, lambda w: two_coloring(restrict(adj, set(adj) - w))[0] is not None)


def separates(g: UndirectedGraph, terminals: Sequence[int], w: FrozenSet[int]) -> bool:
    """No component of G - W contains two surviving terminals."""
    adj = adjacency(g)
    for comp in components(restrict(adj, set(adj) - w)):
        if len([t for t in terminals if t in comp]) > 1:
            return False
    return True


def brute_multiway_cut(g: UndirectedGraph, terminals: Sequence[int], k: int) -> Optional[FrozenSet[int]]:
    """Smallest vertex set (terminals allowed) separating the terminals pairwise."""
    return _smallest(g.n, k, lambda w: separates(g, terminals, w))
