"""Graphs, bipartite targets, DL-Hom instances and solution checking.

Vertices are dense integer indices ``0..n-1``.  Lists are tuples of
frozensets indexed by vertex of ``G``.  Internally the solvers work on plain
adjacency dicts (``{v: frozenset(neighbours)}``) so that induced subgraphs
keep their original vertex names; :func:`adjacency` and :func:`restrict`
convert between the two views.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

TOP = "T"
BOTTOM = "B"

Adj = Dict[int, FrozenSet[int]]
Lists = Tuple[FrozenSet[int], ...]


def other_side(side: str) -> str:
    return BOTTOM if side == TOP else TOP


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        norm = frozenset((min(u, v), max(u, v)) for u, v in self.edges)
        object.__setattr__(self, "edges", norm)

    @cached_property
    def adj(self) -> Tuple[FrozenSet[int], ...]:
        """Neighbour sets; edges with invalid endpoints or loops are skipped."""
        nbrs: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u != v and 0 <= u < self.n and 0 <= v < self.n:
                nbrs[u].add(v)
                nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def sorted_edges(self) -> List[Tuple[int, int]]:
        return sorted(self.edges)

    def induced(self, keep: Iterable[int]) -> Tuple["UndirectedGraph", Tuple[int, ...]]:
        """Induced subgraph relabelled densely; also returns new->old index map."""
        origin = tuple(sorted(set(keep)))
        new = {v: i for i, v in enumerate(origin)}
        edges = [(new[u], new[v]) for u, v in self.edges if u in new and v in new]
        return UndirectedGraph(len(origin), frozenset(edges)), origin


def adjacency(g: UndirectedGraph) -> Adj:
    return {v: g.adj[v] for v in range(g.n)}


def restrict(adj: Mapping[int, FrozenSet[int]], keep: Iterable[int]) -> Adj:
    keep = frozenset(keep)
    return {v: adj[v] & keep for v in keep}


def adj_to_graph(adj: Mapping[int, FrozenSet[int]]) -> Tuple[UndirectedGraph, Tuple[int, ...]]:
    origin = tuple(sorted(adj))
    new = {v: i for i, v in enumerate(origin)}
    edges = {(new[u], new[w]) for u in adj for w in adj[u] if w in new and u < w}
    return UndirectedGraph(len(origin), frozenset(edges)), origin


@dataclass(frozen=True)
class BipartiteTarget:
    """Target graph with an explicit Top/Bottom label per vertex."""

    graph: UndirectedGraph
    side: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "side", tuple(self.side))

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def nbrs(self) -> Tuple[FrozenSet[int], ...]:
        return self.graph.adj

    @cached_property
    def components(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(components(adjacency(self.graph)))

    @cached_property
    def component_of(self) -> Tuple[int, ...]:
        index = [0] * self.n
        for i, comp in enumerate(self.components):
            for v in comp:
                index[v] = i
        return tuple(index)

    @cached_property
    def top(self) -> FrozenSet[int]:
        return frozenset(v for v in range(self.n) if self.side[v] == TOP)

    @cached_property
    def bottom(self) -> FrozenSet[int]:
        return frozenset(v for v in range(self.n) if self.side[v] == BOTTOM)

    def side_set(self, side: str) -> FrozenSet[int]:
        return self.top if side == TOP else self.bottom

    def list_class(self, lst: Iterable[int]) -> Optional[Tuple[int, str]]:
        """(component index, side) when ``lst`` is nonempty, fixed side and fixed component."""
        lst = list(lst)
        if not lst:
            return None
        comps = {self.component_of[a] for a in lst}
        sides = {self.side[a] for a in lst}
        if len(comps) != 1 or len(sides) != 1:
            return None
        return comps.pop(), sides.pop()

    def is_fixed_side(self, lst: Iterable[int]) -> bool:
        return len({self.side[a] for a in lst}) <= 1


def make_target(n: int, edges: Iterable[Tuple[int, int]], side: Sequence[str]) -> BipartiteTarget:
    return BipartiteTarget(UndirectedGraph(n, frozenset(edges)), tuple(side))


def full_lists(n: int, m: int) -> Lists:
    everything = frozenset(range(m))
    return tuple(everything for _ in range(n))


@dataclass(frozen=True)
class DlhomInstance:
    g: UndirectedGraph
    h: BipartiteTarget
    lists: Lists
    k: int

    def __post_init__(self):
        object.__setattr__(self, "lists", tuple(frozenset(l) for l in self.lists))


@dataclass(frozen=True)
class DeletionSolution:
    deleted: FrozenSet[int]
    hom: Mapping[int, int] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "deleted", frozenset(self.deleted))
        object.__setattr__(self, "hom", dict(self.hom))


def validate_instance(inst: DlhomInstance) -> List[str]:
    """All invariant violations of ``inst``; an empty list means the instance is well formed."""
    problems: List[str] = []
    problems += _graph_violations(inst.g, "graph")
    h = inst.h
    problems += _graph_violations(h.graph, "target")
    if len(h.side) != h.n:
        problems.append(f"target side labels: expected {h.n}, got {len(h.side)}")
    else:
        for a, lab in enumerate(h.side):
            if lab not in (TOP, BOTTOM):
                problems.append(f"target vertex {a}: bad side label {lab!r}")
        for a, b in sorted(h.graph.edges):
            if 0 <= a < h.n and 0 <= b < h.n and h.side[a] == h.side[b]:
                problems.append(f"target edge ({a},{b}): edge within side {h.side[a]}")
    if len(inst.lists) != inst.g.n:
        problems.append(f"lists: expected {inst.g.n} lists, got {len(inst.lists)}")
    for v, lst in enumerate(inst.lists):
        for a in sorted(lst):
            if not 0 <= a < h.n:
                problems.append(f"list of vertex {v}: list entry out of range ({a})")
    if inst.k < 0:
        problems.append(f"budget k={inst.k} is negative")
    return problems


def _graph_violations(g: UndirectedGraph, what: str) -> List[str]:
    out = []
    if g.n < 0:
        out.append(f"{what}: negative vertex count")
    for u, v in sorted(g.edges):
        if u == v:
            out.append(f"{what} edge ({u},{v}): self-loop")
        elif not (0 <= u < g.n and 0 <= v < g.n):
            out.append(f"{what} edge ({u},{v}): endpoint out of range")
    return out


def verify_solution(inst: DlhomInstance, sol: DeletionSolution) -> Tuple[bool, Optional[str]]:
    """Check a deletion set plus homomorphism against the instance."""
    g, h = inst.g, inst.h
    if len(sol.deleted) > inst.k:
        return False, f"|W|={len(sol.deleted)} exceeds k={inst.k}"
    for v in sol.deleted:
        if not 0 <= v < g.n:
            return False, f"deleted vertex {v} out of range"
    survivors = set(range(g.n)) - sol.deleted
    if set(sol.hom) != survivors:
        missing = sorted(survivors - set(sol.hom))
        extra = sorted(set(sol.hom) - survivors)
        return False, f"hom domain mismatch (missing {missing}, extra {extra})"
    for v in sorted(survivors):
        if sol.hom[v] not in inst.lists[v]:
            return False, f"vertex {v} mapped to {sol.hom[v]} outside its list"
    for u, v in g.sorted_edges():
        if u in survivors and v in survivors and sol.hom[v] not in h.nbrs[sol.hom[u]]:
            return False, f"edge ({u},{v}) mapped to non-edge ({sol.hom[u]},{sol.hom[v]})"
    return True, None


# --- graph queries -----------------------------------------------------------


def components(adj: Mapping[int, Iterable[int]]) -> List[FrozenSet[int]]:
    """Connected components, ordered by their smallest vertex."""
    seen = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def reach(adj: Mapping[int, Iterable[int]], sources: Iterable[int]) -> FrozenSet[int]:
    found = {s for s in sources if s in adj}
    queue = deque(found)
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in found:
                found.add(w)
                queue.append(w)
    return frozenset(found)


def bfs_path(adj: Mapping[int, Iterable[int]], sources: Iterable[int], targets: Iterable[int]) -> Optional[List[int]]:
    """Shortest path from any source to any target; lowest-index parents win ties."""
    targets = set(targets)
    parent: Dict[int, Optional[int]] = {}
    frontier = sorted(s for s in set(sources) if s in adj)
    for s in frontier:
        parent[s] = None
    while frontier:
        for u in frontier:
            if u in targets:
                path = [u]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
        nxt = []
        for u in frontier:
            for w in sorted(adj[u]):
                if w not in parent:
                    parent[w] = u
                    nxt.append(w)
        frontier = sorted(nxt)
    return None


def two_coloring(adj: Mapping[int, Iterable[int]]) -> Tuple[Optional[Dict[int, int]], Optional[List[int]]]:
    """Proper 2-colouring (smallest vertex of each component gets 0), or an odd cycle."""
    color: Dict[int, int] = {}
    parent: Dict[int, Optional[int]] = {}
    for s in sorted(adj):
        if s in color:
            continue
        color[s] = 0
        parent[s] = None
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if w not in color:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    queue.append(w)
                elif color[w] == color[u]:
                    return None, _odd_cycle(parent, u, w)
    return color, None


def _odd_cycle(parent, u, w) -> List[int]:
    up = [u]
    while parent[up[-1]] is not None:
        up.append(parent[up[-1]])
    wp = [w]
    while parent[wp[-1]] is not None:
        wp.append(parent[wp[-1]])
    on_u = set(up)
    lca = next(x for x in wp if x in on_u)
    left = up[: up.index(lca) + 1]
    right = wp[: wp.index(lca)]
    # u .. lca .. w, closed by the edge w-u
    return left + right[::-1]


def distances(adj: Mapping[int, Iterable[int]]) -> Dict[int, Dict[int, float]]:
    out = {}
    for s in adj:
        dist = {v: math.inf for v in adj}
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] == math.inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        out[s] = dist
    return out


@dataclass(frozen=True)
class GraphSummary:
    components: Tuple[FrozenSet[int], ...]
    coloring: Optional[Dict[int, int]] = field(hash=False)
    odd_cycle: Optional[Tuple[int, ...]]
    distances: Dict[int, Dict[int, float]] = field(hash=False, repr=False)

    @property
    def bipartite(self) -> bool:
        return self.coloring is not None


def graph_queries(g: UndirectedGraph) -> GraphSummary:
    adj = adjacency(g)
    coloring, cycle = two_coloring(adj)
    return GraphSummary(
        components=tuple(components(adj)),
        coloring=coloring,
        odd_cycle=tuple(cycle) if cycle is not None else None,
        distances=distances(adj),
    )
