"""List homomorphism search and the exhaustive deletion oracle."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Mapping, Optional, Sequence, Set

from .core import (
    Adj,
    BipartiteTarget,
    DeletionSolution,
    DlhomInstance,
    Lists,
    UndirectedGraph,
    adjacency,
    restrict,
)


def propagate_domains(adj: Mapping[int, FrozenSet[int]], doms: Dict[int, Set[int]], hnbrs: Sequence[FrozenSet[int]],
                      queue=None) -> bool:
    """AC-3 on ``doms`` in place.  False iff some domain became empty."""
    if queue is None:
        queue = deque((u, w) for u in adj for w in adj[u])
    else:
        queue = deque(queue)
    while queue:
        u, w = queue.popleft()
        du, dw = doms[u], doms[w]
        dead = [a for a in du if hnbrs[a].isdisjoint(dw)]
        if dead:
            du.difference_update(dead)
            if not du:
                return False
            for x in adj[u]:
                if x != w:
                    queue.append((x, u))
    return all(doms[v] for v in adj)


def find_lhom(adj: Mapping[int, FrozenSet[int]], lists: Mapping[int, FrozenSet[int]],
              h: BipartiteTarget) -> Optional[Dict[int, int]]:
    """A list homomorphism of the graph ``adj`` (restricted to its keys), or None.

    Maintains arc consistency while branching on the vertex with the smallest
    current list (lowest index on ties), trying values in increasing order.
    """
    hn = h.nbrs
    doms = {v: set(lists[v]) for v in adj}
    if not propagate_domains(adj, doms, hn):
        return None
    return _mac(adj, doms, hn)


def _mac(adj, doms, hn):
    open_vars = [v for v in doms if len(doms[v]) > 1]
    if not open_vars:
        return {v: next(iter(d)) for v, d in doms.items()}
    var = min(open_vars, key=lambda v: (len(doms[v]), v))
    for a in sorted(doms[var]):
        trial = {v: set(d) for v, d in doms.items()}
        trial[var] = {a}
        if propagate_domains(adj, trial, hn, ((x, var) for x in adj[var])):
            found = _mac(adj, trial, hn)
            if found is not None:
                return found
    return None


def colorable(adj, lists, h) -> bool:
    return find_lhom(adj, lists, h) is not None


@dataclass(frozen=True)
class PropagationState:
    lists: Lists
    emptied: bool


def arc_consistency(g: UndirectedGraph, lists: Lists, h: BipartiteTarget) -> PropagationState:
    """Greatest arc-consistent sub-lists of ``lists``."""
    adj = adjacency(g)
    doms = {v: set(lists[v]) for v in adj}
    hn = h.nbrs
    queue = deque((u, w) for u in adj for w in adj[u])
    while queue:
        u, w = queue.popleft()
        dead = [a for a in doms[u] if hn[a].isdisjoint(doms[w])]
        if dead:
            doms[u].difference_update(dead)
            for x in adj[u]:
                if x != w:
                    queue.append((x, u))
    out = tuple(frozenset(doms[v]) for v in range(g.n))
    return PropagationState(out, any(not d for d in out))


def lhom_decide(g: UndirectedGraph, lists: Lists, h: BipartiteTarget) -> Optional[Dict[int, int]]:
    return find_lhom(adjacency(g), dict(enumerate(lists)), h)


def min_deletion(adj: Adj, lists: Mapping[int, FrozenSet[int]], h: BipartiteTarget,
                 cap: int) -> Optional[FrozenSet[int]]:
    """Canonical minimum deletion set of size <= cap by exhaustive enumeration.

    Sets are tried by increasing size, lexicographically within a size.
    """
    verts = sorted(adj)
    keys = frozenset(verts)
    for size in range(min(cap, len(verts)) + 1):
        for w in combinations(verts, size):
            keep = keys.difference(w)
            if find_lhom(restrict(adj, keep), lists, h) is not None:
                return frozenset(w)
    return None


def solve_exact_oracle(inst: DlhomInstance) -> Optional[DeletionSolution]:
    """Ground-truth DL-Hom solver; exponential in |V(G)|."""
    adj = adjacency(inst.g)
    lists = dict(enumerate(inst.lists))
    w = min_deletion(adj, lists, inst.h, inst.k)
    if w is None:
        return None
    hom = find_lhom(restrict(adj, set(adj) - w), lists, inst.h)
    return DeletionSolution(w, hom)
