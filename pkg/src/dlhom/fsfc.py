"""Deletion to fixed-side fixed-component list homomorphism, by induction on a skew decomposition.

Leaves reduce to vertex cover.  At a disjoint union every component of G is
solved separately and the minima are added up.  At a special sum the lists
are trimmed towards the complete bipartite part, bad edges are branched on,
edges that can never fail are dropped, and what remains splits into
components living entirely inside one of the two summands.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Mapping, Optional, Tuple

from .core import (
    Adj,
    BipartiteTarget,
    DeletionSolution,
    Lists,
    UndirectedGraph,
    adjacency,
    components,
    restrict,
)
from .lhom import find_lhom
from .target import Leaf, SkewDecompTree, SkewSum, skew_decompose, tree_edges


@dataclass(frozen=True)
class FsfcInstance:
    g: UndirectedGraph
    h: BipartiteTarget
    lists: Lists
    k: int
    decomposition: Optional[SkewDecompTree] = None

    def __post_init__(self):
        object.__setattr__(self, "lists", tuple(frozenset(l) for l in self.lists))


# --- vertex cover ---------------------------------------------------------------


def _cover(adj: Mapping[int, FrozenSet[int]], cap: int) -> Optional[FrozenSet[int]]:
    """Minimum vertex cover of size <= cap, or None."""
    edge = None
    for u in sorted(adj):
        if adj[u]:
            # a degree-one vertex: taking its neighbour is never worse
            if len(adj[u]) == 1:
                (w,) = adj[u]
                return _take(adj, w, cap)
            if edge is None:
                edge = (u, min(adj[u]))
    if edge is None:
        return frozenset()
    if cap == 0:
        return None
    u, v = edge
    best = _take(adj, u, cap)
    limit = cap if best is None else len(best) - 1
    if limit >= 1:
        other = _take(adj, v, limit)
        if other is not None:
            best = other
    return best


def _take(adj, w, cap):
    if cap == 0:
        return None
    rest = _cover(restrict(adj, set(adj) - {w}), cap - 1)
    return None if rest is None else rest | {w}


def min_vertex_cover(g: UndirectedGraph, cap: int) -> Optional[int]:
    """Size of a minimum vertex cover when it is at most ``cap``, else None."""
    found = _cover(adjacency(g), cap)
    return None if found is None else len(found)


# --- the solver -----------------------------------------------------------------


@lru_cache(maxsize=None)
def node_target(node: SkewDecompTree, n: int, side: Tuple[str, ...]) -> BipartiteTarget:
    """The subgraph built by ``node`` as a target on the full vertex range (other vertices isolated)."""
    return BipartiteTarget(UndirectedGraph(n, tree_edges(node)), side)


class _Context:
    def __init__(self, h: BipartiteTarget):
        self.h = h
        self.memo: Dict[tuple, Tuple[Optional[FrozenSet[int]], int]] = {}

    def target(self, node: SkewDecompTree) -> BipartiteTarget:
        return node_target(node, self.h.n, self.h.side)


def fsfc_min(adj: Adj, lists: Mapping[int, FrozenSet[int]], node: SkewDecompTree, cap: int,
             ctx: _Context) -> Optional[FrozenSet[int]]:
    """Minimum deletion set of size <= cap for an FS-FC instance over the target built by ``node``."""
    forced = frozenset(v for v in adj if not lists[v])
    if len(forced) > cap:
        return None
    if forced:
        adj = restrict(adj, set(adj) - forced)
        cap -= len(forced)
    if isinstance(node, Leaf):
        found = _cover(adj, cap)
    elif isinstance(node, SkewSum):
        found = _skew_sum(adj, lists, node, cap, ctx)
    else:
        found = _union(adj, lists, node, cap, ctx)
    return None if found is None else found | forced


def _union(adj, lists, node, cap, ctx) -> Optional[FrozenSet[int]]:
    total = frozenset()
    for comp in components(adj):
        used = set().union(*(lists[v] for v in comp))
        if used <= node.left.vertices:
            child = node.left
        elif used <= node.right.vertices:
            child = node.right
        else:
            raise ValueError(f"component containing vertex {min(comp)} has lists in both parts of a disjoint union")
        d = _component_min(restrict(adj, comp), lists, child, cap - len(total), ctx)
        if d is None:
            return None
        total |= d
    return total


def _component_min(adj, lists, child, cap, ctx) -> Optional[FrozenSet[int]]:
    """d(C): fewest deletions for one component against one summand, memoized."""
    key = (frozenset(adj), tuple(sorted((v, lists[v]) for v in adj)), child)
    hit = ctx.memo.get(key)
    if hit is not None:
        found, tried = hit
        if found is not None:
            return found if len(found) <= cap else None
        if tried >= cap:
            return None
    sub = ctx.target(child)
    used = set().union(*(lists[v] for v in adj))
    if len({sub.component_of[a] for a in used}) <= 1:
        found = fsfc_min(adj, lists, child, cap, ctx)
    else:
        from .pipeline import Engine

        found = Engine(sub, child, ctx).min_deletion(adj, lists, cap)
    ctx.memo[key] = (found, cap)
    return found


def _skew_sum(adj, lists, node: SkewSum, cap, ctx) -> Optional[FrozenSet[int]]:
    return _branch_bad_edges(adj, trim_for_skew_sum(lists, node), node, cap, ctx)


def _is_bad(a: FrozenSet[int], b: FrozenSet[int], node: SkewSum) -> bool:
    top = node.top
    if (a <= top) == (b <= top):
        return True  # both lists on one side: no edge of H can host this edge
    b1, t2 = node.left.bottom, node.right.top
    return (a <= b1 and b <= t2) or (b <= b1 and a <= t2)


def _branch_bad_edges(adj, lists, node, cap, ctx) -> Optional[FrozenSet[int]]:
    bad = None
    for u in sorted(adj):
        for v in sorted(adj[u]):
            if u < v and _is_bad(lists[u], lists[v], node):
                bad = (u, v)
                break
        if bad:
            break
    if bad is None:
        return _union(drop_safe_edges(adj, lists, node), lists, node, cap, ctx)
    if cap == 0:
        return None
    best = None
    for x in bad:
        limit = cap - 1 if best is None else len(best) - 2
        if limit < 0:
            break
        rest = _branch_bad_edges(restrict(adj, set(adj) - {x}), lists, node, limit, ctx)
        if rest is not None:
            best = rest | {x}
    return best


def drop_safe_edges(adj, lists, node) -> Adj:
    """Remove edges whose endpoints' lists lie in T1 and B2: every choice maps them to an edge."""
    t1, b2 = node.left.top, node.right.bottom
    out = {}
    for u, nb in adj.items():
        if lists[u] <= t1:
            nb = frozenset(w for w in nb if not lists[w] <= b2)
        elif lists[u] <= b2:
            nb = frozenset(w for w in nb if not lists[w] <= t1)
        out[u] = nb
    return out


# --- public entry points ---------------------------------------------------------


def check_decomposition(h: BipartiteTarget, tree: SkewDecompTree) -> None:
    """Raise ValueError unless ``tree`` builds ``h`` on the same vertex names and sides."""
    if tree.vertices != frozenset(range(h.n)):
        raise ValueError("decomposition does not cover exactly the target's vertices")
    if tree.top != h.top:
        raise ValueError("decomposition side labels differ from the target's")
    if tree_edges(tree) != h.graph.edges:
        raise ValueError("decomposition does not reproduce the target's edges")


def fsfc_violations(g: UndirectedGraph, h: BipartiteTarget, lists: Lists) -> list:
    """Reasons why ``lists`` is not fixed side fixed component (empty lists are allowed)."""
    out = []
    for v, lst in enumerate(lists):
        if lst and h.list_class(lst) is None:
            out.append(f"list of vertex {v} is not within one side of one component of H")
    for comp in components(adjacency(g)):
        used = {h.component_of[a] for v in comp for a in lists[v]}
        if len(used) > 1:
            out.append(f"component of G containing vertex {min(comp)} uses several components of H")
    return out


def solve_fsfc(inst: FsfcInstance) -> Optional[DeletionSolution]:
    """A minimum deletion set (at most k) with a witnessing homomorphism, or None."""
    problems = fsfc_violations(inst.g, inst.h, inst.lists)
    if problems:
        raise ValueError("not an FS-FC instance: " + "; ".join(problems))
    tree = inst.decomposition
    if tree is None:
        tree = skew_decompose(inst.h)
        if tree is None:
            raise ValueError("target is not skew decomposable")
    else:
        check_decomposition(inst.h, tree)
    adj = adjacency(inst.g)
    lists = dict(enumerate(inst.lists))
    found = fsfc_min(adj, lists, tree, inst.k, _Context(inst.h))
    if found is None:
        return None
    hom = find_lhom(restrict(adj, set(adj) - found), lists, inst.h)
    if hom is None:
        raise AssertionError("FS-FC deletion set does not leave a homomorphic graph")
    return DeletionSolution(found, hom)


def trim_for_skew_sum(lists: Mapping[int, FrozenSet[int]], node: SkewSum) -> Dict[int, FrozenSet[int]]:
    """The list trimming applied at a special-sum node, exposed for testing."""
    t1, b2 = node.left.top, node.right.bottom
    out = dict(lists)
    for v, lst in lists.items():
        if lst and lst <= node.top and lst & t1:
            out[v] = lst & t1
        elif lst and lst <= node.bottom and lst & b2:
            out[v] = lst & b2
    return out
