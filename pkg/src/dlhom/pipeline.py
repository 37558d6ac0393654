"""Reduction pipeline from general list-homomorphism deletion down to the FS-FC solver.

The stages are: iterative compression over vertex prefixes, guessing which
part of the old solution survives, guessing a homomorphism on the rest of
it, trimming the lists of its neighbours, and then either branching on a
conflict between anchored vertices or restricting every list to the side
forced by its anchor.  The last stage (anchored components must be
colourable, the others are ignored) is solved by branching, with the FS-FC
solver deciding each node once the part reachable from the anchors is
fixed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

from .core import (
    Adj,
    BipartiteTarget,
    DeletionSolution,
    DlhomInstance,
    Lists,
    UndirectedGraph,
    adj_to_graph,
    adjacency,
    bfs_path,
    components,
    other_side,
    reach,
    restrict,
    two_coloring,
    validate_instance,
)
from .fsfc import FsfcInstance, _Context, fsfc_min
from .lhom import find_lhom
from .target import SkewDecompTree, skew_decompose


class ContractError(ValueError):
    """An operation was called on an input violating its precondition."""


ListMap = Mapping[int, FrozenSet[int]]
AdjStep = Callable[[Adj, ListMap, FrozenSet[int], int], Optional[FrozenSet[int]]]


def _colorable(adj: Adj, lists: ListMap, h: BipartiteTarget) -> bool:
    return find_lhom(adj, lists, h) is not None


def _without(adj: Adj, gone) -> Adj:
    return restrict(adj, set(adj).difference(gone))


# --- partial homomorphisms on the old solution ---------------------------------


def _partial_homs(adj: Adj, lists: ListMap, w0: FrozenSet[int],
                  h: BipartiteTarget) -> Iterator[Tuple[Dict[int, int], Dict[int, FrozenSet[int]], FrozenSet[int]]]:
    """Yield (gamma, trimmed lists, emptied vertices) for every list homomorphism gamma of G[W0]."""
    order = sorted(w0)
    hn = h.nbrs

    def extend(i: int, gamma: Dict[int, int]):
        if i == len(order):
            yield dict(gamma)
            return
        w = order[i]
        for a in sorted(lists[w]):
            if all(a in hn[gamma[x]] for x in adj[w] if x in gamma):
                gamma[w] = a
                yield from extend(i + 1, gamma)
                del gamma[w]

    for gamma in extend(0, {}):
        trimmed = dict(lists)
        for w, a in gamma.items():
            trimmed[w] = frozenset((a,))
        emptied = set()
        for u in adj:
            if u in w0:
                continue
            near = adj[u] & w0
            if near:
                lst = lists[u]
                for w in near:
                    lst = lst & hn[gamma[w]]
                trimmed[u] = lst
                if not lst:
                    emptied.add(u)
        yield gamma, trimmed, frozenset(emptied)


# --- conflicts and side restriction -----------------------------------------------


@dataclass(frozen=True)
class Conflict:
    u: int
    v: int
    kind: str  # "component" or "parity"


def _sides(adj: Adj) -> Dict[int, int]:
    coloring, cycle = two_coloring(adj)
    if coloring is None:
        raise ContractError(f"graph is not bipartite (odd cycle {cycle})")
    return coloring


def _conflicts(adj: Adj, lists: ListMap, n0: FrozenSet[int], h: BipartiteTarget) -> List[Conflict]:
    side = _sides(adj)
    out = []
    for comp in components(adj):
        anchored = sorted(comp & n0)
        for i, u in enumerate(anchored):
            cu = h.list_class(lists[u])
            for v in anchored[i + 1:]:
                cv = h.list_class(lists[v])
                if cu[0] != cv[0]:
                    out.append(Conflict(u, v, "component"))
                elif (cu[1] == cv[1]) != (side[u] == side[v]):
                    out.append(Conflict(u, v, "parity"))
    return out


def _anchored_part(adj: Adj, n0: FrozenSet[int]) -> Adj:
    """Drop components of G without anchors; a fixed homomorphism already colours them."""
    return restrict(adj, reach(adj, n0))


def _restrict_lists(adj: Adj, lists: ListMap, n0: FrozenSet[int], h: BipartiteTarget) -> Dict[int, FrozenSet[int]]:
    side = _sides(adj)
    out = {}
    for comp in components(adj):
        anchors = sorted(comp & n0)
        if not anchors:
            raise ContractError(f"component containing vertex {min(comp)} has no anchor")
        forced = None
        for v in anchors:
            hc, hs = h.list_class(lists[v])
            this = (hc, hs if side[v] == 0 else other_side(hs))
            if forced is not None and this != forced:
                raise ContractError(f"anchors {anchors[0]} and {v} are in conflict")
            forced = this
        hc, hs0 = forced  # side of H used by G-side 0 of this component
        comp_vertices = h.components[hc]
        for u in comp:
            want = hs0 if side[u] == 0 else other_side(hs0)
            out[u] = lists[u] & comp_vertices & h.side_set(want)
    return out


def _prune(adj: Adj, lists: ListMap, h: BipartiteTarget, z) -> Tuple[Adj, FrozenSet[int], FrozenSet[int]]:
    """Remove bad components of G[Z] and their outside neighbours: (rest, X, B)."""
    z = frozenset(z) & frozenset(adj)
    bad: set = set()
    x: set = set()
    for comp in components(restrict(adj, z)):
        if find_lhom(restrict(adj, comp), lists, h) is None:
            bad |= comp
            for v in comp:
                x |= adj[v] - z
    rest = _without(adj, bad | x)
    return rest, frozenset(x), frozenset(bad)


def _minimal_obstruction(adj: Adj, lists: ListMap, h: BipartiteTarget) -> List[int]:
    """Shrink an uncolourable vertex set to an inclusion-minimal one (which is connected)."""
    keep = set(adj)
    for v in sorted(adj):
        trial = keep - {v}
        if not _colorable(restrict(adj, trial), lists, h):
            keep = trial
    return sorted(keep)


# --- the engine ------------------------------------------------------------------


class Engine:
    """Pipeline solver for one target; ``tree`` enables the FS-FC stage."""

    def __init__(self, h: BipartiteTarget, tree: Optional[SkewDecompTree] = None, ctx: Optional[_Context] = None):
        self.h = h
        self.tree = tree
        self.ctx = ctx if ctx is not None else _Context(h)

    # minimum over budgets, iterative compression at each budget
    def min_deletion(self, adj: Adj, lists: ListMap, cap: int) -> Optional[FrozenSet[int]]:
        forced = frozenset(v for v in adj if not lists[v])
        if len(forced) > cap:
            return None
        adj = _without(adj, forced)
        cap -= len(forced)
        if _colorable(adj, lists, self.h):
            return forced
        for b in range(1, cap + 1):
            found = self.compress(adj, lists, b, self.disjoint)
            if found is not None:
                return found | forced
        return None

    def compress(self, adj: Adj, lists: ListMap, b: int, step: AdjStep) -> Optional[FrozenSet[int]]:
        x: FrozenSet[int] = frozenset()
        prefix: set = set()
        for v in sorted(adj):
            prefix.add(v)
            sub = restrict(adj, prefix)
            if _colorable(_without(sub, x), lists, self.h):
                continue
            if len(x) < b:
                x = x | {v}
                continue
            x = step(sub, lists, x | {v}, b)
            if x is None:
                return None
        return x

    def disjoint(self, adj: Adj, lists: ListMap, w0: FrozenSet[int], b: int) -> Optional[FrozenSet[int]]:
        """Guess I = W ∩ W0 (in increasing bitmask order), then solve the disjoint problem."""
        order = sorted(w0)
        for mask in range(1 << len(order)):
            inter = frozenset(order[i] for i in range(len(order)) if mask >> i & 1)
            if len(inter) > b:
                continue
            found = self.disjoint_step(_without(adj, inter), lists, w0 - inter, b - len(inter))
            if found is not None:
                return found | inter
        return None

    def disjoint_step(self, adj: Adj, lists: ListMap, w0: FrozenSet[int], budget: int) -> Optional[FrozenSet[int]]:
        """A solution of size <= budget avoiding W0, given that G minus W0 is colourable."""
        for _gamma, trimmed, emptied in _partial_homs(adj, lists, w0, self.h):
            if len(emptied) > budget:
                continue
            rest = _without(adj, w0 | emptied)
            n0 = frozenset(u for u in rest if adj[u] & w0)
            found = self.bipcomp(rest, trimmed, n0, budget - len(emptied))
            if found is not None:
                return found | emptied
        return None

    def bipcomp(self, adj: Adj, lists: ListMap, n0: FrozenSet[int], budget: int) -> Optional[FrozenSet[int]]:
        adj = _anchored_part(adj, n0)
        n0 = n0 & frozenset(adj)
        conflicts = _conflicts(adj, lists, n0, self.h)
        if conflicts:
            if budget == 0:
                return None
            path = _shortest_conflict_path(adj, conflicts)
            for x in path:
                found = self.bipcomp(_without(adj, {x}), lists, n0 - {x}, budget - 1)
                if found is not None:
                    return found | {x}
            return None
        return self.fsfc_ig(adj, _restrict_lists(adj, lists, n0, self.h), n0, budget)

    def fsfc_ig(self, adj: Adj, lists: ListMap, n0: FrozenSet[int], budget: int) -> Optional[FrozenSet[int]]:
        """Delete <= budget vertices so that every component meeting N0 is colourable.

        At a node with deletions D, the components of G - D away from N0 form
        the shadow Z; pruning with Z and solving the rest as FS-FC settles the
        node.  Otherwise some minimal obstruction O reachable from N0 must be
        hit or cut off, so we branch on O plus a shortest path from O to N0.
        """
        seen = set()

        def search(d: FrozenSet[int]) -> Optional[FrozenSet[int]]:
            if d in seen:
                return None
            seen.add(d)
            cur = _without(adj, d)
            left = budget - len(d)
            r = reach(cur, n0)
            core = restrict(cur, r)
            if self.tree is not None:
                found = fsfc_min(core, lists, self.tree, left, self.ctx)
                if found is not None:
                    return d | found
            elif _colorable(core, lists, self.h):
                return d
            if left == 0:
                return None
            obstruction = _minimal_obstruction(core, lists, self.h)
            path = bfs_path(cur, obstruction, n0) or []
            for x in sorted(set(obstruction) | set(path)):
                found = search(d | {x})
                if found is not None:
                    return found
            return None

        return search(frozenset())


def _shortest_conflict_path(adj: Adj, conflicts: List[Conflict]) -> List[int]:
    best = None
    for c in conflicts:
        path = bfs_path(adj, [c.u], [c.v])
        if best is None or len(path) < len(best):
            best = path
    return best


# --- public, dense-instance API --------------------------------------------------


@dataclass(frozen=True)
class PartialHomGuess:
    gamma: Mapping[int, int] = field(hash=False)
    lists: Lists
    forced: FrozenSet[int]


@dataclass(frozen=True)
class BipCompInstance:
    g: UndirectedGraph
    h: BipartiteTarget
    lists: Lists
    n0: FrozenSet[int]
    phi0: Mapping[int, int] = field(hash=False)
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lists", tuple(frozenset(l) for l in self.lists))
        object.__setattr__(self, "n0", frozenset(self.n0))


@dataclass(frozen=True)
class FsfcIgInstance:
    g: UndirectedGraph
    h: BipartiteTarget
    lists: Lists
    n0: FrozenSet[int]
    k: int
    origin: Tuple[int, ...] = ()  # vertex names in the instance this one came from

    def __post_init__(self):
        object.__setattr__(self, "lists", tuple(frozenset(l) for l in self.lists))
        object.__setattr__(self, "n0", frozenset(self.n0))
        if not self.origin:
            object.__setattr__(self, "origin", tuple(range(self.g.n)))


@dataclass(frozen=True)
class PruneResult:
    instance: Optional[FsfcInstance]  # None when the forced deletions exceed the budget
    forced: FrozenSet[int]
    bad: FrozenSet[int]
    origin: Tuple[int, ...]


def _decomposition(h: BipartiteTarget, tree: Optional[SkewDecompTree]) -> Optional[SkewDecompTree]:
    return tree if tree is not None else skew_decompose(h)


def guess_partial_homs(g: UndirectedGraph, lists: Lists, w0, h: BipartiteTarget) -> Iterator[PartialHomGuess]:
    """Every list homomorphism of G[W0], with neighbours' lists trimmed accordingly."""
    w0 = frozenset(w0)
    for gamma, trimmed, emptied in _partial_homs(adjacency(g), dict(enumerate(lists)), w0, h):
        yield PartialHomGuess(gamma, tuple(trimmed[v] for v in range(g.n)), emptied)


def bipcomp_from_guess(g: UndirectedGraph, h: BipartiteTarget, lists: Lists, w0, guess: PartialHomGuess,
                       k: int) -> Tuple[BipCompInstance, Tuple[int, ...]]:
    """The compression instance on G - W0 - forced for one guess, plus its vertex origin."""
    adj = adjacency(g)
    w0 = frozenset(w0)
    keep = set(range(g.n)) - w0 - guess.forced
    sub, origin = g.induced(keep)
    new = {v: i for i, v in enumerate(origin)}
    n0 = frozenset(new[u] for u in keep if adj[u] & w0)
    phi = find_lhom(restrict(adj, set(range(g.n)) - w0), dict(enumerate(lists)), h)
    if phi is None:
        raise ContractError("G - W0 has no list homomorphism")
    phi0 = {new[v]: a for v, a in phi.items() if v in new and new[v] not in n0}
    sub_lists = tuple(guess.lists[v] for v in origin)
    return BipCompInstance(sub, h, sub_lists, n0, phi0, k - len(guess.forced)), origin


def detect_conflicts(inst: BipCompInstance) -> List[Conflict]:
    for v in sorted(inst.n0):
        if inst.h.list_class(inst.lists[v]) is None:
            raise ContractError(f"anchor {v} does not have a fixed side fixed component list")
    return _conflicts(adjacency(inst.g), dict(enumerate(inst.lists)), inst.n0, inst.h)


def restrict_to_fixed_side(inst: BipCompInstance) -> FsfcIgInstance:
    if detect_conflicts(inst):
        raise ContractError("instance has conflicts; restriction is undefined")
    adj = _anchored_part(adjacency(inst.g), inst.n0)
    lists = _restrict_lists(adj, dict(enumerate(inst.lists)), inst.n0, inst.h)
    sub, origin = inst.g.induced(adj)
    new = {v: i for i, v in enumerate(origin)}
    return FsfcIgInstance(sub, inst.h, tuple(lists[v] for v in origin),
                          frozenset(new[v] for v in inst.n0 if v in new), inst.k, origin)


def prune_bad_components(inst: FsfcIgInstance, z) -> PruneResult:
    """Delete neighbours X of bad components of G[Z], drop those components B, budget k - |X|."""
    adj = adjacency(inst.g)
    lists = dict(enumerate(inst.lists))
    rest, x, bad = _prune(adj, lists, inst.h, z)
    sub, origin = adj_to_graph(rest)
    if len(x) > inst.k:
        return PruneResult(None, x, bad, origin)
    pruned = FsfcInstance(sub, inst.h, tuple(lists[v] for v in origin), inst.k - len(x))
    return PruneResult(pruned, x, bad, origin)


def solve_bipcomp(inst: BipCompInstance, tree: Optional[SkewDecompTree] = None) -> Optional[FrozenSet[int]]:
    for v in sorted(inst.n0):
        if inst.h.list_class(inst.lists[v]) is None:
            raise ContractError(f"anchor {v} does not have a fixed side fixed component list")
    engine = Engine(inst.h, _decomposition(inst.h, tree))
    return engine.bipcomp(adjacency(inst.g), dict(enumerate(inst.lists)), inst.n0, inst.k)


def solve_fsfc_ig(inst: FsfcIgInstance, tree: Optional[SkewDecompTree] = None) -> Optional[FrozenSet[int]]:
    engine = Engine(inst.h, _decomposition(inst.h, tree))
    return engine.fsfc_ig(adjacency(inst.g), dict(enumerate(inst.lists)), inst.n0, inst.k)


def iterative_compression_drive(inst: DlhomInstance,
                                step_solver: Callable[[DlhomInstance, FrozenSet[int]], Optional[FrozenSet[int]]]
                                ) -> Optional[DeletionSolution]:
    """Solve prefixes G[0..i) in turn; each step compresses a solution of size <= k+1 to one of size <= k."""
    adj = adjacency(inst.g)
    lists = dict(enumerate(inst.lists))

    def step(sub: Adj, lst: ListMap, w0: FrozenSet[int], b: int) -> Optional[FrozenSet[int]]:
        g, _ = adj_to_graph(sub)  # prefixes are 0..i-1, so names are unchanged
        return step_solver(DlhomInstance(g, inst.h, tuple(lst[v] for v in range(g.n)), b), w0)

    found = Engine(inst.h).compress(adj, lists, inst.k, step)
    return _with_hom(inst, found)


def disjoint_compression(inst: DlhomInstance, w0, step_solver: Optional[AdjStep] = None
                         ) -> Optional[DeletionSolution]:
    """Given W0 with G - W0 colourable, find a solution of size <= k by guessing W ∩ W0."""
    w0 = frozenset(w0)
    adj = adjacency(inst.g)
    lists = dict(enumerate(inst.lists))
    if not _colorable(_without(adj, w0), lists, inst.h):
        raise ContractError("G - W0 has no list homomorphism")
    engine = Engine(inst.h, skew_decompose(inst.h))
    if step_solver is not None:
        engine.disjoint_step = step_solver
    return _with_hom(inst, engine.disjoint(adj, lists, w0, inst.k))


def _with_hom(inst: DlhomInstance, found: Optional[FrozenSet[int]]) -> Optional[DeletionSolution]:
    if found is None:
        return None
    adj = adjacency(inst.g)
    hom = find_lhom(_without(adj, found), dict(enumerate(inst.lists)), inst.h)
    if hom is None:
        raise AssertionError(f"deletion set {sorted(found)} does not leave a homomorphic graph")
    return DeletionSolution(found, hom)


def solve_dlhom(inst: DlhomInstance, tree: Optional[SkewDecompTree] = None) -> Optional[DeletionSolution]:
    """Minimum deletion set of size <= k through the full pipeline.

    Without a skew decomposition (given or found) the anchored stage falls
    back to plain branching, which is still exact.
    """
    problems = validate_instance(inst)
    if problems:
        raise ContractError("; ".join(problems))
    engine = Engine(inst.h, _decomposition(inst.h, tree))
    found = engine.min_deletion(adjacency(inst.g), dict(enumerate(inst.lists)), inst.k)
    return _with_hom(inst, found)
