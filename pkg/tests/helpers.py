"""Brute-force references shared by the test modules.

Nothing here calls the package's own search code: homomorphisms are found by
plain enumeration over the lists, so these are independent checks.
"""
from __future__ import annotations

from itertools import combinations, product
from typing import Dict, FrozenSet, Iterator, Optional, Sequence

from dlhom.chainsat import Chain, ChainFormula, ClauseRef, CdcsInstance, Unary, VdcsInstance
from dlhom.core import BOTTOM, TOP, BipartiteTarget, DlhomInstance, UndirectedGraph, make_target


def path_graph(n: int) -> UndirectedGraph:
    return UndirectedGraph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> UndirectedGraph:
    return UndirectedGraph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> UndirectedGraph:
    return UndirectedGraph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def k1() -> BipartiteTarget:
    return make_target(1, [], [TOP])


def k2() -> BipartiteTarget:
    return make_target(2, [(0, 1)], [TOP, BOTTOM])


def all_homs(g: UndirectedGraph, lists: Sequence[FrozenSet[int]], h: BipartiteTarget,
             alive: Optional[Sequence[int]] = None) -> Iterator[Dict[int, int]]:
    """Every list homomorphism from G[alive] to H, by plain depth-first enumeration.

    A partial map is abandoned as soon as an edge to an earlier vertex fails;
    there is no look-ahead.
    """
    verts = list(range(g.n)) if alive is None else sorted(alive)
    keep = set(verts)
    earlier = {v: [u for u in g.adj[v] if u in keep and u < v] for v in verts}
    phi: Dict[int, int] = {}

    def walk(i):
        if i == len(verts):
            yield dict(phi)
            return
        v = verts[i]
        for a in sorted(lists[v]):
            if all(a in h.nbrs[phi[u]] for u in earlier[v]):
                phi[v] = a
                yield from walk(i + 1)
                del phi[v]

    yield from walk(0)


def has_hom(g, lists, h, alive=None) -> bool:
    return next(all_homs(g, lists, h, alive), None) is not None


def brute_min_deletion(inst: DlhomInstance) -> Optional[int]:
    n = inst.g.n
    for size in range(min(inst.k, n) + 1):
        for w in combinations(range(n), size):
            if has_hom(inst.g, inst.lists, inst.h, set(range(n)) - set(w)):
                return size
    return None


def size_of(sol) -> Optional[int]:
    return None if sol is None else len(sol.deleted)


# --- chain formulas -----------------------------------------------------------


def brute_sat(f: ChainFormula, removed=frozenset(), gone=frozenset()) -> bool:
    live = [x for x in range(f.num_vars) if x not in removed]
    for bits in product((0, 1), repeat=len(live)):
        asg = dict(zip(live, bits))
        asg.update({x: 0 for x in removed})
        ok = all(ClauseRef("chain", i) in gone or removed.intersection(c.vars)
                 or all(asg[a] <= asg[b] for a, b in zip(c.vars, c.vars[1:]))
                 for i, c in enumerate(f.chains))
        ok = ok and all(ClauseRef("unary", i) in gone or u.var in removed or asg[u.var] == (0 if u.neg else 1)
                        for i, u in enumerate(f.unary))
        if ok:
            return True
    return False


def brute_cdcs(inst: CdcsInstance):
    f = inst.formula
    refs = [ClauseRef("chain", i) for i in range(len(f.chains))] + [ClauseRef("unary", i) for i in range(len(f.unary))]
    cost = {r: (f.chains if r.kind == "chain" else f.unary)[r.index].mult for r in refs}
    best = None
    for s in range(len(refs) + 1):
        for gone in combinations(refs, s):
            c = sum(cost[r] for r in gone)
            if c <= inst.k and (best is None or c < best) and brute_sat(f, gone=frozenset(gone)):
                best = c
    return best


def brute_vdcs(inst: VdcsInstance):
    f = inst.formula
    for s in range(inst.k + 1):
        for dl in combinations(sorted(inst.deletable), s):
            removed = frozenset(x for i in dl for x in f.chains[i].vars)
            if brute_sat(f, removed=removed):
                return s
    return None


def random_formula(rng, num_vars=None, max_chains=3, max_unary=3, ell=3, mults=(1,)):
    v = num_vars or rng.randint(1, 4)
    chains = [Chain(tuple(rng.sample(range(v), rng.randint(1, min(ell, v)))), rng.choice(mults))
              for _ in range(rng.randint(0, max_chains))]
    unary = [Unary(rng.randrange(v), rng.random() < 0.5, rng.choice(mults)) for _ in range(rng.randint(0, max_unary))]
    return ChainFormula(v, tuple(chains), tuple(unary), ell)


def random_vdcs(rng, max_clauses=4):
    ell = rng.randint(1, 3)
    lens = [rng.choice([l for l in (1, 3) if l <= ell]) for _ in range(rng.randint(1, 3))]
    chains, v = [], 0
    for length in lens:
        chains.append(Chain(tuple(range(v, v + length))))
        v += length
    owner = {x: i for i, c in enumerate(chains) for x in c.vars}
    for _ in range(rng.randint(0, 2)):
        if v > 1:
            a, b = rng.sample(range(v), 2)
            if owner[a] != owner[b]:
                chains.append(Chain((a, b)))
    unary = [Unary(rng.randrange(v), rng.random() < 0.5) for _ in range(rng.randint(0, 3))]
    ell = max([ell] + [len(c.vars) for c in chains])
    return VdcsInstance(ChainFormula(v, tuple(chains), tuple(unary), ell), rng.randint(0, 2))
