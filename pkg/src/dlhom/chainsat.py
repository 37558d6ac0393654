"""Chain-SAT formulas, clause and variable deletion, and their reductions to and from FS-FC.

A chain clause ``x0 -> x1 -> ... -> xm`` over distinct variables is stored as
the tuple of its variables; its length is the number of variables.  Unary
clauses are signed variables.  Every clause carries a multiplicity: deleting a
clause in the clause-deletion problem removes one copy, so a clause with
``k + 1`` copies is effectively undeletable.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .core import BOTTOM, TOP, BipartiteTarget, UndirectedGraph
from .fsfc import FsfcInstance
from .target import ArcRepresentation, build_chain_target, validate_arc_representation


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Chain:
    vars: Tuple[int, ...]
    mult: int = 1

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))


@dataclass(frozen=True)
class Unary:
    var: int
    neg: bool
    mult: int = 1


@dataclass(frozen=True)
class ChainFormula:
    num_vars: int
    chains: Tuple[Chain, ...] = ()
    unary: Tuple[Unary, ...] = ()
    ell: int = 0

    def __post_init__(self):
        object.__setattr__(self, "chains", tuple(self.chains))
        object.__setattr__(self, "unary", tuple(self.unary))
        if not self.ell:
            object.__setattr__(self, "ell", max((len(c.vars) for c in self.chains), default=1))

    def violations(self) -> List[str]:
        out = []
        for i, c in enumerate(self.chains):
            if not c.vars:
                out.append(f"chain {i} is empty")
            if len(set(c.vars)) != len(c.vars):
                out.append(f"chain {i} repeats a variable")
            if len(c.vars) > self.ell:
                out.append(f"chain {i} has length {len(c.vars)} > ell={self.ell}")
            if any(not 0 <= x < self.num_vars for x in c.vars):
                out.append(f"chain {i} uses an unknown variable")
            if c.mult < 1:
                out.append(f"chain {i} has multiplicity {c.mult}")
        for i, u in enumerate(self.unary):
            if not 0 <= u.var < self.num_vars:
                out.append(f"unary clause {i} uses an unknown variable")
            if u.mult < 1:
                out.append(f"unary clause {i} has multiplicity {u.mult}")
        return out


@dataclass(frozen=True)
class ClauseRef:
    kind: str  # "chain" or "unary"
    index: int


@dataclass(frozen=True)
class CdcsInstance:
    formula: ChainFormula
    k: int


@dataclass(frozen=True)
class VdcsInstance:
    formula: ChainFormula
    k: int
    deletable: FrozenSet[int] = None  # chain indices; defaults to every chain of length != 2

    def __post_init__(self):
        if self.deletable is None:
            dl = frozenset(i for i, c in enumerate(self.formula.chains) if len(c.vars) != 2)
        else:
            dl = frozenset(self.deletable)
        object.__setattr__(self, "deletable", dl)

    def violations(self) -> List[str]:
        f = self.formula
        out = f.violations()
        owner: Dict[int, int] = {}
        for i, c in enumerate(f.chains):
            if len(c.vars) != 2 and i not in self.deletable:
                out.append(f"chain {i} has length {len(c.vars)} but is not deletable")
        for i in sorted(self.deletable):
            for x in f.chains[i].vars:
                if x in owner:
                    out.append(f"deletable chains {owner[x]} and {i} share variable {x}")
                owner[x] = i
        for x in range(f.num_vars):
            if x not in owner:
                out.append(f"variable {x} is in no deletable chain")
        for i, c in enumerate(f.chains):
            if i not in self.deletable and len(c.vars) == 2:
                a, b = c.vars
                if a in owner and owner.get(a) == owner.get(b):
                    out.append(f"implication {i} has both ends in deletable chain {owner[a]}")
        return out


# --- propagation ------------------------------------------------------------------


@dataclass(frozen=True)
class Propagation:
    sat: bool
    assignment: Optional[Tuple[int, ...]] = None
    certificate: Optional[Tuple[ClauseRef, ...]] = None


def _propagate(num_vars: int, chains: Sequence[Tuple[int, Tuple[int, ...]]],
               unary: Sequence[Tuple[int, int, bool]]) -> Propagation:
    """Propagate over the active clauses given as (index, vars) and (index, var, neg)."""
    succ: List[List[int]] = [[] for _ in range(num_vars)]
    pred: List[List[int]] = [[] for _ in range(num_vars)]
    for _, vs in chains:
        for a, b in zip(vs, vs[1:]):
            succ[a].append(b)
            pred[b].append(a)
    ones = _closure([x for _, x, neg in unary if not neg], succ)
    zeros = _closure([x for _, x, neg in unary if neg], pred)
    if ones.isdisjoint(zeros):
        return Propagation(True, tuple(1 if x in ones else 0 for x in range(num_vars)))
    return Propagation(False, certificate=_certificate(num_vars, chains, unary))


def _closure(seeds: Iterable[int], nxt: List[List[int]]) -> set:
    seen = set(seeds)
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for y in nxt[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _certificate(num_vars, chains, unary) -> Tuple[ClauseRef, ...]:
    """Fewest chain clauses leading from a positive unary to a negative one."""
    occurrences: List[List[Tuple[int, Tuple[int, ...], int]]] = [[] for _ in range(num_vars)]
    for idx, vs in sorted(chains):
        for pos, x in enumerate(vs):
            occurrences[x].append((idx, vs, pos))
    negative: Dict[int, int] = {}
    for idx, x, neg in sorted(unary):
        if neg:
            negative.setdefault(x, idx)
    start: Dict[int, int] = {}
    for idx, x, neg in sorted(unary):
        if not neg:
            start.setdefault(x, idx)
    parent: Dict[int, Optional[Tuple[int, int]]] = {x: None for x in start}
    layer = sorted(start)
    while layer:
        hits = [x for x in layer if x in negative]
        if hits:
            end = min(hits, key=lambda x: (negative[x], x))
            path = []
            x = end
            while parent[x] is not None:
                chain_idx, prev = parent[x]
                path.append(ClauseRef("chain", chain_idx))
                x = prev
            refs = [ClauseRef("unary", start[x])] + path[::-1] + [ClauseRef("unary", negative[end])]
            return tuple(refs)
        nxt = []
        for x in layer:
            for idx, vs, pos in occurrences[x]:
                for y in vs[pos + 1:]:
                    if y not in parent:
                        parent[y] = (idx, x)
                        nxt.append(y)
        layer = sorted(nxt)
    raise AssertionError("unsatisfiable formula without a certificate")


def propagate(f: ChainFormula) -> Propagation:
    """Satisfying assignment (forced ones set to 1, the rest 0) or a shortest contradiction."""
    return _propagate(f.num_vars, list(enumerate(c.vars for c in f.chains)),
                      [(i, u.var, u.neg) for i, u in enumerate(f.unary)])


# --- clause deletion --------------------------------------------------------------


def _mult(f: ChainFormula, ref: ClauseRef) -> int:
    return (f.chains if ref.kind == "chain" else f.unary)[ref.index].mult


def _propagate_without(f: ChainFormula, gone: FrozenSet[ClauseRef]) -> Propagation:
    chains = [(i, c.vars) for i, c in enumerate(f.chains) if ClauseRef("chain", i) not in gone]
    unary = [(i, u.var, u.neg) for i, u in enumerate(f.unary) if ClauseRef("unary", i) not in gone]
    return _propagate(f.num_vars, chains, unary)


def solve_cdcs(inst: CdcsInstance) -> Optional[Dict[ClauseRef, int]]:
    """Fewest clause copies (at most k) whose deletion makes the formula satisfiable.

    Returns the clauses to delete with the number of copies of each; every
    copy of a chosen clause is deleted.
    """
    f = inst.formula

    def search(gone: FrozenSet[ClauseRef], budget: int) -> Optional[FrozenSet[ClauseRef]]:
        res = _propagate_without(f, gone)
        if res.sat:
            return gone
        for ref in res.certificate:
            cost = _mult(f, ref)
            if cost <= budget:
                found = search(gone | {ref}, budget - cost)
                if found is not None:
                    return found
        return None

    for budget in range(inst.k + 1):
        found = search(frozenset(), budget)
        if found is not None:
            return {ref: _mult(f, ref) for ref in sorted(found, key=lambda r: (r.kind, r.index))}
    return None


def cdcs_cost(f: ChainFormula, deletion: Mapping[ClauseRef, int]) -> int:
    return sum(deletion.values())


def check_cdcs(inst: CdcsInstance, deletion: Mapping[ClauseRef, int]) -> bool:
    """True iff deleting these copies (at most k in total) leaves a satisfiable formula."""
    if sum(deletion.values()) > inst.k:
        return False
    gone = frozenset(ref for ref, n in deletion.items() if n >= _mult(inst.formula, ref))
    return _propagate_without(inst.formula, gone).sat


# --- variable deletion -------------------------------------------------------------


def _propagate_without_vars(f: ChainFormula, removed: FrozenSet[int]) -> Propagation:
    chains = [(i, c.vars) for i, c in enumerate(f.chains) if removed.isdisjoint(c.vars)]
    unary = [(i, u.var, u.neg) for i, u in enumerate(f.unary) if u.var not in removed]
    return _propagate(f.num_vars, chains, unary)


def check_vdcs(inst: VdcsInstance, deleted: Iterable[int]) -> bool:
    deleted = frozenset(deleted)
    if len(deleted) > inst.k or not deleted <= inst.deletable:
        return False
    removed = frozenset(x for i in deleted for x in inst.formula.chains[i].vars)
    return _propagate_without_vars(inst.formula, removed).sat


def solve_vdcs(inst: VdcsInstance) -> Optional[FrozenSet[int]]:
    """Fewest deletable chains (at most k) whose variables' removal makes the formula satisfiable."""
    f = inst.formula
    owner = {x: i for i in inst.deletable for x in f.chains[i].vars}

    def search(deleted: FrozenSet[int], removed: FrozenSet[int], budget: int) -> Optional[FrozenSet[int]]:
        res = _propagate_without_vars(f, removed)
        if res.sat:
            return deleted
        if budget == 0:
            return None
        touched = set()
        for ref in res.certificate:
            if ref.kind == "chain":
                touched.update(f.chains[ref.index].vars)
            else:
                touched.add(f.unary[ref.index].var)
        for i in sorted({owner[x] for x in touched if x in owner}):
            found = search(deleted | {i}, removed | set(f.chains[i].vars), budget - 1)
            if found is not None:
                return found
        return None

    for budget in range(inst.k + 1):
        found = search(frozenset(), frozenset(), budget)
        if found is not None:
            return found
    return None


# --- VDCS -> CDCS -------------------------------------------------------------------


def reduce_vdcs_to_cdcs(inst: VdcsInstance) -> CdcsInstance:
    """Clause-deletion instance with chains of length at most 2*ell + 2 and the same budget.

    Deletable chains with contradictory unaries are replaced by a fresh
    contradictory variable, forced prefixes and suffixes are collapsed, and
    each deletable chain is spread out with primed and tilde variables so that
    deleting the one chain clause frees all of its variables.  Everything else
    becomes undeletable (k + 1 copies).
    """
    problems = inst.violations()
    if problems:
        raise FormulaError("not a VDCS instance: " + "; ".join(problems))
    f, k = inst.formula, inst.k
    marked = [list(f.chains[i].vars) for i in sorted(inst.deletable)]
    implications = [c.vars for i, c in enumerate(f.chains) if i not in inst.deletable]
    pos = {u.var for u in f.unary if not u.neg}
    neg = {u.var for u in f.unary if u.neg}
    num_vars = f.num_vars

    # drop chains forced to go (x_i and not x_j with i <= j), keeping one contradictory variable each
    dead: set = set()
    fresh_contradictions = 0
    survivors = []
    for vs in marked:
        doomed = any(vs[i] in pos and vs[j] in neg for i in range(len(vs)) for j in range(i, len(vs)))
        if doomed:
            dead.update(vs)
            fresh_contradictions += 1
        else:
            survivors.append(vs)
    implications = [(a, b) for a, b in implications if a not in dead and b not in dead]

    # collapse forced-zero prefixes and forced-one suffixes
    rename: Dict[int, int] = {}
    collapsed = []
    for vs in survivors:
        lo = max((i for i, x in enumerate(vs) if x in neg), default=0)
        hi = min((i for i, x in enumerate(vs) if x in pos), default=len(vs) - 1)
        for x in vs[:lo]:
            rename[x] = vs[lo]
        for x in vs[hi + 1:]:
            rename[x] = vs[hi]
        collapsed.append((vs[lo:hi + 1], vs[lo] in neg, vs[hi] in pos))
    implications = [(rename.get(a, a), rename.get(b, b)) for a, b in implications]

    # spread each chain out
    counter = [0]
    names: Dict[Tuple[str, int], int] = {}

    def var(tag: str, x: int) -> int:
        key = (tag, x)
        if key not in names:
            names[key] = counter[0]
            counter[0] += 1
        return names[key]

    chains: List[Chain] = []
    unary: List[Unary] = []
    for vs, zero_first, one_last in collapsed:
        chains.append(Chain(tuple(_spread(vs, var)), 1))
        if zero_first:
            unary.append(Unary(var("~first", vs[0]), True, k + 1))
        if one_last:
            unary.append(Unary(var("~last", vs[-1]), False, k + 1))
    for _ in range(fresh_contradictions):
        x = num_vars
        num_vars += 1
        chains.append(Chain(tuple(_spread([x], var)), 1))
        unary.append(Unary(var("~first", x), True, k + 1))
        unary.append(Unary(var("~last", x), False, k + 1))
    for a, b in implications:
        chains.append(Chain((var("'", a), var("", b)), k + 1))
    out = ChainFormula(counter[0], tuple(chains), tuple(unary), 2 * f.ell + 2)
    return CdcsInstance(out, k)


def _spread(vs: List[int], var) -> List[int]:
    """x0 x0' ~x0 x1 x1' ... x_{m-1} x_{m-1}' ~xm xm xm'; a single variable becomes ~x x x' ~x."""
    if len(vs) == 1:
        x = vs[0]
        return [var("~last", x), var("", x), var("'", x), var("~first", x)]
    out = [var("", vs[0]), var("'", vs[0]), var("~first", vs[0])]
    for x in vs[1:-1]:
        out += [var("", x), var("'", x)]
    out += [var("~last", vs[-1]), var("", vs[-1]), var("'", vs[-1])]
    return out


# --- CDCS -> VDCS -------------------------------------------------------------------


def reduce_cdcs_to_vdcs(inst: CdcsInstance) -> VdcsInstance:
    """Variable-deletion instance with the same budget.

    Length-2 chains get a fresh third variable, every clause copy gets its own
    copy of each variable, each unary copy gets its own length-1 chain, and
    the copies of one variable are tied together by implications in both
    directions.
    """
    f, k = inst.formula, inst.k
    problems = f.violations()
    if problems:
        raise FormulaError("; ".join(problems))
    num_vars = f.num_vars
    base_chains: List[Tuple[int, ...]] = []
    padded = False
    for c in f.chains:
        vs = c.vars
        if len(vs) == 2:
            vs = vs + (num_vars,)
            num_vars += 1
            padded = True
        base_chains.extend([vs] * c.mult)
    base_unary = [(u.var, u.neg) for u in f.unary for _ in range(u.mult)]

    copies: Dict[int, List[int]] = {x: [] for x in range(num_vars)}
    counter = 0

    def copy_of(x: int) -> int:
        nonlocal counter
        copies[x].append(counter)
        counter += 1
        return counter - 1

    chains: List[Chain] = []
    unary: List[Unary] = []
    for vs in base_chains:
        chains.append(Chain(tuple(copy_of(x) for x in vs)))
    for x, neg in base_unary:
        c = copy_of(x)
        chains.append(Chain((c,)))
        unary.append(Unary(c, neg))
    deletable = frozenset(range(len(chains)))
    for x in range(num_vars):
        for a, b in combinations(copies[x], 2):
            chains.append(Chain((a, b)))
            chains.append(Chain((b, a)))
    ell = max(f.ell, 3) if padded else f.ell
    return VdcsInstance(ChainFormula(counter, tuple(chains), tuple(unary), max(ell, 1)), k, deletable)


# --- VDCS -> FS-FC(H_ell) -------------------------------------------------------------


@dataclass(frozen=True)
class FsfcImage:
    instance: FsfcInstance
    clause_vertex: Mapping[int, int] = field(hash=False)  # deletable chain index -> vertex of G
    gadget_paths: Tuple[Tuple[int, ...], ...] = ()  # per implication: (alpha(C), U copies.., V.., W.., alpha(C'))


def reduce_vdcs_to_fsfc(inst: VdcsInstance) -> FsfcImage:
    """Graph over H_ell whose deletion sets match the chains to delete."""
    problems = inst.violations()
    if problems:
        raise FormulaError("not a VDCS instance: " + "; ".join(problems))
    f, k = inst.formula, inst.k
    ell = max(1, f.ell)
    chain_target = build_chain_target(ell)
    value = chain_target.value
    ordinary = sorted(inst.deletable)
    vertex = {ci: i for i, ci in enumerate(ordinary)}
    where: Dict[int, Tuple[int, int]] = {}
    lists: List[FrozenSet[int]] = []
    for ci in ordinary:
        vs = f.chains[ci].vars
        for p, x in enumerate(vs):
            where[x] = (ci, p)
        allowed = set(range(len(vs) + 1))  # a_i: first i variables 0, the rest 1
        for u in f.unary:
            if u.var in vs:
                p = vs.index(u.var)
                allowed -= set(range(p + 1, len(vs) + 1)) if not u.neg else set(range(p + 1))
        lists.append(frozenset(value[i] for i in allowed))
    edges = set()
    paths = []
    n = len(ordinary)
    for ci, c in enumerate(f.chains):
        if ci in inst.deletable:
            continue
        (x, y) = c.vars
        (cx, r), (cy, r2) = where[x], where[y]
        gadget = chain_target.gadget[(r, r2)]
        levels = []
        for roles in (("u1", "u2"), ("v1", "v2"), ("w1", "w2")):
            level = list(range(n, n + k + 1))
            n += k + 1
            lists.extend([frozenset(gadget[role] for role in roles)] * (k + 1))
            levels.append(level)
        a, b = vertex[cx], vertex[cy]
        edges.update((a, u) for u in levels[0])
        for lo, hi in zip(levels, levels[1:]):
            edges.update((s, t) for s in lo for t in hi)
        edges.update((w, b) for w in levels[2])
        paths.append((a, *levels[0], *levels[1], *levels[2], b))
    g = UndirectedGraph(n, frozenset(edges))
    return FsfcImage(FsfcInstance(g, chain_target.target, tuple(lists), k), vertex, tuple(paths))


# --- FS(H) -> VDCS ----------------------------------------------------------------------


def _normalized(lst: Iterable[int], rep: ArcRepresentation) -> List[int]:
    """Drop arcs containing another arc of the list; among equal arcs keep the lowest index."""
    pts = rep.point_sets
    items = sorted(set(lst))
    keep = []
    for a in items:
        dominated = False
        for b in items:
            if b == a:
                continue
            if pts[b] < pts[a] or (pts[b] == pts[a] and b < a):
                dominated = True
                break
        if not dominated:
            keep.append(a)
    return keep


@dataclass(frozen=True)
class VdcsImage:
    instance: VdcsInstance
    vertex_chain: Mapping[int, int] = field(hash=False)  # vertex of G -> its chain index
    order: Mapping[int, Tuple[int, ...]] = field(hash=False)  # vertex of G -> arcs in variable order
    rep: Optional[ArcRepresentation] = None


def reduce_fs_to_vdcs(g: UndirectedGraph, lists: Sequence[Iterable[int]], h: BipartiteTarget,
                      rep: ArcRepresentation, k: int) -> VdcsImage:
    """Variable-deletion instance: one chain per vertex, its 0-1 switch point naming the chosen arc."""
    check = validate_arc_representation(h, rep)
    if not check.ok:
        raise FormulaError(f"invalid arc representation: {check.reason} {check.pair}")
    lists = [frozenset(l) for l in lists]
    east = [rep.point_sets[a] & rep.east for a in range(h.n)]
    west = [rep.point_sets[a] & rep.west for a in range(h.n)]
    side: Dict[int, Optional[str]] = {}
    order: Dict[int, Tuple[int, ...]] = {}
    for v in range(g.n):
        if not lists[v]:
            side[v], order[v] = None, ()
            continue
        sides = {h.side[a] for a in lists[v]}
        if len(sides) != 1:
            raise FormulaError(f"list of vertex {v} is not on one side")
        s = sides.pop()
        arcs = _normalized(lists[v], rep)
        if s == TOP:
            arcs.sort(key=lambda a: (-len(east[a]), a))  # a_0 reaches furthest east
        else:
            arcs.sort(key=lambda a: (len(east[a]), a))  # b_0 reaches least far east
        side[v], order[v] = s, tuple(arcs)

    num_vars = 0
    first: Dict[int, int] = {}
    chains: List[Chain] = []
    unary: List[Unary] = []
    chain_of: Dict[int, int] = {}
    padded = False
    for v in range(g.n):
        t = len(order[v])
        vs = list(range(num_vars, num_vars + t + 1))
        num_vars += t + 1
        first[v] = vs[0]
        if len(vs) == 2:
            vs.append(num_vars)
            num_vars += 1
            padded = True
        chain_of[v] = len(chains)
        chains.append(Chain(tuple(vs)))
        unary.append(Unary(vs[0], True))
        unary.append(Unary(first[v] + t, False))

    def x(v, i):
        return first[v] + i

    implications = []
    for u, v in sorted(g.edges):
        if side[u] is None or side[v] is None:
            continue  # an empty list forces deletion already
        if side[u] == side[v]:
            # never an edge of H: require one of them gone
            implications.append((x(u, len(order[u])), x(v, 0)))
            continue
        if side[u] == BOTTOM:
            u, v = v, u
        a, b = order[u], order[v]
        for i in range(1, len(a) + 1):
            ok = [j for j in range(len(b)) if east[b[j]].isdisjoint(east[a[i - 1]])]
            j = max(ok) + 1 if ok else 0
            implications.append((x(u, i), x(v, j)))
        for j in range(1, len(b) + 1):
            ok = [i for i in range(len(a)) if west[a[i]].isdisjoint(west[b[j - 1]])]
            i = max(ok) + 1 if ok else 0
            implications.append((x(v, j), x(u, i)))
    deletable = frozenset(range(len(chains)))
    for p, q in implications:
        chains.append(Chain((p, q)))
    ell = max([h.n + 1] + [3] * padded)
    out = ChainFormula(num_vars, tuple(chains), tuple(unary), ell)
    return VdcsImage(VdcsInstance(out, k, deletable), chain_of, order, rep)


def assignment_from_hom(image: VdcsImage, hom: Mapping[int, int]) -> Dict[int, int]:
    """Variables of the image set from a homomorphism: 0 up to the chosen arc's index, 1 after it.

    A vertex sent to an arc dropped as dominated is moved to an arc of its list inside that one.
    """
    f = image.instance.formula
    pts = image.rep.point_sets
    out: Dict[int, int] = {}
    for v, ci in image.vertex_chain.items():
        vs = f.chains[ci].vars
        arcs = image.order[v]
        t = len(arcs)
        if v not in hom:
            i = t
        else:
            i = next(j for j, a in enumerate(arcs) if pts[a] <= pts[hom[v]])
        for p, var in enumerate(vs):
            out[var] = 0 if p <= i else 1
    return out


def formula_satisfied(f: ChainFormula, assignment: Mapping[int, int], removed: Iterable[int] = ()) -> bool:
    removed = set(removed)
    for c in f.chains:
        if removed.intersection(c.vars):
            continue
        if any(assignment[a] > assignment[b] for a, b in zip(c.vars, c.vars[1:])):
            return False
    for u in f.unary:
        if u.var in removed:
            continue
        if assignment[u.var] != (0 if u.neg else 1):
            return False
    return True
