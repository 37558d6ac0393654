"""Structure of bipartite targets: skew decompositions and arc representations."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple, Union as TypingUnion

from .core import BOTTOM, TOP, BipartiteTarget, UndirectedGraph, adjacency, components, restrict


class DecompositionError(ValueError):
    pass


# --- forbidden induced subgraphs ----------------------------------------------


@dataclass(frozen=True)
class ForbiddenCheck:
    witness: Optional[Tuple[int, ...]]
    kind: Optional[str]  # "P6" or "C6"

    @property
    def decomposable_candidate(self) -> bool:
        return self.witness is None


def check_forbidden(h: BipartiteTarget) -> ForbiddenCheck:
    """Search every 6-subset of V(H) for an induced P6 or C6."""
    nb = h.nbrs
    for sub in combinations(range(h.n), 6):
        s = set(sub)
        deg = [len(nb[v] & s) for v in sub]
        m = sum(deg) // 2
        if m == 5 and sorted(deg) == [1, 1, 2, 2, 2, 2]:
            kind = "P6"
        elif m == 6 and all(d == 2 for d in deg):
            kind = "C6"
        else:
            continue
        if len(components(restrict(adjacency(h.graph), s))) == 1:
            return ForbiddenCheck(sub, kind)
    return ForbiddenCheck(None, None)


# --- skew decomposition trees --------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    vertex: int
    side: str

    @cached_property
    def vertices(self) -> FrozenSet[int]:
        return frozenset((self.vertex,))

    @cached_property
    def top(self) -> FrozenSet[int]:
        return self.vertices if self.side == TOP else frozenset()

    @cached_property
    def bottom(self) -> FrozenSet[int]:
        return self.vertices if self.side == BOTTOM else frozenset()


@dataclass(frozen=True)
class _Binary:
    left: "SkewDecompTree"
    right: "SkewDecompTree"

    @cached_property
    def vertices(self) -> FrozenSet[int]:
        return self.left.vertices | self.right.vertices

    @cached_property
    def top(self) -> FrozenSet[int]:
        return self.left.top | self.right.top

    @cached_property
    def bottom(self) -> FrozenSet[int]:
        return self.left.bottom | self.right.bottom


@dataclass(frozen=True)
class DisjointUnion(_Binary):
    pass


@dataclass(frozen=True)
class SkewSum(_Binary):
    """Special sum: left's Top side is joined completely to right's Bottom side."""


SkewDecompTree = TypingUnion[Leaf, DisjointUnion, SkewSum]


def tree_edges(t: SkewDecompTree) -> FrozenSet[Tuple[int, int]]:
    if isinstance(t, Leaf):
        return frozenset()
    edges = set(tree_edges(t.left)) | tree_edges(t.right)
    if isinstance(t, SkewSum):
        edges |= {(min(a, b), max(a, b)) for a in t.left.top for b in t.right.bottom}
    return frozenset(edges)


def _check_tree(t: SkewDecompTree) -> None:
    if isinstance(t, Leaf):
        if t.side not in (TOP, BOTTOM):
            raise DecompositionError(f"leaf {t.vertex}: bad side {t.side!r}")
        return
    _check_tree(t.left)
    _check_tree(t.right)
    if t.left.vertices & t.right.vertices:
        raise DecompositionError("children share vertices")
    if isinstance(t, SkewSum):
        if not t.left.top:
            raise DecompositionError("special sum with empty T1")
        if not t.right.bottom:
            raise DecompositionError("special sum with empty B2")


def evaluate_decomposition(t: SkewDecompTree) -> BipartiteTarget:
    """Rebuild the side-labelled target; vertices are relabelled in sorted order."""
    _check_tree(t)
    order = sorted(t.vertices)
    new = {v: i for i, v in enumerate(order)}
    edges = {(new[a], new[b]) for a, b in tree_edges(t)}
    side = [TOP if v in t.top else BOTTOM for v in order]
    return BipartiteTarget(UndirectedGraph(len(order), frozenset(edges)), tuple(side))


def skew_decompose(h: BipartiteTarget) -> Optional[SkewDecompTree]:
    """A decomposition tree reproducing ``h`` with its own side labels, or None."""
    n = h.n
    nbr = [sum(1 << w for w in h.nbrs[v]) for v in range(n)]
    top = sum(1 << v for v in range(n) if h.side[v] == TOP)
    memo: Dict[int, Optional[SkewDecompTree]] = {}

    def connected_parts(mask: int) -> List[int]:
        parts = []
        rest = mask
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                grow = 0
                f = frontier
                while f:
                    b = f & -f
                    grow |= nbr[b.bit_length() - 1]
                    f ^= b
                grow &= mask & ~comp
                comp |= grow
                frontier = grow
            parts.append(comp)
            rest &= ~comp
        return parts

    def split_ok(s1: int, s2: int) -> bool:
        b2 = s2 & ~top
        if not (s1 & top) or not b2:
            return False
        f = s1
        while f:
            b = f & -f
            v = b.bit_length() - 1
            cross = nbr[v] & s2
            if cross != (b2 if b & top else 0):
                return False
            f ^= b
        return True

    def dec(mask: int) -> Optional[SkewDecompTree]:
        if mask in memo:
            return memo[mask]
        result: Optional[SkewDecompTree] = None
        if mask & (mask - 1) == 0:
            v = mask.bit_length() - 1
            result = Leaf(v, h.side[v])
        else:
            parts = connected_parts(mask)
            if len(parts) > 1:
                left = dec(parts[0])
                right = dec(mask & ~parts[0]) if left is not None else None
                if left is not None and right is not None:
                    result = DisjointUnion(left, right)
            else:
                sub = (mask - 1) & mask
                while sub:
                    rest = mask & ~sub
                    if split_ok(sub, rest):
                        left = dec(sub)
                        right = dec(rest) if left is not None else None
                        if left is not None and right is not None:
                            result = SkewSum(left, right)
                            break
                    sub = (sub - 1) & mask
        memo[mask] = result
        return result

    if n == 0:
        return None
    return dec((1 << n) - 1)


def random_decomposition(vertices: List[int], rng: random.Random, p_skew: float = 0.6) -> SkewDecompTree:
    """Random tree over ``vertices``; a special sum falls back to a union when T1 or B2 is empty."""
    if len(vertices) == 1:
        return Leaf(vertices[0], rng.choice((TOP, BOTTOM)))
    pool = vertices[:]
    rng.shuffle(pool)
    cut = rng.randint(1, len(pool) - 1)
    left = random_decomposition(sorted(pool[:cut]), rng, p_skew)
    right = random_decomposition(sorted(pool[cut:]), rng, p_skew)
    if rng.random() < p_skew and left.top and right.bottom:
        return SkewSum(left, right)
    return DisjointUnion(left, right)


def tree_to_json(t: SkewDecompTree) -> dict:
    if isinstance(t, Leaf):
        return {"kind": "leaf", "vertex": t.vertex, "side": t.side}
    kind = "skew" if isinstance(t, SkewSum) else "union"
    return {"kind": kind, "left": tree_to_json(t.left), "right": tree_to_json(t.right)}


def tree_from_json(data: dict) -> SkewDecompTree:
    kind = data["kind"]
    if kind == "leaf":
        return Leaf(int(data["vertex"]), data["side"])
    left, right = tree_from_json(data["left"]), tree_from_json(data["right"])
    if kind == "skew":
        return SkewSum(left, right)
    if kind == "union":
        return DisjointUnion(left, right)
    raise DecompositionError(f"unknown node kind {kind!r}")


# --- circular-arc representations ---------------------------------------------


@dataclass(frozen=True)
class ArcRepresentation:
    """Clockwise closed arcs on a circle of ``M`` integer positions."""

    M: int
    N: int
    S: int
    arcs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(tuple(a) for a in self.arcs))

    def points(self, v: int) -> FrozenSet[int]:
        start, end = self.arcs[v]
        return frozenset((start + i) % self.M for i in range((end - start) % self.M + 1))

    @cached_property
    def point_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(self.points(v) for v in range(len(self.arcs)))

    def is_northern(self, v: int) -> bool:
        pts = self.point_sets[v]
        return self.N in pts and self.S not in pts

    def is_southern(self, v: int) -> bool:
        pts = self.point_sets[v]
        return self.S in pts and self.N not in pts

    @cached_property
    def east(self) -> FrozenSet[int]:
        """Positions strictly between N and S going clockwise."""
        return frozenset((self.N + i) % self.M for i in range(1, (self.S - self.N) % self.M))

    @cached_property
    def west(self) -> FrozenSet[int]:
        """Positions strictly between S and N going clockwise."""
        return frozenset((self.S + i) % self.M for i in range(1, (self.N - self.S) % self.M))

    def to_json(self) -> dict:
        return {"M": self.M, "N": self.N, "S": self.S, "arcs": [list(a) for a in self.arcs]}

    @classmethod
    def from_json(cls, data: dict) -> "ArcRepresentation":
        return cls(int(data["M"]), int(data["N"]), int(data["S"]), tuple(tuple(a) for a in data["arcs"]))


@dataclass(frozen=True)
class ArcCheck:
    ok: bool
    pair: Optional[Tuple[int, int]] = None
    reason: Optional[str] = None


def validate_arc_representation(h: BipartiteTarget, rep: ArcRepresentation) -> ArcCheck:
    if rep.N == rep.S or not (0 <= rep.N < rep.M and 0 <= rep.S < rep.M):
        return ArcCheck(False, None, "poles must be distinct positions on the circle")
    if len(rep.arcs) != h.n:
        return ArcCheck(False, None, f"expected {h.n} arcs, got {len(rep.arcs)}")
    for v in range(h.n):
        if rep.is_northern(v):
            if h.side[v] != TOP:
                return ArcCheck(False, (v, v), "northern arc on a Bottom vertex")
        elif rep.is_southern(v):
            if h.side[v] != BOTTOM:
                return ArcCheck(False, (v, v), "southern arc on a Top vertex")
        else:
            return ArcCheck(False, (v, v), "arc must contain exactly one pole")
    pts = rep.point_sets
    for u in range(h.n):
        for v in range(u + 1, h.n):
            disjoint = pts[u].isdisjoint(pts[v])
            if disjoint != (v in h.nbrs[u]):
                what = "edge with intersecting arcs" if not disjoint else "non-edge with disjoint arcs"
                return ArcCheck(False, (u, v), what)
    return ArcCheck(True)


def target_from_arcs(rep: ArcRepresentation) -> BipartiteTarget:
    """The graph whose edges are the pairs of disjoint arcs; northern arcs go on top."""
    pts = rep.point_sets
    n = len(rep.arcs)
    edges = {(u, v) for u in range(n) for v in range(u + 1, n) if pts[u].isdisjoint(pts[v])}
    side = tuple(TOP if rep.N in pts[v] else BOTTOM for v in range(n))
    return BipartiteTarget(UndirectedGraph(n, frozenset(edges)), side)


def random_arc_representation(n: int, rng: random.Random, M: int = 24) -> ArcRepresentation:
    """``n`` random arcs, each containing exactly one of N=0 and S=M/2."""
    S = M // 2
    arcs = []
    for _ in range(n):
        if rng.random() < 0.5:
            start = rng.randint(S + 1, M)  # M means "starts at N"
            end = rng.randint(0, S - 1)
            arcs.append((start % M, end))
        else:
            start = rng.randint(1, S)
            end = rng.randint(S, M - 1)
            arcs.append((start, end))
    return ArcRepresentation(M, 0, S, tuple(arcs))


# --- the chain target H_ell ------------------------------------------------------

GADGET_ROLES = ("u1", "u2", "v1", "v2", "w1", "w2")


@dataclass(frozen=True)
class ChainTarget:
    ell: int
    target: BipartiteTarget
    rep: ArcRepresentation
    value: Tuple[int, ...]  # value[i] = vertex of a_i
    gadget: Dict[Tuple[int, int], Dict[str, int]]


def chain_layout(ell: int) -> Dict[str, object]:
    """Circle positions for H_ell: M = 8*ell+16, N = 0, S = M/2."""
    M = 8 * ell + 16
    S = M // 2
    q = [2 + 2 * i for i in range(ell + 1)]
    p = [S + 4 + 2 * i for i in range(ell + 1)]
    return {"M": M, "N": 0, "S": S, "p": p, "q": q, "e": S - 2, "f": S + 2}


def build_chain_target(ell: int) -> ChainTarget:
    if ell < 1:
        raise ValueError("ell must be positive")
    lay = chain_layout(ell)
    M, N, S = lay["M"], lay["N"], lay["S"]
    p, q, e, f = lay["p"], lay["q"], lay["e"], lay["f"]
    arcs: List[Tuple[int, int]] = [(p[i], q[i]) for i in range(ell + 1)]
    value = tuple(range(ell + 1))
    gadget: Dict[Tuple[int, int], Dict[str, int]] = {}
    for r in range(ell):
        for r2 in range(ell):
            shapes = {
                "u1": (S, p[r]),
                "u2": (e, S),
                "v1": (f, N),
                "v2": (N, e),
                "w1": (S, f),
                "w2": (q[r2 + 1], S),
            }
            gadget[(r, r2)] = {}
            for role in GADGET_ROLES:
                gadget[(r, r2)][role] = len(arcs)
                arcs.append(shapes[role])
    rep = ArcRepresentation(M, N, S, tuple(arcs))
    return ChainTarget(ell, target_from_arcs(rep), rep, value, gadget)
