"""Seeded random instances."""
from __future__ import annotations

import random
from typing import Any, Dict, List, Mapping, Optional

from .core import (
    BOTTOM,
    TOP,
    BipartiteTarget,
    DlhomInstance,
    Lists,
    UndirectedGraph,
    adjacency,
    components,
    make_target,
)
from .target import build_chain_target, evaluate_decomposition, random_decomposition


class GenerationError(ValueError):
    pass


def random_graph(n: int, p: float, rng: random.Random) -> UndirectedGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return UndirectedGraph(n, frozenset(edges))


def random_decomposable_target(m: int, rng: random.Random, connected: bool = False,
                               attempts: int = 200) -> BipartiteTarget:
    for _ in range(attempts):
        h = evaluate_decomposition(random_decomposition(list(range(m)), rng))
        if not connected or len(h.components) == 1:
            return h
    raise GenerationError(f"no connected decomposable target on {m} vertices after {attempts} attempts")


def random_lists(n: int, h: BipartiteTarget, density: float, rng: random.Random) -> Lists:
    return tuple(frozenset(a for a in range(h.n) if rng.random() < density) for _ in range(n))


def random_fsfc_lists(g: UndirectedGraph, h: BipartiteTarget, density: float, rng: random.Random,
                      empty_prob: float = 0.05) -> Lists:
    """Lists inside one side of one component of H, one H-component per component of G."""
    out: List[frozenset] = [frozenset()] * g.n
    for comp in components(adjacency(g)):
        hc = h.components[rng.randrange(len(h.components))]
        sides = [s for s in (TOP, BOTTOM) if hc & h.side_set(s)]
        for v in sorted(comp):
            if rng.random() < empty_prob:
                continue
            pool = sorted(hc & h.side_set(rng.choice(sides)))
            picked = [a for a in pool if rng.random() < density] or [rng.choice(pool)]
            out[v] = frozenset(picked)
    return tuple(out)


def _target(spec: Mapping[str, Any], rng: random.Random) -> BipartiteTarget:
    kind = spec.get("kind", "decomposable")
    if kind == "decomposable":
        return random_decomposable_target(int(spec.get("n", 4)), rng, bool(spec.get("connected", False)),
                                          int(spec.get("attempts", 200)))
    if kind in ("chain", "H_ell"):
        return build_chain_target(int(spec.get("ell", 1))).target
    if kind == "explicit":
        return make_target(int(spec["n"]), [tuple(e) for e in spec.get("edges", [])], spec["side"])
    raise GenerationError(f"unknown target kind {kind!r}")


def gen_random(spec: Mapping[str, Any], seed: Optional[int] = None) -> DlhomInstance:
    """Instance from a spec such as ``{"n": 8, "edge_prob": 0.3, "target": {"kind": "decomposable", "n": 5},
    "list_density": 0.6, "lists": "any", "k": 2, "seed": 1}``.  ``seed`` overrides the spec's seed."""
    if seed is None:
        if "seed" not in spec:
            raise GenerationError("spec needs a seed")
        seed = int(spec["seed"])
    rng = random.Random(seed)
    n = int(spec.get("n", 6))
    if n < 0:
        raise GenerationError("n must be non-negative")
    if "degree" in spec:
        p = min(1.0, float(spec["degree"]) / max(1, n - 1))
    else:
        p = float(spec.get("edge_prob", 0.3))
    target_spec = spec.get("target", {"kind": "decomposable", "n": 4})
    h = _target(target_spec, rng)
    g = random_graph(n, p, rng)
    density = float(spec.get("list_density", 0.6))
    mode = spec.get("lists", "any")
    if mode == "any":
        lists = random_lists(n, h, density, rng)
    elif mode == "full":
        lists = tuple(frozenset(range(h.n)) for _ in range(n))
    elif mode == "fsfc":
        lists = random_fsfc_lists(g, h, density, rng)
    else:
        raise GenerationError(f"unknown list mode {mode!r}")
    k = int(spec.get("k", 1))
    if k < 0:
        raise GenerationError("k must be non-negative")
    return DlhomInstance(g, h, lists, k)


def corpus_spec(rng: random.Random, fsfc: bool = False, max_n: int = 10, max_m: int = 6,
                max_k: int = 3) -> Dict[str, Any]:
    """A random spec within the desk-scale bounds used by the test corpora."""
    return {
        "n": rng.randint(1, max_n),
        "edge_prob": rng.choice((0.15, 0.25, 0.35, 0.5)),
        "target": {"kind": "decomposable", "n": rng.randint(1, max_m)},
        "list_density": rng.choice((0.4, 0.6, 0.8, 1.0)),
        "lists": "fsfc" if fsfc else rng.choice(("any", "any", "full")),
        "k": rng.randint(0, max_k),
        "seed": rng.randrange(2**31),
    }
