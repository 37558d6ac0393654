"""JSON reading and writing for instances, witnesses, arc models, formulas and decomposition trees.

All arrays are written sorted so that equal objects serialize to identical bytes.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from .chainsat import CdcsInstance, Chain, ChainFormula, ClauseRef, FormulaError, Unary, VdcsInstance
from .core import BOTTOM, TOP, DeletionSolution, DlhomInstance, UndirectedGraph, make_target
from .target import ArcRepresentation, SkewDecompTree, tree_from_json

PathLike = Union[str, Path]


class InputError(ValueError):
    """Malformed JSON input."""


def require_int(data: Mapping[str, Any], key: str) -> int:
    try:
        value = data[key]
    except (KeyError, TypeError):
        raise InputError(f"missing field {key!r}") from None
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"field {key!r} must be an integer")
    return value


def _edges(raw) -> list:
    try:
        edges = [(int(a), int(b)) for a, b in raw]
    except (TypeError, ValueError):
        raise InputError("edges must be pairs of integers") from None
    return edges


def graph_to_json(g: UndirectedGraph) -> Dict[str, Any]:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def graph_from_json(data: Mapping[str, Any]) -> UndirectedGraph:
    n = require_int(data, "n")
    edges = _edges(data.get("edges", []))
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise InputError(f"bad edge ({u}, {v}) for a graph on {n} vertices")
    return UndirectedGraph(n, frozenset(edges))


def target_to_json(h) -> Dict[str, Any]:
    return {**graph_to_json(h.graph), "side": list(h.side)}


def target_from_json(data: Mapping[str, Any]):
    g = graph_from_json(data)
    side = data.get("side")
    if not isinstance(side, list) or len(side) != g.n or any(s not in (TOP, BOTTOM) for s in side):
        raise InputError(f"target needs a side label {TOP!r} or {BOTTOM!r} for each of its {g.n} vertices")
    return make_target(g.n, g.edges, side)


def instance_to_json(inst: DlhomInstance) -> Dict[str, Any]:
    return {
        "graph": graph_to_json(inst.g),
        "target": target_to_json(inst.h),
        "lists": [sorted(l) for l in inst.lists],
        "k": inst.k,
    }


def instance_from_json(data: Mapping[str, Any]) -> DlhomInstance:
    if not isinstance(data, Mapping):
        raise InputError("instance must be a JSON object")
    for key in ("graph", "target", "lists"):
        if key not in data:
            raise InputError(f"missing field {key!r}")
    g = graph_from_json(data["graph"])
    h = target_from_json(data["target"])
    lists = data["lists"]
    if not isinstance(lists, list) or len(lists) != g.n:
        raise InputError(f"need one list per graph vertex ({g.n})")
    try:
        lists = tuple(frozenset(int(a) for a in l) for l in lists)
    except (TypeError, ValueError):
        raise InputError("lists must be arrays of integers") from None
    if any(not 0 <= a < h.n for l in lists for a in l):
        raise InputError("list entry outside the target's vertices")
    k = require_int(data, "k")
    if k < 0:
        raise InputError("k must be non-negative")
    return DlhomInstance(g, h, lists, k)


def witness_to_json(sol: Optional[DeletionSolution]) -> Dict[str, Any]:
    if sol is None:
        return {"deleted": None, "hom": None}
    return {"deleted": sorted(sol.deleted), "hom": [[v, a] for v, a in sorted(sol.hom.items())]}


def witness_from_json(data: Mapping[str, Any]) -> Optional[DeletionSolution]:
    if data.get("deleted") is None:
        return None
    try:
        deleted = frozenset(int(v) for v in data["deleted"])
        hom = {int(v): int(a) for v, a in (data.get("hom") or [])}
    except (TypeError, ValueError):
        raise InputError("witness must hold integer vertices and [vertex, image] pairs") from None
    return DeletionSolution(deleted, hom)


def arcs_from_json(data: Mapping[str, Any]) -> ArcRepresentation:
    try:
        return ArcRepresentation.from_json(data)
    except (KeyError, TypeError, ValueError):
        raise InputError("arc model needs M, N, S and arcs") from None


def formula_to_json(f: ChainFormula) -> Dict[str, Any]:
    return {
        "vars": f.num_vars,
        "chains": [{"vars": list(c.vars), "mult": c.mult} for c in f.chains],
        "unary": [{"var": u.var, "neg": u.neg, "mult": u.mult} for u in f.unary],
        "ell": f.ell,
    }


def formula_from_json(data: Mapping[str, Any]) -> ChainFormula:
    try:
        chains = tuple(Chain(tuple(int(x) for x in c["vars"]), int(c.get("mult", 1))) for c in data.get("chains", []))
        unary = tuple(Unary(int(u["var"]), bool(u["neg"]), int(u.get("mult", 1))) for u in data.get("unary", []))
        f = ChainFormula(require_int(data, "vars"), chains, unary, int(data.get("ell", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed formula: {exc}") from None
    problems = f.violations()
    if problems:
        raise InputError("; ".join(problems))
    return f


def cdcs_to_json(inst: CdcsInstance) -> Dict[str, Any]:
    return {**formula_to_json(inst.formula), "k": inst.k}


def cdcs_from_json(data: Mapping[str, Any]) -> CdcsInstance:
    return CdcsInstance(formula_from_json(data), require_int(data, "k"))


def vdcs_to_json(inst: VdcsInstance) -> Dict[str, Any]:
    return {**formula_to_json(inst.formula), "k": inst.k, "deletable": sorted(inst.deletable)}


def vdcs_from_json(data: Mapping[str, Any]) -> VdcsInstance:
    f = formula_from_json(data)
    deletable = data.get("deletable")
    inst = VdcsInstance(f, require_int(data, "k"), None if deletable is None else frozenset(int(i) for i in deletable))
    problems = inst.violations()
    if problems:
        raise InputError("; ".join(problems))
    return inst


def cdcs_solution_to_json(sol: Optional[Mapping[ClauseRef, int]]) -> Dict[str, Any]:
    if sol is None:
        return {"deleted": None}
    return {"deleted": [[r.kind, r.index, c] for r, c in sorted(sol.items(), key=lambda t: (t[0].kind, t[0].index))]}


def tree_from(data: Mapping[str, Any]) -> SkewDecompTree:
    try:
        return tree_from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed decomposition tree: {exc}") from None


def read_json(path: PathLike) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True) + "\n"


def write_json(path: PathLike, data: Any) -> None:
    Path(path).write_text(dumps(data))


__all__ = [
    "FormulaError",
    "InputError",
    "arcs_from_json",
    "cdcs_from_json",
    "cdcs_solution_to_json",
    "cdcs_to_json",
    "dumps",
    "formula_from_json",
    "formula_to_json",
    "graph_from_json",
    "graph_to_json",
    "instance_from_json",
    "instance_to_json",
    "read_json",
    "require_int",
    "target_from_json",
    "target_to_json",
    "tree_from",
    "vdcs_from_json",
    "vdcs_to_json",
    "witness_from_json",
    "witness_to_json",
    "write_json",
]
