"""Command-line interface: ``dlhom solve|check-target|reduce|gen|verify``.

Exit status is 0 for a YES answer, 1 for NO, 2 for bad input and 3 when an
internal consistency check fails.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from . import io
from .chainsat import reduce_cdcs_to_vdcs, reduce_fs_to_vdcs, reduce_vdcs_to_cdcs, reduce_vdcs_to_fsfc
from .core import DlhomInstance, validate_instance, verify_solution
from .encoders import encode_multiway_cut, encode_oct, encode_vertex_cover
from .fsfc import FsfcInstance, solve_fsfc
from .generate import gen_random
from .lhom import solve_exact_oracle
from .pipeline import solve_dlhom
from .target import check_forbidden, skew_decompose, tree_to_json

YES, NO, INPUT_ERROR, INTERNAL_ERROR = 0, 1, 2, 3

METHODS = ("oracle", "pipeline", "fsfc")
REDUCTIONS = ("vdcs-to-cdcs", "cdcs-to-vdcs", "vdcs-to-fsfc", "fs-to-vdcs", "vc", "oct", "multiway")


def _solve(inst: DlhomInstance, method: str):
    if method == "oracle":
        problems = validate_instance(inst)
        if problems:
            raise io.InputError("; ".join(problems))
        return solve_exact_oracle(inst)
    if method == "pipeline":
        return solve_dlhom(inst)
    return solve_fsfc(FsfcInstance(inst.g, inst.h, inst.lists, inst.k))


def _solve_file(path: str, method: str, witness_path: Optional[str]) -> Tuple[int, str]:
    """Run one instance file; returns (exit status, report line)."""
    try:
        inst = io.instance_from_json(io.read_json(path))
        sol = _solve(inst, method)
        if sol is not None:
            ok, why = verify_solution(inst, sol)
            if not ok:
                raise AssertionError(f"solver returned an invalid witness: {why}")
        if witness_path:
            io.write_json(witness_path, io.witness_to_json(sol))
    except AssertionError as exc:
        return INTERNAL_ERROR, f"{path}: internal error: {exc}"
    except ValueError as exc:
        return INPUT_ERROR, f"{path}: error: {exc}"
    if sol is None:
        return NO, f"{path}: NO"
    return YES, f"{path}: YES deleted={sorted(sol.deleted)}"


def _batch_status(codes: Sequence[int]) -> int:
    for code in (INTERNAL_ERROR, INPUT_ERROR, NO):
        if code in codes:
            return code
    return YES


def cmd_solve(args) -> int:
    if args.emit_witness and len(args.instances) > 1:
        print("error: --emit-witness needs a single instance file", file=sys.stderr)
        return INPUT_ERROR
    jobs = [(p, args.method, args.emit_witness) for p in args.instances]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_solve_file, *zip(*jobs)))
    else:
        results = [_solve_file(*job) for job in jobs]
    for code, line in results:
        print(line, file=sys.stderr if code >= INPUT_ERROR else sys.stdout)
    return _batch_status([code for code, _ in results])


def cmd_check_target(args) -> int:
    h = io.target_from_json(io.read_json(args.target))
    wrong = [(a, b) for a, b in h.graph.sorted_edges() if h.side[a] == h.side[b]]
    if wrong:
        print(f"bipartite: no (edge {wrong[0]} joins two vertices on side {h.side[wrong[0][0]]})")
        return NO
    print("bipartite: yes")
    tree = skew_decompose(h)
    if tree is None:
        found = check_forbidden(h)
        print(f"decomposable: no (induced {found.kind} on {list(found.witness)})")
        return NO
    print("decomposable: yes")
    if args.out:
        io.write_json(args.out, tree_to_json(tree))
    else:
        sys.stdout.write(io.dumps(tree_to_json(tree)))
    return YES


def _reduce(kind: str, data) -> dict:
    if kind == "vdcs-to-cdcs":
        return io.cdcs_to_json(reduce_vdcs_to_cdcs(io.vdcs_from_json(data)))
    if kind == "cdcs-to-vdcs":
        return io.vdcs_to_json(reduce_cdcs_to_vdcs(io.cdcs_from_json(data)))
    if kind == "vdcs-to-fsfc":
        fs = reduce_vdcs_to_fsfc(io.vdcs_from_json(data)).instance
        return io.instance_to_json(DlhomInstance(fs.g, fs.h, fs.lists, fs.k))
    if kind == "fs-to-vdcs":
        if "arcs" not in data:
            raise io.InputError("fs-to-vdcs needs an 'arcs' field holding the target's arc model")
        inst = io.instance_from_json(data)
        image = reduce_fs_to_vdcs(inst.g, inst.lists, inst.h, io.arcs_from_json(data["arcs"]), inst.k)
        return io.vdcs_to_json(image.instance)
    g = io.graph_from_json(data.get("graph", {}))
    k = io.require_int(data, "k")
    if kind == "vc":
        enc = encode_vertex_cover(g, k)
    elif kind == "oct":
        enc = encode_oct(g, k)
    else:
        enc = encode_multiway_cut(g, [int(t) for t in data.get("terminals", [])], k)
    return io.instance_to_json(enc.instance)


def cmd_reduce(args) -> int:
    io.write_json(args.output, _reduce(args.kind, io.read_json(args.input)))
    return YES


def cmd_gen(args) -> int:
    spec = io.read_json(args.spec)
    if not isinstance(spec, dict):
        raise io.InputError("spec must be a JSON object")
    override = os.environ.get("DLHOM_SEED")
    seed = None
    if override:
        try:
            seed = int(override)
        except ValueError:
            raise io.InputError(f"DLHOM_SEED must be an integer, got {override!r}") from None
    io.write_json(args.output, io.instance_to_json(gen_random(spec, seed)))
    return YES


def cmd_verify(args) -> int:
    inst = io.instance_from_json(io.read_json(args.instance))
    sol = io.witness_from_json(io.read_json(args.witness))
    if sol is None:
        print("witness claims no solution; nothing to check")
        return NO
    ok, why = verify_solution(inst, sol)
    print("valid" if ok else f"invalid: {why}")
    return YES if ok else NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlhom", description="Deletion to list homomorphism toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide instances and report a minimum deletion set")
    p.add_argument("instances", nargs="+", metavar="instance.json")
    p.add_argument("--method", choices=METHODS, default="pipeline")
    p.add_argument("--emit-witness", metavar="out.json")
    p.add_argument("--jobs", type=int, default=1, help="solve several files in parallel")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check-target", help="test bipartiteness and skew decomposability")
    p.add_argument("target", metavar="target.json")
    p.add_argument("--out", metavar="tree.json", help="write the decomposition tree here instead of stdout")
    p.set_defaults(func=cmd_check_target)

    p = sub.add_parser("reduce", help="translate between problems")
    p.add_argument("kind", choices=REDUCTIONS)
    p.add_argument("input", metavar="in.json")
    p.add_argument("output", metavar="out.json")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="write a random instance (DLHOM_SEED overrides the spec's seed)")
    p.add_argument("spec", metavar="spec.json")
    p.add_argument("output", metavar="out.json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a witness against an instance")
    p.add_argument("instance", metavar="instance.json")
    p.add_argument("witness", metavar="witness.json")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except (ValueError, KeyError, TypeError) as exc:
        # InputError, FormulaError, DecompositionError, GenerationError and ContractError are all ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
