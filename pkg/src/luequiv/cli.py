"""Command-line front end.

Results go to stdout as JSON, diagnostics to stderr. Exit codes: 0 success or
equivalent, 1 not equivalent, 2 usage or parse error, 3 resource cap hit,
4 class-alpha instance the solver could not settle.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .bouchet import ConstraintSet, SolveStats, clifford_labels, quad_to_lc_sequence, solve_constrained
from .equivalence import decide_lcr, lu_level, max_useful_level, order_bound
from .errors import ClassAlphaUnresolved, ResourceLimitError, ValidationError
from .graph import Graph, from_graph6, mask_of, to_graph6
from .localsets import mls_cover
from .oracle import LC_ORDER_CAP, LCR_ORDER_CAP, NODE_BUDGET, lc_orbit, lcr_orbit_small
from .search_gk import scan
from .standard_form import NotEquivalent, standardize_pair
from .witness import Witness, apply_ops, op_from_json, op_to_json, verify_witness

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_RESOURCE, EXIT_ALPHA = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def read_graph(arg: str) -> Graph:
    """A graph6 file (first non-empty line) or a literal graph6 string."""
    if os.path.isfile(arg):
        with open(arg) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines:
            raise ValidationError(f"{arg}: empty graph6 file")
        return from_graph6(lines[0])
    return from_graph6(arg)


def read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc


def parse_vertex_set(text: str, n: int) -> int:
    try:
        vs = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise ValidationError(f"bad vertex list {text!r}") from exc
    if any(not 0 <= v < n for v in vs):
        raise ValidationError(f"vertex list {text!r} out of range for order {n}")
    return mask_of(vs)


def _emit(obj, fmt: str) -> None:
    if fmt == "text":
        for k, v in obj.items():
            print(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v)}")
    else:
        print(json.dumps(obj, indent=1))


def _write_witness(path: Optional[str], w: Optional[Witness]) -> None:
    if path and w is not None:
        with open(path, "w") as fh:
            fh.write(w.dumps() + "\n")


def _require_connected(*gs: Graph) -> None:
    for g in gs:
        if not g.is_connected():
            raise ValidationError(
                "this mode expects connected graphs: split the inputs into connected components, "
                "check matching components separately, or use --mode lc which handles components"
            )


# -- commands ------------------------------------------------------------------------


def cmd_check(args) -> int:
    g1, g2 = read_graph(args.g1), read_graph(args.g2)
    if g1.n != g2.n:
        _emit({"equivalent": False, "mode": args.mode, "reason": "graphs differ in order"}, args.format)
        return EXIT_NO
    if args.mode == "lc":
        extra = ConstraintSet.load(g1.n, args.constraints) if args.constraints else None
        stats = SolveStats()
        q = solve_constrained(g1, g2, extra, stats=stats)
        if q is None:
            _emit({"equivalent": False, "mode": "lc", "solver": stats.route}, args.format)
            return EXIT_NO
        w = quad_to_lc_sequence(g1, g2, q)
        _write_witness(args.witness, w)
        out = {"equivalent": True, "mode": "lc", "solver": stats.route, "clifford": clifford_labels(q), "witness": w.to_json()}
        _emit(out, args.format)
        return EXIT_OK
    if args.constraints:
        raise ValidationError("--constraints applies to --mode lc only")
    _require_connected(g1, g2)
    if args.mode == "lu":
        level = lu_level(g1.n) if args.level is None else args.level
    else:
        level = 1 if args.level is None else args.level
    if level < 1:
        raise ValidationError("level must be at least 1")
    verdict = decide_lcr(g1, g2, level)
    out = {"mode": args.mode}
    out.update(verdict.to_json())
    _write_witness(args.witness, verdict.witness)
    _emit(out, args.format)
    return EXIT_OK if verdict.equivalent else EXIT_NO


def _load_ops(doc):
    if isinstance(doc, dict) and "ops" in doc:
        doc = doc["ops"]
    if not isinstance(doc, list):
        raise ValidationError("expected a witness document or a list of operations")
    return [op_from_json(o) for o in doc]


def cmd_apply(args) -> int:
    g = read_graph(args.g)
    ops = _load_ops(read_json(args.ops))
    h = apply_ops(g, ops, check=True)
    _emit({"graph6": to_graph6(h), "n": h.n, "edges": h.edges()}, args.format)
    return EXIT_OK


def cmd_mls_cover(args) -> int:
    g = read_graph(args.g)
    cover = mls_cover(g)
    _emit(cover.to_json(), args.format)
    return EXIT_OK


def cmd_standard_form(args) -> int:
    g1, g2 = read_graph(args.g1), read_graph(args.g2)
    res = standardize_pair(g1, g2)
    if isinstance(res, NotEquivalent):
        _emit({"standard_form": False, "stage": res.stage, "reason": res.reason}, args.format)
        return EXIT_NO
    out = {
        "standard_form": True,
        "g1": to_graph6(res.g1),
        "g2": to_graph6(res.g2),
        "types": "".join(res.types),
        "cover": res.cover.to_json(),
        "ops1": [op_to_json(op) for op in res.w1],
        "ops2": [op_to_json(op) for op in res.w2],
    }
    _emit(out, args.format)
    return EXIT_OK


def cmd_orbit(args) -> int:
    g = read_graph(args.g)
    level = args.level
    if level < 1:
        raise ValidationError("level must be at least 1")
    if level == 1:
        allowed = parse_vertex_set(args.allowed, g.n) if args.allowed else None
        index = lc_orbit(g, allowed, cap=args.cap or LC_ORDER_CAP, budget=args.budget)
    else:
        if args.allowed:
            raise ValidationError("--allowed applies to level 1 only")
        index = lcr_orbit_small(g, level, sets_only=not args.multisets, cap=args.cap or LCR_ORDER_CAP, budget=args.budget)
    out = {"level": level, "size": len(index)}
    if args.members:
        out["members"] = sorted(to_graph6(h) for h in index.members())
    _emit(out, args.format)
    return EXIT_OK


def cmd_search_gk(args) -> int:
    if args.jobs < 1:
        raise ValidationError("jobs must be >= 1")

    def progress(done, total):
        if args.verbose:
            print(f"chunk {done}/{total}", file=sys.stderr)

    report = scan(args.k, args.max_support, jobs=args.jobs, checkpoint=args.checkpoint, progress=progress)
    _emit(report.to_json(dump=args.dump), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    g1, g2 = read_graph(args.g1), read_graph(args.g2)
    w = Witness.from_json(read_json(args.witness))
    ok = verify_witness(g1, w, g2)
    _emit({"valid": ok, "ops": len(w.ops), "rlc_levels": w.rlc_levels}, args.format)
    return EXIT_OK if ok else EXIT_NO


def bounds_table(n: int) -> dict:
    r_max = max_useful_level(n)
    rows = []
    for r in range(1, r_max + 2):
        rows.append(
            {
                "level": r,
                "min_genuine_support": (1 << (r + 2)) - r - 3,
                "min_outside_support": r + 3,
                "min_order": 1 << (r + 2),
                "genuine_possible": order_bound(n, r),
            }
        )
    return {"n": n, "max_useful_level": r_max, "table": rows}


def cmd_bounds(args) -> int:
    if args.n < 1:
        raise ValidationError("n must be positive")
    _emit(bounds_table(args.n), args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="luequiv", description="LC, LC_r and LU equivalence of graph states")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json", help="json is the stable format")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="decide equivalence of two graphs")
    c.add_argument("--mode", choices=["lc", "lcr", "lu"], default="lu")
    c.add_argument("--level", type=int)
    c.add_argument("--witness", help="write the witness JSON here")
    c.add_argument("--constraints", help="extra linear constraints (lc mode)")
    c.add_argument("g1")
    c.add_argument("g2")
    c.set_defaults(func=cmd_check)

    a = sub.add_parser("apply", parents=[common], help="replay operations on a graph")
    a.add_argument("g")
    a.add_argument("ops")
    a.set_defaults(func=cmd_apply)

    m = sub.add_parser("mls-cover", parents=[common], help="deterministic minimal-local-set cover")
    m.add_argument("g")
    m.set_defaults(func=cmd_mls_cover)

    s = sub.add_parser("standard-form", parents=[common], help="standardise two graphs over a shared cover")
    s.add_argument("g1")
    s.add_argument("g2")
    s.set_defaults(func=cmd_standard_form)

    o = sub.add_parser("orbit", parents=[common], help="brute-force orbit size")
    o.add_argument("g")
    o.add_argument("--level", type=int, default=1)
    o.add_argument("--allowed", help="comma-separated vertices allowed for complementation")
    o.add_argument("--multisets", action="store_true", help="level >= 2: allow every multiplicity pattern")
    o.add_argument("--cap", type=int, help="maximum order")
    o.add_argument("--budget", type=int, default=NODE_BUDGET)
    o.add_argument("--members", action="store_true")
    o.set_defaults(func=cmd_orbit)

    g = sub.add_parser("search-gk", parents=[common], help="scan the bipartite class G_k")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--max-support", type=int)
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--checkpoint")
    g.add_argument("--dump", type=int, default=4, help="counterexamples to include")
    g.add_argument("--verbose", action="store_true")
    g.set_defaults(func=cmd_search_gk)

    v = sub.add_parser("verify", parents=[common], help="replay and validate a witness")
    v.add_argument("g1")
    v.add_argument("witness")
    v.add_argument("g2")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", parents=[common], help="level needed for LU at order n")
    b.add_argument("--n", type=int, required=True)
    b.set_defaults(func=cmd_bounds)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ClassAlphaUnresolved as exc:
        print(f"CLASS_ALPHA_UNRESOLVED: {exc}", file=sys.stderr)
        return EXIT_ALPHA


if __name__ == "__main__":
    sys.exit(main())
