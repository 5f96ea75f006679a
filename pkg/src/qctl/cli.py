"""Command-line front end: check, sat, gen, translate, tile, verify.

Exit status: 0 when the command completed with a true/sat verdict (or just
produced output), 1 for a false/unsat verdict, 2 for usage, input or cap errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructions as C
from . import syntax as S
from . import tiling as TL
from . import translations as TR
from .checker import BACKENDS, PRUNED, check
from .sat import SAT, sat_ex_bounded, sat_finite_tree
from .trees import (DEFAULT_ENUM_CAP, DEFAULT_TETRATION_CAP, STRICT, CapExceeded, parse_mode, tree_from_json,
                    tree_to_json)

OK, FALSE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")


def _formula(args):
    if getattr(args, "formula_file", None):
        text = _read(args.formula_file)
    elif args.formula is not None:
        text = args.formula
    else:
        raise UsageError("give a formula (positional, --formula or --formula-file)")
    return S.parse(text)


def _load_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: malformed JSON ({e})")


def _emit(args, text, doc):
    print(json.dumps(doc, indent=2, sort_keys=True) if args.json else text)


# subcommands -------------------------------------------------------------------

def cmd_check(args):
    t = tree_from_json(_load_json(args.tree))
    f = _formula(args)
    mode = parse_mode(args.mode)
    if not 0 <= args.node < t.size:
        raise UsageError(f"node {args.node} is not in the tree (0..{t.size - 1})")
    out = check(t, mode, args.node, f, args.backend)
    witness = {p: sorted(v) for p, v in (out.witness or {}).items()}
    lines = ["true" if out.verdict else "false"]
    if witness:
        lines.append("witness: " + ", ".join(f"{p}={nodes}" for p, nodes in sorted(witness.items())))
    _emit(args, "\n".join(lines), {"verdict": out.verdict, "witness": witness, "prefix": list(out.prefix),
                                   "mode": str(mode), "backend": args.backend})
    return OK if out.verdict else FALSE


def _outline(t, v=None, depth=0):
    """Indented tree listing, one node per line."""
    v = t.root if v is None else v
    lines = ["  " * depth + f"{v}: {{{', '.join(sorted(t.labels[v]))}}}"]
    for c in t.children[v]:
        lines.append(_outline(t, c, depth + 1))
    return "\n".join(lines)


def cmd_sat(args):
    f = _formula(args)
    if args.finite:
        out = sat_finite_tree(f, args.max_size, parse_mode(args.mode), args.enum_cap, args.backend)
    else:
        out = sat_ex_bounded(f, args.max_branching, args.enum_cap, args.backend)
    doc = {"status": out.status, "bound": out.bound,
           "witness": tree_to_json(out.witness) if out.witness is not None else None}
    text = out.status
    if out.bound:
        text += f" ({out.bound})"
    if out.witness is not None:
        text += "\n" + _outline(out.witness)
    _emit(args, text, doc)
    return OK if out.status == SAT else FALSE


def _instance(path, kind):
    inst = TL.load_instance(_load_json(path))
    if not isinstance(inst, kind):
        raise UsageError(f"{path} is not a {'tiling' if kind is TL.TilingInstance else 'AMTP'} instance")
    return inst


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"generator {args.generator!r} needs " + ", ".join("--" + m.replace("_", "-")
                                                                           for m in missing))


def _generate(args):
    g = args.generator
    names = C.Names(args.seed)
    xs = args.x or []
    if g == "bind":
        _need(args, "k")
        return C.bind(xs[0] if xs else "x", args.k, names)
    if g == "distinct-bind":
        _need(args, "k")
        return C.distinct_bind(xs or ["x", "y"], args.k, names)
    if g == "uni":
        return C.uni(xs or ["x"], names)
    if g == "exactly":
        _need(args, "i")
        return C.exactly(args.i, S.parse(args.body or "true"), names)
    if g == "grid":
        _need(args, "n")
        return C.grid(args.n, names)
    if g == "neighbor":
        _need(args, "n")
        x, y = (xs + ["x", "y"][len(xs):])[:2]
        return C.neighbor(x, y, args.n, args.axis)
    if g in ("type", "first", "last", "unique", "compl"):
        _need(args, "k", "n")
        return getattr(C.type_family(args.k, args.n, names, args.tetration_cap), g)
    if g == "compare":
        _need(args, "k", "d", "n")
        ys = args.y or [f"y{i}" for i in range(args.d)]
        xs = xs or [f"x{i}" for i in range(args.d)]
        return C.compare(args.k, args.d, args.n, xs, ys, args.rel, names)
    if g == "lsr":
        _need(args, "k", "d", "n")
        return C.lsr(args.k, args.d, args.n, xs or [f"x{i}" for i in range(args.d)], names=names)
    if g == "nb-eq-tower":
        _need(args, "k", "n")
        return C.nb_eq_tower(args.k, args.n)
    if g == "tiling":
        _need(args, "instance", "k")
        return C.tiling_reduction(_instance(args.instance, TL.TilingInstance), args.k, names, args.tetration_cap)
    if g == "amtp":
        _need(args, "instance")
        return C.amtp_reduction(_instance(args.instance, TL.AMTPInstance), names)
    if g == "shape":
        _need(args, "k")
        return TR.shape_formula(args.k)
    if g == "shape-finite":
        _need(args, "k")
        return TR.shape_finite(args.k, args.weak_progress)
    raise UsageError(f"unknown generator {g!r}")


def cmd_gen(args):
    f = _generate(args)
    _emit(args, S.render(f), {"generator": args.generator, "formula": S.render(f),
                              "length": S.length(f), "modal_depth": S.modal_depth(f)})
    return OK


_TARGETS = {
    "ef": lambda f, a: TR.ex_to_ef(f),
    "exef-finite": lambda f, a: TR.ex_to_exef_finite(f, a.weak_progress),
    "infinite-embed": lambda f, a: TR.embed_finite_in_infinite(f),
    "gt-embed": lambda f, a: TR.embed_gt_in_infinite(f),
    "exef": lambda f, a: TR.rewrite_modality(f, "ex-exef"),
    "ex": lambda f, a: TR.rewrite_modality(f, "ex-exef", inverse=True),
}


def cmd_translate(args):
    f = _formula(args)
    g = _TARGETS[args.to](f, args)
    _emit(args, S.render(g), {"target": args.to, "formula": S.render(g)})
    return OK


def _grid_rows(tau, side):
    return [[tau[i, j] for j in range(side)] for i in range(side)]


def cmd_tile(args):
    if args.amtp:
        inst = _instance(args.instance, TL.AMTPInstance)
        verdict = TL.solve_amtp(inst, args.search_cap)
        _emit(args, "true" if verdict else "false", {"verdict": verdict})
        return OK if verdict else FALSE
    if args.k is None:
        raise UsageError("tile needs --k K or --amtp")
    inst = _instance(args.instance, TL.TilingInstance)
    tau = TL.solve_tiling(inst, args.k, cap=args.search_cap, tetration_cap=args.tetration_cap)
    if tau is None:
        _emit(args, "no tiling", {"verdict": False, "tiling": None})
        return FALSE
    side = TL.side_length(inst, args.k, args.tetration_cap)
    rows = _grid_rows(tau, side)
    _emit(args, "\n".join(" ".join(r) for r in rows), {"verdict": True, "tiling": rows})
    return OK


def cmd_verify(args):
    from .suites import SUITES, run_suites

    names = None if args.suite == "all" else [args.suite]
    if names and names[0] not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    report = None if args.json else (lambda r: print(r.line(), flush=True))
    results = run_suites(names, args.seed, report)
    if args.json:
        print(json.dumps([{"number": r.number, "name": r.name, "passed": r.passed, "total": r.total,
                           "seconds": round(r.seconds, 2), "limit": r.limit, "ok": r.ok,
                           "failures": [str(x) for x in r.failures[:10]], "notes": r.notes}
                          for r in results], indent=2))
    else:
        for r in results:
            for x in r.failures[:5]:
                print(f"  suite {r.number} failure: {x}")
    return OK if all(r.ok for r in results) else FALSE


# argument parsing ----------------------------------------------------------------

def _formula_args(p, positional=True):
    if positional:
        p.add_argument("formula", nargs="?", help="formula text")
    else:
        p.add_argument("--formula", help="formula text")
    p.add_argument("--formula-file", help="read the formula from a file")


def build_parser():
    parser = argparse.ArgumentParser(prog="qctl", description="Quantified CTL over trees.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="start of fresh-name counters and random pools")
    common.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP, help="max trees to enumerate")
    common.add_argument("--tetration-cap", type=int, default=DEFAULT_TETRATION_CAP, help="max t(k,n) value")
    common.add_argument("--search-cap", type=int, default=TL.DEFAULT_SEARCH_CAP, help="max tiling search size")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="model-check a formula on a tree file")
    p.add_argument("--tree", required=True, help="tree JSON file")
    _formula_args(p, positional=False)
    p.add_argument("--mode", default=str(STRICT), help="strict, selfloop or chainpad(d)")
    p.add_argument("--backend", choices=BACKENDS, default=PRUNED)
    p.add_argument("--node", type=int, default=0, help="evaluation node (default: root)")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("sat", parents=[common], help="satisfiability search")
    _formula_args(p)
    p.add_argument("--fragment", choices=["ex"], default="ex", help="fragment for the bounded decision")
    p.add_argument("--max-branching", type=int, default=2, help="branching bound N for the EX decision")
    p.add_argument("--finite", action="store_true", help="search finite trees instead")
    p.add_argument("--max-size", type=int, default=5, help="node bound for --finite")
    p.add_argument("--mode", default=str(STRICT), help="frontier mode for --finite")
    p.add_argument("--backend", choices=BACKENDS, default=PRUNED)
    p.set_defaults(run=cmd_sat)

    p = sub.add_parser("gen", parents=[common], help="print a generated formula")
    p.add_argument("generator", help="bind, distinct-bind, uni, exactly, grid, neighbor, type, first, last, "
                                     "unique, compl, compare, lsr, nb-eq-tower, tiling, amtp, shape, shape-finite")
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--x", action="append", help="nominal name (repeatable)")
    p.add_argument("--y", action="append", help="second nominal path (repeatable)")
    p.add_argument("--rel", choices=C.RELATIONS, default=C.EQ)
    p.add_argument("--axis", choices=[C.HORIZONTAL, C.VERTICAL], default=C.HORIZONTAL)
    p.add_argument("--body", help="formula counted by exactly")
    p.add_argument("--instance", help="instance JSON file for tiling/amtp")
    p.add_argument("--weak-progress", action="store_true")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("translate", parents=[common], help="translate between fragments")
    _formula_args(p)
    p.add_argument("--to", required=True, choices=sorted(_TARGETS))
    p.add_argument("--weak-progress", action="store_true", help="add weak progress clauses (exef-finite)")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("tile", parents=[common], help="solve a tiling or AMTP instance")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--k", type=int, help="solve Tiling_k on the t(k,n) grid")
    p.add_argument("--amtp", action="store_true", help="solve the alternating multi-tiling instance")
    p.set_defaults(run=cmd_tile)

    p = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    p.add_argument("suite", help="suite name or all")
    p.set_defaults(run=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else ERROR
    try:
        return args.run(args)
    except CapExceeded as e:
        print(f"refused: {e}", file=sys.stderr)
    except (UsageError, S.ParseError, ValueError, KeyError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
    return ERROR


def main():
    sys.exit(run())
