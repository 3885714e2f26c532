"""Command-line interface.

Exit codes: 0 success or Verified, 1 refuted, 2 bad input, 3 inconclusive or
budget exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from .blocks import block_data, epsilon_and_b, fundamental_sequence
from .errors import BlobError, BudgetExhausted, NonTermination, UnknownIdentity
from .gt import (build_L_presentation, build_Y_presentation, concrete_dim_upper_bound,
                 dim_abstract, explore_Q, prefix_dim_predicted, presentations_isomorphic)
from .identities import NAMES, verify_identity
from .klr import Engine, Verdict
from .residues import enumerate_std, make_ctx, official_word

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
QROW_COLUMNS = ["sequence", "class_rep", "classification", "std_count", "predicted_dim",
                "concrete_dim", "exact", "verdict"]


class UsageError(Exception):
    pass


def int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers: {text!r}") from exc


def parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--e", type=int, required=True, help="quantum characteristic")
    common.add_argument("--l", type=int, required=True, help="level")
    common.add_argument("--kappa", type=int_list, required=True, help="charges, comma separated")
    common.add_argument("--p", type=int, default=5, help="field characteristic (default 5)")
    common.add_argument("--interval-start", type=int, default=0)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--budget", type=int, default=None,
                        help="rewriting step budget (BLOBGT_BUDGET also works)")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="blobgt", description="Generalized blob algebra toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("blocks", parents=[common], help="block data of a vertical sequence")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--base", type=int, default=1)

    t = sub.add_parser("tableaux", parents=[common], help="standard tableaux of a sequence")
    t.add_argument("--seq", type=int_list, help="residue sequence (default: fundamental)")
    t.add_argument("--m", type=int, help="length of the fundamental sequence")
    t.add_argument("--count-only", action="store_true")

    g = sub.add_parser("gtdim", parents=[common], help="dimension of the Gelfand-Tsetlin subalgebra")
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--prefix", type=int, default=None, help="use generators y_j with j <= a")
    g.add_argument("--concrete", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="check a named identity")
    v.add_argument("--identity", required=True)
    v.add_argument("--k", type=int, default=1)
    v.add_argument("--r", type=int)
    v.add_argument("--j", type=int)
    v.add_argument("--s", type=int_list, default=())
    v.add_argument("--z", type=int)
    v.add_argument("--dump", action="store_true", help="print both normalized sides")

    q = sub.add_parser("explore-q", parents=[common], help="sweep blob-possible classes")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--classes-only", action="store_true")
    q.add_argument("--no-concrete", action="store_true")
    return ap


# ---------------------------------------------------------------- commands

def _ctx(args, m: int = 0):
    return make_ctx(args.e, args.l, args.kappa, p=args.p, m_max=m,
                    interval_start=args.interval_start)


def cmd_blocks(args) -> tuple[dict, int]:
    ctx = _ctx(args, args.m)
    bd = block_data(ctx, args.base, args.m)
    return bd.as_dict(), EXIT_OK


def cmd_tableaux(args) -> tuple[dict, int]:
    if args.seq:
        ctx = _ctx(args, len(args.seq))
        seq = args.seq
    elif args.m:
        ctx = _ctx(args, args.m)
        seq = fundamental_sequence(ctx, args.m)
    else:
        raise UsageError("give --seq or --m")
    if any(not 0 <= x < args.e for x in seq):
        raise UsageError(f"residues must lie in 0..{args.e - 1}")
    tabs = enumerate_std(seq, ctx)
    if args.count_only:
        return {"sequence": list(seq), "count": len(tabs)}, EXIT_OK
    eng = Engine(ctx, len(seq))
    rows = [{"components": [n.comp for n in t.entries], "shape": list(t.shape),
             "degree": eng.tableau_degree(t), "word": list(official_word(t))} for t in tabs]
    return {"sequence": list(seq), "count": len(tabs), "tableaux": rows}, EXIT_OK


def cmd_gtdim(args) -> tuple[dict, int]:
    if args.k < 1:
        raise UsageError("--k must be positive")
    ctx = _ctx(args)
    eps, _ = epsilon_and_b(ctx, 1)
    m = eps + args.k * args.e
    ctx = _ctx(args, m)
    bd = block_data(ctx, 1, m)
    a = args.prefix if args.prefix is not None else m
    if not 1 <= a <= m:
        raise UsageError(f"--prefix must lie in 1..{m}")
    n = sum(1 for z in bd.m_grid.values() if z <= a)
    out: dict = {"m": m, "n": n}
    if a == m and n <= 10:
        y_pres = build_Y_presentation(args.k, args.l, args.p)
        out["dim_abstract"] = dim_abstract(y_pres)
        out["presentations_isomorphic"] = presentations_isomorphic(
            y_pres, build_L_presentation(args.k, args.l, args.p))
    else:
        out["dim_abstract"] = prefix_dim_predicted(bd, a)
    seq = fundamental_sequence(ctx, m)
    out["std_count"] = len(enumerate_std(seq, ctx))
    code = EXIT_OK
    if args.concrete:
        try:
            cd = concrete_dim_upper_bound(seq, ctx, budget=args.budget,
                                          prefix=None if a == m else a)
            out.update({"concrete_dim": cd.dim, "exact": cd.exact,
                        "concrete_lower": cd.lower, "concrete_upper": cd.upper})
            if not cd.exact:
                code = EXIT_INCONCLUSIVE
        except BudgetExhausted as exc:
            out.update({"concrete_dim": None, "exact": False, "error": str(exc)})
            code = EXIT_INCONCLUSIVE
    return out, code


def cmd_verify(args) -> tuple[dict, int]:
    if args.identity not in NAMES:
        raise UsageError(f"unknown identity {args.identity!r}; known: {', '.join(NAMES)}")
    params = {"e": args.e, "l": args.l, "kappa": args.kappa, "p": args.p, "k": args.k}
    for key in ("r", "j", "z"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if args.s:
        params["s"] = tuple(args.s)
    saved = os.environ.get("BLOBGT_BUDGET")
    if args.budget is not None:
        os.environ["BLOBGT_BUDGET"] = str(args.budget)
    try:
        verdict = verify_identity(args.identity, params)
    finally:
        if saved is None:
            os.environ.pop("BLOBGT_BUDGET", None)
        else:
            os.environ["BLOBGT_BUDGET"] = saved
    trace = dict(verdict.trace)
    if not args.dump:
        trace.pop("lhs", None)
        trace.pop("rhs", None)
    out = {"identity": args.identity, "verdict": verdict.verdict.value,
           "params": {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()},
           "trace": trace}
    code = {Verdict.VERIFIED: EXIT_OK, Verdict.REFUTED_BY_GRADING: EXIT_REFUTED,
            Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict.verdict]
    return out, code


def cmd_explore_q(args) -> tuple[dict, int]:
    ctx = _ctx(args, args.m)
    rows = explore_Q(ctx, args.m, concrete=not args.no_concrete,
                     classes_only=args.classes_only, budget=args.budget)
    return {"m": args.m, "rows": [r.as_dict() for r in rows]}, EXIT_OK


COMMANDS = {"blocks": cmd_blocks, "tableaux": cmd_tableaux, "gtdim": cmd_gtdim,
            "verify": cmd_verify, "explore-q": cmd_explore_q}


# ---------------------------------------------------------------- output

def _flat(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(_flat(x) for x in v)
    if isinstance(v, dict):
        return ";".join(f"{k}={_flat(x)}" for k, x in v.items())
    return "" if v is None else str(v)


def render(command: str, config: dict, result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"command": command, "config": config, "result": result},
                          indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if command == "explore-q":
            w.writerow(QROW_COLUMNS)
            for row in result["rows"]:
                w.writerow([_flat(row[c]) for c in QROW_COLUMNS])
        elif command == "tableaux" and "tableaux" in result:
            w.writerow(["components", "shape", "degree", "word"])
            for row in result["tableaux"]:
                w.writerow([_flat(row[c]) for c in ("components", "shape", "degree", "word")])
        else:
            w.writerow(["key", "value"])
            for k in sorted(result):
                w.writerow([k, _flat(result[k])])
        return buf.getvalue()
    if command == "explore-q":
        for row in result["rows"]:
            buf.write(" | ".join(f"{c}={_flat(row[c])}" for c in QROW_COLUMNS) + "\n")
    elif command == "tableaux" and "tableaux" in result:
        buf.write(f"{result['count']} tableaux for {_flat(result['sequence'])}\n")
        for row in result["tableaux"]:
            buf.write(f"comps {_flat(row['components'])}  shape {_flat(row['shape'])}  "
                      f"deg {row['degree']}  word {_flat(row['word'])}\n")
    else:
        for k in sorted(result):
            buf.write(f"{k}: {_flat(result[k])}\n")
    return buf.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    ap = parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    config = {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items())}
    try:
        result, code = COMMANDS[args.command](args)
    except (UsageError, UnknownIdentity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NonTermination, BudgetExhausted) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (BlobError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render(args.command, config, result, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
