"""Command-line interface.

Subcommands: knead, branches, renorm, scan, islands, realize,
hyperbolic-density.  All outputs are machine readable (JSON on stdout or
CSV/PGM files written atomically); errors are single-line JSON on stderr.
Exit codes: 0 success, 2 validation error, 3 internal consistency error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from typing import Optional

from .core import LorenzMap, make_affine_map, make_quadratic_map
from .errors import (
    ContractViolationError,
    DomainError,
    EscapeError,
    InternalConsistencyError,
)
from .family import (
    ParamPoint,
    classify_hyperbolic,
    realize_kneading,
    scan_archipelago,
    trace_island_boundary,
)
from .renorm import RenormType, detect_renormalizations
from .symbolic import branch_partition, kneading, validate_word


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-lorenz-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, sort_keys=True) + "\n"
    if out:
        _atomic_write(out, text.encode())
    else:
        sys.stdout.write(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route argparse failures to exit code 2
        raise DomainError(message)


def _parse_map(args) -> LorenzMap:
    if args.affine is not None:
        try:
            km_txt, kp_txt = args.affine.split(",")
            return make_affine_map(Fraction(km_txt), Fraction(kp_txt))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad --affine {args.affine!r}: {exc}") from exc
    if args.family is not None:
        try:
            s_txt, t_txt = args.family.split(",")
            return make_quadratic_map(float(s_txt), float(t_txt))
        except ValueError as exc:
            raise DomainError(f"bad --family {args.family!r}: {exc}") from exc
    raise DomainError("a map is required: --family s,t or --affine k-,k+")


def _word(text: str) -> str:
    try:
        return validate_word(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="lorenz", description=__doc__)
    parser.add_argument("--seed", type=int, default=0,
                        help="random seed recorded in output artifacts")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_map_args(p):
        p.add_argument("--family", help="quadratic family point 's,t'")
        p.add_argument("--affine", help="affine slopes 'k-,k+' (rationals)")

    p = sub.add_parser("knead", help="kneading pair of one map")
    add_map_args(p)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--exact", action="store_true",
                   help="force exact rational iteration (affine maps)")
    p.add_argument("--out")

    p = sub.add_parser("branches", help="branch partition of f^n as CSV")
    add_map_args(p)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--out")

    p = sub.add_parser("renorm", help="detected renormalizations as JSON")
    add_map_args(p)
    p.add_argument("--amax", type=int, default=8)
    p.add_argument("--bmax", type=int, default=8)
    p.add_argument("--out")

    p = sub.add_parser("scan", help="rasterize an archipelago in (u, m)")
    p.add_argument("--alpha", required=True, type=_word)
    p.add_argument("--beta", required=True, type=_word)
    p.add_argument("--nu", type=int, default=64)
    p.add_argument("--nm", type=int, default=64)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--img", help="PGM output path")
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("islands", help="trace one island's boundary")
    p.add_argument("--alpha", required=True, type=_word)
    p.add_argument("--beta", required=True, type=_word)
    p.add_argument("--seed-point", required=True, metavar="S,T",
                   help="parameter inside the island")
    p.add_argument("--fibers", type=int, default=128)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")

    p = sub.add_parser("realize", help="find a parameter with given kneading")
    p.add_argument("--kminus", required=True, type=_word)
    p.add_argument("--kplus", required=True, type=_word)
    p.add_argument("--out")

    p = sub.add_parser("hyperbolic-density",
                       help="sample hyperbolicity evidence on a grid")
    p.add_argument("--res", type=int, default=64)
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--out", help="per-cell CSV output path")

    return parser


def _cmd_knead(args) -> int:
    map_ = _parse_map(args)
    kp = kneading(map_, args.depth, exact=True if args.exact else None)
    _emit({
        "depth": kp.depth,
        "k_minus": kp.k_minus,
        "k_plus": kp.k_plus,
        "exact_hits": sorted([side, i] for side, i in kp.exact_hits),
        "map": map_.to_dict(),
        "seed": args.seed,
    }, args.out)
    return 0


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return _fmt(float(value))


def _cmd_branches(args) -> int:
    map_ = _parse_map(args)
    part = branch_partition(map_, args.depth)
    lines = ["lo,hi,word,cut_l,cut_r"]
    for b in part.branches:
        cl = "" if b.cut_l is None else str(b.cut_l)
        cr = "" if b.cut_r is None else str(b.cut_r)
        lines.append(f"{_cell(b.lo)},{_cell(b.hi)},{b.word},{cl},{cr}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(args.out, text.encode())
    else:
        sys.stdout.write(text)
    return 0


def _cmd_renorm(args) -> int:
    map_ = _parse_map(args)
    rens = detect_renormalizations(map_, args.amax, args.bmax)
    doc = [{
        "p": float(r.p),
        "q": float(r.q),
        "a": r.a,
        "b": r.b,
        "alpha": r.rtype.alpha,
        "beta": r.rtype.beta,
        "deriv_p": r.deriv_p,
        "deriv_q": r.deriv_q,
        "uncertain": r.uncertain,
    } for r in rens]
    text = json.dumps(doc) + "\n"
    if args.out:
        _atomic_write(args.out, text.encode())
    else:
        sys.stdout.write(text)
    return 0


def _cmd_scan(args) -> int:
    rtype = RenormType(args.alpha, args.beta)
    grid = scan_archipelago(rtype, (args.nu, args.nm), threads=args.threads)
    _atomic_write(args.out, grid.csv_text().encode())
    if args.img:
        comment = (f"alpha={args.alpha} beta={args.beta} nu={args.nu} "
                   f"nm={args.nm} seed={args.seed}")
        _atomic_write(args.img, grid.pgm_bytes(comment=comment))
    counts = {name: int((grid.status == code).sum())
              for name, code in (("outside", 0), ("inside", 1), ("uncertain", 2))}
    _emit({
        "cells": args.nu * args.nm,
        "counts": counts,
        "contiguity_violations": list(grid.contiguity_violations),
        "islands": len(grid.islands()),
        "seed": args.seed,
    }, None)
    return 0


def _cmd_islands(args) -> int:
    rtype = RenormType(args.alpha, args.beta)
    try:
        s_txt, t_txt = args.seed_point.split(",")
        seed = ParamPoint(float(s_txt), float(t_txt))
    except ValueError as exc:
        raise DomainError(f"bad --seed-point {args.seed_point!r}: {exc}") from exc
    boundary = trace_island_boundary(rtype, seed, fibers=args.fibers,
                                     tol=args.tol)
    doc = boundary.to_json_dict()
    doc["seed"] = args.seed
    _emit(doc, args.out)
    return 0


def _cmd_realize(args) -> int:
    if len(args.kminus) != len(args.kplus):
        raise DomainError("--kminus and --kplus must have equal length")
    pt = realize_kneading(args.kminus, args.kplus)
    doc = {"result": "none"} if pt is None else {"s": pt.s, "t": pt.t}
    doc["seed"] = args.seed
    _emit(doc, args.out)
    return 0


def _cmd_hyperbolic_density(args) -> int:
    res = args.res
    if res < 2:
        raise DomainError("--res must be at least 2")
    counts = {"hyperbolic-evidence": 0, "non-hyperbolic-evidence": 0,
              "undecided": 0}
    rows = ["s,t,status,period_left,mult_left,period_right,mult_right"]
    for i in range(res):
        for j in range(res):
            s = (i + 0.5) / res
            t = (j + 0.5) / res
            rep = classify_hyperbolic(ParamPoint(s, t), args.horizon)
            counts[rep.status] += 1
            rows.append(
                f"{_fmt(s)},{_fmt(t)},{rep.status},"
                f"{rep.left.period},{_fmt(rep.left.multiplier)},"
                f"{rep.right.period},{_fmt(rep.right.multiplier)}")
    if args.out:
        _atomic_write(args.out, ("\n".join(rows) + "\n").encode())
    _emit({
        "res": res,
        "horizon": args.horizon,
        "counts": counts,
        "fraction_hyperbolic": counts["hyperbolic-evidence"] / (res * res),
        "seed": args.seed,
    }, None)
    return 0


_COMMANDS = {
    "knead": _cmd_knead,
    "branches": _cmd_branches,
    "renorm": _cmd_renorm,
    "scan": _cmd_scan,
    "islands": _cmd_islands,
    "realize": _cmd_realize,
    "hyperbolic-density": _cmd_hyperbolic_density,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (DomainError, ValueError) as exc:
        sys.stderr.write(json.dumps(
            {"error": "validation", "message": str(exc)}) + "\n")
        return 2
    except (InternalConsistencyError, EscapeError,
            ContractViolationError) as exc:
        sys.stderr.write(json.dumps(
            {"error": "internal", "message": str(exc)}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
