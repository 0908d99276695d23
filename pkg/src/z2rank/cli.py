"""Command-line front end: ``z2rank <command> ...``.

Exit codes: 0 success or decision true, 1 decision false, 2 usage error,
3 input format error, 4 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bilinear, diag_completion as dc, gf2_core as core, hieroglyph as hg, set_system as ss

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _matrix(path: str) -> core.BitMatrix:
    return core.parse_matrix(_read_text(path))


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload) if args.json else text)


def _bits(v: list[int]) -> str:
    return "".join(map(str, v))


# ---------------------------------------------------------------- handlers


def cmd_rank(args) -> int:
    r = core.rank(_matrix(args.file))
    _emit(args, {"rank": r}, str(r))
    return EXIT_OK


def cmd_det(args) -> int:
    d = core.det(_matrix(args.file))
    _emit(args, {"det": d}, str(d))
    return EXIT_OK


def cmd_count(args) -> int:
    c = core.count_rank(args.m, args.n, args.k)
    _emit(args, {"count": c}, str(c))
    return EXIT_OK


def cmd_complete(args) -> int:
    M = _matrix(args.file)
    if args.exact is not None:
        res = dc.min_rank_exact(M, args.exact, threads=args.threads)
        ok = res is not None
        payload = {"k": args.exact, "achievable": ok, "witness": res.witness.bits() if ok else None}
        text = f"rank <= {args.exact} achievable with diagonal {_bits(res.witness.bits())}" if ok else f"rank <= {args.exact} not achievable"
        _emit(args, payload, text)
        return EXIT_OK if ok else EXIT_FALSE
    if args.approx:
        k = dc.min_rank_approx(M)
        _emit(args, {"approx": k}, f"{k} (R lies in [{(k + 1) // 2}, {k}])")
        return EXIT_OK
    if args.nondegenerate or args.degenerate:
        D = dc.complete_nondegenerate(M) if args.nondegenerate else dc.complete_degenerate(M)
        d = core.det(D.apply(M))
        _emit(args, {"witness": D.bits(), "det": d}, f"diagonal {_bits(D.bits())}, det {d}")
        return EXIT_OK
    if args.rank1:
        out = dc.complete_to_rank_le1(M)
        if isinstance(out, dc.Rank1Certificate):
            _emit(args, {"rank_le_1": False, **out.to_json()}, f"no completion of rank <= 1: {out.kind} on {list(out.vertices)}")
            return EXIT_FALSE
        _emit(args, {"rank_le_1": True, "witness": out.witness.bits()}, f"rank {out.achieved_rank} with diagonal {_bits(out.witness.bits())}")
        return EXIT_OK
    res = dc.min_rank(M, budget=args.budget, threads=args.threads)
    _emit(args, res.to_json(), f"R = {res.achieved_rank}, diagonal {_bits(res.witness.bits())}")
    return EXIT_OK


def cmd_hiero(args) -> int:
    source = args.word
    text = _read_text(source) if Path(source).is_file() else source
    H = hg.parse(text, multichar=args.multichar)
    if args.genus:
        g = hg.min_genus(H, budget=args.budget, threads=args.threads)
        _emit(args, {"genus": g}, str(g))
        return EXIT_OK
    if args.mobius:
        res = hg.mobius_realizable(H)
        if res:
            _emit(args, {"mobius": True, "witness": list(res.witness)}, f"realizable, diagonal {_bits(list(res.witness))}")
            return EXIT_OK
        cert = res.certificate
        labels = [H.letters[v] for v in cert.vertices]
        _emit(args, {"mobius": False, **cert.to_json()}, f"not realizable: {cert.kind} on letters {' '.join(labels)}")
        return EXIT_FALSE
    if args.check is not None:
        res = hg.realizable_on(H, args.check, threads=args.threads)
        payload = {"k": args.check, "realizable": res.realizable, "witness": list(res.witness) if res else None}
        _emit(args, payload, f"realizable with {args.check} Moebius band(s)" if res else f"not realizable with {args.check} Moebius band(s)")
        return EXIT_OK if res else EXIT_FALSE
    best = hg.genus_with_witness(H, budget=args.budget, threads=args.threads)
    payload = {"letters": list(H.letters), "n": H.n, "genus": best.achieved_rank, "witness": best.witness.bits()}
    _emit(args, payload, f"{H}: n={H.n}, genus {best.achieved_rank}, diagonal {_bits(best.witness.bits())}")
    return EXIT_OK


def _write_choose(path: str | None, A: ss.ChooseMatrix) -> None:
    if path:
        Path(path).write_text(ss.format_choose(A))


def cmd_choose_solve(args) -> int:
    space = ss.solve_choose_space(args.m, args.l, args.even)
    if space is None:
        _emit(args, {"m": args.m, "l": args.l, "even": args.even, "feasible": False}, "infeasible")
        return EXIT_FALSE
    payload = {"m": args.m, "l": args.l, "even": args.even, "feasible": True, "dimension": space.dimension, "variables": space.n_vars}
    _write_choose(args.output, ss.member_matrix(space, ss.SubsetIndexer(args.m, args.l), 0))
    _emit(args, payload, f"feasible, solution space of dimension {space.dimension} in {space.n_vars} variables")
    return EXIT_OK


def cmd_choose_min_rank(args) -> int:
    space = ss.solve_choose_space(args.m, args.l, args.even)
    if space is None:
        _emit(args, {"m": args.m, "l": args.l, "even": args.even, "feasible": False}, "infeasible")
        return EXIT_FALSE
    rep = ss.min_rank_over_space(
        space,
        ss.SubsetIndexer(args.m, args.l),
        args.even,
        threshold=args.threshold,
        n_samples=args.samples,
        seed=args.seed,
        search_budget=args.search_budget,
        threads=args.threads,
    )
    _write_choose(args.output, rep.witness)
    payload = {**rep.to_json(), "even": args.even}
    text = f"min rank = {rep.lower}" if rep.exact else f"min rank in [{rep.lower}, {rep.upper}]"
    _emit(args, payload, f"{text} ({rep.method})")
    return EXIT_OK


def cmd_choose_validate(args) -> int:
    A = ss.parse_choose(_read_text(args.file), args.m, args.l)
    bad = ss.validate(A, even=args.even)
    payload = {"valid": not bad, "violations": [{"kind": v.kind, "where": [list(x) if isinstance(x, tuple) else x for x in v.where]} for v in bad]}
    _emit(args, payload, "valid" if not bad else "\n".join(map(str, bad)))
    return EXIT_OK if not bad else EXIT_FALSE


def cmd_form_classify(args) -> int:
    dec = bilinear.classify(_matrix(args.file))
    text = f"k={dec.k} l={dec.l}\n" + "\n".join(_bits(b) for b in dec.to_json()["basis"])
    _emit(args, dec.to_json(), text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _natural(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=_positive, default=1, help="worker threads; output does not depend on it")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--budget", type=_positive, default=dc.DEFAULT_BUDGET, help="operation cap for minimum-rank searches")

    p = argparse.ArgumentParser(prog="z2rank", description="Z2 rank, diagonal completion, hieroglyphs, choose-matrices, forms.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rank", parents=[common], help="rank of a matrix file")
    s.add_argument("file")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("det", parents=[common], help="determinant of a square matrix file")
    s.add_argument("file")
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("count", parents=[common], help="number of m x n matrices of rank k")
    s.add_argument("m", type=_natural)
    s.add_argument("n", type=_natural)
    s.add_argument("k", type=_natural)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("complete", parents=[common], help="diagonal completion of a square matrix")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--min-rank", action="store_true", help="least achievable rank (default)")
    g.add_argument("--exact", type=_natural, metavar="K", help="decide whether rank <= K is achievable")
    g.add_argument("--approx", action="store_true", help="factor-2 estimate of the least rank")
    g.add_argument("--nondegenerate", action="store_true")
    g.add_argument("--degenerate", action="store_true")
    g.add_argument("--rank1", action="store_true", help="decide rank <= 1 for symmetric input")
    s.set_defaults(func=cmd_complete)

    s = sub.add_parser("hiero", parents=[common], help="hieroglyph realizability")
    s.add_argument("word", help="a word such as aabcbc, or a file containing one")
    s.add_argument("--multichar", action="store_true", help="letters are whitespace-separated tokens")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--genus", action="store_true", help="least number of Moebius bands")
    g.add_argument("--mobius", action="store_true", help="decide realizability on the Moebius band")
    g.add_argument("--check", type=_natural, metavar="K", help="decide realizability with K Moebius bands")
    s.set_defaults(func=cmd_hiero)

    choose = sub.add_parser("choose", help="[m choose l]-matrices")
    csub = choose.add_subparsers(dest="action", required=True)
    for name, func in (("solve", cmd_choose_solve), ("min-rank", cmd_choose_min_rank)):
        s = csub.add_parser(name, parents=[common])
        s.add_argument("m", type=_natural)
        s.add_argument("l", type=_positive)
        s.add_argument("--even", action="store_true")
        s.add_argument("--output", metavar="FILE", help="write a member (solve) or the witness (min-rank)")
        s.set_defaults(func=func)
    s.add_argument("--threshold", type=_natural, default=ss.ENUMERATION_THRESHOLD, help="largest dimension enumerated exhaustively")
    s.add_argument("--samples", type=_natural, default=ss.N_SAMPLES)
    s.add_argument("--search-budget", type=_positive, default=ss.SEARCH_BUDGET)
    s = csub.add_parser("validate", parents=[common])
    s.add_argument("file")
    s.add_argument("m", type=_natural)
    s.add_argument("l", type=_positive)
    s.add_argument("--even", action="store_true")
    s.set_defaults(func=cmd_choose_validate)

    form = sub.add_parser("form", help="symmetric bilinear forms")
    fsub = form.add_subparsers(dest="action", required=True)
    s = fsub.add_parser("classify", parents=[common])
    s.add_argument("file")
    s.set_defaults(func=cmd_form_classify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except dc.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, core.MatrixFormatError, core.ShapeError, hg.HieroglyphError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
