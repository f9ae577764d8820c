"""Command-line harness: ``magma enum|count|apply|verify|series``.

Output is deterministic: the same invocation prints the same bytes, whatever
the worker count.  Exit status is 0 on success, 1 when a law fails, 2 on
usage, parse or bound errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .algebra import MagAlgebra
from .bialgebra import Rigidity, idempotent_e
from .coalgebra import delta, delta_reduced
from .freemodule import ASCII_TENSOR, UNICODE_TENSOR, TensorElement, parse_element
from .laws import LAWS, VerifyConfig, run_law
from .series import compose, f_series, g_series, invert, parse_series
from .trees import TreeError, count_trees, enumerate_trees, format_bound, format_tree, parse_bound

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

APPLY_KINDS = ("delta", "delta-reduced", "project-e", "psi", "phi", "series-compose", "series-invert")


class UsageError(Exception):
    pass


def _bound_arg(text: str):
    try:
        return parse_bound(text)
    except TreeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _alphabet_arg(text: str) -> tuple[str, ...]:
    letters = tuple(s.strip() for s in text.split(",")) if "," in text else tuple(text)
    if not letters or not all(v.isidentifier() for v in letters) or len(set(letters)) != len(letters):
        raise argparse.ArgumentTypeError(f"bad alphabet {text!r}")
    return letters


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arity", type=_bound_arg, default=parse_bound("inf"),
                        help="arity bound m, an integer >= 2 or 'inf' (default inf)")
    common.add_argument("--degree", type=_positive, default=5, help="max degree / truncation (default 5)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=_nonneg, default=0)
    common.add_argument("--samples", type=_positive, default=50)
    common.add_argument("--alphabet", type=_alphabet_arg, default=None,
                        help="labels, e.g. 'ab' or 'x,y,z' (verify defaults to 'ab')")
    common.add_argument("--unicode", action="store_true", help="print tensors with '⊗' instead of '(x)'")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="magma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enum", parents=[common], help="list planar trees in canonical order")
    p.add_argument("--leaves", type=_nonneg, required=True)
    p.add_argument("--count-only", action="store_true")

    p = sub.add_parser("count", parents=[common], help="count planar trees without building them")
    p.add_argument("--leaves", type=_nonneg, required=True)
    p.add_argument("--upto", action="store_true", help="print counts for every n up to --leaves")

    p = sub.add_parser("apply", parents=[common], help="apply an operation to an element or series")
    p.add_argument("kind", choices=APPLY_KINDS)
    p.add_argument("inputs", nargs="+")
    p.add_argument("--n", type=int, default=2, help="co-operation arity for delta/delta-reduced")

    p = sub.add_parser("verify", parents=[common], help="check a law exhaustively or on seeded samples")
    p.add_argument("--law", required=True, choices=sorted(LAWS) + ["all"])

    p = sub.add_parser("series", parents=[common], help="print the series f or g")
    p.add_argument("which", choices=("f", "g"))
    return parser


def _emit(args, payload, text: str) -> None:
    out = json.dumps(payload, indent=2) + "\n" if args.format == "json" else text + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_enum(args) -> int:
    trees = enumerate_trees(args.leaves, args.arity)
    payload = {"leaves": args.leaves, "arity_bound": format_bound(args.arity), "count": len(trees)}
    if args.count_only:
        _emit(args, payload, str(len(trees)))
    else:
        payload["trees"] = [format_tree(t) for t in trees]
        _emit(args, payload, "\n".join(payload["trees"]))
    return EXIT_OK


def cmd_count(args) -> int:
    ns = range(0 if args.upto else args.leaves, args.leaves + 1)
    counts = {n: count_trees(n, args.arity) for n in ns}
    payload = {"arity_bound": format_bound(args.arity), "counts": {str(n): c for n, c in counts.items()}}
    text = "\n".join(f"{n} {c}" for n, c in counts.items()) if args.upto else str(counts[args.leaves])
    _emit(args, payload, text)
    return EXIT_OK


def _one(args, what: str) -> str:
    if len(args.inputs) != 1:
        raise UsageError(f"apply {args.kind} takes one {what}, got {len(args.inputs)}")
    return args.inputs[0]


def _rigidity_for(args, x) -> Rigidity:
    alphabet = args.alphabet or tuple(sorted({v for b in x.keys() for v in b.labels})) or ("a",)
    return Rigidity(MagAlgebra(args.arity, alphabet))


def cmd_apply(args) -> int:
    sep = UNICODE_TENSOR if args.unicode else ASCII_TENSOR
    kind = args.kind
    if kind.startswith("series-"):
        if kind == "series-compose":
            if len(args.inputs) != 2:
                raise UsageError("apply series-compose takes two series: phi psi")
            phi, psi = (parse_series(s, args.degree, args.arity) for s in args.inputs)
            result = compose(phi, psi, args.degree)
        else:
            result = invert(parse_series(_one(args, "series"), args.degree, args.arity), args.degree)
        text = str(result)
    else:
        x = parse_element(_one(args, "element"), args.arity, args.alphabet)
        if kind == "delta":
            result = delta(args.n, x, args.arity)
        elif kind == "delta-reduced":
            result = delta_reduced(args.n, x, args.arity)
        elif kind == "project-e":
            result = idempotent_e(x, args.arity)
        elif kind == "psi":
            result = _rigidity_for(args, x).psi(x)
        else:
            result = _rigidity_for(args, x).phi(x)
        text = result.format(sep) if isinstance(result, TensorElement) else str(result)
    payload = {"kind": kind, "arity_bound": format_bound(args.arity), "inputs": list(args.inputs), "result": text}
    _emit(args, payload, text)
    return EXIT_OK


def _report_text(report) -> str:
    head = f"{'PASS' if report.passed else 'FAIL'} {report.law} " \
           f"(m={format_bound(report.arity_bound)}, D={report.degree}): {len(report.cases)} cases"
    bad = report.counterexample
    if bad is None:
        return head
    return "\n".join([head, f"  case {bad.id}", f"  input:    {bad.input}",
                      f"  expected: {bad.expected}", f"  got:      {bad.got}"])


def cmd_verify(args) -> int:
    names = list(LAWS) if args.law == "all" else [args.law]
    alphabet = args.alphabet or ("a", "b")
    configs = [VerifyConfig(n, args.arity, args.degree, args.seed, args.samples, alphabet) for n in names]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            reports = [run_law(cfg, pool) for cfg in configs]
    else:
        reports = [run_law(cfg) for cfg in configs]
    ok = all(r.passed for r in reports)
    if args.law == "all":
        payload = {"reports": [r.to_json() for r in reports], "pass": ok}
    else:
        payload = reports[0].to_json()
    _emit(args, payload, "\n".join(_report_text(r) for r in reports))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_series(args) -> int:
    s = (f_series if args.which == "f" else g_series)(args.degree, args.arity)
    payload = {"series": args.which, "arity_bound": format_bound(args.arity), "degree": args.degree,
               "terms": len(s), "result": str(s)}
    _emit(args, payload, str(s))
    return EXIT_OK


COMMANDS = {"enum": cmd_enum, "count": cmd_count, "apply": cmd_apply, "verify": cmd_verify, "series": cmd_series}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, TreeError, ValueError, ZeroDivisionError) as exc:
        print(f"magma: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
