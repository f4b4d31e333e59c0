"""Command-line interface: ``bracketforge <command> ...``.

Exit status is 0 on success, 1 when a checked object fails validation and 2
for usage errors and unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Optional, Sequence

from . import __version__
from .biquandle import Biquandle, BiquandleFormatError, alexander_biquandle, validate_biquandle
from .bracket import NORMALIZATIONS, BracketError, bracket_invariant, validate_bracket
from .coloring import alexander_count, counting_invariant, image_enhancement, render_u_polynomial
from .diagram import DiagramError
from .files import (InputError, dump_json, fixture_names, load_biquandle, load_bracket, load_diagram,
                    load_functor, load_word, read_json)
from .functor import FunctorError, WordError, check_functor_equations, evaluate_word
from .ring import NotInvertibleError, RingFormatError, parse_ring, ring_from_dict
from .search import SearchError, search_brackets

INPUT_ERRORS = (InputError, DiagramError, BiquandleFormatError, RingFormatError, FunctorError, WordError,
                SearchError, NotInvertibleError, KeyError, TypeError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(dump_json(doc))
    else:
        print(text)


def _failures(k: int) -> str:
    return "1 failure" if k == 1 else f"{k} failures"


def _threads(args) -> int:
    if args.threads:
        return args.threads
    env = os.environ.get("BRACKETFORGE_THREADS", "")
    return int(env) if env.isdigit() and int(env) > 0 else 1


def _alexander_params(bq: Biquandle) -> Optional[tuple[int, int, int]]:
    """Recover ``(modulus, t, s)`` if the tables are an Alexander biquandle."""
    n = bq.n
    if n < 2:
        return None
    s = bq.over_op(1, 1) % n
    t = bq.under_op(1, n) % n  # 1 ▷̲ 0 = t
    try:
        cand = alexander_biquandle(n, t, s)
    except (NotInvertibleError, ValueError, AssertionError):
        return None
    return (n, t, s) if cand.under == bq.under and cand.over == bq.over else None


# -- commands -------------------------------------------------------------

def cmd_check_biquandle(args) -> int:
    bq = load_biquandle(args.biquandle_file or args.biquandle)
    report = validate_biquandle(bq)
    lines = [f"biquandle with {bq.n} elements: " + ("all axioms hold" if report.ok else "axioms violated")]
    for v in report.violations:
        lines.append(f"  axiom {v.axiom} fails at {v.witness} ({_failures(v.count)}): {v.detail}")
    _emit(args, {"n": bq.n, **report.to_dict()}, "\n".join(lines))
    return 0 if report.ok else 1


def cmd_count(args) -> int:
    d = load_diagram(args.diagram)
    bq = load_biquandle(args.biquandle)
    doc = {"count": counting_invariant(d, bq)}
    text = str(doc["count"])
    if args.method in ("alexander", "both"):
        params = _alexander_params(bq)
        if params is None:
            raise InputError("the linear-algebra count needs an Alexander biquandle")
        doc["alexander_count"] = alexander_count(d, *params)
        if args.method == "alexander":
            doc = {"count": doc["alexander_count"]}
            text = str(doc["count"])
        else:
            text = f"{doc['count']} (linear algebra: {doc['alexander_count']})"
    _emit(args, doc, text)
    return 0


def cmd_enhance_image(args) -> int:
    d = load_diagram(args.diagram)
    bq = load_biquandle(args.biquandle)
    sizes = image_enhancement(d, bq)
    items = sorted(sizes.items())
    poly = render_u_polynomial((str(k), m) for k, m in items)
    multiset = [k for k, m in items for _ in range(m)]
    _emit(args, {"polynomial": poly, "multiset": multiset}, f"{poly}\nmultiset: {multiset}")
    return 0


def _bracket_doc(path):
    data = read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        ring = ring_from_dict(data["ring"])
        bq = Biquandle.from_dict(data["biquandle"])
        a = [[ring.decode(v) for v in row] for row in data["A"]]
        b = [[ring.decode(v) for v in row] for row in data["B"]]
    except KeyError as exc:
        raise InputError(f"{path}: bracket document is missing {exc.args[0]!r}") from None
    return ring, bq, a, b


def cmd_bracket_check(args) -> int:
    ring, bq, a, b = _bracket_doc(args.bracket_file or args.bracket)
    try:
        report = validate_bracket(bq, ring, a, b)
    except BracketError as exc:
        raise InputError(str(exc)) from None
    if report.ok:
        text = f"valid biquandle bracket over {ring}: delta = {ring.format(report.delta)}, w = {ring.format(report.w)}"
    else:
        lines = ["not a biquandle bracket:"]
        for v in report.violations:
            lines.append(f"  condition {v.condition} fails at {v.witness} ({_failures(v.count)}): {v.detail}")
        text = "\n".join(lines)
    _emit(args, report.to_dict(ring), text)
    return 0 if report.ok else 1


def cmd_bracket_eval(args) -> int:
    beta = load_bracket(args.bracket)
    d = load_diagram(args.diagram)
    value = bracket_invariant(d, beta, args.normalization, workers=_threads(args))
    _emit(args, value.to_dict() | {"normalization": args.normalization},
          f"{value.polynomial()}\nmultiset: {value.multiset_text()}")
    return 0


def cmd_bracket_search(args) -> int:
    bq = load_biquandle(args.biquandle)
    ring = parse_ring(args.ring)
    progress: Optional[Callable[[int, int], None]] = None
    if args.progress:
        def progress(done, total):
            print(f"searched {done}/{total} parts", file=sys.stderr)
    result = search_brackets(bq, ring, prune=not args.no_prune, limit=args.limit, dedup=args.dedup,
                             workers=_threads(args), prefix_length=args.prefix_length, progress=progress)
    docs = [b.to_dict() for b in result.brackets]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(docs))
    summary = result.stats.summary()
    if not result.complete:
        summary += f" (stopped at limit {args.limit})"
    if args.json:
        _emit(args, {"stats": result.stats.to_dict(), "complete": result.complete, "brackets": docs}, "")
    else:
        for b in result.brackets:
            print(b.block_matrix())
            print()
        print(summary)
    return 0


def cmd_functor_check(args) -> int:
    f = load_functor(args.functor_file or args.functor)
    report = check_functor_equations(f, args.chirality)
    if report.ok:
        text = "all functor equations hold (" + ", ".join(f"{k}: {v}" for k, v in report.checked.items()) + ")"
    else:
        lines = ["functor equations fail:"]
        for i in report.issues:
            lines.append(f"  {i.check} at colors {i.colors}: {i.detail}")
        text = "\n".join(lines)
    _emit(args, report.to_dict(), text)
    return 0 if report.ok else 1


def cmd_functor_eval(args) -> int:
    f = load_functor(args.functor)
    rows = []
    for path in args.word:
        word = load_word(path)
        v = evaluate_word(f, word)
        rows.append((str(path), word, v))
    from .bracket import InvariantValue
    ms = InvariantValue.from_values(f.ring, [v for _, _, v in rows])
    doc = {"values": [{"word": p, "value": f.ring.encode(v)} for p, _, v in rows], **ms.to_dict()}
    text = "\n".join(f"{p}: {f.ring.format(v)}" for p, _, v in rows)
    if len(rows) > 1:
        text += f"\nmultiset: {ms.multiset_text()}"
    _emit(args, doc, text)
    return 0


def cmd_fixtures_list(args) -> int:
    names = fixture_names()
    _emit(args, {"fixtures": names}, "\n".join(names))
    return 0


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker processes (default: $BRACKETFORGE_THREADS or 1)")

    p = _Parser(prog="bracketforge", description="Biquandle colorings, brackets and tangle functors.",
                parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(parent, name, func, help_text):
        sp = parent.add_parser(name, help=help_text, parents=[common], description=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add(sub, "check-biquandle", cmd_check_biquandle, "check the biquandle axioms of an operation table")
    sp.add_argument("biquandle_file", nargs="?", metavar="FILE")
    sp.add_argument("--biquandle")

    sp = add(sub, "count", cmd_count, "count colorings of a diagram by a biquandle")
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--biquandle", required=True)
    sp.add_argument("--method", choices=("enumerate", "alexander", "both"), default="enumerate")

    sp = add(sub, "enhance-image", cmd_enhance_image, "image sub-biquandle sizes over all colorings")
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--biquandle", required=True)

    br = sub.add_parser("bracket", help="biquandle bracket commands", parents=[common])
    brs = br.add_subparsers(dest="bracket_command", metavar="action", parser_class=_Parser)
    brs.required = True
    sp = add(brs, "check", cmd_bracket_check, "check the bracket conditions")
    sp.add_argument("bracket_file", nargs="?", metavar="FILE")
    sp.add_argument("--bracket")
    sp = add(brs, "eval", cmd_bracket_eval, "evaluate the bracket invariant of a diagram")
    sp.add_argument("--bracket", required=True)
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--normalization", choices=NORMALIZATIONS, default="unknot",
                    help="loop factor delta^(k-1) (unknot, default) or delta^k (raw)")
    sp = add(brs, "search", cmd_bracket_search, "search for brackets over a biquandle and Z_n")
    sp.add_argument("--biquandle", required=True)
    sp.add_argument("--ring", required=True, help="e.g. Z7")
    sp.add_argument("--limit", type=int)
    sp.add_argument("--out", help="write the brackets found as a JSON list")
    sp.add_argument("--dedup", action="store_true", help="keep one bracket per biquandle relabeling orbit")
    sp.add_argument("--no-prune", action="store_true", help="test every candidate against every condition")
    sp.add_argument("--prefix-length", type=int, default=1, help="A-matrix entries fixed per search part")
    sp.add_argument("--progress", action="store_true")

    fu = sub.add_parser("functor", help="colored tangle functor commands", parents=[common])
    fus = fu.add_subparsers(dest="functor_command", metavar="action", parser_class=_Parser)
    fus.required = True
    sp = add(fus, "check", cmd_functor_check, "check the functor equations")
    sp.add_argument("functor_file", nargs="?", metavar="FILE")
    sp.add_argument("--functor")
    sp.add_argument("--chirality", choices=("left-over", "left-under"), default="left-over")
    sp = add(fus, "eval", cmd_functor_eval, "evaluate closed tangle words")
    sp.add_argument("--functor", required=True)
    sp.add_argument("--word", required=True, action="append", help="word file (repeatable)")

    fx = sub.add_parser("fixtures", help="bundled example inputs", parents=[common])
    fxs = fx.add_subparsers(dest="fixtures_command", metavar="action", parser_class=_Parser)
    fxs.required = True
    add(fxs, "list", cmd_fixtures_list, "list bundled fixtures")
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.json = getattr(args, "json", False)
    args.threads = getattr(args, "threads", None)
    for name in ("biquandle_file", "bracket_file", "functor_file"):
        if hasattr(args, name) and getattr(args, name) is None:
            flag = name.split("_")[0]
            if getattr(args, flag, None) is None:
                print(f"bracketforge: error: give a {flag} file", file=sys.stderr)
                return 2
    try:
        return args.func(args)
    except BracketError as exc:
        print(f"bracketforge: invalid bracket: {exc}", file=sys.stderr)
        return 1
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"bracketforge: error: {msg}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
