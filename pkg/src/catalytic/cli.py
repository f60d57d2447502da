"""Command-line interface: solve, guess, prove, recheck, rec."""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .algebra.rational import rat
from .errors import CatalyticError
from .frontend import load_equation_file
from .guessing import guess_recurrence
from .pipeline import (
    EXIT_CERTIFIED,
    EXIT_USAGE,
    PipelineConfig,
    dumps,
    exit_code_for,
    recheck,
    run_pipeline,
)
from .recurrence import closed_form_from_recurrence
from .verify import CERTIFIED, INCONCLUSIVE, REFUTED

_VERDICT_EXIT = {CERTIFIED: 0, REFUTED: 1, INCONCLUSIVE: 2}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catalytic", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, equations=True):
        if equations:
            p.add_argument("files", nargs="+", help="equation files (.feq)")
        p.add_argument("--order", type=_positive, help="working order N (default: file value or 60)")
        p.add_argument("--max-deg-q", type=_positive, help="guesser bound on deg_Q I (default 8)")
        p.add_argument("--max-deg-x", type=_positive, help="guesser bound on deg_x I (default 8)")
        p.add_argument("--margin", type=_nonnegative, default=10, help="equations minus unknowns required")
        p.add_argument("--out", help="write JSON here (a directory when several files are given)")
        p.add_argument("--json", action="store_true", help="print JSON instead of the text report")
        p.add_argument("--jobs", type=_positive, default=1, help="process equation files in parallel")

    for name, helptext in (
        ("solve", "series solution only"),
        ("guess", "series and the guessed I(Q, x)"),
        ("prove", "full chain with certificate"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--rec-order", type=_positive, default=6)
        p.add_argument("--rec-deg", type=_positive, default=6)
        p.add_argument("--slow-path-3var", action="store_true", help="also guess G(P, x, t) and compare")

    p = sub.add_parser("recheck", help="re-verify a certificate file")
    p.add_argument("certificate")

    p = sub.add_parser("rec", help="recurrence and closed form from a coefficient list")
    p.add_argument("coefficients", help="file with rationals separated by commas or whitespace, or a JSON list")
    p.add_argument("--rec-order", type=_positive, default=6)
    p.add_argument("--rec-deg", type=_positive, default=6)
    p.add_argument("--margin", type=_nonnegative, default=10)
    p.add_argument("--json", action="store_true")
    return parser


def _config_for(args, spec) -> PipelineConfig:
    return PipelineConfig(
        order=args.order or spec.order,
        max_deg_q=args.max_deg_q or spec.max_deg_Q,
        max_deg_x=args.max_deg_x or spec.max_deg_x,
        margin=args.margin,
        rec_order=args.rec_order,
        rec_deg=args.rec_deg,
        slow_path_3var=args.slow_path_3var,
    )


def _run_one(task):
    command, path, args = task
    try:
        spec = load_equation_file(path)
    except Exception as exc:
        return path, None, f"{path}: {type(exc).__name__}: {exc}\n", exit_code_for(exc)
    result = run_pipeline(_config_for(args, spec), spec, stop_after=command)
    return path, result.dumps(), result.report, result.exit_code


def _cmd_pipeline(args) -> int:
    tasks = [(args.command, f, args) for f in args.files]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    out = Path(args.out) if args.out else None
    if out is not None and len(results) > 1:
        out.mkdir(parents=True, exist_ok=True)
    for path, doc, report, _ in results:
        if doc is not None and out is not None:
            target = out / (Path(path).stem + ".json") if len(results) > 1 else out
            target.write_text(doc, encoding="utf-8")
        sys.stdout.write(doc if (args.json and doc is not None) else report)
    return max(code for *_, code in results)


def _cmd_recheck(args) -> int:
    try:
        document = json.loads(Path(args.certificate).read_text(encoding="utf-8"))
        verdict = recheck(document)
    except Exception as exc:
        print(f"recheck failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    print(f"verdict: {verdict}")
    return _VERDICT_EXIT[verdict]


def read_coefficients(text: str) -> list:
    text = text.strip()
    if text.startswith("["):
        return [rat(str(v)) for v in json.loads(text)]
    return [rat(tok) for tok in re.split(r"[,\s]+", text) if tok]


def _cmd_rec(args) -> int:
    try:
        values = read_coefficients(Path(args.coefficients).read_text(encoding="utf-8"))
    except Exception as exc:
        print(f"cannot read coefficients: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rec = guess_recurrence(values, args.rec_order, args.rec_deg, args.margin).without_common_factor()
    except CatalyticError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    doc = {"schema": 1, "terms": len(values), "recurrence": rec.to_json(), "closed_form": None}
    if rec.order == 1:
        try:
            doc["closed_form"] = closed_form_from_recurrence(rec, values).to_json()
        except ValueError as exc:
            doc["closed_form_note"] = str(exc)
    if args.json:
        sys.stdout.write(dumps(doc))
    else:
        print(f"recurrence: {rec} (n >= {rec.offset})")
        cf = doc["closed_form"]
        if cf:
            print(f"closed form: {cf['product_form']}")
            for key in ("pochhammer_form", "factorial_form"):
                if cf.get(key):
                    print(f"  {cf[key]}")
    return EXIT_CERTIFIED


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.command == "recheck":
        return _cmd_recheck(args)
    if args.command == "rec":
        return _cmd_rec(args)
    return _cmd_pipeline(args)


if __name__ == "__main__":
    sys.exit(main())
