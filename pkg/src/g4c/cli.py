"""Command-line front end: lint, check, prove, implications, serve.

The knowledge-base path resolves from the G4C_KB environment variable when
set (it overrides the command-line argument), otherwise from the positional
argument, defaulting to the current directory.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

from .kb import (
    KBLoadError,
    KnowledgeBase,
    consistency_report,
    duplicate_condition_pairs,
    evaluate_all,
    implication_matrix,
    load_kb,
)
from .kleene import CompanyProfile, ProfileError
from .prover import Sequent, prove, validate_derivation
from .render import (
    render_derivation_html,
    render_derivation_text,
    render_eval_trace_text,
)
from .serialize import consistency_json, implication_json, result_json

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def resolve_kb_path(arg: str | None) -> str:
    return os.environ.get("G4C_KB") or arg or "."


def _load(kb_path: str) -> KnowledgeBase:
    return load_kb(kb_path)


def cmd_lint(args: argparse.Namespace) -> int:
    path = resolve_kb_path(args.kb)
    try:
        kb = _load(path)
    except KBLoadError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE if exc.parse_failure else EXIT_FAIL
    for w in kb.warnings:
        print(f"warning: {w}")
    print(f"{len(kb.grants)} grants, {len(kb.concepts)} concepts, "
          f"{len(kb.source_files)} files")
    bad = 0
    for entry in consistency_report(kb):
        if not entry.consistent:
            bad += 1
            print(f"INCONSISTENT: {entry.grant}")
            print(render_derivation_text(entry.refutation))
    for a, b in duplicate_condition_pairs(kb):
        print(f"duplicate conditions: {a!r} and {b!r}")
    if bad:
        return EXIT_FAIL
    print("ok: all grants consistent")
    return EXIT_OK


_VERDICT_LABEL = {
    "satisfied": "satisfied",
    "undecided": "undecided",
    "not_satisfied": "not satisfied",
}


def cmd_check(args: argparse.Namespace) -> int:
    path = resolve_kb_path(args.kb)
    try:
        kb = _load(path)
        profile = CompanyProfile.from_file(args.profile)
    except (KBLoadError, ProfileError, OSError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    at_date = None
    if args.date:
        try:
            at_date = datetime.date.fromisoformat(args.date)
        except ValueError:
            print(f"bad --date {args.date!r}, want YYYY-MM-DD", file=sys.stderr)
            return EXIT_USAGE
    results = evaluate_all(kb, profile, category=args.category, at_date=at_date)

    if args.json:
        print(json.dumps([result_json(r) for r in results], ensure_ascii=False, indent=2))
        return EXIT_OK

    for r in results:
        g = r.grant
        dates = ""
        if g.valid_from or g.valid_to:
            dates = f" [{g.valid_from or '...'} .. {g.valid_to or '...'}]"
        cats = f" ({', '.join(g.categories)})" if g.categories else ""
        print(f"{_VERDICT_LABEL[r.verdict.value]:>14}  {g.name}{cats}{dates}")

    if args.explain:
        try:
            grant = kb.grant(args.explain)
        except KeyError:
            print(f"unknown grant: {args.explain!r}", file=sys.stderr)
            return EXIT_USAGE
        match = next(r for r in results if r.grant.name == grant.name)
        print()
        print(render_eval_trace_text(match.trace))
    return EXIT_OK


def cmd_prove(args: argparse.Namespace) -> int:
    path = resolve_kb_path(args.kb)
    try:
        kb = _load(path)
    except KBLoadError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        g_from = kb.grant(args.from_grant)
        g_to = kb.grant(args.to_grant)
    except KeyError as exc:
        print(f"unknown grant: {exc.args[0]!r}", file=sys.stderr)
        return EXIT_USAGE
    derivation = prove(Sequent((g_from.conditions,), (g_to.conditions,)), kb.concepts)
    if derivation is None:
        print(f"not derivable: conditions of {g_from.name!r} do not imply "
              f"conditions of {g_to.name!r}")
        return EXIT_FAIL
    assert validate_derivation(derivation, kb.concepts)
    print(render_derivation_text(derivation))
    if args.html:
        Path(args.html).write_text(render_derivation_html(derivation), encoding="utf-8")
        print(f"\nHTML written to {args.html}")
    return EXIT_OK


def cmd_implications(args: argparse.Namespace) -> int:
    path = resolve_kb_path(args.kb)
    try:
        kb = _load(path)
    except KBLoadError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    edges = implication_matrix(kb)
    dups = duplicate_condition_pairs(kb)
    if args.json:
        payload = {
            "edges": [implication_json(e) for e in edges],
            "duplicates": [list(p) for p in dups],
        }
        print(json.dumps(payload, ensure_ascii=False, indent=2))
        return EXIT_OK
    if not edges:
        print("no implications between distinct grant conditions")
    for e in edges:
        print(f"{e.source!r}  implies  {e.target!r}")
    for a, b in dups:
        print(f"duplicate conditions: {a!r} and {b!r}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    path = resolve_kb_path(args.kb)
    app = create_app(path, assets_path=args.assets)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="g4c",
        description="Evaluate and reason about formalised business-grant conditions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lint", help="parse the KB, check acyclicity and consistency")
    p.add_argument("kb", nargs="?", help="knowledge-base directory (default: $G4C_KB or .)")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("check", help="evaluate all grants against a company profile")
    p.add_argument("kb", nargs="?")
    p.add_argument("profile", help="company profile JSON file")
    p.add_argument("--category", help="only grants in this Fördergebiet")
    p.add_argument("--date", help="only grants applicable on this date (YYYY-MM-DD)")
    p.add_argument("--json", action="store_true", help="emit the result array as JSON")
    p.add_argument("--explain", metavar="GRANT", help="print the evaluation trace of one grant")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("prove", help="prove that one grant's conditions imply another's")
    p.add_argument("kb", nargs="?")
    p.add_argument("from_grant", metavar="from")
    p.add_argument("to_grant", metavar="to")
    p.add_argument("--html", metavar="OUT", help="also write the derivation as HTML")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("implications", help="pairwise implication matrix over the KB")
    p.add_argument("kb", nargs="?")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_implications)

    p = sub.add_parser("serve", help="run the JSON API (and console assets if given)")
    p.add_argument("kb", nargs="?")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8040)
    p.add_argument("--assets", help="static asset directory for the analyst console")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
