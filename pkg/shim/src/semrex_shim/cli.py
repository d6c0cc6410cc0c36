"""Command line front end.

    semrex-shim annotate --in letters.txt --out letters.conllu
    semrex-shim annotate --in dates.rex --out dates.rex.conllu --mode rules

Document mode turns raw text into a parsed document; rules mode turns a
rule file into its companion parse file. Exit status 0 on success, 1 on
unreadable input or a rule grammar error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .annotate import annotate_document
from .rules import GrammarError, annotate_rules


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semrex-shim")
    commands = parser.add_subparsers(dest="command", required=True)

    annotate = commands.add_parser(
        "annotate", help="annotate a text or rule file")
    annotate.add_argument("--in", dest="source", required=True,
                          metavar="FILE", help="input text or rule file")
    annotate.add_argument("--out", dest="target", required=True,
                          metavar="FILE", help="output parse file")
    annotate.add_argument("--mode", choices=("document", "rules"),
                          default="document")
    annotate.add_argument("--doc-id", default=None,
                          help="document id (default: input file stem)")
    return parser


def main(argv: "list[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.source).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"semrex-shim: {exc}", file=sys.stderr)
        return 1

    if args.mode == "rules":
        try:
            output = annotate_rules(text)
        except GrammarError as exc:
            print(f"semrex-shim: {args.source}: {exc}", file=sys.stderr)
            return 1
    else:
        doc_id = args.doc_id or Path(args.source).stem
        output = annotate_document(text, doc_id=doc_id)

    try:
        Path(args.target).write_text(output, encoding="utf-8")
    except OSError as exc:
        print(f"semrex-shim: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
