"""Command line front door.

Exit codes: 0 success, 1 bad usage, 2 unreadable or malformed input,
3 unexpected internal failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import traceback
from contextlib import ExitStack
from typing import Optional

from .evaluate import evaluate, load_records
from .ingest import ConlluError, parse_conllu
from .lexicon import DEFAULT_THRESHOLD, LexiconError, Lexicon, load_vectors
from .matcher import (MATCH_CAP, MatchError, NodeMatchContext, diagnose,
                      explain_match, subgraph_match)
from .graph import predicates_text
from .pipeline import (build_discourse, load_rule_set, run_extraction,
                       write_relations)
from .rules import RuleError

USAGE_EXIT = 1
INPUT_EXIT = 2
INTERNAL_EXIT = 3

_INPUT_ERRORS = (ConlluError, RuleError, LexiconError, MatchError,
                 FileNotFoundError, IsADirectoryError, PermissionError,
                 ValueError)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; this tool reserves 2 for bad input
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _build_parser() -> _Parser:
    parser = _Parser(prog="semrex",
                     description="Rule-programmable relation extraction over "
                                 "dependency-parsed text.")
    parser.add_argument("--verbose", action="store_true",
                        help="log transform warnings and match progress")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    ex = sub.add_parser("extract", help="run rules over parsed documents")
    _common_rule_args(ex)
    ex.add_argument("--dump-graph", metavar="PATH",
                    help="also write every document graph, as predicates")
    ex.add_argument("--out", metavar="PATH",
                    help="relations file (JSON lines); default stdout")
    ex.add_argument("--limit", type=int, default=MATCH_CAP,
                    help="per-rule binding cap (default %(default)s)")
    ex.add_argument("--workers", type=int, default=1,
                    help="rules matched in parallel per document")
    ex.set_defaults(func=_cmd_extract)

    expl = sub.add_parser("explain", help="show why one rule matches")
    _common_rule_args(expl)
    expl.add_argument("--rule", type=int, required=True, metavar="N",
                      help="rule number, counting MATCH statements from 1")
    expl.set_defaults(func=_cmd_explain)

    ev = sub.add_parser("eval", help="score predictions against a gold file")
    ev.add_argument("--pred", required=True, metavar="PATH")
    ev.add_argument("--gold", required=True, metavar="PATH")
    ev.add_argument("--json", action="store_true", help="machine-readable report")
    ev.set_defaults(func=_cmd_eval)
    return parser


def _common_rule_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rules", required=True, metavar="PATH",
                   help="rule file (.rex)")
    p.add_argument("--parses", metavar="PATH",
                   help="pre-parsed rule clauses; default <rules>.conllu")
    p.add_argument("--input", required=True, metavar="PATH",
                   action="extend", nargs="+", default=[],
                   help="parsed documents, repeatable")
    p.add_argument("--vectors", metavar="PATH",
                   help="word vector table; without it matching is exact")
    p.add_argument("--threshold", type=float, default=None,
                   help=f"similarity cutoff (default {DEFAULT_THRESHOLD})")


def _cmd_extract(args) -> int:
    with ExitStack() as stack:
        dump = None
        if args.dump_graph:
            dump = stack.enter_context(open(args.dump_graph, "w", encoding="utf-8"))
        out = sys.stdout
        if args.out:
            out = stack.enter_context(open(args.out, "w", encoding="utf-8"))
        edges = run_extraction(
            rules_path=args.rules, input_paths=args.input,
            vectors_path=args.vectors, parses_path=args.parses,
            threshold=args.threshold, limit=args.limit, workers=args.workers,
            dump_graph=dump)
        write_relations(edges, out)
    return 0


def _cmd_explain(args) -> int:
    threshold = DEFAULT_THRESHOLD if args.threshold is None else args.threshold
    if args.vectors:
        lexicon = load_vectors(args.vectors, threshold=threshold)
    else:
        lexicon = Lexicon.empty(threshold=threshold)
    definitions, rules = load_rule_set(args.rules, args.parses)
    if not 1 <= args.rule <= len(rules):
        raise RuleError(f"--rule must be between 1 and {len(rules)}")
    rule = rules[args.rule - 1]
    print(f"rule {rule.rule_id}: CREATE ({rule.create_label} "
          f"{rule.head_ref} {rule.tail_ref})")
    print(f"query: {predicates_text(rule.query)}")

    ctx = NodeMatchContext(lexicon, definitions)
    total = 0
    for path in args.input:
        for doc in parse_conllu(path):
            graph = build_discourse(doc)
            bindings = subgraph_match(rule.query, graph, ctx)
            for binding in bindings:
                total += 1
                print(f"\nmatch {total} in {doc.doc_id}:")
                for line in explain_match(rule, graph, binding):
                    print(line)
            if not bindings:
                print(f"\nno match in {doc.doc_id}:")
                for line in diagnose(rule.query, graph, ctx):
                    print(f"  {line}")
    if total == 0:
        print("\nno matches")
    return 0


def _cmd_eval(args) -> int:
    report = evaluate(load_records(args.pred), load_records(args.gold))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(report.table())
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"semrex: error: {exc}", file=sys.stderr)
        return INPUT_EXIT
    except BrokenPipeError:
        return 0
    except Exception:
        traceback.print_exc()
        return INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
