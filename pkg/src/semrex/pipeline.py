"""End-to-end wiring: parsed documents in, relation records out."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import IO, Optional, Union

from .coref import clusters_from_document, link_corefs
from .graph import Graph, predicates_text
from .ingest import Document, parse_conllu
from .lexicon import DEFAULT_THRESHOLD, Definition, Lexicon, load_vectors
from .matcher import (MATCH_CAP, NodeMatchContext, RelationEdge, apply_rules)
from .rules import ParseProvider, Rule, compile_rules, parse_rule_file
from .semantics import TransformConfig, build_document_graph

log = logging.getLogger(__name__)


def build_discourse(doc: Document, cfg: Optional[TransformConfig] = None) -> Graph:
    """Document -> frozen discourse graph with coreference links."""
    graph = build_document_graph(doc, cfg)
    graph = link_corefs(graph, clusters_from_document(doc))
    return graph.freeze()


def load_rule_set(rules_path: Union[str, Path],
                  parses_path: Union[str, Path, None] = None,
                  cfg: Optional[TransformConfig] = None,
                  ) -> tuple[list[Definition], list[Rule]]:
    """Load and compile a rule file.

    The companion parse file defaults to ``<rules file>.conllu`` next to the
    rule file itself.
    """
    rules_path = Path(rules_path)
    if parses_path is None:
        parses_path = rules_path.with_name(rules_path.name + ".conllu")
    definitions, sources = parse_rule_file(rules_path)
    provider = ParseProvider.from_file(parses_path)
    return definitions, compile_rules(sources, definitions, provider, cfg)


def extract(documents: list[Document], rules: list[Rule],
            definitions: list[Definition], lexicon: Lexicon,
            cfg: Optional[TransformConfig] = None,
            limit: int = MATCH_CAP, workers: int = 1,
            dump_graph: Optional[IO[str]] = None) -> list[RelationEdge]:
    """Run every rule over every document; relations come back fully sorted."""
    ctx = NodeMatchContext(lexicon, definitions)
    edges: list[RelationEdge] = []
    for doc in documents:
        graph = build_discourse(doc, cfg)
        if dump_graph is not None:
            dump_graph.write(f"# {doc.doc_id}\n{predicates_text(graph)}\n\n")
        edges.extend(apply_rules(graph, rules, ctx, doc.doc_id,
                                 limit=limit, workers=workers))
    edges.sort()
    return edges


def relation_to_dict(edge: RelationEdge) -> dict:
    return {
        "doc_id": edge.doc_id,
        "relation": edge.label,
        "head": {"text": edge.head_text, "node": str(edge.head)},
        "tail": {"text": edge.tail_text, "node": str(edge.tail)},
        "rule_id": edge.rule_id,
    }


def write_relations(edges: list[RelationEdge], out: IO[str]) -> None:
    for edge in edges:
        out.write(json.dumps(relation_to_dict(edge), ensure_ascii=False) + "\n")


def run_extraction(rules_path: Union[str, Path],
                   input_paths: list[Union[str, Path]],
                   vectors_path: Union[str, Path, None] = None,
                   parses_path: Union[str, Path, None] = None,
                   threshold: Optional[float] = None,
                   limit: int = MATCH_CAP, workers: int = 1,
                   dump_graph: Optional[IO[str]] = None) -> list[RelationEdge]:
    """The extract command in library form."""
    threshold = DEFAULT_THRESHOLD if threshold is None else threshold
    if vectors_path is not None:
        lexicon = load_vectors(vectors_path, threshold=threshold)
    else:
        lexicon = Lexicon.empty(threshold=threshold)
    definitions, rules = load_rule_set(rules_path, parses_path)
    documents: list[Document] = []
    for path in input_paths:
        documents.extend(parse_conllu(path))
    return extract(documents, rules, definitions, lexicon,
                   limit=limit, workers=workers, dump_graph=dump_graph)
