"""semrex: rule-programmable relation extraction over discourse graphs.

Parsed English goes in (CoNLL-U with entity and coreference columns), a
graph of events, referents and roles comes out, and MATCH rules written in
plain English are compiled into query graphs and matched against it.
"""

from .ingest import (ConlluError, DependencyTree, Document, StructuralError,
                     Token, parse_conllu, to_conllu)
from .graph import (Graph, GraphError, NodeId, SemEdge, SourceRef, WordNode,
                    predicates_text, to_dot, to_predicates)
from .lexicon import (DEFAULT_THRESHOLD, Definition, Lexicon, LexiconError,
                      WordSpec, best_member_similarity, definition_match,
                      load_vectors, word_match)
from .semantics import (TransformConfig, build_document_graph,
                        build_sentence_graph)
from .coref import CorefCluster, Mention, clusters_from_document, link_corefs
from .rules import (ParseProvider, Rule, RuleError, RuleSource, clause_hash,
                    compile_rule, compile_rules, parse_rule_file,
                    strip_markers)
from .matcher import (MATCH_CAP, MatchCapExceeded, MatchError,
                      NodeMatchContext, RelationEdge, apply_rules, diagnose,
                      explain_match, subgraph_match, verify_binding)
from .evaluate import EvalReport, RelationRecord, evaluate, load_records, prf
from .pipeline import (build_discourse, extract, load_rule_set,
                       relation_to_dict, run_extraction, write_relations)

__version__ = "0.1.0"

__all__ = [
    "ConlluError", "DependencyTree", "Document", "StructuralError", "Token",
    "parse_conllu", "to_conllu",
    "Graph", "GraphError", "NodeId", "SemEdge", "SourceRef", "WordNode",
    "predicates_text", "to_dot", "to_predicates",
    "DEFAULT_THRESHOLD", "Definition", "Lexicon", "LexiconError", "WordSpec",
    "best_member_similarity", "definition_match", "load_vectors", "word_match",
    "TransformConfig", "build_document_graph", "build_sentence_graph",
    "CorefCluster", "Mention", "clusters_from_document", "link_corefs",
    "ParseProvider", "Rule", "RuleError", "RuleSource", "clause_hash",
    "compile_rule", "compile_rules", "parse_rule_file", "strip_markers",
    "MATCH_CAP", "MatchCapExceeded", "MatchError", "NodeMatchContext",
    "RelationEdge", "apply_rules", "diagnose", "explain_match",
    "subgraph_match", "verify_binding",
    "EvalReport", "RelationRecord", "evaluate", "load_records", "prf",
    "build_discourse", "extract", "load_rule_set", "relation_to_dict",
    "run_extraction", "write_relations",
    "__version__",
]
