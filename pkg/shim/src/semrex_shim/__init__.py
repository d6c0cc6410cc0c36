"""Raw text to parsed input files, with a deterministic builtin backend."""

from .annotate import annotate_document, annotate_sentence, split_sentences
from .rules import GrammarError, annotate_rules, clause_hash

__all__ = ["annotate_document", "annotate_sentence", "split_sentences",
           "GrammarError", "annotate_rules", "clause_hash"]

__version__ = "0.1.0"
