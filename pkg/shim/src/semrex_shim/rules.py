"""Companion parse generation for rule files.

Reads the rule grammar just far enough to pull out every MATCH pattern,
then annotates each pattern sentence with slot tokens pinned as proper
nouns. The clause hash is computed here from its published recipe
(markers stripped, lowercased, whitespace collapsed, first 16 hex chars
of the SHA-256) rather than imported, so this package stays independent
of the consumer; the test suite cross-checks the two implementations.
"""

from __future__ import annotations

import hashlib
import re
from pathlib import Path

from .annotate import Token, annotate_sentence, render, split_sentences

__all__ = ["GrammarError", "annotate_rules", "clause_hash",
           "read_rule_file", "strip_markers"]

HASH_LENGTH = 16

# bare entity labels double as typed slots even without a DEFINE
ENTITY_LABELS = {
    "PERSON", "NORP", "FAC", "ORG", "GPE", "LOC", "PRODUCT", "EVENT",
    "WORK_OF_ART", "LAW", "LANGUAGE", "DATE", "TIME", "PERCENT", "MONEY",
    "QUANTITY", "ORDINAL", "CARDINAL",
}

_MARKER = re.compile(r"#(\d+)")


class GrammarError(ValueError):
    """The rule file does not follow the grammar."""


def strip_markers(text: str) -> str:
    return _MARKER.sub("", text)


def clause_hash(text: str) -> str:
    normalized = " ".join(strip_markers(text).lower().split())
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()[:HASH_LENGTH]


def _strip_comments(text: str) -> str:
    """Drop # comments, respecting quoted strings."""
    out = []
    in_string = False
    for line_no, line in enumerate(text.split("\n"), start=1):
        kept = []
        for ch in line:
            if ch == '"':
                in_string = not in_string
            elif ch == "#" and not in_string:
                break
            kept.append(ch)
        if in_string:
            raise GrammarError(f"line {line_no}: unterminated string")
        out.append("".join(kept))
    return "\n".join(out)


_DEFINE = re.compile(
    r"DEFINE\s+([A-Za-z_][A-Za-z0-9_]*)\s+AS\s+"
    r"(\[[^\]]*\]|\{[^}]*\})\s*;", re.DOTALL)
_MATCH = re.compile(
    r'MATCH\s+"([^"]*)"\s*CREATE\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)'
    r"\s+(\d+)\s+(\d+)\s*\)\s*;", re.DOTALL)


def read_rule_file(text: str) -> tuple[list[str], list[str]]:
    """Slot names and MATCH patterns from rule file text.

    Validates that the whole file is a sequence of well-formed DEFINE and
    MATCH statements; anything left over is a grammar error reported with
    its line number.
    """
    text = _strip_comments(text)
    names: list[str] = []
    patterns: list[str] = []
    pos = 0
    while True:
        rest = text[pos:]
        if not rest.strip():
            break
        offset = len(rest) - len(rest.lstrip())
        here = pos + offset
        define = _DEFINE.match(text, here)
        if define:
            names.append(define.group(1))
            pos = define.end()
            continue
        match = _MATCH.match(text, here)
        if match:
            patterns.append(match.group(1))
            pos = match.end()
            continue
        line = text.count("\n", 0, here) + 1
        snippet = text[here:here + 24].split("\n")[0]
        raise GrammarError(f"line {line}: cannot read statement at {snippet!r}")
    return names, patterns


def annotate_rules(text: str) -> str:
    """Rule file text to its companion parse file.

    One sentence group per MATCH pattern, each sentence carrying the
    pattern's clause hash; a zero-rule file yields an empty companion.
    """
    names, patterns = read_rule_file(text)
    slots = frozenset(names) | ENTITY_LABELS

    sentences: list[list[Token]] = []
    meta: list[list[str]] = []
    for pattern in patterns:
        digest = clause_hash(pattern)
        for sentence in split_sentences(strip_markers(pattern)):
            sentences.append(
                annotate_sentence(sentence, slots=slots, with_entities=False))
            meta.append([f"# clause_hash = {digest}"])
    return render(sentences, doc_id=None, prefix="q", extra_meta=meta)


def annotate_rules_file(path: "str | Path") -> str:
    return annotate_rules(Path(path).read_text(encoding="utf-8"))
