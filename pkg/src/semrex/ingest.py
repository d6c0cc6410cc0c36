"""Reading and writing the 10-column CoNLL-U interchange format.

Input files are standard CoNLL-U with two extras carried in MISC:
``NER=<label>`` (Ontonotes entity type) and ``Coref=<int>`` (coreference
cluster id). ``# newdoc id = <doc>`` starts a document, ``# sent_id = <id>``
names a sentence, a blank line ends one.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Optional

log = logging.getLogger(__name__)

UPOS_TAGS = frozenset({
    "NOUN", "PROPN", "VERB", "AUX", "ADJ", "ADV", "ADP", "PRON",
    "DET", "CCONJ", "SCONJ", "PART", "NUM", "PUNCT", "X",
})

ONTONOTES_LABELS = frozenset({
    "PERSON", "NORP", "FAC", "ORG", "GPE", "LOC", "PRODUCT", "EVENT",
    "WORK_OF_ART", "LAW", "LANGUAGE", "DATE", "TIME", "PERCENT", "MONEY",
    "QUANTITY", "ORDINAL", "CARDINAL",
})

_COLUMNS = 10


class ConlluError(ValueError):
    """Malformed input: bad columns, bad field values."""


class StructuralError(ConlluError):
    """A sentence whose head pointers do not form a tree."""


@dataclass
class Token:
    index: int            # 1-based position in the sentence
    surface: str
    lemma: str
    upos: str
    head: int             # 0 for the root
    deprel: str
    ner: Optional[str] = None
    coref: Optional[int] = None
    # Original token index range, set when named entity runs are merged.
    span: Optional[tuple[int, int]] = None

    @property
    def orig_span(self) -> tuple[int, int]:
        return self.span if self.span is not None else (self.index, self.index)


@dataclass
class DependencyTree:
    doc_id: str
    sent_id: str
    tokens: list[Token]
    meta: dict[str, str] = field(default_factory=dict)

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]


@dataclass
class Document:
    doc_id: str
    sentences: list[DependencyTree]


def validate_tree(tree: DependencyTree) -> Optional[str]:
    """Return a description of the first structural violation, or None."""
    n = len(tree.tokens)
    roots = 0
    for tok in tree.tokens:
        if tok.head < 0 or tok.head > n:
            return f"token {tok.index}: head {tok.head} out of range"
        if tok.head == tok.index:
            return f"token {tok.index}: token is its own head"
        if tok.head == 0:
            roots += 1
    if n and roots == 0:
        return "no root token"
    if roots > 1:
        return f"{roots} root tokens, expected exactly one"
    for tok in tree.tokens:
        seen = set()
        cur = tok.index
        while cur != 0:
            if cur in seen:
                return f"token {tok.index}: cyclic head chain"
            seen.add(cur)
            cur = tree.tokens[cur - 1].head
    return None


def _parse_misc(text: str, lineno: int) -> tuple[Optional[str], Optional[int]]:
    ner: Optional[str] = None
    coref: Optional[int] = None
    if text == "_":
        return ner, coref
    for item in text.split("|"):
        if "=" not in item:
            raise ConlluError(f"line {lineno}: bad MISC item {item!r}")
        key, value = item.split("=", 1)
        if key == "NER":
            if value not in ONTONOTES_LABELS:
                log.warning("line %d: unknown NER label %r, keeping it verbatim",
                            lineno, value)
            ner = value
        elif key == "Coref":
            try:
                coref = int(value)
            except ValueError:
                raise ConlluError(f"line {lineno}: bad Coref id {value!r}") from None
        # other MISC keys (SpaceAfter etc.) are tolerated and dropped
    return ner, coref


def _parse_token(line: str, lineno: int) -> Token:
    cols = line.split("\t")
    if len(cols) != _COLUMNS:
        raise ConlluError(f"line {lineno}: expected {_COLUMNS} columns, got {len(cols)}")
    idx_text, form, lemma, upos, _xpos, _feats, head_text, deprel, _deps, misc = cols
    if not idx_text.isdigit():
        raise ConlluError(f"line {lineno}: unsupported token id {idx_text!r}")
    if upos not in UPOS_TAGS:
        raise ConlluError(f"line {lineno}: unknown upos {upos!r}")
    try:
        head = int(head_text)
    except ValueError:
        raise ConlluError(f"line {lineno}: bad head {head_text!r}") from None
    if lemma == "_" or not lemma:
        lemma = form
    # Proper nouns keep their casing; everything else is lowercased.
    if upos != "PROPN":
        lemma = lemma.lower()
    ner, coref = _parse_misc(misc, lineno)
    return Token(index=int(idx_text), surface=form, lemma=lemma, upos=upos,
                 head=head, deprel=deprel, ner=ner, coref=coref)


def parse_conllu(source: "str | Path | IO[str]") -> list[Document]:
    """Parse a CoNLL-U stream into documents.

    Sentences appearing before any ``# newdoc`` comment are grouped into an
    implicit document with id ``doc0``. Structural problems raise
    StructuralError naming the sentence; malformed lines raise ConlluError
    naming the line.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return parse_conllu(handle)

    documents: list[Document] = []
    current_doc: Optional[Document] = None
    pending_sent_id: Optional[str] = None
    pending_meta: dict[str, str] = {}
    tokens: list[Token] = []
    sent_ordinal = 0
    block_start = 0

    def ensure_doc() -> Document:
        nonlocal current_doc
        if current_doc is None:
            current_doc = Document(doc_id="doc0", sentences=[])
            documents.append(current_doc)
        return current_doc

    def close_sentence(lineno: int) -> None:
        nonlocal tokens, pending_sent_id, pending_meta, sent_ordinal
        if not tokens:
            pending_sent_id = None
            pending_meta = {}
            return
        doc = ensure_doc()
        sent_ordinal += 1
        sent_id = pending_sent_id or f"s{sent_ordinal}"
        for pos, tok in enumerate(tokens, start=1):
            if tok.index != pos:
                raise ConlluError(
                    f"line {block_start}: token ids not contiguous in sentence {sent_id}")
        tree = DependencyTree(doc_id=doc.doc_id, sent_id=sent_id,
                              tokens=tokens, meta=pending_meta)
        problem = validate_tree(tree)
        if problem:
            raise StructuralError(f"sentence {sent_id}: {problem}")
        doc.sentences.append(tree)
        tokens = []
        pending_sent_id = None
        pending_meta = {}

    lineno = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            close_sentence(lineno)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" not in body:
                continue  # free-form comment
            key, value = (part.strip() for part in body.split("=", 1))
            if key == "newdoc id":
                close_sentence(lineno)
                current_doc = Document(doc_id=value, sentences=[])
                documents.append(current_doc)
                sent_ordinal = 0
            elif key == "sent_id":
                pending_sent_id = value
            else:
                pending_meta[key] = value
            continue
        if not tokens:
            block_start = lineno
        tokens.append(_parse_token(line, lineno))
    close_sentence(lineno + 1)
    return documents


def _misc_text(tok: Token) -> str:
    items = []
    if tok.ner is not None:
        items.append(f"NER={tok.ner}")
    if tok.coref is not None:
        items.append(f"Coref={tok.coref}")
    return "|".join(items) if items else "_"


def to_conllu(documents: Iterable[Document]) -> str:
    """Serialize documents back to CoNLL-U+; inverse of parse_conllu."""
    out = io.StringIO()
    for doc in documents:
        out.write(f"# newdoc id = {doc.doc_id}\n")
        for tree in doc.sentences:
            out.write(f"# sent_id = {tree.sent_id}\n")
            for key, value in tree.meta.items():
                out.write(f"# {key} = {value}\n")
            for tok in tree.tokens:
                cols = (str(tok.index), tok.surface, tok.lemma, tok.upos, "_", "_",
                        str(tok.head), tok.deprel, "_", _misc_text(tok))
                out.write("\t".join(cols) + "\n")
            out.write("\n")
    return out.getvalue()
