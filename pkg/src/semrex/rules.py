"""The rule language and its compiler.

A rule file holds DEFINE statements (named word clusters) and MATCH rules::

    DEFINE ROLE AS [carpenter, painter];
    MATCH "PERSON#1 works as a ROLE#2." CREATE (works_as 1 2);

The quoted pattern is plain English. ``#n`` marks bind the preceding word to
a CREATE placeholder. Tokens naming a Definition become cluster slots, bare
entity labels (PERSON, ORG, ...) become typed wildcard slots. Patterns are
never parsed here: a companion CoNLL-U file supplies one parse per clause,
keyed by a hash of the normalized clause text. The same slot surface used in
two sentences of one pattern denotes one query node.
"""

from __future__ import annotations

import hashlib
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Optional

from .graph import Graph, IdAllocator, NodeId, union
from .ingest import ONTONOTES_LABELS, DependencyTree, parse_conllu
from .lexicon import Definition, LexiconError
from .semantics import TransformConfig, build_sentence_graph

log = logging.getLogger(__name__)

HASH_LENGTH = 16
CLAUSE_HASH_KEY = "clause_hash"

_MARKER = re.compile(r"#(\d+)")
_WORD_OR_MARKER = re.compile(r"([A-Za-z0-9_]+)(#\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class RuleError(ValueError):
    """Bad rule file syntax or an uncompilable rule."""


@dataclass(frozen=True)
class RuleSource:
    """One MATCH statement as written."""

    rule_id: int          # 1-based position in the file
    match_text: str
    create_label: str
    head_ref: int
    tail_ref: int

    def __post_init__(self):
        if self.head_ref == self.tail_ref:
            raise RuleError(
                f"rule {self.rule_id}: CREATE uses placeholder {self.head_ref} twice")


@dataclass
class Rule:
    """A compiled rule: a frozen query graph plus the edge to create."""

    rule_id: int
    query: Graph
    create_label: str
    head_ref: int
    tail_ref: int

    def node_with_placeholder(self, ref: int) -> NodeId:
        for node in self.query.nodes():
            if node.placeholder == ref:
                return node.id
        raise RuleError(f"rule {self.rule_id}: no node carries placeholder {ref}")


# -- clause text handling ---------------------------------------------------

def strip_markers(text: str) -> str:
    """Remove ``#n`` marks, leaving the plain English clause."""
    return _MARKER.sub("", text)


def clause_hash(text: str) -> str:
    """Stable identifier of a clause: markers stripped, lowercased,
    whitespace collapsed, first 16 hex chars of the SHA-256."""
    normalized = " ".join(strip_markers(text).lower().split())
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()[:HASH_LENGTH]


def extract_markers(text: str) -> list[tuple[str, int, int]]:
    """Find placeholder marks: (word surface, occurrence index, placeholder).

    The occurrence index counts earlier words with the same surface, so the
    marked word can be located again in the parsed clause even when it also
    appears unmarked.
    """
    if re.search(r"(?<![A-Za-z0-9_])#\d+", text):
        raise RuleError(f"dangling placeholder mark in {text!r}")
    seen: dict[str, int] = {}
    out: list[tuple[str, int, int]] = []
    for match in _WORD_OR_MARKER.finditer(text):
        word, mark = match.group(1), match.group(2)
        occurrence = seen.get(word, 0)
        seen[word] = occurrence + 1
        if mark:
            out.append((word, occurrence, int(mark[1:])))
    return out


# -- rule file parsing --------------------------------------------------------

@dataclass
class _Token:
    kind: str  # word, int, string, punct
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            j = i + 1
            while j < len(text) and text[j] != '"':
                if text[j] == "\n":
                    raise RuleError(f"line {start_line}: unterminated string")
                j += 1
            if j >= len(text):
                raise RuleError(f"line {start_line}: unterminated string")
            tokens.append(_Token("string", text[i + 1:j], start_line, start_col))
            col += j - i + 1
            i = j + 1
            continue
        if ch in "[]{}(),;":
            tokens.append(_Token("punct", ch, line, col))
            col += 1
            i += 1
            continue
        match = re.match(r"[A-Za-z0-9_]+", text[i:])
        if not match:
            raise RuleError(f"line {line}: unexpected character {ch!r}")
        word = match.group(0)
        kind = "int" if word.isdigit() else "word"
        tokens.append(_Token(kind, word, line, col))
        col += len(word)
        i += len(word)
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind: Optional[str] = None, value: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok is None:
            raise RuleError("unexpected end of rule file")
        if kind is not None and tok.kind != kind:
            raise RuleError(f"line {tok.line}: expected {kind}, got {tok.value!r}")
        if value is not None and tok.value != value:
            raise RuleError(f"line {tok.line}: expected {value!r}, got {tok.value!r}")
        self.pos += 1
        return tok


def parse_rule_file(source: "str | Path | IO[str]") -> tuple[list[Definition], list[RuleSource]]:
    """Parse a rule file into Definitions and RuleSources, in file order."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = source.read()

    parser = _Parser(_tokenize(text))
    definitions: list[Definition] = []
    names: set[str] = set()
    rules: list[RuleSource] = []

    while parser.peek() is not None:
        keyword = parser.take("word")
        if keyword.value == "DEFINE":
            name_tok = parser.take("word")
            parser.take("word", "AS")
            opener = parser.take("punct")
            members: list[str] = []
            entity_types: list[str] = []
            if opener.value == "[":
                while True:
                    members.append(parser.take("word").value)
                    if parser.peek() and parser.peek().value == ",":
                        parser.take("punct", ",")
                        continue
                    break
                parser.take("punct", "]")
            elif opener.value == "{":
                label = parser.take("word").value
                if label not in ONTONOTES_LABELS:
                    log.warning("line %d: %r is not a known entity label",
                                name_tok.line, label)
                entity_types.append(label)
                parser.take("punct", "}")
            else:
                raise RuleError(f"line {opener.line}: expected [ or {{ after AS")
            parser.take("punct", ";")
            if name_tok.value in names:
                raise RuleError(f"line {name_tok.line}: duplicate definition "
                                f"{name_tok.value}")
            if name_tok.value in ONTONOTES_LABELS:
                log.warning("definition %s shadows the entity label; the "
                            "definition wins", name_tok.value)
            try:
                definitions.append(Definition(
                    name=name_tok.value, members=tuple(members),
                    entity_types=frozenset(entity_types)))
            except LexiconError as exc:
                raise RuleError(f"line {name_tok.line}: {exc}") from None
            names.add(name_tok.value)
        elif keyword.value == "MATCH":
            pattern = parser.take("string")
            parser.take("word", "CREATE")
            parser.take("punct", "(")
            label_tok = parser.take("word")
            if not _IDENT.match(label_tok.value):
                raise RuleError(f"line {label_tok.line}: bad relation label "
                                f"{label_tok.value!r}")
            head_tok = parser.take("int")
            tail_tok = parser.take("int")
            parser.take("punct", ")")
            parser.take("punct", ";")
            rule_id = len(rules) + 1
            marks = {ph for _, _, ph in extract_markers(pattern.value)}
            for ref in (int(head_tok.value), int(tail_tok.value)):
                if ref not in marks:
                    raise RuleError(f"line {head_tok.line}: rule {rule_id} "
                                    f"references #{ref} which is not marked in "
                                    f"the pattern")
            rules.append(RuleSource(
                rule_id=rule_id, match_text=pattern.value,
                create_label=label_tok.value,
                head_ref=int(head_tok.value), tail_ref=int(tail_tok.value)))
        else:
            raise RuleError(f"line {keyword.line}: expected DEFINE or MATCH, "
                            f"got {keyword.value!r}")
    return definitions, rules


# -- companion parses ---------------------------------------------------------

class ParseProvider:
    """Pre-parsed MATCH clauses, looked up by clause hash.

    The companion file is ordinary CoNLL-U in which every sentence carries a
    ``# clause_hash = <hex>`` comment; a multi-sentence clause repeats the
    hash on each of its sentences, in order.
    """

    def __init__(self, groups: dict[str, list[DependencyTree]]):
        self._groups = groups

    @classmethod
    def from_file(cls, path: "str | Path | IO[str]") -> "ParseProvider":
        groups: dict[str, list[DependencyTree]] = {}
        for doc in parse_conllu(path):
            for tree in doc.sentences:
                digest = tree.meta.get(CLAUSE_HASH_KEY)
                if digest is None:
                    raise RuleError(
                        f"companion sentence {tree.sent_id} has no clause_hash")
                groups.setdefault(digest, []).append(tree)
        return cls(groups)

    def lookup(self, clause_text: str) -> Optional[list[DependencyTree]]:
        return self._groups.get(clause_hash(clause_text))

    def __len__(self) -> int:
        return len(self._groups)


# -- compilation --------------------------------------------------------------

def compile_rule(src: RuleSource, definitions: list[Definition],
                 parses: ParseProvider,
                 cfg: Optional[TransformConfig] = None) -> Rule:
    """Build the query graph for one rule.

    The clause's sentences are transformed exactly like document text, slot
    tokens are annotated, placeholder marks are attached, and same-surface
    slots from different sentences are unified into a single node. The
    result is frozen.
    """
    cfg = cfg or TransformConfig()
    trees = parses.lookup(src.match_text)
    if not trees:
        raise RuleError(f"rule {src.rule_id}: no parse for clause "
                        f"{strip_markers(src.match_text)!r}")
    def_names = {d.name for d in definitions}

    ids = IdAllocator()
    query = Graph()
    sentence_of: dict[NodeId, int] = {}
    token_nodes: list[tuple[int, str, NodeId]] = []  # (sentence, surface, node)
    for snum, tree in enumerate(trees):
        sg = build_sentence_graph(tree, cfg, ids)
        for node in sg.nodes():
            sentence_of[node.id] = snum
            if node.source is not None:
                token_nodes.append((snum, node.surface, node.id))
        query = union(query, sg)

    # Slot annotation: definition names win over bare entity labels.
    for node in query.nodes():
        if node.surface in def_names:
            node.slot_definition = node.surface
        elif node.surface in ONTONOTES_LABELS:
            node.slot_entity = node.surface

    # Placeholder attachment by surface occurrence across the whole clause.
    words_in_order = [(surface, nid) for _, surface, nid in token_nodes]
    for surface, occurrence, ref in extract_markers(src.match_text):
        matches = [nid for s, nid in words_in_order if s == surface]
        if occurrence >= len(matches):
            raise RuleError(f"rule {src.rule_id}: marked word {surface!r} has "
                            f"no token in the clause parse")
        node = query.node(matches[occurrence])
        if node.placeholder is not None and node.placeholder != ref:
            raise RuleError(f"rule {src.rule_id}: token {surface!r} carries two "
                            f"placeholders")
        node.placeholder = ref

    query = _unify_slots(src, query, sentence_of)

    for ref in (src.head_ref, src.tail_ref):
        carriers = [n for n in query.nodes() if n.placeholder == ref]
        if len(carriers) != 1:
            raise RuleError(f"rule {src.rule_id}: placeholder #{ref} is carried "
                            f"by {len(carriers)} query nodes, expected one")
    if not _connected(query):
        raise RuleError(f"rule {src.rule_id}: the query graph is disconnected; "
                        f"link the sentences with a shared slot")
    query.freeze()
    return Rule(rule_id=src.rule_id, query=query, create_label=src.create_label,
                head_ref=src.head_ref, tail_ref=src.tail_ref)


def compile_rules(sources: list[RuleSource], definitions: list[Definition],
                  parses: ParseProvider,
                  cfg: Optional[TransformConfig] = None) -> list[Rule]:
    return [compile_rule(src, definitions, parses, cfg) for src in sources]


def _unify_slots(src: RuleSource, query: Graph,
                 sentence_of: dict[NodeId, int]) -> Graph:
    """Merge same-surface slot nodes appearing in different sentences."""
    by_surface: dict[str, list] = {}
    for node in query.nodes():
        if node.is_slot:
            by_surface.setdefault(node.surface, []).append(node)
    replacement: dict[NodeId, NodeId] = {}
    unified_ids: set[NodeId] = set()
    for surface, nodes in by_surface.items():
        sentences = {sentence_of[n.id] for n in nodes}
        if len(sentences) < 2:
            continue
        if len(sentences) < len(nodes):
            raise RuleError(f"rule {src.rule_id}: slot {surface!r} repeats "
                            f"inside one sentence and across sentences; "
                            f"the unification is ambiguous")
        keeper, rest = nodes[0], nodes[1:]
        keeper.unified = True
        unified_ids.add(keeper.id)
        for other in rest:
            replacement[other.id] = keeper.id
            if other.placeholder is not None:
                if (keeper.placeholder is not None
                        and keeper.placeholder != other.placeholder):
                    raise RuleError(f"rule {src.rule_id}: slot {surface!r} "
                                    f"carries two different placeholders")
                keeper.placeholder = other.placeholder
    if not replacement:
        return query

    merged = Graph()
    for node in query.nodes():
        if node.id not in replacement:
            merged.add_node(node)
    for edge in query.edges():
        src_id = replacement.get(edge.src, edge.src)
        dst_id = replacement.get(edge.dst, edge.dst)
        if src_id == dst_id:
            continue
        merged.connect(src_id, edge.label, dst_id)
    return merged


def _connected(g: Graph) -> bool:
    nodes = g.nodes()
    if len(nodes) <= 1:
        return True
    neighbors: dict[NodeId, set[NodeId]] = {n.id: set() for n in nodes}
    for edge in g.edges():
        neighbors[edge.src].add(edge.dst)
        neighbors[edge.dst].add(edge.src)
    seen = {nodes[0].id}
    frontier = [nodes[0].id]
    while frontier:
        nxt = frontier.pop()
        for other in neighbors[nxt]:
            if other not in seen:
                seen.add(other)
                frontier.append(other)
    return len(seen) == len(nodes)
