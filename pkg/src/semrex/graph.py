"""Directed labeled graphs shared by discourse and rule-query representations.

Nodes are events (``e``) or referents (``r``); edges carry role labels from a
small closed set plus lowercase preposition lemmas. A graph is mutable while
a single writer constructs it and is frozen before matching.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .lexicon import WordSpec

log = logging.getLogger(__name__)

AGENT = "AGENT"
PATIENT = "PATIENT"
ADJECTIVE = "ADJECTIVE"
ADVERB = "ADVERB"
OWNS = "OWNS"
SUBORDINATE = "SUBORDINATE"
ADVOCATIVE_CLAUSE = "ADVOCATIVE_CLAUSE"
REFERS_TO = "REFERS_TO"

CORE_LABELS = frozenset({
    AGENT, PATIENT, ADJECTIVE, ADVERB, OWNS,
    SUBORDINATE, ADVOCATIVE_CLAUSE, REFERS_TO,
})

# Collation used when serializing the edges of one sentence: core roles
# first, then modifiers, prepositions between adjectives and adverbs so a
# preposition hanging off an adjective prints before that adjective's own
# adverbs.
_LABEL_RANK = {
    AGENT: 0, PATIENT: 1, ADJECTIVE: 2, ADVERB: 4, OWNS: 5,
    SUBORDINATE: 6, ADVOCATIVE_CLAUSE: 7, REFERS_TO: 8,
}
_PREPOSITION_RANK = 3


class GraphError(ValueError):
    """Structural misuse of a graph: bad ids, bad labels, frozen writes."""


@dataclass(frozen=True, order=True)
class NodeId:
    kind: str      # "e" for events, "r" for referents
    ordinal: int

    def __post_init__(self):
        if self.kind not in ("e", "r"):
            raise GraphError(f"bad node kind {self.kind!r}")
        if self.ordinal < 1:
            raise GraphError(f"bad node ordinal {self.ordinal}")

    def __str__(self) -> str:
        return f"{self.kind}{self.ordinal}"

    @classmethod
    def parse(cls, text: str) -> "NodeId":
        if len(text) < 2 or text[0] not in ("e", "r") or not text[1:].isdigit():
            raise GraphError(f"bad node id {text!r}")
        return cls(text[0], int(text[1:]))


@dataclass(frozen=True)
class SourceRef:
    """Provenance of a node: document, sentence, original token span."""

    doc_id: str
    sent_id: str
    span: tuple[int, int]  # inclusive original token indices


@dataclass(eq=False)
class WordNode:
    id: NodeId
    spec: WordSpec
    surface: str
    source: Optional[SourceRef] = None
    origin_upos: Optional[str] = None
    # Rule-query annotations; always unset on discourse nodes.
    placeholder: Optional[int] = None
    slot_definition: Optional[str] = None
    slot_entity: Optional[str] = None
    unified: bool = False
    # Position in graph insertion order, assigned by add_node.
    seq: int = field(default=0, compare=False)

    @property
    def is_slot(self) -> bool:
        return self.slot_definition is not None or self.slot_entity is not None


@dataclass(frozen=True)
class SemEdge:
    src: NodeId
    label: str
    dst: NodeId


class IdAllocator:
    """Hands out e/r ids with independent 1-based counters."""

    def __init__(self):
        self._next = {"e": 1, "r": 1}

    def take(self, kind: str) -> NodeId:
        nid = NodeId(kind, self._next[kind])
        self._next[kind] += 1
        return nid

    def event(self) -> NodeId:
        return self.take("e")

    def referent(self) -> NodeId:
        return self.take("r")


def _check_label(label: str) -> None:
    if label in CORE_LABELS:
        return
    # Anything else must look like a lowercase preposition lemma.
    if label and label == label.lower() and not label.isspace():
        return
    raise GraphError(f"bad edge label {label!r}")


class Graph:
    """Insertion-ordered node and edge store with per-label adjacency."""

    def __init__(self):
        self._nodes: dict[NodeId, WordNode] = {}
        self._edges: dict[SemEdge, None] = {}
        self._out: dict[tuple[NodeId, str], list[NodeId]] = {}
        self._in: dict[tuple[NodeId, str], list[NodeId]] = {}
        self._frozen = False
        self._next_seq = 1

    # -- mutation ---------------------------------------------------------

    def add_node(self, node: WordNode) -> NodeId:
        if self._frozen:
            raise GraphError("graph is frozen")
        if node.id in self._nodes:
            raise GraphError(f"duplicate node id {node.id}")
        node.seq = self._next_seq
        self._next_seq += 1
        self._nodes[node.id] = node
        return node.id

    def add_edge(self, edge: SemEdge) -> None:
        if self._frozen:
            raise GraphError("graph is frozen")
        _check_label(edge.label)
        for endpoint in (edge.src, edge.dst):
            if endpoint not in self._nodes:
                raise GraphError(f"edge endpoint {endpoint} is not in the graph")
        if edge in self._edges:
            return  # idempotent
        self._edges[edge] = None
        self._out.setdefault((edge.src, edge.label), []).append(edge.dst)
        self._in.setdefault((edge.dst, edge.label), []).append(edge.src)

    def connect(self, src: NodeId, label: str, dst: NodeId) -> None:
        self.add_edge(SemEdge(src, label, dst))

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    # -- read access ------------------------------------------------------

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def __contains__(self, nid: NodeId) -> bool:
        return nid in self._nodes

    def node(self, nid: NodeId) -> WordNode:
        try:
            return self._nodes[nid]
        except KeyError:
            raise GraphError(f"no node {nid}") from None

    def nodes(self) -> list[WordNode]:
        """Nodes in insertion order."""
        return list(self._nodes.values())

    def edges(self) -> list[SemEdge]:
        """Edges in insertion order."""
        return list(self._edges)

    def has_edge(self, src: NodeId, label: str, dst: NodeId) -> bool:
        return SemEdge(src, label, dst) in self._edges

    def out_edges(self, nid: NodeId, label: Optional[str] = None) -> list[SemEdge]:
        if label is not None:
            return [SemEdge(nid, label, d) for d in self._out.get((nid, label), [])]
        return [e for e in self._edges if e.src == nid]

    def in_edges(self, nid: NodeId, label: Optional[str] = None) -> list[SemEdge]:
        if label is not None:
            return [SemEdge(s, label, nid) for s in self._in.get((nid, label), [])]
        return [e for e in self._edges if e.dst == nid]

    def out_label_counts(self, nid: NodeId) -> dict[str, int]:
        counts: dict[str, int] = {}
        for edge in self._edges:
            if edge.src == nid:
                counts[edge.label] = counts.get(edge.label, 0) + 1
        return counts

    def in_label_counts(self, nid: NodeId) -> dict[str, int]:
        counts: dict[str, int] = {}
        for edge in self._edges:
            if edge.dst == nid:
                counts[edge.label] = counts.get(edge.label, 0) + 1
        return counts

    def refers_partners(self, nid: NodeId) -> list[NodeId]:
        return list(self._out.get((nid, REFERS_TO), []))


def union(a: Graph, b: Graph) -> Graph:
    """Disjoint union preserving insertion order (a first, then b).

    Node records are copied so later in-place updates on the result cannot
    leak back into the inputs. Ids must not collide.
    """
    overlap = {n.id for n in a.nodes()} & {n.id for n in b.nodes()}
    if overlap:
        raise GraphError(f"union id collision: {sorted(map(str, overlap))}")
    merged = Graph()
    for src in (a, b):
        for node in src.nodes():
            merged.add_node(replace_node(node))
        for edge in src.edges():
            merged.add_edge(edge)
    return merged


def replace_node(node: WordNode, **changes) -> WordNode:
    """Copy a node record, optionally updating fields; seq resets."""
    fields = dict(
        id=node.id, spec=node.spec, surface=node.surface, source=node.source,
        origin_upos=node.origin_upos, placeholder=node.placeholder,
        slot_definition=node.slot_definition, slot_entity=node.slot_entity,
        unified=node.unified,
    )
    fields.update(changes)
    return WordNode(**fields)


def _edge_sort_key(g: Graph, edge: SemEdge) -> tuple[int, int, int]:
    rank = _LABEL_RANK.get(edge.label, _PREPOSITION_RANK)
    return (g.node(edge.src).seq, rank, g.node(edge.dst).seq)


def to_predicates(g: Graph) -> list[str]:
    """Canonical predicate serialization.

    One ``lemma(id)`` item per node and one ``LABEL(src, dst)`` item per
    edge. Nodes are grouped by source sentence in first-appearance order;
    each sentence lists its nodes (insertion order) followed by its internal
    edges (sorted by source node, label collation, target node). Edges that
    cross sentences, REFERS_TO links above all, come last. Negated nodes are
    marked with a ``!`` prefix so the text stays faithful to the graph.
    """
    segment_of: dict[NodeId, object] = {}
    segments: list[object] = []
    members: dict[object, list[WordNode]] = {}
    for node in g.nodes():
        key = (node.source.doc_id, node.source.sent_id) if node.source else None
        segment_of[node.id] = key
        if key not in members:
            members[key] = []
            segments.append(key)
        members[key].append(node)

    internal: dict[object, list[SemEdge]] = {key: [] for key in segments}
    crossing: list[SemEdge] = []
    for edge in g.edges():
        src_seg, dst_seg = segment_of[edge.src], segment_of[edge.dst]
        if src_seg == dst_seg:
            internal[src_seg].append(edge)
        else:
            crossing.append(edge)

    out: list[str] = []
    for key in segments:
        for node in members[key]:
            bang = "!" if node.spec.negated else ""
            out.append(f"{bang}{node.spec.lemma}({node.id})")
        for edge in sorted(internal[key], key=lambda e: _edge_sort_key(g, e)):
            out.append(f"{edge.label}({edge.src}, {edge.dst})")
    for edge in sorted(crossing, key=lambda e: _edge_sort_key(g, e)):
        out.append(f"{edge.label}({edge.src}, {edge.dst})")
    return out


def predicates_text(g: Graph) -> str:
    return ", ".join(to_predicates(g))


def to_dot(g: Graph) -> str:
    """GraphViz rendering, mostly for debugging and documentation."""
    lines = ["digraph discourse {"]
    for node in g.nodes():
        shape = "box" if node.id.kind == "e" else "ellipse"
        label = f"{node.spec.lemma}\\n{node.id}"
        if node.spec.negated:
            label = "!" + label
        if node.spec.entity_type:
            label += f"\\n[{node.spec.entity_type}]"
        lines.append(f'  "{node.id}" [shape={shape}, label="{label}"];')
    for edge in g.edges():
        lines.append(f'  "{edge.src}" -> "{edge.dst}" [label="{edge.label}"];')
    lines.append("}")
    return "\n".join(lines)
