"""Coreference links over a finished document graph.

Cluster annotations ride in on the Coref MISC field. Linking is deliberately
conservative: only pairs where at least one side is a pronoun and the other
is a pronoun or a typed named entity get REFERS_TO edges (both directions).
Each linked pronoun also takes over the lemma of the cluster's first named
mention, so the graph reads "Jane(r4)" instead of "she(r4)" once the
antecedent is known.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Optional

from .graph import REFERS_TO, Graph, WordNode
from .ingest import Document

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mention:
    doc_id: str
    sent_id: str
    first: int  # original token indices, inclusive
    last: int


@dataclass(frozen=True)
class CorefCluster:
    cluster_id: int
    mentions: tuple[Mention, ...]

    def __post_init__(self):
        if len(self.mentions) < 2:
            raise ValueError(f"cluster {self.cluster_id} has fewer than two mentions")


def clusters_from_document(doc: Document) -> list[CorefCluster]:
    """Collect Coref-annotated mention spans, dropping singleton clusters.

    A mention is a maximal contiguous run of tokens sharing a cluster id
    within one sentence.
    """
    spans: dict[int, list[Mention]] = {}
    for tree in doc.sentences:
        i = 0
        tokens = tree.tokens
        while i < len(tokens):
            cid = tokens[i].coref
            if cid is None:
                i += 1
                continue
            j = i
            while j + 1 < len(tokens) and tokens[j + 1].coref == cid:
                j += 1
            spans.setdefault(cid, []).append(Mention(
                doc_id=tree.doc_id, sent_id=tree.sent_id,
                first=tokens[i].orig_span[0], last=tokens[j].orig_span[1]))
            i = j + 1
    clusters = []
    for cid in sorted(spans):
        if len(spans[cid]) < 2:
            log.debug("dropping singleton coref cluster %d", cid)
            continue
        clusters.append(CorefCluster(cid, tuple(spans[cid])))
    return clusters


def _is_pronoun(node: WordNode) -> bool:
    return node.origin_upos == "PRON"


def _is_entity(node: WordNode) -> bool:
    return node.spec.entity_type is not None


def _qualifies(a: WordNode, b: WordNode) -> bool:
    if _is_pronoun(a):
        return _is_pronoun(b) or _is_entity(b)
    if _is_pronoun(b):
        return _is_entity(a)
    return False


def _resolve(g: Graph, mention: Mention) -> Optional[WordNode]:
    """Find the node whose source span best overlaps the mention."""
    best, best_overlap = None, 0
    for node in g.nodes():
        src = node.source
        if src is None or src.doc_id != mention.doc_id or src.sent_id != mention.sent_id:
            continue
        lo = max(src.span[0], mention.first)
        hi = min(src.span[1], mention.last)
        overlap = hi - lo + 1
        if overlap > best_overlap:
            best, best_overlap = node, overlap
    return best


def link_corefs(g: Graph, clusters: list[CorefCluster]) -> Graph:
    """Add REFERS_TO edges for every qualifying mention pair of each cluster.

    The graph gains edges only; nodes are never added or removed. Pronoun
    members of a cluster that contains a named entity are relabeled with the
    first such entity's lemma. Pairs failing the pronoun/entity restriction
    and mentions without a matching node are skipped and counted.
    """
    skipped_pairs = 0
    lost_mentions = 0
    for cluster in clusters:
        nodes: list[WordNode] = []
        for mention in cluster.mentions:
            node = _resolve(g, mention)
            if node is None:
                log.warning("coref cluster %d: no node for mention %s %d..%d",
                            cluster.cluster_id, mention.sent_id,
                            mention.first, mention.last)
                lost_mentions += 1
                continue
            if node not in nodes:
                nodes.append(node)
        canonical = next((n for n in nodes if _is_entity(n) and not _is_pronoun(n)), None)
        for i, a in enumerate(nodes):
            for b in nodes[i + 1:]:
                if not _qualifies(a, b):
                    skipped_pairs += 1
                    continue
                g.connect(a.id, REFERS_TO, b.id)
                g.connect(b.id, REFERS_TO, a.id)
        if canonical is not None:
            for node in nodes:
                if _is_pronoun(node) and node is not canonical:
                    node.spec = replace(node.spec, lemma=canonical.spec.lemma)
    if skipped_pairs or lost_mentions:
        log.info("coref linking skipped %d pair(s), %d unresolved mention(s)",
                 skipped_pairs, lost_mentions)
    return g
