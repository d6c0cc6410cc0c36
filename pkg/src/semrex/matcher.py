"""Query-graph matching against discourse graphs.

A compiled rule is itself a small graph; a match is an injective mapping of
its nodes onto data nodes that preserves every labeled edge. Node
equivalence is soft (see :mod:`semrex.lexicon`), edge labels are exact. For
unified slot nodes, an edge may also be satisfied through a REFERS_TO
partner of the mapped node, which is what lets a pattern sentence reach
into a neighboring document sentence via a pronoun.

The search is plain backtracking, most-constrained-node first, expanding
only into nodes connected to the already-mapped part so partial mappings
can be checked edge by edge.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .graph import Graph, NodeId, WordNode
from .lexicon import (Definition, Lexicon, best_member_similarity,
                      definition_match, word_match)
from .rules import Rule

log = logging.getLogger(__name__)

MATCH_CAP = 10_000

Binding = dict  # query NodeId -> data NodeId


class MatchError(ValueError):
    pass


class MatchCapExceeded(MatchError):
    """A single rule produced more bindings than the cap allows."""


class NodeMatchContext:
    """Decides whether a data node can stand in for a query node.

    Subclass and override :meth:`node_eq` to change matching behavior, e.g.
    to treat some nodes as wildcards.
    """

    def __init__(self, lexicon: Lexicon, definitions: "list[Definition] | None" = None):
        self.lexicon = lexicon
        self.definitions = {d.name: d for d in (definitions or [])}

    def node_eq(self, query_node: WordNode, data_node: WordNode) -> bool:
        if query_node.id.kind != data_node.id.kind:
            return False
        if query_node.slot_definition is not None:
            defn = self.definitions.get(query_node.slot_definition)
            if defn is None:
                raise MatchError(f"unknown definition {query_node.slot_definition!r}")
            return definition_match(data_node.spec, defn, self.lexicon)
        if query_node.slot_entity is not None:
            return data_node.spec.entity_type == query_node.slot_entity
        return word_match(data_node.spec, query_node.spec, self.lexicon)


def _edge_satisfied(data: Graph, src: NodeId, label: str, dst: NodeId,
                    src_unified: bool, dst_unified: bool) -> bool:
    # coreference widening applies only on a unified slot's side of the edge
    sources = [src] + (data.refers_partners(src) if src_unified else [])
    targets = [dst] + (data.refers_partners(dst) if dst_unified else [])
    return any(data.has_edge(s, label, t) for s in sources for t in targets)


def _degree_ok(query: Graph, qid: NodeId, data: Graph, did: NodeId) -> bool:
    data_out = data.out_label_counts(did)
    for label, needed in query.out_label_counts(qid).items():
        # an edge into a unified neighbor may be carried by a coref partner,
        # so only its existence can be required here
        if any(query.node(e.dst).unified for e in query.out_edges(qid, label)):
            needed = 1
        if data_out.get(label, 0) < needed:
            return False
    data_in = data.in_label_counts(did)
    for label, needed in query.in_label_counts(qid).items():
        if any(query.node(e.src).unified for e in query.in_edges(qid, label)):
            needed = 1
        if data_in.get(label, 0) < needed:
            return False
    return True


def subgraph_match(query: Graph, data: Graph, ctx: NodeMatchContext,
                   limit: Optional[int] = None) -> list[Binding]:
    """All injective, edge-preserving mappings of query onto data.

    Bindings come back sorted by the mapped data ids taken in query node
    order, so repeated runs agree byte for byte. Raises MatchCapExceeded
    when more than ``limit`` bindings exist.
    """
    if not data.frozen:
        raise MatchError("data graph must be frozen before matching")
    qnodes = query.nodes()
    if not qnodes:
        return []

    candidates: dict[NodeId, list[NodeId]] = {}
    for qn in qnodes:
        pool = []
        for dn in data.nodes():
            if not ctx.node_eq(qn, dn):
                continue
            if not qn.unified and not _degree_ok(query, qn.id, data, dn.id):
                continue
            pool.append(dn.id)
        if not pool:
            return []
        candidates[qn.id] = pool

    order = _search_order(query, candidates)
    unified = {qn.id: qn.unified for qn in qnodes}

    results: list[Binding] = []
    assignment: Binding = {}
    used: set[NodeId] = set()

    def consistent(qid: NodeId, did: NodeId) -> bool:
        for edge in query.out_edges(qid):
            other = assignment.get(edge.dst)
            if other is not None and not _edge_satisfied(
                    data, did, edge.label, other, unified[qid], unified[edge.dst]):
                return False
        for edge in query.in_edges(qid):
            other = assignment.get(edge.src)
            if other is not None and not _edge_satisfied(
                    data, other, edge.label, did, unified[edge.src], unified[qid]):
                return False
        return True

    def walk(depth: int) -> None:
        if depth == len(order):
            results.append(dict(assignment))
            if limit is not None and len(results) > limit:
                raise MatchCapExceeded(f"more than {limit} bindings")
            return
        qid = order[depth]
        for did in candidates[qid]:
            if did in used or not consistent(qid, did):
                continue
            assignment[qid] = did
            used.add(did)
            walk(depth + 1)
            used.discard(did)
            del assignment[qid]

    walk(0)
    results.sort(key=lambda b: tuple(b[qn.id] for qn in qnodes))
    return results


def _search_order(query: Graph, candidates: dict[NodeId, list[NodeId]]) -> list[NodeId]:
    """Fewest candidates first, then always grow the connected frontier."""
    seq = {qn.id: i for i, qn in enumerate(query.nodes())}
    neighbors: dict[NodeId, set[NodeId]] = {nid: set() for nid in seq}
    for edge in query.edges():
        neighbors[edge.src].add(edge.dst)
        neighbors[edge.dst].add(edge.src)

    def rank(nid: NodeId) -> tuple[int, int]:
        return (len(candidates[nid]), seq[nid])

    remaining = set(seq)
    order = [min(remaining, key=rank)]
    remaining.discard(order[0])
    while remaining:
        frontier = {n for done in order for n in neighbors[done]} & remaining
        pick = min(frontier or remaining, key=rank)
        order.append(pick)
        remaining.discard(pick)
    return order


def verify_binding(query: Graph, data: Graph, ctx: NodeMatchContext,
                   binding: Binding) -> bool:
    """Recheck a binding from scratch. Slow path, used for audits."""
    if set(binding) != {qn.id for qn in query.nodes()}:
        return False
    if len(set(binding.values())) != len(binding):
        return False
    for qn in query.nodes():
        if not ctx.node_eq(qn, data.node(binding[qn.id])):
            return False
    for edge in query.edges():
        if not _edge_satisfied(data, binding[edge.src], edge.label,
                               binding[edge.dst],
                               query.node(edge.src).unified,
                               query.node(edge.dst).unified):
            return False
    return True


# -- relation extraction -----------------------------------------------------

@dataclass(frozen=True, order=True)
class RelationEdge:
    """One extracted relation instance."""

    doc_id: str
    rule_id: int
    label: str
    head: NodeId
    tail: NodeId
    head_text: str
    tail_text: str


def apply_rules(data: Graph, rules: list[Rule], ctx: NodeMatchContext,
                doc_id: str, limit: int = MATCH_CAP,
                workers: int = 1) -> list[RelationEdge]:
    """Run every rule over one document graph.

    A rule whose binding count exceeds ``limit`` is dropped with a warning;
    the others still apply. Duplicate (label, head, tail) triples from
    different rules or bindings collapse to the first occurrence.
    """
    def run(rule: Rule) -> Optional[list[Binding]]:
        try:
            return subgraph_match(rule.query, data, ctx, limit=limit)
        except MatchCapExceeded:
            log.warning("rule %d on %s: binding cap (%d) exceeded, rule skipped",
                        rule.rule_id, doc_id, limit)
            return None

    if workers > 1 and len(rules) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            matched = list(pool.map(run, rules))
    else:
        matched = [run(rule) for rule in rules]

    out: list[RelationEdge] = []
    seen: set[tuple] = set()
    for rule, bindings in zip(rules, matched):
        if bindings is None:
            continue
        head_q = rule.node_with_placeholder(rule.head_ref)
        tail_q = rule.node_with_placeholder(rule.tail_ref)
        for binding in bindings:
            head, tail = binding[head_q], binding[tail_q]
            key = (doc_id, rule.create_label, head, tail)
            if key in seen:
                continue
            seen.add(key)
            out.append(RelationEdge(
                doc_id=doc_id, rule_id=rule.rule_id, label=rule.create_label,
                head=head, tail=tail,
                head_text=data.node(head).surface,
                tail_text=data.node(tail).surface))
    return out


def _describe(qn: WordNode) -> str:
    if qn.slot_definition:
        return f"{qn.surface}({qn.id}) [slot {qn.slot_definition}]"
    if qn.slot_entity:
        return f"{qn.surface}({qn.id}) [slot {{{qn.slot_entity}}}]"
    return f"{qn.spec.lemma}({qn.id})"


def _node_reason(qn: WordNode, data: Graph, ctx: NodeMatchContext) -> str:
    """Why no data node can stand in for this query node."""
    lex = ctx.lexicon
    peers = [dn for dn in data.nodes() if dn.id.kind == qn.id.kind]
    if qn.slot_definition is not None:
        defn = ctx.definitions.get(qn.slot_definition)
        if defn is None:
            return f"definition {qn.slot_definition} is not defined"
        parts = []
        if defn.entity_types:
            wanted = "/".join(sorted(defn.entity_types))
            parts.append(f"no node tagged {wanted}")
        best, word = None, None
        for dn in peers:
            sim = best_member_similarity(dn.spec, defn, lex)
            if sim is not None and (best is None or sim > best):
                best, word = sim, dn.spec.lemma
        if best is not None:
            parts.append(f"best member similarity {best:.3f} (to {word!r}) "
                         f"is not above threshold {lex.threshold}")
        elif defn.members:
            parts.append("no cluster member is in the lexicon together "
                         "with any document word")
        return "; ".join(parts)
    if qn.slot_entity is not None:
        return f"no node with entity type {qn.slot_entity}"
    for dn in peers:
        if dn.spec.lemma != qn.spec.lemma:
            continue
        for tag in ("negated", "entity_type", "node_type"):
            if getattr(dn.spec, tag) != getattr(qn.spec, tag):
                return (f"{dn.surface}({dn.id}) has the same lemma "
                        f"but a different {tag}")
    best, word = None, None
    for dn in peers:
        sim = lex.similarity(qn.spec.lemma, dn.spec.lemma)
        if sim is not None and (best is None or sim > best):
            best, word = sim, dn.spec.lemma
    if best is not None:
        return (f"best similarity {best:.3f} (to {word!r}) is not above "
                f"threshold {lex.threshold}")
    return "no lemma match and nothing comparable in the lexicon"


def diagnose(query: Graph, data: Graph, ctx: NodeMatchContext) -> list[str]:
    """Why a query has no binding: the deepest partial assignment reached
    and the first constraint that blocked extending it."""
    pools: dict[NodeId, list[NodeId]] = {}
    for qn in query.nodes():
        pool = [dn.id for dn in data.nodes() if ctx.node_eq(qn, dn)]
        if not pool:
            return [f"no candidate for {_describe(qn)}: "
                    f"{_node_reason(qn, data, ctx)}"]
        pools[qn.id] = pool

    order = _search_order(query, pools)
    unified = {qn.id: qn.unified for qn in query.nodes()}
    best = {"depth": -1, "assignment": {}, "node": None, "fails": []}
    assignment: Binding = {}
    used: set[NodeId] = set()
    found = False

    def first_violation(qid: NodeId, did: NodeId) -> Optional[str]:
        for edge in query.out_edges(qid):
            other = assignment.get(edge.dst)
            if other is not None and not _edge_satisfied(
                    data, did, edge.label, other, unified[qid], unified[edge.dst]):
                return f"missing edge {edge.label}({did}, {other})"
        for edge in query.in_edges(qid):
            other = assignment.get(edge.src)
            if other is not None and not _edge_satisfied(
                    data, other, edge.label, did, unified[edge.src], unified[qid]):
                return f"missing edge {edge.label}({other}, {did})"
        return None

    def walk(depth: int) -> None:
        nonlocal found
        if found or depth == len(order):
            found = True
            return
        qid = order[depth]
        fails = []
        for did in pools[qid]:
            if did in used:
                fails.append(f"{did} is already bound")
                continue
            violation = first_violation(qid, did)
            if violation is not None:
                fails.append(f"{did}: {violation}")
                continue
            assignment[qid] = did
            used.add(did)
            walk(depth + 1)
            used.discard(did)
            del assignment[qid]
            if found:
                return
        if depth > best["depth"]:
            best.update(depth=depth, assignment=dict(assignment),
                        node=qid, fails=fails[:3])

    walk(0)
    if found:
        return ["a binding exists"]
    lines = [f"deepest partial assignment covers {best['depth']} of "
             f"{len(order)} query nodes"]
    for qid, did in best["assignment"].items():
        lines.append(f"  {_describe(query.node(qid))} -> "
                     f"{data.node(did).surface}({did})")
    stuck = query.node(best["node"])
    lines.append(f"  stuck on {_describe(stuck)}:")
    for fail in best["fails"]:
        lines.append(f"    {fail}")
    return lines


def explain_match(rule: Rule, data: Graph, binding: Binding) -> list[str]:
    """Human-readable account of one binding: node map, then edge checks."""
    lines = [f"rule {rule.rule_id}: {rule.create_label}"]
    for qn in rule.query.nodes():
        dn = data.node(binding[qn.id])
        tag = ""
        if qn.slot_definition:
            tag = f" [slot {qn.slot_definition}]"
        elif qn.slot_entity:
            tag = f" [slot {{{qn.slot_entity}}}]"
        lines.append(f"  {qn.spec.lemma}({qn.id}){tag} -> {dn.surface}({dn.id})")
    for edge in rule.query.edges():
        src, dst = binding[edge.src], binding[edge.dst]
        direct = data.has_edge(src, edge.label, dst)
        note = "" if direct else "  (via REFERS_TO)"
        lines.append(f"  {edge.label}({edge.src}, {edge.dst}) -> "
                     f"{edge.label}({src}, {dst}){note}")
    return lines
