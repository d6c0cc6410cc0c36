"""Dependency trees to event/referent graphs.

Verbs (and copulas) become ``e`` nodes, content words become ``r`` nodes,
and a fixed set of grammatical configurations becomes edges: core roles
normalized across voice, adjective and adverb modification, preposition
edges labeled by the preposition lemma, possessive pronouns, and
subordinate clauses. Negation words vanish into a flag on their governor;
coordinated words are flattened so each conjunct attaches like the first.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from .graph import (ADJECTIVE, ADVERB, ADVOCATIVE_CLAUSE, AGENT, OWNS, PATIENT,
                    SUBORDINATE, Graph, IdAllocator, NodeId, SourceRef, WordNode,
                    union)
from .ingest import DependencyTree, Document, StructuralError, Token, validate_tree
from .lexicon import WordSpec

log = logging.getLogger(__name__)

NEGATION_LEMMAS = frozenset({"not", "never", "no"})

_REFERENT_UPOS = frozenset({"NOUN", "PROPN", "PRON", "NUM", "ADJ", "ADV"})
_NODE_TYPE_BY_UPOS = {"ADJ": "adjective", "ADV": "adverb"}


@dataclass(frozen=True)
class TransformConfig:
    """Tunables of the tree-to-graph transformation."""

    #: advcl markers that produce ADVOCATIVE_CLAUSE instead of SUBORDINATE
    subordinate_markers: frozenset[str] = frozenset({"if", "unless", "when", "whenever"})
    #: controlled complements (xcomp) inherit the matrix subject as AGENT
    propagate_core_roles: bool = True

    def __post_init__(self):
        if not self.subordinate_markers:
            raise ValueError("subordinate_markers must not be empty")


@dataclass(frozen=True)
class NegationFold:
    """Outcome of locating negation dependents in a sentence."""

    targets: frozenset[int]   # token indices whose node gets negated=True
    consumed: frozenset[int]  # negation tokens themselves; they get no node


def _base(deprel: str) -> str:
    return deprel.split(":", 1)[0]


def merge_named_entities(tree: DependencyTree) -> DependencyTree:
    """Collapse each contiguous same-label entity run into a single token.

    The merged token takes the head, deprel and upos of the run member whose
    head lies outside the run; its lemma is the underscore-joined surface
    forms and its surface the space-joined ones. Runs that are not connected
    within their own subtree are left alone with a warning. Token indices
    are renumbered to stay contiguous; the original span is kept on the
    merged token.
    """
    tokens = tree.tokens
    runs: list[list[Token]] = []
    i = 0
    while i < len(tokens):
        if tokens[i].ner is None:
            i += 1
            continue
        j = i
        while j + 1 < len(tokens) and tokens[j + 1].ner == tokens[i].ner:
            j += 1
        if j > i:
            runs.append(tokens[i:j + 1])
        i = j + 1
    if not runs:
        return tree

    run_of: dict[int, list[Token]] = {}
    for run in runs:
        indices = {t.index for t in run}
        external = [t for t in run if t.head not in indices]
        if len(external) != 1:
            log.warning("sentence %s: entity run %r is not a single subtree, not merging",
                        tree.sent_id, " ".join(t.surface for t in run))
            continue
        for tok in run:
            run_of[tok.index] = run
    if not run_of:
        return tree

    new_tokens: list[Token] = []
    new_index_of: dict[int, int] = {}
    consumed: set[int] = set()
    for tok in tokens:
        if tok.index in consumed:
            continue
        if tok.index in run_of:
            run = run_of[tok.index]
            indices = {t.index for t in run}
            head_tok = next(t for t in run if t.head not in indices)
            coref = head_tok.coref
            if coref is None:
                coref = next((t.coref for t in run if t.coref is not None), None)
            merged = Token(
                index=0,  # assigned below
                surface=" ".join(t.surface for t in run),
                lemma="_".join(t.surface for t in run),
                upos=head_tok.upos,
                head=head_tok.head,
                deprel=head_tok.deprel,
                ner=head_tok.ner,
                coref=coref,
                span=(run[0].orig_span[0], run[-1].orig_span[1]),
            )
            new_tokens.append(merged)
            for t in run:
                new_index_of[t.index] = len(new_tokens)
                consumed.add(t.index)
        else:
            new_tokens.append(Token(
                index=0, surface=tok.surface, lemma=tok.lemma, upos=tok.upos,
                head=tok.head, deprel=tok.deprel, ner=tok.ner, coref=tok.coref,
                span=tok.span))
            new_index_of[tok.index] = len(new_tokens)

    for pos, tok in enumerate(new_tokens, start=1):
        tok.index = pos
    for tok in new_tokens:
        tok.head = 0 if tok.head == 0 else new_index_of[tok.head]
    return DependencyTree(doc_id=tree.doc_id, sent_id=tree.sent_id,
                          tokens=new_tokens, meta=dict(tree.meta))


def fold_negation(tree: DependencyTree) -> NegationFold:
    """Locate negation dependents; each flags its governor and gets no node."""
    targets: set[int] = set()
    consumed: set[int] = set()
    for tok in tree.tokens:
        negated_deprel = tok.deprel in ("neg", "advmod:neg")
        negation_word = (tok.lemma in NEGATION_LEMMAS
                         and _base(tok.deprel) in ("advmod", "det"))
        if not (negated_deprel or negation_word):
            continue
        if tok.head == 0:
            log.warning("sentence %s: negation token %d has no governor",
                        tree.sent_id, tok.index)
            continue
        consumed.add(tok.index)
        targets.add(tok.head)
    return NegationFold(frozenset(targets), frozenset(consumed))


def flatten_conjunctions(tree: DependencyTree) -> tuple[dict[int, list[int]], dict[int, int]]:
    """Group coordinated tokens under their first conjunct.

    Returns (groups, head_of): ``groups`` maps a head conjunct index to the
    token-ordered list of all group members including itself; ``head_of``
    maps each non-head conjunct back to its group head. The builder emits,
    for every member, the edge the head conjunct would get on its own, so
    coordination disappears from the graph; cc words never make nodes.
    """
    groups: dict[int, list[int]] = {}
    head_of: dict[int, int] = {}
    for tok in tree.tokens:
        if _base(tok.deprel) != "conj":
            continue
        head = tok.head
        while head != 0 and _base(tree.token(head).deprel) == "conj":
            head = tree.token(head).head
        if head == 0:
            continue
        groups.setdefault(head, [head]).append(tok.index)
        head_of[tok.index] = head
    return groups, head_of


def build_sentence_graph(tree: DependencyTree, cfg: Optional[TransformConfig] = None,
                         ids: Optional[IdAllocator] = None) -> Graph:
    """Transform one parsed sentence into its event/referent graph.

    Entity runs are merged first. Node ids are allocated in token order with
    adverbs deferred to the end, which pins the serialization order of the
    result: subject, event, complements, then modifiers of modifiers.
    """
    cfg = cfg or TransformConfig()
    ids = ids or IdAllocator()
    tree = merge_named_entities(tree)
    problem = validate_tree(tree)
    if problem:
        raise StructuralError(f"sentence {tree.sent_id}: {problem}")

    fold = fold_negation(tree)
    groups, conj_head_of = flatten_conjunctions(tree)

    children: dict[int, list[Token]] = {}
    for tok in tree.tokens:
        children.setdefault(tok.head, []).append(tok)

    def kids(index: int, *bases: str) -> list[Token]:
        return [c for c in children.get(index, []) if _base(c.deprel) in bases]

    def is_event(tok: Token) -> bool:
        if _base(tok.deprel) == "cop" and tok.upos in ("AUX", "VERB"):
            return True
        return tok.upos == "VERB"

    def makes_node(tok: Token) -> bool:
        if tok.index in fold.consumed:
            return False
        return is_event(tok) or tok.upos in _REFERENT_UPOS

    g = Graph()
    node_of: dict[int, NodeId] = {}

    def add_token_node(tok: Token) -> None:
        event = is_event(tok)
        if event:
            node_type, kind = "verb", "e"
        else:
            node_type, kind = _NODE_TYPE_BY_UPOS.get(tok.upos, "noun"), "r"
        lemma = tok.surface.lower() if tok.upos == "PRON" else tok.lemma
        spec = WordSpec(lemma=lemma, negated=tok.index in fold.targets,
                        entity_type=tok.ner, node_type=node_type)
        node = WordNode(
            id=ids.take(kind), spec=spec, surface=tok.surface,
            source=SourceRef(tree.doc_id, tree.sent_id, tok.orig_span),
            # A copula is lexically the verb "be"; record it as one.
            origin_upos="VERB" if event and _base(tok.deprel) == "cop" else tok.upos,
        )
        node_of[tok.index] = g.add_node(node)

    for tok in tree.tokens:
        if makes_node(tok) and tok.upos != "ADV":
            add_token_node(tok)
    for tok in tree.tokens:
        if makes_node(tok) and tok.upos == "ADV":
            add_token_node(tok)

    for idx in fold.targets:
        if idx not in node_of:
            log.warning("sentence %s: negation flag on token %d lost, "
                        "the governor has no node", tree.sent_id, idx)

    def members(tok: Token) -> list[int]:
        return groups.get(tok.index, [tok.index])

    def emit(src_index: int, label: str, dst_tok: Token) -> None:
        src = node_of.get(src_index)
        if src is None:
            return
        for m in members(dst_tok):
            dst = node_of.get(m)
            if dst is not None:
                g.connect(src, label, dst)

    def emit_single(src_index: int, label: str, dst_index: int) -> None:
        src, dst = node_of.get(src_index), node_of.get(dst_index)
        if src is not None and dst is not None:
            g.connect(src, label, dst)

    def own_subjects(index: int) -> list[Token]:
        return [c for c in children.get(index, []) if _base(c.deprel) == "nsubj"]

    def subjects_of(index: int) -> list[Token]:
        # A conjunct without its own subject shares the head conjunct's.
        subs = own_subjects(index)
        if not subs and index in conj_head_of:
            subs = own_subjects(conj_head_of[index])
        return subs

    def event_node(index: int) -> Optional[NodeId]:
        tok = tree.token(index)
        if tok.upos == "VERB" and index in node_of:
            return node_of[index]
        for c in children.get(index, []):
            if _base(c.deprel) == "cop" and c.index in node_of:
                return node_of[c.index]
        return None

    # Core roles around every event, voice-normalized.
    for tok in tree.tokens:
        if tok.index not in node_of or not is_event(tok):
            continue
        e = tok.index
        if _base(tok.deprel) == "cop":
            pred = tree.token(tok.head)
            for subj in subjects_of(pred.index):
                emit(e, AGENT, subj)
            for m in members(pred):
                m_tok = tree.token(m)
                if m not in node_of or is_event(m_tok):
                    continue
                if m_tok.upos == "ADJ":
                    emit_single(e, ADJECTIVE, m)
                elif m_tok.upos == "ADV":
                    emit_single(e, ADVERB, m)
                else:
                    emit_single(e, PATIENT, m)
            continue
        for subj in subjects_of(e):
            role = PATIENT if subj.deprel == "nsubj:pass" else AGENT
            emit(e, role, subj)
        for obj in kids(e, "obj"):
            emit(e, PATIENT, obj)
        for obl in kids(e, "obl"):
            if obl.deprel == "obl:agent":
                emit(e, AGENT, obl)
        for x in kids(e, "xcomp"):
            if x.upos == "VERB" and x.index in node_of:
                emit(e, SUBORDINATE, x)
                if cfg.propagate_core_roles and not own_subjects(x.index):
                    for subj in subjects_of(e):
                        emit(x.index, AGENT, subj)
        for c in kids(e, "ccomp"):
            sub = event_node(c.index)
            if sub is not None:
                g.connect(node_of[e], SUBORDINATE, sub)
        for a in kids(e, "advcl"):
            sub = event_node(a.index)
            if sub is None:
                continue
            markers = [m.lemma for m in kids(a.index, "mark")]
            label = (ADVOCATIVE_CLAUSE
                     if any(m in cfg.subordinate_markers for m in markers)
                     else SUBORDINATE)
            g.connect(node_of[e], label, sub)

    # Modifiers, prepositions and possessives around every node.
    for tok in tree.tokens:
        n = node_of.get(tok.index)
        if n is None:
            continue
        for c in children.get(tok.index, []):
            b = _base(c.deprel)
            if b == "amod" and c.upos == "ADJ":
                emit(tok.index, ADJECTIVE, c)
            elif b == "advmod" and c.index not in fold.consumed:
                emit(tok.index, ADVERB, c)
            elif c.deprel in ("nmod:poss", "poss"):
                if c.upos == "PRON" and c.index in node_of:
                    g.connect(node_of[c.index], OWNS, n)
            elif b in ("obl", "nmod"):
                if c.deprel == "obl:agent":
                    continue  # already a core role
                cases = kids(c.index, "case")
                if cases:
                    emit(tok.index, cases[0].lemma.lower(), c)
                elif b == "obl" or c.deprel == "nmod:tmod":
                    # Bare temporal modifiers ("died Monday") still need an
                    # edge for rules to reach the time expression.
                    emit(tok.index, ADVERB, c)
    return g


def build_document_graph(doc: Document, cfg: Optional[TransformConfig] = None) -> Graph:
    """Union of all sentence graphs of a document, one shared id space."""
    cfg = cfg or TransformConfig()
    ids = IdAllocator()
    g = Graph()
    for tree in doc.sentences:
        g = union(g, build_sentence_graph(tree, cfg, ids))
    return g
