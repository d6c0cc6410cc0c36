"""Tree-to-graph transformation, pinned on hand-checked parses.

Every expectation below is a full predicate serialization worked out by
hand from the dependency tree in transforms.conllu, not generated output.
"""

import io

import pytest

from semrex import (
    StructuralError,
    TransformConfig,
    build_document_graph,
    build_sentence_graph,
    parse_conllu,
)
from semrex.graph import predicates_text
from semrex.semantics import fold_negation, merge_named_entities

EXPECTED = {
    # not/never as advmod and no as det negate the governor; the marker
    # itself gets no node.
    "neg_advmod": "Jane(r1), !work(e1), AGENT(e1, r1)",
    "neg_det": "!dog(r1), bark(e1), AGENT(e1, r1)",
    "neg_never": "Mark(r1), !sleep(e1), AGENT(e1, r1)",
    # conj groups multiply the edge, not the event
    "conj_subjects": "Jane(r1), Mark(r2), work(e1), AGENT(e1, r1), AGENT(e1, r2)",
    "conj_verbs": "Jane(r1), sing(e1), dance(e2), AGENT(e1, r1), AGENT(e2, r1)",
    "conj_objects": ("Jane(r1), buy(e1), apple(r2), pear(r3), "
                     "AGENT(e1, r1), PATIENT(e1, r2), PATIENT(e1, r3)"),
    "merge_city": ("New_York_City(r1), be(e1), big(r2), "
                   "AGENT(e1, r1), ADJECTIVE(e1, r2)"),
    "merge_split_heads": ("Acme(r1), Board(r2), meet(e1), "
                          "AGENT(e1, r1), PATIENT(e1, r2)"),
    "advocative": ("Jane(r1), leave(e1), Mark(r2), stay(e2), "
                   "AGENT(e1, r1), ADVOCATIVE_CLAUSE(e1, e2), AGENT(e2, r2)"),
    "plain_subordinate": ("Jane(r1), leave(e1), Mark(r2), stay(e2), "
                          "AGENT(e1, r1), SUBORDINATE(e1, e2), AGENT(e2, r2)"),
    "xcomp_shared_subject": ("Jane(r1), want(e1), win(e2), "
                             "AGENT(e1, r1), SUBORDINATE(e1, e2), AGENT(e2, r1)"),
    "ccomp_own_subject": ("Jane(r1), say(e1), Mark(r2), win(e2), "
                          "AGENT(e1, r1), SUBORDINATE(e1, e2), AGENT(e2, r2)"),
    "possessive": "her(r1), dog(r2), bark(e1), OWNS(r1, r2), AGENT(e1, r2)",
}


@pytest.fixture(scope="module")
def transform_docs(fixtures):
    docs = parse_conllu(fixtures / "transforms.conllu")
    return {d.doc_id: d for d in docs}


def test_fixture_covers_every_expectation(transform_docs):
    assert set(transform_docs) == set(EXPECTED)


@pytest.mark.parametrize("doc_id", sorted(EXPECTED))
def test_transform(transform_docs, doc_id):
    graph = build_document_graph(transform_docs[doc_id])
    assert predicates_text(graph) == EXPECTED[doc_id]


def test_negated_spec_carries_flag(transform_docs):
    graph = build_document_graph(transform_docs["neg_advmod"])
    work = [n for n in graph.nodes() if n.spec.lemma == "work"]
    assert len(work) == 1 and work[0].spec.negated


def test_merged_entity_token_details(transform_docs):
    tree = transform_docs["merge_city"].sentences[0]
    merged = merge_named_entities(tree)
    city = merged.tokens[0]
    assert city.lemma == "New_York_City"
    assert city.surface == "New York City"
    assert city.ner == "GPE"
    assert city.span == (1, 3)
    # indices renumbered to stay contiguous
    assert [t.index for t in merged.tokens] == list(range(1, len(merged.tokens) + 1))


def test_merged_entity_node_keeps_span(transform_docs):
    graph = build_document_graph(transform_docs["merge_city"])
    city = next(n for n in graph.nodes() if n.spec.lemma == "New_York_City")
    assert city.source.span == (1, 3)
    assert city.spec.entity_type == "GPE"


def test_split_head_run_warns_and_is_left_alone(transform_docs, caplog):
    tree = transform_docs["merge_split_heads"].sentences[0]
    with caplog.at_level("WARNING"):
        merged = merge_named_entities(tree)
    assert "not a single subtree" in caplog.text
    assert [t.surface for t in merged.tokens] == [t.surface for t in tree.tokens]


def test_fold_negation_locates_targets(transform_docs):
    tree = transform_docs["neg_advmod"].sentences[0]
    fold = fold_negation(tree)
    not_tok = next(t for t in tree.tokens if t.lemma == "not")
    work_tok = next(t for t in tree.tokens if t.lemma == "work")
    assert not_tok.index in fold.consumed
    assert work_tok.index in fold.targets


def test_copula_becomes_be_event(transform_docs):
    graph = build_document_graph(transform_docs["merge_city"])
    be = next(n for n in graph.nodes() if str(n.id) == "e1")
    assert be.spec.lemma == "be" and be.spec.node_type == "verb"
    assert be.origin_upos == "VERB"


def test_custom_markers_flip_clause_label(transform_docs):
    doc = transform_docs["advocative"]
    narrowed = TransformConfig(subordinate_markers=frozenset({"because"}))
    text = predicates_text(build_document_graph(doc, narrowed))
    assert "SUBORDINATE(e1, e2)" in text
    assert "ADVOCATIVE_CLAUSE" not in text


def test_empty_marker_set_rejected():
    with pytest.raises(ValueError):
        TransformConfig(subordinate_markers=frozenset())


def test_document_graph_shares_one_id_space(fixtures):
    doc = parse_conllu(fixtures / "acme.conllu")[0]
    graph = build_document_graph(doc)
    ids = [str(n.id) for n in graph.nodes()]
    assert len(ids) == len(set(ids))
    assert "e2" in ids and "r4" in ids  # second sentence continued counting


def test_build_sentence_graph_rejects_broken_tree():
    bad = "1\tx\tx\tNOUN\t_\t_\t1\tdep\t_\t_\n\n"
    # parse-time validation already refuses this shape
    with pytest.raises(StructuralError):
        parse_conllu(io.StringIO(bad))


def test_adverb_nodes_serialize_after_the_rest(fixtures):
    doc = parse_conllu(fixtures / "acme.conllu")[0]
    text = predicates_text(build_sentence_graph(doc.sentences[1]))
    assert text == ("she(r1), be(e1), tall(r2), average(r3), quite(r4), "
                    "AGENT(e1, r1), ADJECTIVE(e1, r2), "
                    "than(r2, r3), ADVERB(r2, r4)")
