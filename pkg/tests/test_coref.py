import io

import pytest

from semrex import (
    build_discourse,
    build_document_graph,
    clusters_from_document,
    link_corefs,
    parse_conllu,
)
from semrex.coref import CorefCluster, Mention
from semrex.graph import NodeId, predicates_text

JANE_WITH_COREF = (
    "Jane(r1), work(e1), ACME_Inc(r2), woodworker(r3), "
    "AGENT(e1, r1), at(e1, r2), as(e1, r3), "
    "Jane(r4), be(e2), tall(r5), average(r6), quite(r7), "
    "AGENT(e2, r4), ADJECTIVE(e2, r5), than(r5, r6), ADVERB(r5, r7), "
    "REFERS_TO(r1, r4), REFERS_TO(r4, r1)"
)

JANE_BEFORE_COREF = (
    "Jane(r1), work(e1), ACME_Inc(r2), woodworker(r3), "
    "AGENT(e1, r1), at(e1, r2), as(e1, r3), "
    "she(r4), be(e2), tall(r5), average(r6), quite(r7), "
    "AGENT(e2, r4), ADJECTIVE(e2, r5), than(r5, r6), ADVERB(r5, r7)"
)


@pytest.fixture()
def acme(fixtures):
    return parse_conllu(fixtures / "acme.conllu")[0]


def test_graph_before_linking(acme):
    assert predicates_text(build_document_graph(acme)) == JANE_BEFORE_COREF


def test_linking_adds_edges_and_relabels_pronoun(acme):
    graph = build_document_graph(acme)
    link_corefs(graph, clusters_from_document(acme))
    assert predicates_text(graph) == JANE_WITH_COREF


def test_build_discourse_is_the_linked_frozen_graph(acme):
    graph = build_discourse(acme)
    assert graph.frozen
    assert predicates_text(graph) == JANE_WITH_COREF


def test_relabeled_pronoun_keeps_its_own_tags(acme):
    graph = build_discourse(acme)
    pron = graph.node(NodeId.parse("r4"))
    assert pron.spec.lemma == "Jane"
    assert pron.origin_upos == "PRON"
    # only the lemma transfers; the antecedent's entity tag does not
    assert pron.spec.entity_type is None


def test_refers_partners_after_linking(acme):
    graph = build_discourse(acme)
    assert graph.refers_partners(NodeId.parse("r1")) == [NodeId.parse("r4")]
    assert graph.refers_partners(NodeId.parse("r2")) == []


def test_cluster_extraction(acme):
    clusters = clusters_from_document(acme)
    assert len(clusters) == 1
    cluster = clusters[0]
    assert cluster.cluster_id == 0
    assert [m.sent_id for m in cluster.mentions] == ["s1", "s2"]
    assert cluster.mentions[0].first == 1 and cluster.mentions[0].last == 1


def test_singletons_are_dropped():
    text = "\n".join([
        "# newdoc id = solo",
        "1\tJane\tJane\tPROPN\t_\t_\t2\tnsubj\t_\tNER=PERSON|Coref=4",
        "2\tworks\twork\tVERB\t_\t_\t0\troot\t_\t_", "",
    ])
    doc = parse_conllu(io.StringIO(text))[0]
    assert clusters_from_document(doc) == []


def test_cluster_requires_two_mentions():
    lone = Mention("d", "s1", 1, 1)
    with pytest.raises(ValueError, match="fewer than two"):
        CorefCluster(3, (lone,))


def test_two_nouns_never_link():
    # Same cluster id on two plain nouns: conservative policy skips the pair.
    text = "\n".join([
        "# newdoc id = nouns",
        "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_",
        "2\tdog\tdog\tNOUN\t_\t_\t3\tnsubj\t_\tCoref=1",
        "3\tbarked\tbark\tVERB\t_\t_\t0\troot\t_\t_", "",
        "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_",
        "2\tanimal\tanimal\tNOUN\t_\t_\t3\tnsubj\t_\tCoref=1",
        "3\tslept\tsleep\tVERB\t_\t_\t0\troot\t_\t_", "",
    ])
    doc = parse_conllu(io.StringIO(text))[0]
    graph = build_discourse(doc)
    assert "REFERS_TO" not in predicates_text(graph)


def test_two_pronouns_link_without_relabel():
    text = "\n".join([
        "# newdoc id = prons",
        "1\tShe\tshe\tPRON\t_\t_\t2\tnsubj\t_\tCoref=2",
        "2\tsang\tsing\tVERB\t_\t_\t0\troot\t_\t_", "",
        "1\tShe\tshe\tPRON\t_\t_\t2\tnsubj\t_\tCoref=2",
        "2\tdanced\tdance\tVERB\t_\t_\t0\troot\t_\t_", "",
    ])
    doc = parse_conllu(io.StringIO(text))[0]
    graph = build_discourse(doc)
    text_out = predicates_text(graph)
    assert "REFERS_TO(r1, r2)" in text_out and "REFERS_TO(r2, r1)" in text_out
    assert graph.node(NodeId.parse("r1")).spec.lemma == "she"


def test_unresolved_mention_warns(acme, caplog):
    graph = build_document_graph(acme)
    ghost = CorefCluster(9, (
        Mention("acme", "s1", 1, 1),
        Mention("acme", "s9", 1, 1),  # no such sentence
    ))
    with caplog.at_level("WARNING"):
        link_corefs(graph, [ghost])
    assert "no node for mention" in caplog.text
