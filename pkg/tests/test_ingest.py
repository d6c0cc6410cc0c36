import io

import pytest

from semrex import ConlluError, StructuralError, parse_conllu, to_conllu
from semrex.ingest import UPOS_TAGS, validate_tree


def parse_text(text):
    return parse_conllu(io.StringIO(text))


def line(idx, form, lemma, upos, head, deprel, misc="_"):
    return f"{idx}\t{form}\t{lemma}\t{upos}\t_\t_\t{head}\t{deprel}\t_\t{misc}"


def test_parse_acme_fixture(fixtures):
    docs = parse_conllu(fixtures / "acme.conllu")
    assert len(docs) == 1
    doc = docs[0]
    assert doc.doc_id == "acme"
    assert [t.sent_id for t in doc.sentences] == ["s1", "s2"]
    s1 = doc.sentences[0]
    assert len(s1.tokens) == 9
    jane = s1.tokens[0]
    assert (jane.surface, jane.lemma, jane.upos) == ("Jane", "Jane", "PROPN")
    assert jane.ner == "PERSON" and jane.coref == 0
    assert s1.tokens[1].lemma == "be"
    assert s1.tokens[4].ner == "ORG" and s1.tokens[4].coref is None


def test_sentences_without_newdoc_go_to_doc0():
    docs = parse_text(line(1, "Dogs", "dog", "NOUN", 2, "nsubj") + "\n"
                      + line(2, "bark", "bark", "VERB", 0, "root") + "\n\n")
    assert [d.doc_id for d in docs] == ["doc0"]
    assert docs[0].sentences[0].sent_id == "s1"


def test_sent_ids_autonumber_per_document():
    text = "\n".join([
        "# newdoc id = a",
        line(1, "Go", "go", "VERB", 0, "root"), "",
        line(1, "Stop", "stop", "VERB", 0, "root"), "",
    ])
    doc = parse_text(text)[0]
    assert [s.sent_id for s in doc.sentences] == ["s1", "s2"]


def test_non_propn_lemma_is_lowercased():
    doc = parse_text(line(1, "Dogs", "Dog", "NOUN", 0, "root") + "\n\n")[0]
    assert doc.sentences[0].tokens[0].lemma == "dog"


def test_underscore_lemma_falls_back_to_form():
    doc = parse_text(line(1, "running", "_", "VERB", 0, "root") + "\n\n")[0]
    assert doc.sentences[0].tokens[0].lemma == "running"


def test_wrong_column_count_names_line():
    with pytest.raises(ConlluError, match="line 1"):
        parse_text("1\tonly\tthree\n\n")


def test_interjection_tag_is_rejected():
    assert "INTJ" not in UPOS_TAGS
    with pytest.raises(ConlluError, match="INTJ"):
        parse_text(line(1, "Wow", "wow", "INTJ", 0, "root") + "\n\n")


def test_unknown_ner_label_warns_and_is_kept(caplog):
    with caplog.at_level("WARNING"):
        doc = parse_text(line(1, "Rex", "Rex", "PROPN", 0, "root",
                              "NER=ANIMAL") + "\n\n")[0]
    assert "ANIMAL" in caplog.text
    assert doc.sentences[0].tokens[0].ner == "ANIMAL"


def test_bad_coref_id_is_an_error():
    with pytest.raises(ConlluError, match="Coref"):
        parse_text(line(1, "He", "he", "PRON", 0, "root", "Coref=abc") + "\n\n")


def test_noncontiguous_token_ids_are_an_error():
    text = (line(1, "a", "a", "DET", 2, "det") + "\n"
            + line(3, "dog", "dog", "NOUN", 0, "root") + "\n\n")
    with pytest.raises(ConlluError, match="contiguous"):
        parse_text(text)


@pytest.mark.parametrize("head,problem", [
    (5, "out of range"),
    (1, "its own head"),
])
def test_bad_head_pointers(head, problem):
    with pytest.raises(StructuralError, match=problem):
        parse_text(line(1, "x", "x", "NOUN", head, "root") + "\n\n")


def test_two_roots_rejected():
    text = (line(1, "a", "a", "NOUN", 0, "root") + "\n"
            + line(2, "b", "b", "NOUN", 0, "root") + "\n\n")
    with pytest.raises(StructuralError, match="root"):
        parse_text(text)


def test_head_cycle_rejected():
    text = (line(1, "a", "a", "NOUN", 2, "dep") + "\n"
            + line(2, "b", "b", "NOUN", 1, "dep") + "\n\n")
    with pytest.raises(StructuralError, match="cyclic|root"):
        parse_text(text)


def test_validate_tree_accepts_good_sentence(fixtures):
    doc = parse_conllu(fixtures / "acme.conllu")[0]
    assert validate_tree(doc.sentences[0]) is None


def test_meta_comments_are_preserved():
    text = "\n".join([
        "# sent_id = q1",
        "# clause_hash = abcd1234abcd1234",
        line(1, "Go", "go", "VERB", 0, "root"), "",
    ])
    tree = parse_text(text)[0].sentences[0]
    assert tree.meta == {"clause_hash": "abcd1234abcd1234"}


def test_roundtrip_through_to_conllu(fixtures):
    docs = parse_conllu(fixtures / "acme.conllu")
    again = parse_text(to_conllu(docs))
    assert to_conllu(again) == to_conllu(docs)
    first, second = docs[0].sentences[0], again[0].sentences[0]
    assert [t.surface for t in first.tokens] == [t.surface for t in second.tokens]
    assert [t.coref for t in first.tokens] == [t.coref for t in second.tokens]
