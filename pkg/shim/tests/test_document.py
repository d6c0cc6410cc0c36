"""Document-mode annotation: structure, entities, coreference, round-trips.

Every assertion about downstream meaning goes through the consumer's own
parser and graph builder, never through private annotator state; the shim
is correct exactly when semrex reads its output the intended way.
"""

import io
import warnings

import pytest

from semrex import build_discourse, parse_conllu, predicates_text

from semrex_shim import annotate_document
from semrex_shim.annotate import split_sentences, tokenize

WORKED_EXAMPLE = ("Jane works as a carpenter at ACME Inc. "
                  "She is quite taller than the average.")


def parse_one(text, doc_id="t"):
    """Annotate and round-trip through the consumer, warnings as errors."""
    rendered = annotate_document(text, doc_id=doc_id)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        docs = parse_conllu(io.StringIO(rendered))
    assert len(docs) == 1
    return rendered, docs[0]


class TestSegmentation:
    def test_two_sentences(self):
        assert len(split_sentences(WORKED_EXAMPLE)) == 2

    def test_quote_opened_sentence(self):
        parts = split_sentences('It rained. "Stay here." He left.')
        assert len(parts) == 3

    def test_tokenize_keeps_multiword_slot_names(self):
        assert tokenize("AT_TIME flies") == ["AT_TIME", "flies"]

    def test_tokenize_splits_punctuation(self):
        assert tokenize("born in 1879.") == ["born", "in", "1879", "."]


@pytest.fixture(scope="module")
def letter():
    return parse_one(WORKED_EXAMPLE, doc_id="letter1")


class TestWorkedExample:
    def test_round_trips_with_structure(self, letter):
        rendered, doc = letter
        assert rendered.startswith("# newdoc id = letter1\n")
        assert doc.doc_id == "letter1"
        assert len(doc.sentences) == 2

    def test_person_and_org_entities(self, letter):
        _, doc = letter
        first = doc.sentences[0]
        by_form = {tok.surface: tok for tok in first.tokens}
        assert by_form["Jane"].ner == "PERSON"
        assert by_form["ACME"].ner == "ORG"
        assert by_form["Inc"].ner == "ORG"

    def test_pronoun_corefers_with_antecedent(self, letter):
        _, doc = letter
        jane = next(t for t in doc.sentences[0].tokens if t.surface == "Jane")
        she = next(t for t in doc.sentences[1].tokens if t.surface == "She")
        assert jane.coref == she.coref == 0

    def test_discourse_graph(self, letter):
        # raw text in, the full two-sentence discourse out
        _, doc = letter
        assert predicates_text(build_discourse(doc)) == (
            "Jane(r1), work(e1), carpenter(r2), ACME_Inc(r3), "
            "AGENT(e1, r1), as(e1, r2), at(e1, r3), "
            "Jane(r4), be(e2), tall(r5), average(r6), quite(r7), "
            "AGENT(e2, r4), ADJECTIVE(e2, r5), than(r5, r6), ADVERB(r5, r7), "
            "REFERS_TO(r1, r4), REFERS_TO(r4, r1)")


class TestConstructions:
    def shape(self, text):
        _, doc = parse_one(text)
        graph = build_discourse(doc)
        names = {}
        for node in graph.nodes():
            label = node.spec.lemma
            names[node.id] = ("!" + label) if node.spec.negated else label
        lemmas = sorted(names.values())
        edges = sorted((e.label, names[e.src], names[e.dst])
                       for e in graph.edges() if e.label != "REFERS_TO")
        return lemmas, edges

    def test_negation(self, text="Jane does not work."):
        lemmas, edges = self.shape(text)
        assert "!work" in lemmas
        assert ("AGENT", "!work", "Jane") in edges

    def test_voice_invariance(self):
        active = self.shape("ACME Inc employed Jane.")
        passive = self.shape("Jane was employed by ACME Inc.")
        assert active == passive
        assert ("AGENT", "employ", "ACME_Inc") in active[1]
        assert ("PATIENT", "employ", "Jane") in active[1]

    def test_possession(self):
        lemmas, edges = self.shape("Her dog barks.")
        assert edges == [("AGENT", "bark", "dog"), ("OWNS", "her", "dog")]

    def test_reported_clause(self):
        _, edges = self.shape("Jane said Mark won.")
        assert ("SUBORDINATE", "say", "win") in edges

    def test_fronted_time_phrase(self):
        _, edges = self.shape("In 1944, Frank Doyle died.")
        assert ("AGENT", "die", "Frank_Doyle") in edges
        assert ("in", "die", "1944") in edges

    def test_conjoined_predicates(self):
        _, edges = self.shape("Jane is smart and wise.")
        assert ("ADJECTIVE", "be", "smart") in edges
        assert ("ADJECTIVE", "be", "wise") in edges


class TestCoreference:
    def test_chain_links_every_pronoun(self):
        _, doc = parse_one("Mary sings. She dances. She is happy.")
        mary = next(t for t in doc.sentences[0].tokens if t.surface == "Mary")
        pronouns = [t for s in doc.sentences[1:] for t in s.tokens
                    if t.surface == "She"]
        assert mary.coref == 0
        assert all(t.coref == 0 for t in pronouns)

    def test_cluster_ids_dense_from_zero(self):
        _, doc = parse_one(
            "Jane sings. ACME Inc grows. She is tall. It is big.")
        ids = sorted({t.coref for s in doc.sentences for t in s.tokens
                      if t.coref is not None})
        assert ids == [0, 1]

    def test_pronoun_without_antecedent_gets_no_id(self):
        rendered, doc = parse_one("She is tall.")
        assert "Coref=" not in rendered
        assert all(t.coref is None
                   for s in doc.sentences for t in s.tokens)

    def test_it_skips_person_antecedents(self):
        _, doc = parse_one("Jane sang. It rained.")
        assert all(t.coref is None
                   for s in doc.sentences for t in s.tokens)


class TestEdgesOfInput:
    def test_empty_text_empty_file(self):
        assert annotate_document("") == ""
        assert parse_conllu(io.StringIO("")) == []

    def test_whitespace_only(self):
        assert annotate_document(" \n\t ") == ""

    def test_no_entities_means_bare_misc(self):
        rendered, _ = parse_one("The dog barks.")
        assert "NER=" not in rendered
        assert "Coref=" not in rendered

    def test_dates_are_tagged(self):
        _, doc = parse_one("Otto Hahn died on Friday.")
        friday = next(t for t in doc.sentences[0].tokens
                      if t.surface == "Friday")
        assert friday.ner == "DATE"

    def test_year_is_tagged(self):
        _, doc = parse_one("Lena Marsh was born in 1955.")
        year = next(t for t in doc.sentences[0].tokens if t.surface == "1955")
        assert year.ner == "DATE"

    def test_deterministic_bytes(self):
        text = "Jane works at ACME Inc. She is tall. Her dog barks."
        assert annotate_document(text) == annotate_document(text)

    def test_every_sentence_has_one_root(self):
        texts = ["Jane wants to win.", "The old dog slept.",
                 "Mark visited New York City on Monday.",
                 "Anna Keller and Mark Keller were born in 1955."]
        for text in texts:
            _, doc = parse_one(text)
            for sent in doc.sentences:
                roots = [t for t in sent.tokens if t.head == 0]
                assert len(roots) == 1, text
