"""Rules mode: companion generation and hash agreement with the consumer.

The clause hash is implemented independently on both sides from the same
recipe; these tests are where the two implementations are held together.
"""

import io
import json
from pathlib import Path

import pytest

import semrex
from semrex import ParseProvider, load_rule_set, parse_conllu, run_extraction

from semrex_shim import GrammarError, annotate_rules, clause_hash
from semrex_shim.rules import read_rule_file

REPO = Path(__file__).resolve().parents[2]
DATA = REPO / "src" / "semrex" / "data"
FIXTURES = REPO / "tests" / "fixtures"

DATES_REX = (DATA / "dates.rex").read_text()
EXAMPLE_REX = (FIXTURES / "example.rex").read_text()


class TestClauseHash:
    CLAUSES = [
        "PERSON#1 works as a ROLE#2.",
        "PERSON#1 is born AT_TIME#2",
        "PERSON#1 works at ORG#2 as a ROLE. PERSON is tall.",
        "  Mixed   CASE  and	tabs #7 ",
    ]

    @pytest.mark.parametrize("clause", CLAUSES)
    def test_agrees_with_consumer(self, clause):
        assert clause_hash(clause) == semrex.clause_hash(clause)

    def test_sixteen_hex_chars(self):
        digest = clause_hash("PERSON works.")
        assert len(digest) == 16
        assert set(digest) <= set("0123456789abcdef")

    def test_markers_case_and_spacing_do_not_matter(self):
        assert (clause_hash("PERSON#1 works as a ROLE#2.")
                == clause_hash("person  works as a role."))


class TestReadRuleFile:
    def test_reads_the_shipped_rules(self):
        names, patterns = read_rule_file(DATES_REX)
        assert names == ["PERSON", "DAY", "YEAR", "AT_TIME", "AT_MOMENT"]
        assert len(patterns) == 6
        assert patterns[0] == "PERSON#1 is born AT_TIME#2"

    def test_comments_and_hash_in_string(self):
        names, patterns = read_rule_file(
            '# heading\nMATCH "A#1 sees B#2" CREATE (sees 1 2); # tail\n')
        assert names == []
        assert patterns == ["A#1 sees B#2"]

    def test_unknown_statement(self):
        with pytest.raises(GrammarError, match="line 2"):
            read_rule_file('DEFINE A AS [x];\nSELECT everything;\n')

    def test_missing_semicolon(self):
        with pytest.raises(GrammarError, match="line 1"):
            read_rule_file('MATCH "A#1 runs B#2" CREATE (runs 1 2)')

    def test_unterminated_string(self):
        with pytest.raises(GrammarError, match="unterminated"):
            read_rule_file('MATCH "A#1 runs\nCREATE (runs 1 2);')


class TestCompanionGeneration:
    def test_shipped_rules_reproduce_committed_companion(self):
        assert annotate_rules(DATES_REX) == (DATA / "dates.rex.conllu").read_text()

    def test_example_rules_reproduce_committed_companion(self):
        assert annotate_rules(EXAMPLE_REX) == (
            FIXTURES / "example.rex.conllu").read_text()

    def test_one_group_per_match_clause(self):
        provider = ParseProvider.from_file(io.StringIO(annotate_rules(DATES_REX)))
        assert len(provider) == 6

    def test_multi_sentence_pattern_repeats_hash(self):
        companion = annotate_rules(EXAMPLE_REX)
        digest = clause_hash("PERSON#1 works at ORG#2 as a ROLE. PERSON is tall.")
        assert companion.count(f"# clause_hash = {digest}") == 2

    def test_slot_tokens_forced_proper(self):
        (doc,) = parse_conllu(io.StringIO(annotate_rules(DATES_REX)))
        slots = [t for s in doc.sentences for t in s.tokens
                 if t.surface in ("PERSON", "DAY", "YEAR", "AT_TIME",
                                  "AT_MOMENT")]
        assert slots
        for tok in slots:
            assert tok.upos == "PROPN"
            assert tok.lemma == tok.surface
            assert tok.ner is None

    def test_zero_rules_empty_companion(self):
        assert annotate_rules("# only a comment\nDEFINE A AS [x];\n") == ""

    def test_novel_pattern_round_trips(self):
        text = ('DEFINE PLACE AS {GPE};\n'
                'MATCH "PERSON#1 moves to PLACE#2" CREATE (moves_to 1 2);\n')
        provider = ParseProvider.from_file(io.StringIO(annotate_rules(text)))
        group = provider.lookup("PERSON#1 moves to PLACE#2")
        assert group is not None and len(group) == 1


class TestDropInCompanion:
    """A generated companion must be interchangeable with the shipped one."""

    def test_rules_compile(self, tmp_path):
        companion = tmp_path / "dates.rex.conllu"
        companion.write_text(annotate_rules(DATES_REX))
        definitions, rules = load_rule_set(DATA / "dates.rex", companion)
        assert len(definitions) == 5
        assert len(rules) == 6

    def test_extraction_matches_shipped_gold(self, tmp_path):
        companion = tmp_path / "dates.rex.conllu"
        companion.write_text(annotate_rules(DATES_REX))
        found = run_extraction(
            DATA / "dates.rex", [DATA / "corpus.conllu"],
            vectors_path=DATA / "vectors_50d.txt", parses_path=companion)
        gold = {(r["relation"], r["head"], r["tail"])
                for r in map(json.loads,
                             (DATA / "corpus.gold.jsonl").read_text().splitlines())}
        assert {(r.label, r.head_text, r.tail_text) for r in found} == gold
