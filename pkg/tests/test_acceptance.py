"""Acceptance gate: one test per shipped guarantee.

Each test prints a single PASS line with the measured numbers once its
assertions hold, so a log of this file is the release checklist.
"""

import json
import sys
import time

import numpy as np

from semrex import (
    DEFAULT_THRESHOLD,
    Definition,
    Lexicon,
    NodeMatchContext,
    RelationRecord,
    WordSpec,
    apply_rules,
    build_discourse,
    definition_match,
    evaluate,
    load_records,
    parse_conllu,
    subgraph_match,
    word_match,
)
from semrex.cli import main
from semrex.graph import predicates_text
from semrex.pipeline import load_rule_set, run_extraction

from test_matcher import as_key_set, brute_force_match, random_graph, random_query


def passline(text):
    print(f"PASS  {text}", file=sys.__stdout__)


def discourse_text(doc):
    return predicates_text(build_discourse(doc))


def normalized_shape(graph):
    """Voice-blind form: lemmas and lemma-level edges, order ignored."""
    lemma = {n.id: ("!" if n.spec.negated else "") + n.spec.lemma
             for n in graph.nodes()}
    nodes = sorted(lemma.values())
    edges = sorted((e.label, lemma[e.src], lemma[e.dst]) for e in graph.edges())
    return nodes, edges


def test_two_sentence_discourse_golden(fixtures):
    started = time.perf_counter()
    doc = parse_conllu(fixtures / "acme.conllu")[0]
    got = discourse_text(doc)
    elapsed = time.perf_counter() - started
    expected = (fixtures / "acme.pred").read_text().rstrip("\n")
    assert got == expected
    assert "REFERS_TO(r1, r4)" in got and "REFERS_TO(r4, r1)" in got
    assert elapsed < 1.0
    passline(f"two-sentence discourse golden: exact match in {elapsed:.3f}s")


def test_conjunction_golden(fixtures):
    doc = parse_conllu(fixtures / "smartwise.conllu")[0]
    got = discourse_text(doc)
    expected = (fixtures / "smartwise.pred").read_text().rstrip("\n")
    assert got == expected
    assert got.count("(") == 7  # seven predicates
    passline("conjunction golden: exact match, 7 predicates")


def test_voice_invariance(fixtures):
    docs = {d.doc_id: d for d in parse_conllu(fixtures / "voice_pairs.conllu")}
    pairs = sorted({d.rsplit("_", 1)[0] for d in docs})
    assert len(pairs) == 5
    for stem in pairs:
        active = normalized_shape(build_discourse(docs[f"{stem}_active"]))
        passive = normalized_shape(build_discourse(docs[f"{stem}_passive"]))
        assert active == passive, stem
    passline("voice invariance: 5 active/passive pairs identical")


def test_word_match_suite(lexicon):
    sim = lexicon.similarity("carpenter", "woodworker")
    assert word_match(WordSpec("carpenter"), WordSpec("woodworker"), lexicon)
    assert sim > DEFAULT_THRESHOLD
    assert round(sim, 3) == 0.824  # the value recorded in the README

    work = WordSpec("work", node_type="verb")
    not_work = WordSpec("work", negated=True, node_type="verb")
    assert not word_match(work, not_work, lexicon)
    assert not word_match(not_work, work, lexicon)

    literature = Definition("LITERATURE",
                            members=("book", "story", "article", "series"))
    assert definition_match(WordSpec("tome"), literature, lexicon)
    passline(f"word-match suite: carpenter~woodworker {sim:.3f} > "
             f"{DEFAULT_THRESHOLD}, negation blocks, tome is LITERATURE")


def test_matcher_matches_brute_force_oracle():
    import random
    rng = random.Random(20260818)
    ctx = NodeMatchContext(Lexicon.empty())
    started = time.perf_counter()
    positives = 0
    for case in range(500):
        data = random_graph(rng, max_nodes=8).freeze()
        query = random_query(rng, data, max_nodes=5)
        expected = as_key_set(brute_force_match(query, data, ctx))
        got = as_key_set(subgraph_match(query, data, ctx))
        assert got == expected, f"case {case}"
        positives += bool(expected)
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    assert positives >= 100
    passline(f"matcher oracle: 500/500 equal ({positives} with bindings) "
             f"in {elapsed:.1f}s")


def test_date_rules_end_to_end(data_dir):
    edges = run_extraction(rules_path=data_dir / "dates.rex",
                           input_paths=[data_dir / "corpus.conllu"],
                           vectors_path=data_dir / "vectors_50d.txt")
    predicted = [RelationRecord(e.doc_id, e.label, e.head_text, e.tail_text)
                 for e in edges]
    gold = load_records(data_dir / "corpus.gold.jsonl")
    report = evaluate(predicted, gold)

    by_label = {s.relation: s for s in report.per_relation}
    assert set(by_label) == {"date_of_birth", "date_of_death"}
    for score in by_label.values():
        assert score.precision == 1.0, score
        assert score.recall == 1.0, score
    assert report.micro.fp == 0

    distractors = {f"c{n}" for n in range(31, 51)}
    assert not distractors & {e.doc_id for e in edges}
    passline(f"date rules end-to-end: P=1.0 R=1.0 on both relations, "
             f"{len(edges)} relations, 0 hits on 20 distractors")


def test_rule_count_linearity(fixtures, lexicon):
    definitions, rules = load_rule_set(fixtures / "example.rex")
    ctx = NodeMatchContext(lexicon, definitions)
    doc = parse_conllu(fixtures / "worksas.conllu")[0]
    graph = build_discourse(doc)
    base = rules[0]

    started = time.perf_counter()
    counts = [1, 10, 100, 1000]
    medians = []
    for k in counts:
        batch = [base] * k
        runs = []
        for _ in range(3):
            t0 = time.perf_counter()
            apply_rules(graph, batch, ctx, doc.doc_id)
            runs.append(time.perf_counter() - t0)
        medians.append(sorted(runs)[1])
    elapsed = time.perf_counter() - started

    slope, intercept = np.polyfit(counts, medians, 1)
    predicted = np.polyval([slope, intercept], counts)
    residual = np.sum((np.asarray(medians) - predicted) ** 2)
    total = np.sum((np.asarray(medians) - np.mean(medians)) ** 2)
    r_squared = 1.0 - residual / total
    assert r_squared >= 0.98
    assert elapsed < 120.0
    passline(f"rule-count linearity: R^2={r_squared:.4f} over k={counts} "
             f"in {elapsed:.1f}s")


def test_extraction_is_deterministic(fixtures, data_dir, tmp_path):
    jobs = [
        (data_dir / "dates.rex",
         [data_dir / "corpus.conllu", fixtures / "worksas.conllu",
          fixtures / "acme.conllu", fixtures / "transforms.conllu",
          fixtures / "voice_pairs.conllu"]),
        (fixtures / "example.rex", [fixtures / "worksas.conllu"]),
    ]
    total = 0
    for n, (rules_path, inputs) in enumerate(jobs):
        outputs = []
        for attempt in ("a", "b"):
            out = tmp_path / f"run{n}{attempt}.jsonl"
            argv = (["extract", "--rules", str(rules_path),
                     "--vectors", str(data_dir / "vectors_50d.txt"),
                     "--out", str(out), "--input"]
                    + [str(p) for p in inputs])
            assert main(argv) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        total += len(outputs[0].splitlines())
    passline(f"determinism: repeated extract runs byte-identical "
             f"({total} relation lines compared)")


def test_eval_arithmetic(tmp_path, capsys):
    gold = [{"doc_id": "d1", "relation": "born_in", "head": "Jane", "tail": "1955"},
            {"doc_id": "d1", "relation": "born_in", "head": "Mark", "tail": "1960"},
            {"doc_id": "d2", "relation": "died_in", "head": "Otto", "tail": "1944"}]
    cases = [
        ("exact", gold, dict(precision=1.0, recall=1.0, f1=1.0)),
        ("empty", [], dict(precision=1.0, recall=0.0, f1=0.0)),
        ("mixed", [gold[0],
                   {"doc_id": "d2", "relation": "born_in",
                    "head": "Nobody", "tail": "1900"}],
         dict(precision=0.5, recall=1 / 3, f1=0.4)),
    ]
    gold_path = tmp_path / "gold.jsonl"
    gold_path.write_text("".join(json.dumps(r) + "\n" for r in gold))
    for name, pred, wanted in cases:
        pred_path = tmp_path / f"{name}.jsonl"
        pred_path.write_text("".join(json.dumps(r) + "\n" for r in pred))
        assert main(["eval", "--json", "--pred", str(pred_path),
                     "--gold", str(gold_path)]) == 0
        micro = json.loads(capsys.readouterr().out)["micro"]
        for field, value in wanted.items():
            assert micro[field] == value, (name, field)
    passline("eval arithmetic: all three pinned scoring cases exact")
