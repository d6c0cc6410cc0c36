"""Scoring extracted relations against a gold standard.

Both sides reduce to sets of (doc, relation, head, tail) tuples with
case-insensitive, whitespace-collapsed text. Precision and recall use the
convention that an empty denominator scores 1.0 (an extractor that asserts
nothing is vacuously precise), F1 is their harmonic mean and 0.0 when both
are zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

__all__ = ["RelationRecord", "EvalReport", "RelationScore", "prf",
           "load_records", "evaluate"]


@dataclass(frozen=True)
class RelationRecord:
    doc_id: str
    relation: str
    head: str
    tail: str

    def key(self) -> tuple:
        return (_norm(self.doc_id), _norm(self.relation),
                _norm(self.head), _norm(self.tail))


@dataclass(frozen=True)
class RelationScore:
    relation: str
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float


def _norm(text: str) -> str:
    return " ".join(text.lower().split())


def _phrase(value) -> str:
    # predictions carry {"text": ..., "node": ...}, gold carries bare strings
    if isinstance(value, dict):
        return str(value["text"])
    return str(value)


def load_records(source: Union[str, Path, IO[str]]) -> list[RelationRecord]:
    """Read one relation record per JSON line."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return load_records(handle)
    records = []
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {lineno}: bad JSON: {exc}") from None
        try:
            records.append(RelationRecord(
                doc_id=str(obj["doc_id"]), relation=str(obj["relation"]),
                head=_phrase(obj["head"]), tail=_phrase(obj["tail"])))
        except KeyError as exc:
            raise ValueError(f"line {lineno}: missing field {exc}") from None
    return records


def prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = 1.0 if tp + fp == 0 else tp / (tp + fp)
    recall = 1.0 if tp + fn == 0 else tp / (tp + fn)
    f1 = 0.0 if precision + recall == 0 else \
        2 * precision * recall / (precision + recall)
    return precision, recall, f1


class EvalReport:
    def __init__(self, per_relation: list[RelationScore], micro: RelationScore):
        self.per_relation = per_relation
        self.micro = micro

    def to_dict(self) -> dict:
        def row(s: RelationScore) -> dict:
            return {"tp": s.tp, "fp": s.fp, "fn": s.fn,
                    "precision": s.precision, "recall": s.recall, "f1": s.f1}
        return {"relations": {s.relation: row(s) for s in self.per_relation},
                "micro": row(self.micro)}

    def table(self) -> str:
        rows = self.per_relation + [self.micro]
        width = max(len("relation"), *(len(s.relation) for s in rows))
        head = (f"{'relation':<{width}}  {'tp':>4} {'fp':>4} {'fn':>4}  "
                f"{'prec':>6} {'rec':>6} {'f1':>6}")
        lines = [head, "-" * len(head)]
        for s in rows:
            lines.append(f"{s.relation:<{width}}  {s.tp:>4} {s.fp:>4} {s.fn:>4}  "
                         f"{s.precision:>6.3f} {s.recall:>6.3f} {s.f1:>6.3f}")
        return "\n".join(lines)


def evaluate(predicted: Iterable[RelationRecord],
             gold: Iterable[RelationRecord]) -> EvalReport:
    pred_keys = {r.key() for r in predicted}
    gold_keys = {r.key() for r in gold}

    labels = sorted({k[1] for k in pred_keys} | {k[1] for k in gold_keys})
    scores = []
    for label in labels:
        p = {k for k in pred_keys if k[1] == label}
        g = {k for k in gold_keys if k[1] == label}
        tp, fp, fn = len(p & g), len(p - g), len(g - p)
        precision, recall, f1 = prf(tp, fp, fn)
        scores.append(RelationScore(label, tp, fp, fn, precision, recall, f1))

    tp = len(pred_keys & gold_keys)
    fp = len(pred_keys - gold_keys)
    fn = len(gold_keys - pred_keys)
    precision, recall, f1 = prf(tp, fp, fn)
    micro = RelationScore("micro", tp, fp, fn, precision, recall, f1)
    return EvalReport(scores, micro)
