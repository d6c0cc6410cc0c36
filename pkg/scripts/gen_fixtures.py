#!/usr/bin/env python3
"""Generate the committed corpus, gold file and rule-clause parses.

Every sentence is written out as an explicit token list, so the linguistic
annotations are reviewable right here. The gold relations are part of the
templates: they state what each sentence asserts, they are not produced by
running the extractor.

The package is imported for exactly one thing: stamping each pre-parsed
rule clause with the hash the rule loader will look up.

Run from the repository root:

    python3 scripts/gen_fixtures.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
from semrex.rules import clause_hash  # noqa: E402

# token = (form, lemma, upos, head, deprel, misc)


def tok(form, lemma, upos, head, deprel, misc="_"):
    return (form, lemma, upos, head, deprel, misc)


def person(first, last, head, deprel):
    """Two-token person name; the second token hangs off the first."""
    return [tok(first, first, "PROPN", head, deprel, "NER=PERSON"),
            tok(last, last, "PROPN", None, "flat", "NER=PERSON")]


def finish(parts):
    """Resolve the None heads left by multi-token helpers."""
    tokens = []
    for i, t in enumerate(parts):
        form, lemma, upos, head, deprel, misc = t
        if head is None:
            head = i  # previous token, 1-based
        tokens.append((form, lemma, upos, head, deprel, misc))
    return tokens


def born_bare(first, last, month, year):
    # "<Name> was born <Month> <Year> ."
    return finish(
        person(first, last, 4, "nsubj:pass") + [
            tok("was", "be", "AUX", 4, "aux:pass"),
            tok("born", "bear", "VERB", 0, "root"),
            tok(month, month, "PROPN", 4, "obl:tmod", "NER=DATE"),
            tok(year, year, "NUM", 5, "flat", "NER=DATE"),
            tok(".", ".", "PUNCT", 4, "punct"),
        ])


def born_prep(first, last, prep, date_parts):
    # "<Name> was born on|in <date> ."
    date0 = 6
    tokens = person(first, last, 4, "nsubj:pass") + [
        tok("was", "be", "AUX", 4, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok(prep, prep, "ADP", date0, "case"),
    ]
    for i, (form, upos) in enumerate(date_parts):
        head, deprel = (4, "obl") if i == 0 else (date0, "flat")
        tokens.append(tok(form, form, upos, head, deprel, "NER=DATE"))
    tokens.append(tok(".", ".", "PUNCT", 4, "punct"))
    return finish(tokens)


def born_conj(f1, l1, f2, l2, year):
    # "<Name> and <Name> were born in <year> ."
    return finish([
        tok(f1, f1, "PROPN", 7, "nsubj:pass", "NER=PERSON"),
        tok(l1, l1, "PROPN", 1, "flat", "NER=PERSON"),
        tok("and", "and", "CCONJ", 4, "cc"),
        tok(f2, f2, "PROPN", 1, "conj", "NER=PERSON"),
        tok(l2, l2, "PROPN", 4, "flat", "NER=PERSON"),
        tok("were", "be", "AUX", 7, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("in", "in", "ADP", 9, "case"),
        tok(year, year, "NUM", 7, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 7, "punct"),
    ])


def died_bare(first, last, weekday):
    # "<Name> died <Weekday> ." with no entity tag on the weekday
    return finish(
        person(first, last, 3, "nsubj") + [
            tok("died", "die", "VERB", 0, "root"),
            tok(weekday, weekday, "PROPN", 3, "obl:tmod"),
            tok(".", ".", "PUNCT", 3, "punct"),
        ])


def died_prep(first, last, prep, date_parts):
    date0 = 5
    tokens = person(first, last, 3, "nsubj") + [
        tok("died", "die", "VERB", 0, "root"),
        tok(prep, prep, "ADP", date0, "case"),
    ]
    for i, (form, upos) in enumerate(date_parts):
        head, deprel = (3, "obl") if i == 0 else (date0, "flat")
        tokens.append(tok(form, form, upos, head, deprel, "NER=DATE"))
    tokens.append(tok(".", ".", "PUNCT", 3, "punct"))
    return finish(tokens)


def died_conj(f1, l1, f2, l2, year):
    return finish([
        tok(f1, f1, "PROPN", 6, "nsubj", "NER=PERSON"),
        tok(l1, l1, "PROPN", 1, "flat", "NER=PERSON"),
        tok("and", "and", "CCONJ", 4, "cc"),
        tok(f2, f2, "PROPN", 1, "conj", "NER=PERSON"),
        tok(l2, l2, "PROPN", 4, "flat", "NER=PERSON"),
        tok("died", "die", "VERB", 0, "root"),
        tok("in", "in", "ADP", 8, "case"),
        tok(year, year, "NUM", 6, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 6, "punct"),
    ])


BIRTH, DEATH = "DATE_OF_BIRTH", "DATE_OF_DEATH"

# (doc_id, tokens, [(relation, head text, tail text), ...])
CORPUS = [
    # bare temporal after "born"
    ("c01", born_bare("Ada", "Lovell", "June", "1930"),
     [(BIRTH, "Ada Lovell", "June 1930")]),
    ("c02", born_bare("Omar", "Reyes", "March", "1921"),
     [(BIRTH, "Omar Reyes", "March 1921")]),
    ("c03", born_bare("Lena", "Hart", "April", "1960"),
     [(BIRTH, "Lena Hart", "April 1960")]),
    ("c04", born_bare("Ivan", "Petrov", "December", "1911"),
     [(BIRTH, "Ivan Petrov", "December 1911")]),
    ("c05", born_bare("Mia", "Sorel", "October", "1945"),
     [(BIRTH, "Mia Sorel", "October 1945")]),
    # "born on <day>"
    ("c06", born_prep("Noah", "Quist", "on", [("March", "PROPN"), ("3", "NUM")]),
     [(BIRTH, "Noah Quist", "March 3")]),
    ("c07", born_prep("Tessa", "Lindqvist", "on", [("July", "PROPN"), ("14", "NUM")]),
     [(BIRTH, "Tessa Lindqvist", "July 14")]),
    ("c08", born_prep("Hugo", "Mars", "on", [("Friday", "PROPN")]),
     [(BIRTH, "Hugo Mars", "Friday")]),
    ("c09", born_prep("Petra", "Nilsson", "on", [("May", "PROPN"), ("1", "NUM")]),
     [(BIRTH, "Petra Nilsson", "May 1")]),
    ("c10", born_prep("Carl", "Jensen", "on", [("June", "PROPN"), ("30", "NUM")]),
     [(BIRTH, "Carl Jensen", "June 30")]),
    # "born in <year>"
    ("c11", born_prep("Elsa", "Brandt", "in", [("1902", "NUM")]),
     [(BIRTH, "Elsa Brandt", "1902")]),
    ("c12", born_prep("Viktor", "Hale", "in", [("1878", "NUM")]),
     [(BIRTH, "Viktor Hale", "1878")]),
    ("c13", born_conj("Anna", "Keller", "Mark", "Keller", "1955"),
     [(BIRTH, "Anna Keller", "1955"), (BIRTH, "Mark Keller", "1955")]),
    ("c14", born_prep("Rosa", "Marsh", "in", [("1988", "NUM")]),
     [(BIRTH, "Rosa Marsh", "1988")]),
    ("c15", born_prep("Leon", "Faber", "in", [("1923", "NUM")]),
     [(BIRTH, "Leon Faber", "1923")]),
    # bare weekday after "died", untagged so only the word cluster can catch it
    ("c16", died_bare("Rosa", "Marsh", "Monday"),
     [(DEATH, "Rosa Marsh", "Monday")]),
    ("c17", died_bare("Ivan", "Petrov", "Sunday"),
     [(DEATH, "Ivan Petrov", "Sunday")]),
    ("c18", died_bare("Greta", "Olsen", "Wednesday"),
     [(DEATH, "Greta Olsen", "Wednesday")]),
    ("c19", died_bare("Omar", "Reyes", "Saturday"),
     [(DEATH, "Omar Reyes", "Saturday")]),
    ("c20", died_bare("Jonas", "Ek", "Tuesday"),
     [(DEATH, "Jonas Ek", "Tuesday")]),
    # "died on <day>"
    ("c21", died_prep("Viktor", "Hale", "on", [("April", "PROPN"), ("9", "NUM")]),
     [(DEATH, "Viktor Hale", "April 9")]),
    ("c22", died_prep("Mia", "Sorel", "on", [("Thursday", "PROPN")]),
     [(DEATH, "Mia Sorel", "Thursday")]),
    ("c23", died_prep("Carl", "Jensen", "on", [("January", "PROPN"), ("2", "NUM")]),
     [(DEATH, "Carl Jensen", "January 2")]),
    ("c24", died_prep("Tessa", "Lindqvist", "on", [("August", "PROPN"), ("19", "NUM")]),
     [(DEATH, "Tessa Lindqvist", "August 19")]),
    ("c25", died_prep("Noah", "Quist", "on", [("February", "PROPN"), ("11", "NUM")]),
     [(DEATH, "Noah Quist", "February 11")]),
    # "died in <year>"
    ("c26", died_prep("Elsa", "Brandt", "in", [("1990", "NUM")]),
     [(DEATH, "Elsa Brandt", "1990")]),
    ("c27", died_prep("Leon", "Faber", "in", [("2001", "NUM")]),
     [(DEATH, "Leon Faber", "2001")]),
    ("c28", died_conj("Frank", "Doyle", "Otto", "Braun", "1944"),
     [(DEATH, "Frank Doyle", "1944"), (DEATH, "Otto Braun", "1944")]),
    ("c29", died_prep("Greta", "Olsen", "in", [("1979", "NUM")]),
     [(DEATH, "Greta Olsen", "1979")]),
    ("c30", died_prep("Jonas", "Ek", "in", [("2015", "NUM")]),
     [(DEATH, "Jonas Ek", "2015")]),
    # distractors: negation
    ("c31", finish(person("Paul", "Dent", 5, "nsubj:pass") + [
        tok("was", "be", "AUX", 5, "aux:pass"),
        tok("not", "not", "PART", 5, "advmod"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("in", "in", "ADP", 7, "case"),
        tok("1950", "1950", "NUM", 5, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 5, "punct")]), []),
    # wrong entity type on the subject
    ("c32", finish([
        tok("Rex", "Rex", "PROPN", 4, "nsubj:pass", "NER=ORG"),
        tok("Labs", "Labs", "PROPN", 1, "flat", "NER=ORG"),
        tok("was", "be", "AUX", 4, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("in", "in", "ADP", 6, "case"),
        tok("1999", "1999", "NUM", 4, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 4, "punct")]), []),
    # pronoun with no antecedent
    ("c33", finish([
        tok("She", "she", "PRON", 3, "nsubj:pass"),
        tok("was", "be", "AUX", 3, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("in", "in", "ADP", 5, "case"),
        tok("1960", "1960", "NUM", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    # in-vocabulary verbs that stay below the similarity cutoff
    ("c34", finish(person("Dora", "Flint", 3, "nsubj") + [
        tok("married", "marry", "VERB", 0, "root"),
        tok("Sam", "Sam", "PROPN", 3, "obj", "NER=PERSON"),
        tok("Flint", "Flint", "PROPN", 4, "flat", "NER=PERSON"),
        tok("in", "in", "ADP", 7, "case"),
        tok("1980", "1980", "NUM", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    ("c35", finish(person("Elio", "Parks", 3, "nsubj") + [
        tok("visited", "visit", "VERB", 0, "root"),
        tok("Rome", "Rome", "PROPN", 3, "obj", "NER=GPE"),
        tok("in", "in", "ADP", 6, "case"),
        tok("2002", "2002", "NUM", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    ("c36", finish(person("Nina", "Holt", 3, "nsubj") + [
        tok("founded", "found", "VERB", 0, "root"),
        tok("Holt", "Holt", "PROPN", 3, "obj", "NER=ORG"),
        tok("Labs", "Labs", "PROPN", 4, "flat", "NER=ORG"),
        tok("in", "in", "ADP", 7, "case"),
        tok("1987", "1987", "NUM", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    # adverb where the rules want a tagged or listed time
    ("c37", finish(person("Marco", "Dees", 4, "nsubj:pass") + [
        tok("was", "be", "AUX", 4, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("early", "early", "ADV", 4, "advmod"),
        tok(".", ".", "PUNCT", 4, "punct")]), []),
    ("c38", finish(person("Tim", "Voss", 4, "nsubj") + [
        tok("will", "will", "AUX", 4, "aux"),
        tok("die", "die", "VERB", 0, "root"),
        tok("someday", "someday", "ADV", 4, "advmod"),
        tok(".", ".", "PUNCT", 4, "punct")]), []),
    ("c39", finish(person("Kate", "Lunn", 3, "nsubj") + [
        tok("works", "work", "VERB", 0, "root"),
        tok("in", "in", "ADP", 5, "case"),
        tok("Berlin", "Berlin", "PROPN", 3, "obl", "NER=GPE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    # right verb, place instead of time
    ("c40", finish(person("Sven", "Alm", 3, "nsubj") + [
        tok("died", "die", "VERB", 0, "root"),
        tok("in", "in", "ADP", 5, "case"),
        tok("Berlin", "Berlin", "PROPN", 3, "obl", "NER=GPE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    ("c41", finish(person("Lars", "Ovie", 4, "nsubj:pass") + [
        tok("was", "be", "AUX", 4, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("in", "in", "ADP", 6, "case"),
        tok("Oslo", "Oslo", "PROPN", 4, "obl", "NER=GPE"),
        tok(".", ".", "PUNCT", 4, "punct")]), []),
    ("c42", finish([
        tok("A", "a", "DET", 2, "det"),
        tok("book", "book", "NOUN", 4, "nsubj:pass"),
        tok("was", "be", "AUX", 4, "aux:pass"),
        tok("published", "publish", "VERB", 0, "root"),
        tok("in", "in", "ADP", 6, "case"),
        tok("1999", "1999", "NUM", 4, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 4, "punct")]), []),
    ("c43", finish(person("Mona", "Hess", 3, "nsubj") + [
        tok("retired", "retire", "VERB", 0, "root"),
        tok("on", "on", "ADP", 5, "case"),
        tok("Monday", "Monday", "PROPN", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    # right verb and preposition, untyped noun in the slot
    ("c44", finish(person("Judy", "Marr", 3, "nsubj") + [
        tok("dies", "die", "VERB", 0, "root"),
        tok("in", "in", "ADP", 6, "case"),
        tok("the", "the", "DET", 6, "det"),
        tok("novel", "novel", "NOUN", 3, "obl"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    ("c45", finish([
        tok("The", "the", "DET", 2, "det"),
        tok("team", "team", "NOUN", 3, "nsubj"),
        tok("won", "win", "VERB", 0, "root"),
        tok("the", "the", "DET", 5, "det"),
        tok("game", "game", "NOUN", 3, "obj"),
        tok("on", "on", "ADP", 7, "case"),
        tok("Sunday", "Sunday", "PROPN", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    ("c46", finish(person("Olof", "Rask", 3, "nsubj") + [
        tok("wrote", "write", "VERB", 0, "root"),
        tok("a", "a", "DET", 5, "det"),
        tok("tome", "tome", "NOUN", 3, "obj"),
        tok("in", "in", "ADP", 7, "case"),
        tok("1966", "1966", "NUM", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    ("c47", finish(person("Iris", "Boe", 3, "nsubj") + [
        tok("visited", "visit", "VERB", 0, "root"),
        tok("Oslo", "Oslo", "PROPN", 3, "obj", "NER=GPE"),
        tok("on", "on", "ADP", 6, "case"),
        tok("Friday", "Friday", "PROPN", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    ("c48", finish([
        tok("Hanselt", "Hanselt", "PROPN", 4, "nsubj:pass", "NER=ORG"),
        tok("University", "University", "PROPN", 1, "flat", "NER=ORG"),
        tok("was", "be", "AUX", 4, "aux:pass"),
        tok("founded", "found", "VERB", 0, "root"),
        tok("in", "in", "ADP", 6, "case"),
        tok("1890", "1890", "NUM", 4, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 4, "punct")]), []),
    ("c49", finish(person("Mara", "Voll", 3, "nsubj") + [
        tok("sang", "sing", "VERB", 0, "root"),
        tok("on", "on", "ADP", 5, "case"),
        tok("Thursday", "Thursday", "PROPN", 3, "obl", "NER=DATE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
    ("c50", finish(person("Edgar", "Poe", 3, "nsubj") + [
        tok("writes", "write", "VERB", 0, "root"),
        tok("books", "book", "NOUN", 3, "obj"),
        tok("in", "in", "ADP", 6, "case"),
        tok("Boston", "Boston", "PROPN", 3, "obl", "NER=GPE"),
        tok(".", ".", "PUNCT", 3, "punct")]), []),
]

# pre-parsed rule clauses: (clause text as written in the rule file,
#                           [token list per sentence])
DATES_CLAUSES = [
    ("PERSON#1 is born AT_TIME#2", [finish([
        tok("PERSON", "PERSON", "PROPN", 3, "nsubj:pass"),
        tok("is", "be", "AUX", 3, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("AT_TIME", "AT_TIME", "PROPN", 3, "obl:tmod")])]),
    ("PERSON#1 is born on DAY#2", [finish([
        tok("PERSON", "PERSON", "PROPN", 3, "nsubj:pass"),
        tok("is", "be", "AUX", 3, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("on", "on", "ADP", 5, "case"),
        tok("DAY", "DAY", "PROPN", 3, "obl")])]),
    ("PERSON#1 is born in YEAR#2", [finish([
        tok("PERSON", "PERSON", "PROPN", 3, "nsubj:pass"),
        tok("is", "be", "AUX", 3, "aux:pass"),
        tok("born", "bear", "VERB", 0, "root"),
        tok("in", "in", "ADP", 5, "case"),
        tok("YEAR", "YEAR", "PROPN", 3, "obl")])]),
    ("PERSON#1 dies AT_MOMENT#2", [finish([
        tok("PERSON", "PERSON", "PROPN", 2, "nsubj"),
        tok("dies", "die", "VERB", 0, "root"),
        tok("AT_MOMENT", "AT_MOMENT", "PROPN", 2, "obl:tmod")])]),
    ("PERSON#1 dies on DAY#2", [finish([
        tok("PERSON", "PERSON", "PROPN", 2, "nsubj"),
        tok("dies", "die", "VERB", 0, "root"),
        tok("on", "on", "ADP", 4, "case"),
        tok("DAY", "DAY", "PROPN", 2, "obl")])]),
    ("PERSON#1 dies in YEAR#2", [finish([
        tok("PERSON", "PERSON", "PROPN", 2, "nsubj"),
        tok("dies", "die", "VERB", 0, "root"),
        tok("in", "in", "ADP", 4, "case"),
        tok("YEAR", "YEAR", "PROPN", 2, "obl")])]),
]

EXAMPLE_CLAUSES = [
    ("PERSON#1 works as a ROLE#2.", [finish([
        tok("PERSON", "PERSON", "PROPN", 2, "nsubj"),
        tok("works", "work", "VERB", 0, "root"),
        tok("as", "as", "ADP", 5, "case"),
        tok("a", "a", "DET", 5, "det"),
        tok("ROLE", "ROLE", "PROPN", 2, "obl"),
        tok(".", ".", "PUNCT", 2, "punct")])]),
    ("PERSON#1 works at ORG#2 as a ROLE. PERSON is tall.", [
        finish([
            tok("PERSON", "PERSON", "PROPN", 2, "nsubj"),
            tok("works", "work", "VERB", 0, "root"),
            tok("at", "at", "ADP", 4, "case"),
            tok("ORG", "ORG", "PROPN", 2, "obl"),
            tok("as", "as", "ADP", 7, "case"),
            tok("a", "a", "DET", 7, "det"),
            tok("ROLE", "ROLE", "PROPN", 2, "obl"),
            tok(".", ".", "PUNCT", 2, "punct")]),
        finish([
            tok("PERSON", "PERSON", "PROPN", 3, "nsubj"),
            tok("is", "be", "AUX", 3, "cop"),
            tok("tall", "tall", "ADJ", 0, "root"),
            tok(".", ".", "PUNCT", 3, "punct")])]),
]


def sentence_lines(tokens):
    lines = []
    for i, (form, lemma, upos, head, deprel, misc) in enumerate(tokens, start=1):
        lines.append(f"{i}\t{form}\t{lemma}\t{upos}\t_\t_\t{head}\t{deprel}\t_\t{misc}")
    return lines


def write_corpus(root: Path) -> None:
    conllu, gold = [], []
    for doc_id, tokens, relations in CORPUS:
        conllu.append(f"# newdoc id = {doc_id}")
        conllu.append("# sent_id = s1")
        conllu.extend(sentence_lines(tokens))
        conllu.append("")
        for relation, head, tail in relations:
            gold.append(json.dumps({"doc_id": doc_id, "relation": relation,
                                    "head": head, "tail": tail}))
    (root / "src/semrex/data/corpus.conllu").write_text(
        "\n".join(conllu) + "\n", encoding="utf-8")
    (root / "src/semrex/data/corpus.gold.jsonl").write_text(
        "\n".join(gold) + "\n", encoding="utf-8")
    print(f"corpus: {len(CORPUS)} documents, {len(gold)} gold relations")


def write_clauses(root: Path, rel_path: str, clauses) -> None:
    lines = []
    n = 0
    for clause_text, sentences in clauses:
        digest = clause_hash(clause_text)
        for tokens in sentences:
            n += 1
            lines.append(f"# sent_id = q{n}")
            lines.append(f"# clause_hash = {digest}")
            lines.extend(sentence_lines(tokens))
            lines.append("")
    (root / rel_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{rel_path}: {len(clauses)} clauses, {n} sentences")


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    write_corpus(root)
    write_clauses(root, "src/semrex/data/dates.rex.conllu", DATES_CLAUSES)
    write_clauses(root, "tests/fixtures/example.rex.conllu", EXAMPLE_CLAUSES)
    return 0


if __name__ == "__main__":
    sys.exit(main())
