"""Deterministic text annotation producing the parsed input format.

The backend is a small rule system: a lexicon tagger with suffix
fallbacks, an exception-table lemmatizer, gazetteer NER, recency-based
pronoun coreference and a shape-driven dependency attacher. Everything
runs offline and byte-reproducibly; :func:`annotate_document` is the one
seam where a model-backed pipeline could be swapped in later.

Output follows the consumer's conventions: ten tab-separated columns,
``NER=<label>|Coref=<id>`` in MISC, ``# newdoc id`` and ``# sent_id``
comments, exactly one root per sentence, contiguous token ids.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

__all__ = ["Token", "annotate_document", "annotate_sentence",
           "split_sentences", "tokenize"]

DETERMINERS = {"the", "a", "an", "this", "that", "these", "those", "no",
               "every", "each", "some", "any"}
AUXILIARIES = {"is", "are", "was", "were", "be", "been", "being", "am",
               "has", "have", "had", "will", "would", "shall", "should",
               "can", "could", "may", "might", "must", "do", "does", "did"}
ADPOSITIONS = {"at", "in", "on", "as", "of", "with", "by", "to", "from",
               "than", "for", "into", "onto", "over", "under", "about",
               "after", "before", "during", "through", "between"}
PRONOUNS = {"she", "he", "it", "they", "we", "i", "you", "her", "him",
            "them", "us", "me", "his", "hers", "its", "their", "theirs",
            "who", "whom", "someone", "somebody"}
POSSESSIVES = {"her", "his", "its", "their", "my", "your", "our"}
COORDINATORS = {"and", "or", "but", "nor"}
SUBORDINATORS = {"if", "unless", "when", "whenever", "because", "while",
                 "although", "since", "before", "after"}
ADVERBS = {"quite", "very", "never", "always", "often", "soon", "someday",
           "early", "late", "here", "there", "now", "then", "too", "also",
           "not"}

ADJECTIVES = {"tall", "short", "smart", "wise", "big", "small", "average",
              "old", "young", "new", "good", "bad", "happy", "sad", "rich",
              "poor", "famous", "quiet", "loud", "long", "strong"}

VERB_STEMS = {"work", "bear", "die", "sing", "dance", "buy", "say", "want",
              "win", "leave", "stay", "sleep", "bark", "meet", "paint",
              "write", "visit", "marry", "found", "retire", "employ",
              "approve", "publish", "live", "move", "play", "study",
              "teach", "build", "make", "take", "give", "get", "go",
              "come", "see", "know", "run", "walk", "talk", "speak",
              "read", "open", "close", "start", "finish", "begin", "end",
              "join", "serve", "lead", "vote", "sign", "grow", "sell",
              "rain", "fly", "employ"}

# irregular form -> lemma; participles also listed in PARTICIPLES
IRREGULAR_VERBS = {
    "born": "bear", "bore": "bear", "borne": "bear",
    "sang": "sing", "sung": "sing", "bought": "buy", "said": "say",
    "won": "win", "left": "leave", "slept": "sleep", "met": "meet",
    "wrote": "write", "written": "write", "went": "go", "came": "come",
    "saw": "see", "seen": "see", "knew": "know", "known": "know",
    "ran": "run", "spoke": "speak", "spoken": "speak", "took": "take",
    "taken": "take", "gave": "give", "given": "give", "got": "get",
    "made": "make", "built": "build", "began": "begin", "begun": "begin",
    "led": "lead", "grew": "grow", "grown": "grow", "sold": "sell",
    "taught": "teach",
}
PARTICIPLES = {"born", "borne", "sung", "bought", "said", "won", "left",
               "slept", "met", "written", "seen", "known", "taken",
               "given", "made", "built", "begun", "led", "grown", "sold",
               "taught"}

LEMMA_EXCEPTIONS = {
    "is": "be", "are": "be", "was": "be", "were": "be", "been": "be",
    "being": "be", "am": "be", "has": "have", "had": "have",
    "does": "do", "did": "do", "taller": "tall", "tallest": "tall",
    "better": "good", "best": "good", "older": "old", "oldest": "old",
    "bigger": "big", "biggest": "big", "children": "child", "men": "man",
    "women": "woman", "people": "person",
}

FIRST_NAMES = {"Jane", "Mary", "Tom", "Mark", "John", "Anna", "Otto",
               "Frank", "Ada", "Omar", "Lena", "Rosa", "Hugo", "Elsa",
               "Noor", "Ivan", "Marta", "Felix", "Greta", "Oscar",
               "Clara", "Hans", "Nina", "Paul", "Vera", "Karl", "Ruth",
               "Eli", "Mona", "Axel", "Ines", "Sven", "Lidia", "Bruno",
               "Alice", "Peter", "Laura", "David", "Emma", "James"}

ORG_SUFFIXES = {"Inc", "Corp", "Ltd", "Co", "Company", "University",
                "Academy", "Polytechnic", "Institute", "Club", "Group",
                "Board"}

# multiword place names first, so "New York City" wins over "New York"
GPE_SEQUENCES = [("New", "York", "City"), ("New", "York"), ("Berlin",),
                 ("Oslo",), ("Boston",), ("London",), ("Paris",),
                 ("Madrid",), ("Rome",), ("Tokyo",), ("Vienna",)]

MONTHS = {"January", "February", "March", "April", "May", "June", "July",
          "August", "September", "October", "November", "December"}
WEEKDAYS = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday",
            "Saturday", "Sunday"}

# pronoun form -> entity labels it may refer back to
PRONOUN_TARGETS = {
    "she": ("PERSON",), "he": ("PERSON",), "her": ("PERSON",),
    "him": ("PERSON",), "his": ("PERSON",), "hers": ("PERSON",),
    "it": ("ORG", "GPE"), "its": ("ORG", "GPE"),
    "they": ("PERSON", "ORG"), "them": ("PERSON", "ORG"),
    "their": ("PERSON", "ORG"),
}

# underscores stay inside words so multiword slot names survive intact
_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:['’-][A-Za-z0-9_]+)*"
                    r"|\d+|[^\sA-Za-z\d_]")
_SENT_SPLIT = re.compile(
    r"(?:(?<=[.!?])|(?<=[.!?][\"']))\s+(?=[\"'A-Z])")


@dataclass
class Token:
    index: int
    form: str
    lemma: str = ""
    upos: str = "NOUN"
    head: Optional[int] = None
    deprel: Optional[str] = None
    ner: Optional[str] = None
    coref: Optional[int] = None

    def line(self) -> str:
        misc_bits = []
        if self.ner is not None:
            misc_bits.append(f"NER={self.ner}")
        if self.coref is not None:
            misc_bits.append(f"Coref={self.coref}")
        misc = "|".join(misc_bits) or "_"
        return (f"{self.index}\t{self.form}\t{self.lemma}\t{self.upos}"
                f"\t_\t_\t{self.head}\t{self.deprel}\t_\t{misc}")


def split_sentences(text: str) -> list[str]:
    stripped = text.strip()
    if not stripped:
        return []
    return [part for part in _SENT_SPLIT.split(stripped) if part.strip()]


def tokenize(sentence: str) -> list[str]:
    return _TOKEN.findall(sentence)


def _is_verb_form(low: str) -> bool:
    if low in IRREGULAR_VERBS or low in VERB_STEMS:
        return True
    return _verb_stem(low) is not None


def _verb_stem(low: str) -> Optional[str]:
    """Strip an inflection suffix back to a known stem, or give up."""
    if low in VERB_STEMS:
        return low
    if low in IRREGULAR_VERBS:
        return IRREGULAR_VERBS[low]
    for suffix in ("ies", "es", "s", "ed", "ing", "d"):
        if not low.endswith(suffix) or len(low) <= len(suffix):
            continue
        base = low[: -len(suffix)]
        candidates = [base]
        if suffix == "ies":
            candidates = [base + "y"]
        if suffix in ("ed", "ing"):
            candidates.append(base + "e")           # danced -> dance
            if len(base) > 2 and base[-1] == base[-2]:
                candidates.append(base[:-1])        # planned -> plan
        for cand in candidates:
            if cand in VERB_STEMS:
                return cand
    return None


def _lemma(form: str, upos: str) -> str:
    if upos == "PROPN":
        return form
    low = form.lower()
    if low in LEMMA_EXCEPTIONS:
        return LEMMA_EXCEPTIONS[low]
    if upos == "VERB":
        return _verb_stem(low) or low
    if upos == "NOUN" and len(low) > 3:
        if low.endswith("ies"):
            return low[:-3] + "y"
        if low.endswith("sses") or low.endswith("shes") or low.endswith("ches"):
            return low[:-2]
        if low.endswith("s") and not low.endswith("ss"):
            return low[:-1]
    if upos == "ADJ" and low.endswith("er") and low[:-2] in ADJECTIVES:
        return low[:-2]
    return low


def _tag(forms: list[str], slots: frozenset[str]) -> list[str]:
    tags = []
    for pos, form in enumerate(forms):
        low = form.lower()
        if form in slots:
            tags.append("PROPN")
        elif not any(ch.isalnum() for ch in form):
            tags.append("PUNCT")
        elif form.isdigit():
            tags.append("NUM")
        elif low in DETERMINERS:
            tags.append("DET")
        elif low == "not":
            tags.append("PART")
        elif low == "to" and pos + 1 < len(forms) \
                and _is_verb_form(forms[pos + 1].lower()):
            tags.append("PART")
        elif low in AUXILIARIES:
            tags.append("AUX")
        elif low in ADPOSITIONS:
            tags.append("ADP")
        elif low in COORDINATORS:
            tags.append("CCONJ")
        elif low in SUBORDINATORS and pos == 0:
            tags.append("SCONJ")
        elif low in PRONOUNS:
            tags.append("PRON")
        elif low in ADVERBS or (low.endswith("ly") and len(low) > 4):
            tags.append("ADV")
        elif form in MONTHS or form in WEEKDAYS:
            tags.append("PROPN")
        elif low in ADJECTIVES or (low.endswith("er") and low[:-2] in ADJECTIVES):
            tags.append("ADJ")
        elif form[0].isupper() and (pos > 0 or form in FIRST_NAMES
                                    or form in ORG_SUFFIXES
                                    or (form.isupper() and len(form) > 1)):
            tags.append("PROPN")
        elif _is_verb_form(low):
            tags.append("VERB")
        else:
            tags.append("NOUN")
    return tags


def _add_entities(toks: list[Token]) -> None:
    """Gazetteer NER over tagged tokens; labels stay in the OntoNotes set."""
    n = len(toks)
    i = 0
    while i < n:
        tok = toks[i]
        if tok.upos != "PROPN":
            if tok.upos == "NUM" and len(tok.form) == 4 \
                    and 1000 <= int(tok.form) <= 2100 and tok.ner is None:
                tok.ner = "DATE"
            i += 1
            continue
        j = i
        while j + 1 < n and toks[j + 1].upos == "PROPN":
            j += 1
        # a number directly after a month joins the date expression
        if toks[j].form in MONTHS and j + 1 < n and toks[j + 1].upos == "NUM":
            j += 1
        run = toks[i:j + 1]
        forms = tuple(t.form for t in run)
        label = None
        if any(t.form in ORG_SUFFIXES for t in run):
            label = "ORG"
        elif forms in [seq for seq in GPE_SEQUENCES]:
            label = "GPE"
        elif any(t.form in MONTHS or t.form in WEEKDAYS for t in run):
            label = "DATE"
        elif run[0].form in FIRST_NAMES:
            label = "PERSON"
        if label:
            for t in run:
                t.ner = label
        i = j + 1


def _group_spans(toks: list[Token]) -> list[tuple[int, list[int]]]:
    """Nominal groups as (head position, member positions), 0-based.

    A group is a PROPN run (with a trailing NUM after a month), or one
    NOUN/PRON/NUM with its leading DET/ADJ/possessive, or a
    substantivized ADJ ("the average").
    """
    groups = []
    n = len(toks)
    used = set()
    i = 0
    while i < n:
        if i in used:
            i += 1
            continue
        def absorb_left(members: list[int]) -> None:
            k = members[0] - 1
            while k >= 0 and k not in used and (
                    toks[k].upos in ("DET", "ADJ")
                    or (toks[k].upos == "PRON"
                        and toks[k].form.lower() in POSSESSIVES)):
                members.insert(0, k)
                k -= 1

        tok = toks[i]
        if tok.upos == "PROPN":
            j = i
            while j + 1 < n and toks[j + 1].upos == "PROPN":
                j += 1
            if toks[j].form in MONTHS and j + 1 < n and toks[j + 1].upos == "NUM":
                j += 1
            members = list(range(i, j + 1))
            absorb_left(members)
            groups.append((i, members))
            used.update(members)
            i = j + 1
            continue
        next_is_nominal = i + 1 < n and toks[i + 1].upos in ("NOUN", "PROPN")
        prenominal_poss = (tok.upos == "PRON"
                           and tok.form.lower() in POSSESSIVES
                           and (next_is_nominal
                                or i + 1 < n and toks[i + 1].upos == "ADJ"))
        if prenominal_poss:
            i += 1      # absorbed later by the noun it modifies
            continue
        if tok.upos in ("NOUN", "PRON", "NUM") or (
                tok.upos == "ADJ" and i > 0 and toks[i - 1].upos == "DET"
                and not next_is_nominal):
            members = [i]
            absorb_left(members)
            groups.append((i, members))
            used.update(members)
        i += 1
    return groups


def _is_temporal(toks: list[Token], members: list[int],
                 temporal_slots: frozenset[str]) -> bool:
    for k in members:
        tok = toks[k]
        if tok.ner == "DATE" or tok.form in WEEKDAYS or tok.form in MONTHS:
            return True
        if tok.form in temporal_slots:
            return True
        if tok.upos == "NUM" and len(tok.form) == 4 \
                and 1000 <= int(tok.form) <= 2100:
            return True
    return False


def _attach(toks: list[Token], temporal_slots: frozenset[str]) -> None:
    """Assign heads and deprels; always yields exactly one root, no cycles."""
    n = len(toks)
    idx = {id(t): pos for pos, t in enumerate(toks)}

    def set_dep(pos: int, head_pos: int, deprel: str) -> None:
        if toks[pos].head is None:
            toks[pos].head = toks[head_pos].index
            toks[pos].deprel = deprel

    verbs = [pos for pos, t in enumerate(toks) if t.upos == "VERB"]
    auxes = [pos for pos, t in enumerate(toks) if t.upos == "AUX"]

    if verbs:
        root = verbs[0]
    else:
        root = None
        start = auxes[0] + 1 if auxes else 0
        for pos in range(start, n):
            if toks[pos].upos in ("ADJ", "NOUN", "PROPN", "NUM", "PRON"):
                root = pos
                break
        if root is None:
            root = next((p for p, t in enumerate(toks) if t.upos != "PUNCT"), 0)
    toks[root].head = 0
    toks[root].deprel = "root"

    root_is_verb = toks[root].upos == "VERB"
    root_form = toks[root].form.lower()
    passive = False
    if root_is_verb and not root_form.endswith("ing"):
        participle = root_form in PARTICIPLES or root_form.endswith("ed")
        for pos in auxes:
            if pos < root and toks[pos].lemma == "be" and participle:
                passive = True

    for pos in auxes:
        if pos < root:
            if not root_is_verb:
                set_dep(pos, root, "cop")
            elif passive and toks[pos].lemma == "be":
                set_dep(pos, root, "aux:pass")
            else:
                set_dep(pos, root, "aux")
        else:
            set_dep(pos, root, "aux")

    groups = _group_spans(toks)
    head_of_group = {}
    for head_pos, members in groups:
        for k in members:
            head_of_group[k] = head_pos
        for k in members:
            if k == head_pos:
                continue
            tok = toks[k]
            if tok.upos == "DET":
                set_dep(k, head_pos, "det")
            elif tok.upos == "ADJ":
                set_dep(k, head_pos, "amod")
            elif tok.upos == "PRON" and tok.form.lower() in POSSESSIVES:
                set_dep(k, head_pos, "nmod:poss")
            elif tok.upos == "NUM" and toks[head_pos].form in MONTHS:
                set_dep(k, head_pos, "nummod")
            elif tok.upos == "PROPN" or tok.upos == "NUM":
                set_dep(k, head_pos, "flat")

    anchor = min([root] + auxes)
    subject = None
    for head_pos, members in groups:
        if head_pos >= anchor or members[0] > 0 \
                and toks[members[0] - 1].upos == "ADP":
            continue
        if toks[head_pos].head is None:
            subject = head_pos
            break
    if subject is not None:
        set_dep(subject, root, "nsubj:pass" if passive else "nsubj")

    # conjoined groups: "X and Y" hangs Y off X
    for gi in range(1, len(groups)):
        prev_head, _ = groups[gi - 1]
        head_pos, members = groups[gi]
        between = toks[groups[gi - 1][1][-1] + 1: members[0]]
        if len(between) == 1 and between[0].upos == "CCONJ" \
                and toks[head_pos].head is None \
                and toks[prev_head].head is not None:
            cc_pos = idx[id(between[0])]
            set_dep(head_pos, prev_head, "conj")
            set_dep(cc_pos, head_pos, "cc")

    # adpositions mark the following group
    for pos, tok in enumerate(toks):
        if tok.upos != "ADP":
            continue
        nxt = next((hp for hp, members in groups if members[0] > pos), None)
        if nxt is not None:
            set_dep(pos, nxt, "case")
        else:
            set_dep(pos, root, "dep")

    def has_case(members: list[int]) -> Optional[str]:
        first = members[0]
        if first > 0 and toks[first - 1].upos == "ADP":
            return toks[first - 1].lemma
        return None

    for head_pos, members in groups:
        if toks[head_pos].head is not None:
            continue
        case = has_case(members)
        if case == "by" and passive:
            set_dep(head_pos, root, "obl:agent")
        elif case is not None:
            set_dep(head_pos, root, "obl")
        elif _is_temporal(toks, members, temporal_slots):
            set_dep(head_pos, root, "obl:tmod")
        elif root_is_verb:
            set_dep(head_pos, root, "obj")
        else:
            set_dep(head_pos, root, "dep")

    # later verbs become clausal complements of the root
    for pos in verbs[1:]:
        inner_subject = None
        for head_pos, members in groups:
            if root < head_pos < pos and toks[head_pos].deprel == "obj":
                inner_subject = head_pos
        if pos > 0 and toks[pos - 1].upos == "PART" \
                and toks[pos - 1].form.lower() == "to":
            set_dep(idx[id(toks[pos - 1])], pos, "mark")
            set_dep(pos, root, "xcomp")
        elif inner_subject is not None:
            toks[inner_subject].head = toks[pos].index
            toks[inner_subject].deprel = "nsubj"
            set_dep(pos, root, "ccomp")
        else:
            set_dep(pos, root, "conj")

    for pos, tok in enumerate(toks):
        if tok.head is not None:
            continue
        if tok.upos == "PUNCT":
            set_dep(pos, root, "punct")
        elif tok.upos == "PART" and tok.form.lower() == "not":
            target = next((v for v in verbs if v > pos), root)
            set_dep(pos, target, "advmod")
        elif tok.upos == "ADV":
            target = next((k for k in range(pos + 1, n)
                           if toks[k].upos in ("ADJ", "VERB")), root)
            set_dep(pos, target, "advmod")
        elif tok.upos == "SCONJ":
            set_dep(pos, root, "mark")
        elif tok.upos == "CCONJ":
            target = next((k for k in range(pos + 1, n)
                           if toks[k].upos in ("ADJ", "NOUN", "PROPN",
                                               "VERB", "NUM")), None)
            set_dep(pos, target if target is not None else root,
                    "cc" if target is not None else "dep")
        elif tok.upos == "ADJ" and pos > 0 and toks[pos - 1].upos == "CCONJ":
            set_dep(pos, root, "conj")    # "tall and wise" second conjunct
        else:
            set_dep(pos, root, "dep")


def annotate_sentence(sentence: str, slots: frozenset[str] = frozenset(),
                      with_entities: bool = True) -> list[Token]:
    """One sentence through the whole pipeline, coreference excluded."""
    forms = tokenize(sentence)
    tags = _tag(forms, slots)
    toks = [Token(index=i + 1, form=form, upos=upos,
                  lemma=form if form in slots else _lemma(form, upos))
            for i, (form, upos) in enumerate(zip(forms, tags))]
    if with_entities:
        _add_entities(toks)
    temporal_slots = frozenset(
        s for s in slots
        if re.search(r"TIME|DAY|YEAR|DATE|MOMENT|WHEN", s))
    _attach(toks, temporal_slots)
    return toks


def _link_pronouns(sentences: list[list[Token]]) -> None:
    """Recency coreference: a pronoun points at the latest suitable entity."""
    entities = []  # (sent_no, first_pos, tokens, label)
    next_cluster = 0
    for sent_no, toks in enumerate(sentences):
        pos = 0
        while pos < len(toks):
            tok = toks[pos]
            if tok.ner is not None:
                j = pos
                while j + 1 < len(toks) and toks[j + 1].ner == tok.ner:
                    j += 1
                entities.append((sent_no, pos, toks[pos:j + 1], tok.ner))
                pos = j + 1
                continue
            pos += 1
        for pos, tok in enumerate(toks):
            wanted = PRONOUN_TARGETS.get(tok.form.lower())
            if tok.upos != "PRON" or wanted is None:
                continue
            antecedent = None
            for ent in reversed(entities):
                ent_sent, ent_pos, ent_toks, label = ent
                if label not in wanted:
                    continue
                if ent_sent > sent_no or (ent_sent == sent_no
                                          and ent_pos >= pos):
                    continue
                antecedent = ent_toks
                break
            if antecedent is None:
                continue
            if antecedent[0].coref is None:
                for t in antecedent:
                    t.coref = next_cluster
                next_cluster += 1
            tok.coref = antecedent[0].coref


def render(sentences: list[list[Token]], doc_id: Optional[str],
           prefix: str = "s", extra_meta: Optional[list[list[str]]] = None) -> str:
    if not sentences:
        return ""
    blocks = []
    for n, toks in enumerate(sentences, start=1):
        lines = [f"# sent_id = {prefix}{n}"]
        if extra_meta:
            lines.extend(extra_meta[n - 1])
        lines.extend(t.line() for t in toks)
        blocks.append("\n".join(lines))
    # every sentence block ends with a blank line, the last one included
    header = f"# newdoc id = {doc_id}\n" if doc_id else ""
    return header + "\n\n".join(blocks) + "\n\n"


def annotate_document(text: str, doc_id: str = "doc1") -> str:
    """Raw text to a parsed document file; empty text gives an empty file."""
    sentences = [annotate_sentence(s) for s in split_sentences(text)]
    _link_pronouns(sentences)
    return render(sentences, doc_id)
