"""Word vectors and lexical matching.

The matcher never compares raw strings alone: two words are interchangeable
when their tags line up and either the lemmas are identical or their
embeddings are close enough. Vectors are L2-normalized once at load time so
the dot product of two entries is their cosine similarity.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Optional

import numpy as np

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.6

#: node_type values a WordSpec may carry.
NODE_TYPES = ("verb", "noun", "adjective", "adverb")

_DEFINITION_NAME = re.compile(r"[A-Z][A-Z_]*$")


class LexiconError(ValueError):
    """Raised for malformed vector files or bad lexicon parameters."""


@dataclass(frozen=True)
class WordSpec:
    """The matchable identity of one graph node.

    The embedding channel is not stored here: vectors are looked up in the
    Lexicon by lemma at comparison time, so a graph can be built without
    any vector file in scope.
    """

    lemma: str
    negated: bool = False
    entity_type: Optional[str] = None  # Ontonotes label, or None
    node_type: str = "noun"

    def __post_init__(self):
        if self.node_type not in NODE_TYPES:
            raise LexiconError(f"unknown node_type {self.node_type!r}")
        if not self.lemma:
            raise LexiconError("empty lemma")


@dataclass(frozen=True)
class Definition:
    """A named word cluster from a DEFINE statement.

    Matching is by membership: a word belongs to the cluster when its entity
    type is one of ``entity_types`` or when it word-matches any member lemma.
    """

    name: str
    members: tuple[str, ...] = ()
    entity_types: frozenset[str] = frozenset()

    def __post_init__(self):
        if not _DEFINITION_NAME.match(self.name):
            raise LexiconError(f"bad definition name {self.name!r}")
        if not self.members and not self.entity_types:
            raise LexiconError(f"definition {self.name} is empty")


class Lexicon:
    """Immutable lemma -> unit vector table with a fixed match threshold."""

    def __init__(self, dimension: int, entries: dict[str, np.ndarray],
                 threshold: float = DEFAULT_THRESHOLD):
        if not 0.0 < threshold <= 1.0:
            raise LexiconError(f"threshold {threshold} outside (0, 1]")
        self.dimension = dimension
        self.threshold = threshold
        self._entries = entries

    @classmethod
    def empty(cls, threshold: float = DEFAULT_THRESHOLD) -> "Lexicon":
        return cls(0, {}, threshold)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def vector(self, word: str) -> Optional[np.ndarray]:
        return self._entries.get(word)

    def similarity(self, a: str, b: str) -> Optional[float]:
        """Cosine similarity of two words, or None when either is OOV."""
        va, vb = self._entries.get(a), self._entries.get(b)
        if va is None or vb is None:
            return None
        return float(np.dot(va, vb))


def load_vectors(source: "str | Path | IO[str]", threshold: float = DEFAULT_THRESHOLD,
                 expected_dim: Optional[int] = None) -> Lexicon:
    """Read a plain text embedding table: one ``word f1 .. fd`` line per entry.

    Every vector is L2-normalized. A repeated word overwrites the earlier
    entry with a warning; an inconsistent dimension or an all-zero vector is
    an error naming the offending line.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return load_vectors(handle, threshold, expected_dim)

    entries: dict[str, np.ndarray] = {}
    dimension = expected_dim
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) < 2:
            raise LexiconError(f"line {lineno}: expected a word and at least one value")
        word = parts[0]
        try:
            vec = np.asarray([float(p) for p in parts[1:]], dtype=np.float64)
        except ValueError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
        if dimension is None:
            dimension = vec.shape[0]
        elif vec.shape[0] != dimension:
            raise LexiconError(
                f"line {lineno}: dimension {vec.shape[0]} does not match {dimension}")
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise LexiconError(f"line {lineno}: zero vector for {word!r}")
        if word in entries:
            log.warning("duplicate vector for %r, keeping the later entry", word)
        entries[word] = vec / norm
    return Lexicon(dimension or 0, entries, threshold)


def word_match(a: WordSpec, b: WordSpec, lex: Lexicon) -> bool:
    """True when the tags agree and the lemmas are equal or embedding-close.

    Tag agreement means negation flag, entity type and node type all
    coincide. With matching tags, identical lemmas always match; otherwise
    both lemmas must be in the lexicon with dot product above the threshold.
    OOV words fall back to exact lemma equality.
    """
    if a.negated != b.negated:
        return False
    if a.entity_type != b.entity_type:
        return False
    if a.node_type != b.node_type:
        return False
    if a.lemma == b.lemma:
        return True
    sim = lex.similarity(a.lemma, b.lemma)
    return sim is not None and sim > lex.threshold


def definition_match(a: WordSpec, definition: Definition, lex: Lexicon) -> bool:
    """True when ``a`` belongs to the cluster named by ``definition``."""
    if a.entity_type is not None and a.entity_type in definition.entity_types:
        return True
    return any(word_match(a, _member_spec(m), lex) for m in definition.members)


def best_member_similarity(a: WordSpec, definition: Definition,
                           lex: Lexicon) -> Optional[float]:
    """Highest cosine between ``a`` and any cluster member, None if all OOV."""
    sims = [lex.similarity(a.lemma, m) for m in definition.members]
    sims = [s for s in sims if s is not None]
    return max(sims) if sims else None


def _member_spec(lemma: str) -> WordSpec:
    # Cluster members are plain nouns: no negation, no entity tag.
    return WordSpec(lemma=lemma, negated=False, entity_type=None, node_type="noun")
