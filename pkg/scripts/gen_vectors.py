#!/usr/bin/env python3
"""Generate the synthetic word vector table shipped with the package.

Words that should be interchangeable sit in one cluster: each cluster is a
random unit vector plus per-word noise, so within-cluster cosines land
around 0.8 and cross-cluster cosines stay near zero. The script checks the
margins the test suite relies on and refuses to write a table that does not
honor them.

Run from the repository root:

    python3 scripts/gen_vectors.py
"""

import argparse
import sys
from pathlib import Path

import numpy as np

DIM = 50
SEED = 7
NOISE = 0.5  # within-cluster cosine ~ 1/(1+NOISE^2) ~ 0.8

CLUSTERS = {
    "craft": ["carpenter", "woodworker", "painter", "carver"],
    "office": ["accountant", "lawyer", "banker"],
    "literature": ["book", "tome", "story", "article", "series"],
    "weekday": ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday",
                "Saturday", "Sunday"],
    "team": ["team", "group", "club"],
    "school": ["university", "academy", "polytechnic"],
    # verbs are kept mutually far apart; each is its own cluster
    "v_bear": ["bear"],
    "v_die": ["die"],
    "v_work": ["work"],
    "v_marry": ["marry"],
    "v_visit": ["visit"],
    "v_found": ["found"],
    "v_paint": ["paint"],
    "v_retire": ["retire"],
}

# (word, word, lower, upper) bounds on the cosine, checked before writing
MARGINS = [
    ("carpenter", "woodworker", 0.6, 1.0),
    ("tome", "book", 0.6, 1.0),
    ("accountant", "carpenter", -1.0, 0.6),
    ("accountant", "painter", -1.0, 0.6),
    ("Monday", "Sunday", 0.6, 1.0),
    ("marry", "bear", -1.0, 0.6),
    ("visit", "die", -1.0, 0.6),
    ("found", "bear", -1.0, 0.6),
]


def unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def build() -> dict[str, np.ndarray]:
    rng = np.random.default_rng(SEED)
    table = {}
    for words in CLUSTERS.values():
        base = unit(rng.normal(size=DIM))
        for word in words:
            table[word] = unit(base + NOISE * rng.normal(size=DIM) / np.sqrt(DIM))
    return table


def check(table: dict[str, np.ndarray]) -> list[str]:
    problems = []
    for a, b, lo, hi in MARGINS:
        cos = float(np.dot(table[a], table[b]))
        if not lo < cos < hi:
            problems.append(f"{a}~{b}: {cos:.3f} outside ({lo}, {hi})")
    # every cross-cluster pair has to stay below the matching threshold
    owner = {w: name for name, words in CLUSTERS.items() for w in words}
    words = list(table)
    for i, a in enumerate(words):
        for b in words[i + 1:]:
            if owner[a] != owner[b]:
                cos = float(np.dot(table[a], table[b]))
                if cos >= 0.6:
                    problems.append(f"cross-cluster {a}~{b}: {cos:.3f} >= 0.6")
    return problems


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="src/semrex/data/vectors_50d.txt")
    args = parser.parse_args()

    table = build()
    problems = check(table)
    if problems:
        for p in problems:
            print("margin violated:", p, file=sys.stderr)
        return 1

    out = Path(args.out)
    with out.open("w", encoding="utf-8") as handle:
        for word, vec in table.items():
            values = " ".join(f"{x:.6f}" for x in vec)
            handle.write(f"{word} {values}\n")
    print(f"{len(table)} vectors -> {out}")
    for a, b, _, _ in MARGINS:
        print(f"  cos({a}, {b}) = {float(np.dot(table[a], table[b])):.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
