"""Shared fixtures: the worked-example sentences, the two-column page pair,
and a synthetic corpus builder for trend tests."""

from __future__ import annotations

import random

import pytest

from pageval.core import Alignment, PageTranscript

# Worked-example sentences (word sequences).
EX1_X = "To be or not to be, that is the question".split()
EX1_Y = "to be oh! or not to be: the question".split()

EX2_X = EX1_X
EX2_Y = "The big question: to be or not to be".split()
# Unconstrained alignment for the EX2 pair, 0-based, dummies as None.
EX2_ALIGNMENT = [
    (None, 1),
    (0, 3), (1, 4), (2, 5), (3, 6), (4, 7), (5, 8),
    (6, None), (7, None),
    (8, 0), (9, 2),
]

EX3_X = "to be or not to be that is the question that needs be answered".split()
EX3_Y = "the question that needs be answered is to be or not to be".split()
EX3_Z = "to be or not to be, that is the question to be answered".split()

EX3A_X = "to be or not to be, that is the question".split()
EX3A_Y = "to be, to not or be the is that question".split()

# Optimal assignment alignments for the EX3 pairs at gamma=0 (0-based).
EX4_XY_ALIGNMENT = [
    (0, 7), (1, 4), (2, 9), (3, 10), (4, 11), (5, 8), (6, 2),
    (7, 6), (8, 0), (9, 1), (10, None), (11, 3), (12, 12), (13, 5),
]
EX4_XZ_ALIGNMENT = [
    (0, 0), (1, 1), (2, 2), (3, 3), (4, 4), (5, 11), (6, 6),
    (7, 7), (8, 8), (9, 9), (10, 10), (11, None), (12, 5), (13, 12),
]
# Equal-cost alternative for (X, Z) that keeps natural word order.
EX5_XZ_ALIGNMENT = [
    (0, 0), (1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (6, 6),
    (7, 7), (8, 8), (9, 9), (10, 10), (11, None), (12, 11), (13, 12),
]

TINY_X = "xx a ba yy".split()
TINY_Y = "xx ac a yy".split()

# Two-column page: reference reads the left column then the right column;
# the hypothesis merges the columns row-wise (the layout failure case).
FIG_LEFT = [
    "Two ways of coming",
    "at the (archetypes of)",
    "Geometrical abstract",
    "Quantities: 1. by",
    "decomposing Bodies:",
]
FIG_RIGHT = [
    "1. application of pure",
    "metaphisics to",
    "mathematics.",
    "2. Method of facilitating",
    "the Study of mathematics",
]
FIG_HYP_LINES = [
    FIG_LEFT[0] + " " + FIG_RIGHT[0],
    FIG_LEFT[1] + " " + FIG_RIGHT[1],
    FIG_LEFT[2] + " " + FIG_RIGHT[2],
    FIG_RIGHT[3],
    FIG_LEFT[3],
    FIG_LEFT[4] + " " + FIG_RIGHT[4],
]


def two_column_pages() -> tuple[PageTranscript, PageTranscript]:
    ref = PageTranscript(
        tuple(tuple(l.split()) for l in FIG_LEFT + FIG_RIGHT), "two-column"
    )
    hyp = PageTranscript(tuple(tuple(l.split()) for l in FIG_HYP_LINES), "two-column")
    return ref, hyp


def alignment_of(pairs) -> Alignment:
    return Alignment(frozenset(pairs))


ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def random_word(rng: random.Random, lo: int = 2, hi: int = 8) -> str:
    return "".join(rng.choice(ALPHABET) for _ in range(rng.randint(lo, hi)))


def synthetic_corpus(
    n_pages: int = 30,
    lines: int = 16,
    words_per_line: int = 8,
    seed: int = 2024,
) -> list[PageTranscript]:
    """Random-word corpus shaped like a small page collection."""
    rng = random.Random(seed)
    pages = []
    for i in range(n_pages):
        page = tuple(
            tuple(random_word(rng) for _ in range(words_per_line))
            for _ in range(lines)
        )
        pages.append(PageTranscript(page, f"page{i:03d}.txt"))
    return pages


@pytest.fixture(scope="session")
def corpus() -> list[PageTranscript]:
    return synthetic_corpus()
