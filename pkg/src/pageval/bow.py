"""Bag-of-words distance and error rates.

Word identity is exact string equality (case- and diacritic-sensitive); no
normalization is applied.  Everything here is O(|x| + |y|) by hashing, and
trivially invariant to any permutation of either side.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from .core import EditCounts, EmptyReferenceError


def word_bag(words: Sequence[str]) -> Counter:
    """Multiset of word occurrences."""
    return Counter(words)


def bag_distance(x: Sequence[str], y: Sequence[str]) -> int:
    """Total multiset frequency discrepancy between the two sides.

    Interpretable as the insertions plus deletions needed to turn x into y
    when substitutions are not allowed.
    """
    fx, fy = Counter(x), Counter(y)
    return sum(abs(fx[v] - fy[v]) for v in fx.keys() | fy.keys())


def beta_wer(x: Sequence[str], y: Sequence[str]) -> float:
    """Naive bag-of-words error rate: bag_distance / |x|."""
    if len(x) == 0:
        raise EmptyReferenceError("beta-WER is undefined for an empty reference")
    return bag_distance(x, y) / len(x)


def bwer(x: Sequence[str], y: Sequence[str]) -> tuple[float, EditCounts]:
    """Bag-of-words WER with avoidable insertion/deletion pairs recast as
    substitutions: (b + B) / (2N) with b = ||x| - |y||.

    B - b is always even, so the rate equals (b + (B - b) // 2) / N exactly.
    The derived counts attribute the b unavoidable operations as deletions
    when the reference is longer, insertions when the hypothesis is longer.
    """
    n = len(x)
    if n == 0:
        raise EmptyReferenceError("bWER is undefined for an empty reference")
    big_b = bag_distance(x, y)
    b = abs(n - len(y))
    subs = (big_b - b) // 2
    dels = b if n > len(y) else 0
    ins = b if len(y) > n else 0
    counts = EditCounts(ins, subs, dels, n - dels - subs)
    return (b + big_b) / (2 * n), counts


def bwer_errors(x: Sequence[str], y: Sequence[str]) -> int:
    """Integer numerator of bWER: b + (B - b) // 2."""
    big_b = bag_distance(x, y)
    b = abs(len(x) - len(y))
    return b + (big_b - b) // 2


def bwac(x: Sequence[str], y: Sequence[str]) -> float:
    """Bag-of-words accuracy: matched instance fraction of the reference.

    Reference operation kept for comparison experiments only; it ignores
    hypothesis insertions entirely, which is its documented flaw.
    """
    if len(x) == 0:
        raise EmptyReferenceError("bWAC is undefined for an empty reference")
    fx, fy = Counter(x), Counter(y)
    return sum(min(c, fy[v]) for v, c in fx.items()) / len(x)
