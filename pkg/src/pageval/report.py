"""Per-page metric reports and corpus-level micro-averaged aggregation.

Corpus error rates are micro-averages: integer error accumulators summed
over pages and divided by the total reference size, never a mean of page
rates.  The reading-order distance is instead a weighted average of page
values, weighted by each page's share of the reference words.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import assign, bow, editdist, reading_order
from .core import EditCounts, EmptyReferenceError, EvalError, PageTranscript

DEFAULT_GAMMA = 1.0


@dataclass(frozen=True)
class PageReport:
    """All metric values plus raw accumulators for one page."""

    page_id: str
    n_words: int
    n_chars: int
    n_hyp_words: int
    wer: float
    cer: float
    bwer: float
    beta_wer: float
    hwer: float
    hcer: float
    nsfd: float
    delta_wer: float
    delta_wer_h: float
    wer_counts: EditCounts
    bwer_counts: EditCounts
    wer_errors: int
    cer_errors: int
    bwer_errors: int
    hwer_errors: int
    hcer_errors: int
    dummy_pairs: int
    length_gap: int
    gamma: float
    timings: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class CorpusReport:
    """Micro-averaged corpus metrics over a set of page reports."""

    pages: tuple[PageReport, ...]
    n_words: int
    n_chars: int
    wer: float
    cer: float
    bwer: float
    beta_wer: float
    hwer: float
    hcer: float
    nsfd: float
    delta_wer: float
    delta_wer_h: float
    wer_counts: EditCounts
    bwer_counts: EditCounts


def evaluate_page(
    ref: PageTranscript,
    hyp: PageTranscript,
    gamma: float = DEFAULT_GAMMA,
) -> PageReport:
    """Compute the full metric row for one reference/hypothesis page pair.

    All order-aware metrics run on the flattened word sequences; the
    reading-order distance uses the assignment alignment after renumbering.
    Wall-clock per-metric timings (monotonic) are recorded for cost
    analysis.
    """
    x = ref.words
    y = hyp.words
    page_id = ref.page_id or hyp.page_id
    if not x:
        raise EmptyReferenceError(f"page {page_id!r}: empty reference")
    n = len(x)
    n_chars = ref.char_count
    timings: dict[str, float] = {}

    try:
        t0 = time.perf_counter()
        wer_dist, wer_counts, _ = editdist.edit_distance(x, y)
        timings["wer"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        cer_dist = editdist.char_distance(x, y)
        timings["cer"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        bwer_rate, bwer_counts = bow.bwer(x, y)
        beta = bow.beta_wer(x, y)
        timings["bwer"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        hwer_rate, alignment = assign.hwer(x, y, gamma)
        timings["hwer"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        renumbered = reading_order.renumber(alignment, n, len(y))
        rho = reading_order.nsfd(renumbered, n, len(y))
        timings["nsfd"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        hcer_dist = assign.hcer_errors(x, y, alignment)
        timings["hcer"] = time.perf_counter() - t0
    except EvalError as exc:
        raise type(exc)(f"page {page_id!r}: {exc}") from exc

    b = abs(n - len(y))
    return PageReport(
        page_id=page_id,
        n_words=n,
        n_chars=n_chars,
        n_hyp_words=len(y),
        wer=wer_dist / n,
        cer=cer_dist / n_chars,
        bwer=bwer_rate,
        beta_wer=beta,
        hwer=hwer_rate,
        hcer=hcer_dist / n_chars,
        nsfd=rho,
        delta_wer=wer_dist / n - bwer_rate,
        delta_wer_h=wer_dist / n - hwer_rate,
        wer_counts=wer_counts,
        bwer_counts=bwer_counts,
        wer_errors=wer_dist,
        cer_errors=cer_dist,
        bwer_errors=bow.bwer_errors(x, y),
        hwer_errors=assign.hwer_errors(x, y, alignment),
        hcer_errors=hcer_dist,
        dummy_pairs=alignment.dummy_count,
        length_gap=b,
        gamma=gamma,
        timings=timings,
    )


def aggregate(reports: Sequence[PageReport]) -> CorpusReport:
    """Fold page reports into corpus metrics.

    Error rates divide summed accumulators by summed reference sizes; the
    reading-order distance is weighted by reference word share (weights sum
    to 1).
    """
    if not reports:
        raise EvalError("cannot aggregate an empty report list")
    n_words = sum(r.n_words for r in reports)
    n_chars = sum(r.n_chars for r in reports)
    wer_counts = EditCounts()
    bwer_counts = EditCounts()
    for r in reports:
        wer_counts = wer_counts + r.wer_counts
        bwer_counts = bwer_counts + r.bwer_counts
    wer = sum(r.wer_errors for r in reports) / n_words
    bwer = sum(r.bwer_errors for r in reports) / n_words
    hwer = sum(r.hwer_errors for r in reports) / n_words
    # bag distance recovered exactly from the integer bWER accumulators
    beta = sum(2 * r.bwer_errors - r.length_gap for r in reports) / n_words
    return CorpusReport(
        pages=tuple(reports),
        n_words=n_words,
        n_chars=n_chars,
        wer=wer,
        cer=sum(r.cer_errors for r in reports) / n_chars,
        bwer=bwer,
        beta_wer=beta,
        hwer=hwer,
        hcer=sum(r.hcer_errors for r in reports) / n_chars,
        nsfd=sum(r.nsfd * (r.n_words / n_words) for r in reports),
        delta_wer=wer - bwer,
        delta_wer_h=wer - hwer,
        wer_counts=wer_counts,
        bwer_counts=bwer_counts,
    )
