"""Command-line interface: evaluate transcript corpora and run distortion
simulations.

A corpus is a directory of UTF-8 plain-text files, one file per page, one
physical line per text line, reading order given by file order.  Reference
and hypothesis pages are paired by identical relative path.

Exit codes: 0 success, 1 usage error, 2 data errors (missing hypothesis
pages, unreadable files, empty references).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

from . import simulate
from .core import EvalError, IngestionError, PageTranscript, tokenize_page
from .report import DEFAULT_GAMMA, CorpusReport, PageReport, aggregate, evaluate_page

SCHEMA_VERSION = "pageval-report/1"

# Report column order follows the corpus summary tables: reading-order
# distance first, then the WER family, then character rates.
TSV_COLUMNS = ("NSFD", "dWER", "WER", "bWER", "hWER", "CER", "hCER")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> "None":
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _iter_pages(root: Path) -> list[Path]:
    return sorted(p for p in root.rglob("*") if p.is_file())


def _load_page(path: Path, page_id: str) -> PageTranscript:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise IngestionError(f"page {page_id!r}: cannot read {path}: {exc}") from exc
    return tokenize_page(data, page_id)


def _page_row(report: PageReport) -> dict:
    return {
        "NSFD": report.nsfd,
        "dWER": report.delta_wer,
        "WER": report.wer,
        "bWER": report.bwer,
        "hWER": report.hwer,
        "CER": report.cer,
        "hCER": report.hcer,
    }


def _percent_row(values: dict) -> list[str]:
    return [f"{100 * values[c]:.1f}" for c in TSV_COLUMNS]


def _page_json(report: PageReport, timing: bool) -> dict:
    entry = {
        "page_id": report.page_id,
        "n_words": report.n_words,
        "n_chars": report.n_chars,
        "n_hyp_words": report.n_hyp_words,
        "metrics": _page_row(report),
        "extra": {
            "beta_wer": report.beta_wer,
            "delta_wer_h": report.delta_wer_h,
            "dummy_pairs": report.dummy_pairs,
            "length_gap": report.length_gap,
        },
        "errors": {
            "wer": report.wer_errors,
            "cer": report.cer_errors,
            "bwer": report.bwer_errors,
            "hwer": report.hwer_errors,
            "hcer": report.hcer_errors,
        },
        "wer_counts": asdict(report.wer_counts),
        "bwer_counts": asdict(report.bwer_counts),
    }
    if timing:
        entry["timings"] = dict(report.timings)
    return entry


def _corpus_json(corpus: CorpusReport) -> dict:
    return {
        "n_pages": len(corpus.pages),
        "n_words": corpus.n_words,
        "n_chars": corpus.n_chars,
        "metrics": {
            "NSFD": corpus.nsfd,
            "dWER": corpus.delta_wer,
            "WER": corpus.wer,
            "bWER": corpus.bwer,
            "hWER": corpus.hwer,
            "CER": corpus.cer,
            "hCER": corpus.hcer,
        },
        "extra": {"beta_wer": corpus.beta_wer, "delta_wer_h": corpus.delta_wer_h},
        "wer_counts": asdict(corpus.wer_counts),
        "bwer_counts": asdict(corpus.bwer_counts),
    }


def _evaluate_one(args: tuple) -> tuple[str, PageReport | None, str | None]:
    rel, ref_path, hyp_path, gamma = args
    try:
        ref = _load_page(ref_path, rel)
        if hyp_path is None:
            hyp = PageTranscript((), rel)
        else:
            hyp = _load_page(hyp_path, rel)
        return rel, evaluate_page(ref, hyp, gamma), None
    except EvalError as exc:
        return rel, None, str(exc)


def cmd_eval(args: argparse.Namespace) -> int:
    ref_dir = Path(args.ref)
    hyp_dir = Path(args.hyp)
    if not ref_dir.is_dir() or not hyp_dir.is_dir():
        print("eval: reference and hypothesis must be directories", file=sys.stderr)
        return 1
    ref_files = _iter_pages(ref_dir)
    if not ref_files:
        print(f"eval: no pages under {ref_dir}", file=sys.stderr)
        return 2

    tasks = []
    missing = []
    for ref_path in ref_files:
        rel = ref_path.relative_to(ref_dir).as_posix()
        hyp_path = hyp_dir / rel
        if not hyp_path.is_file():
            missing.append(rel)
            hyp_path = None
        tasks.append((rel, ref_path, hyp_path, args.gamma))

    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_evaluate_one, tasks))
    else:
        results = [_evaluate_one(t) for t in tasks]
    results.sort(key=lambda r: r[0])

    reports = [r for _, r, err in results if r is not None]
    errors = [(rel, err) for rel, r, err in results if err is not None]
    for rel, err in errors:
        print(f"eval: {rel}: {err}", file=sys.stderr)
    for rel in missing:
        print(f"eval: {rel}: hypothesis page missing, scored as empty", file=sys.stderr)

    out_text = ""
    if reports:
        corpus = aggregate(reports)
        if args.format == "json":
            payload = {
                "schema": SCHEMA_VERSION,
                "gamma": args.gamma,
                "corpus": _corpus_json(corpus),
            }
            if args.per_page:
                payload["pages"] = [_page_json(r, args.timing) for r in reports]
            if errors:
                payload["page_errors"] = [
                    {"page_id": rel, "error": err} for rel, err in errors
                ]
            out_text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        else:
            lines = ["\t".join(("page_id",) + TSV_COLUMNS)]
            if args.per_page:
                for r in reports:
                    lines.append("\t".join([r.page_id] + _percent_row(_page_row(r))))
            lines.append(
                "\t".join(["#corpus"] + _percent_row(_page_row_corpus(corpus)))
            )
            out_text = "\n".join(lines) + "\n"

    if args.out:
        Path(args.out).write_text(out_text, encoding="utf-8")
    else:
        sys.stdout.write(out_text)

    if errors or missing:
        return 2
    return 0


def _page_row_corpus(corpus: CorpusReport) -> dict:
    return {
        "NSFD": corpus.nsfd,
        "dWER": corpus.delta_wer,
        "WER": corpus.wer,
        "bWER": corpus.bwer,
        "hWER": corpus.hwer,
        "CER": corpus.cer,
        "hCER": corpus.hcer,
    }


def _write_corpus(pages: Sequence[PageTranscript], out_dir: Path) -> None:
    for page in pages:
        path = out_dir / page.page_id
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(page.text() + "\n", encoding="utf-8")


def _sim_config(args: argparse.Namespace) -> simulate.DistortionConfig:
    mode = {
        "char-word": simulate.WORD_LEVEL,
        "char-line": simulate.LINE_LEVEL,
        "swap": simulate.LINE_SWAP,
        "split": simulate.LINE_SPLIT,
    }[args.mode]
    return simulate.DistortionConfig(
        mode=mode,
        seed=args.seed,
        tcer_step=args.tcer_step,
        op_mix=tuple(args.op_mix),
        whitespace_share=args.ws_share,
        swaps=args.swaps,
        swap_range=tuple(args.swap_range),
        splits=args.splits,
    )


def _sweep_rows(
    pages: list[PageTranscript], cfg: simulate.DistortionConfig, args: argparse.Namespace
) -> list[dict]:
    """Evaluate distorted-vs-reference across the sweep parameter."""
    rows = []
    line_counts = [p.line_count for p in pages]
    word_counts = [p.word_count for p in pages]
    total_words = sum(word_counts)
    avg_wlen = sum(len(w) for p in pages for w in p.words) / total_words

    if cfg.mode in (simulate.WORD_LEVEL, simulate.LINE_LEVEL):
        steps = list(range(args.sweep + 1))
        for n in steps:
            step_cfg = simulate.DistortionConfig(
                mode=cfg.mode, seed=cfg.seed, tcer_step=n,
                op_mix=cfg.op_mix, whitespace_share=cfg.whitespace_share,
            )
            distorted, _ = simulate.distort_corpus(pages, step_cfg)
            corpus = aggregate(
                [evaluate_page(r, h, args.gamma) for r, h in zip(pages, distorted)]
            )
            rows.append(
                {"parameter": n, **_page_row_corpus(corpus),
                 "tCER": simulate.tcer(n), "tWER": simulate.predict_twer(n, avg_wlen)}
            )
        return rows

    plans = simulate.sweep_plans(pages, cfg, args.sweep)
    for count in range(args.sweep + 1):
        distorted, manifest = simulate.apply_sweep_step(pages, cfg, plans, count)
        corpus = aggregate(
            [evaluate_page(r, h, args.gamma) for r, h in zip(pages, distorted)]
        )
        row = {"parameter": count, **_page_row_corpus(corpus)}
        if cfg.mode == simulate.LINE_SWAP:
            lo, hi = cfg.swap_range
            row["tNSFD"] = simulate.predict_nsfd_swaps(count, lo, hi, line_counts)
        else:
            row["tNSFD"] = simulate.predict_nsfd_splits(count, line_counts, word_counts)
            realized = sum(
                1 for e in manifest["pages"] for s in e["splits"] if s["in_word"]
            )
            row["tbWER_increase"] = 2 * realized / total_words
        rows.append(row)
    return rows


def cmd_simulate(args: argparse.Namespace) -> int:
    ref_dir = Path(args.ref)
    if not ref_dir.is_dir():
        print("simulate: reference must be a directory", file=sys.stderr)
        return 1
    out_dir = Path(args.out_dir)
    try:
        cfg = _sim_config(args)
    except EvalError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 1

    try:
        pages = [
            _load_page(p, p.relative_to(ref_dir).as_posix())
            for p in _iter_pages(ref_dir)
        ]
    except EvalError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 2
    if not pages:
        print(f"simulate: no pages under {ref_dir}", file=sys.stderr)
        return 2

    out_dir.mkdir(parents=True, exist_ok=True)
    if args.sweep is not None:
        rows = _sweep_rows(pages, cfg, args)
        cols = ["parameter", *TSV_COLUMNS]
        extra = [k for k in rows[0] if k not in cols]
        header = cols + extra
        lines = ["\t".join(header)]
        for row in rows:
            cells = [str(row["parameter"])]
            cells += _percent_row(row)
            cells += [f"{100 * row[k]:.3f}" for k in extra]
            lines.append("\t".join(cells))
        (out_dir / "sweep.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        return 0

    distorted, manifest = simulate.distort_corpus(pages, cfg)
    _write_corpus(distorted, out_dir)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pageval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a hypothesis corpus against a reference")
    p_eval.add_argument("--ref", required=True, help="reference corpus directory")
    p_eval.add_argument("--hyp", required=True, help="hypothesis corpus directory")
    p_eval.add_argument("--gamma", type=float, default=DEFAULT_GAMMA,
                        help="assignment regularization factor (default: %(default)s)")
    p_eval.add_argument("--format", choices=("json", "tsv"), default="json")
    p_eval.add_argument("--out", help="write the report here instead of stdout")
    p_eval.add_argument("--per-page", action="store_true", help="include per-page rows")
    p_eval.add_argument("--timing", action="store_true",
                        help="include per-metric timings in JSON output")
    p_eval.add_argument("--jobs", type=int, default=1, help="parallel page workers")
    p_eval.set_defaults(func=cmd_eval)

    p_sim = sub.add_parser("simulate", help="write a distorted copy of a corpus")
    p_sim.add_argument("--ref", required=True, help="reference corpus directory")
    p_sim.add_argument("--out-dir", required=True)
    p_sim.add_argument("--mode", required=True,
                       choices=("char-word", "char-line", "swap", "split"))
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--tcer-step", type=int, default=0,
                       help="character-noise schedule step n (induced CER 3.25n%%)")
    p_sim.add_argument("--op-mix", type=float, nargs=3, default=[0.60, 0.15, 0.25],
                       metavar=("SUB", "INS", "DEL"),
                       help="character operation proportions (defaults are "
                            "explicit config, not measured values)")
    p_sim.add_argument("--ws-share", type=float, default=0.15,
                       help="whitespace share of line-level edits")
    p_sim.add_argument("--swaps", type=int, default=0, help="line swaps per page")
    p_sim.add_argument("--swap-range", type=int, nargs=2, default=[1, 1],
                       metavar=("LO", "HI"), help="line-swap distance range")
    p_sim.add_argument("--splits", type=int, default=0, help="line splits per page")
    p_sim.add_argument("--sweep", type=int, default=None, metavar="MAX",
                       help="evaluate a parameter sweep up to MAX and write sweep.tsv")
    p_sim.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
