"""Command-line interface: ``temposum summarize`` and ``temposum group``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import re
import sys
from pathlib import Path

from temposum.errors import DataError
from temposum.ingest import load_cohort, load_csv
from temposum.metrics import NA
from temposum.model import Goal, Granularity, Guideline, RunConfig, Vocabulary, default_health_vocabulary, load_config
from temposum.pipeline import (jsonl, parse_protoforms, summarize, summarize_cohort, to_record,
                               write_provenance)

EXIT_FLAGS = 2
EXIT_DATA = 3

_GOAL = re.compile(r"^\s*(?P<attr>[^<>=:]+?)\s*(?P<op><=|>=|=)\s*(?P<value>[^:]+?)\s*(?::\s*(?P<label>.+?))?\s*$")


def parse_goal(text: str) -> Goal:
    """``attr<=v[:label]``, ``attr>=v[:label]`` or ``attr=lo..hi[:label]``."""
    m = _GOAL.match(text)
    if not m:
        raise ValueError(f"cannot parse goal {text!r}")
    attr, op, value, label = m["attr"], m["op"], m["value"], m["label"]
    if op == "=":
        lo, sep, hi = value.partition("..")
        if not sep:
            raise ValueError(f"range goal needs lo..hi, got {value!r}")
        lo, hi = float(lo), float(hi)
        return Goal(attr, "within-range", lo, label or f"between {lo:g} and {hi:g}", upper=hi)
    v = float(value)
    if op == "<=":
        return Goal(attr, "at-most", v, label or f"at most {v:g}")
    return Goal(attr, "at-least", v, label or f"at least {v:g}")


def _fraction(text: str) -> float:
    v = float(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1]")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--date-col", default="Day", help="date column (ISO dates or integer day indices)")
    common.add_argument("--attrs", help="comma-separated attribute columns (default: every other column)")
    common.add_argument("--granularity", choices=["day", "week", "month", "none"], default="week")
    common.add_argument("--tw-len", type=_positive, help="days per time window (default 7 for week, 30 for month)")
    common.add_argument("--alphabet", type=int, default=5, help="SAX alphabet size")
    common.add_argument("--minsup", type=_fraction, default=0.2)
    common.add_argument("--minconf", type=_fraction, default=0.8)
    common.add_argument("--goal", action="append", default=[], help='e.g. "Calories<=2000:low"; repeatable')
    common.add_argument("--guideline", help="JSON file {name, ranges: {attr: [lo, hi]}}")
    common.add_argument("--vocab", help="vocabulary JSON (default: $TEMPOSUM_VOCAB or built-in)")
    common.add_argument("--bins", help="JSON raw-range bins: {attr: [{upper_bound, label}, ...]} or a list for all")
    common.add_argument("--protoforms", default="all", help="comma-separated protoform types or 'all'")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--provenance-dir", help="write one chart spec per summary here")
    common.add_argument("--format", choices=["jsonl", "table"], default="jsonl")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--calendar", action="store_true", help="calendar weeks/months instead of day chunks")
    common.add_argument("--trend-eps", type=float, default=0.0, help="tolerance for 'stayed the same'")
    common.add_argument("--ifthen-prefix", choices=["single", "all"], default="single")
    common.add_argument("--literal-coverage", action="store_true", help=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="temposum", description="Linguistic summaries of personal time series.")
    sub = parser.add_subparsers(dest="command", required=True)
    s = sub.add_parser("summarize", parents=[common], help="summaries for one user's CSV log")
    s.add_argument("--input", required=True)
    g = sub.add_parser("group", parents=[common], help="population summaries over a cohort directory")
    g.add_argument("--cohort", required=True, help="directory of per-user CSV files")
    g.add_argument("--min-days", type=int, default=0, help="drop users with fewer logged days")
    return parser


def _config(args, parser) -> RunConfig:
    try:
        goals = tuple(parse_goal(t) for t in args.goal)
    except ValueError as exc:
        parser.error(str(exc))
    guideline = None
    if args.guideline:
        guideline = Guideline.from_dict(json.loads(Path(args.guideline).read_text(encoding="utf-8")))
    try:
        gran = Granularity(args.granularity, None if args.granularity == "none" else args.tw_len)
        return RunConfig(alphabet_size=args.alphabet, granularity=gran, min_support=args.minsup,
                         min_confidence=args.minconf, rng_seed=args.seed, goals=goals, guideline=guideline,
                         calendar=args.calendar, trend_epsilon=args.trend_eps, ifthen_prefix=args.ifthen_prefix,
                         coverage_literal=args.literal_coverage)
    except ValueError as exc:
        parser.error(str(exc))


def _vocabulary(args) -> Vocabulary:
    path = args.vocab or os.environ.get("TEMPOSUM_VOCAB")
    vocab = load_config(path)[0] if path else default_health_vocabulary()
    if args.bins:
        bins = json.loads(Path(args.bins).read_text(encoding="utf-8"))
        vocab.raw_bins.update({"*": bins} if isinstance(bins, list) else bins)
    return vocab


def _attrs(args, header_source) -> list[str]:
    """--attrs, else every non-date column of `header_source`."""
    if args.attrs:
        return [a.strip() for a in args.attrs.split(",") if a.strip()]
    if header_source is None:
        return []
    lines = Path(header_source).read_text(encoding="utf-8-sig").splitlines()
    header = next(csv.reader(lines[:1]), [])
    return [h.strip() for h in header if h.strip() and h.strip() != args.date_col]


def _table(summaries) -> str:
    lines = []
    for s in summaries:
        m = s.metrics
        cells = " ".join("N/A " if getattr(m, k) is NA else f"{getattr(m, k):.2f}" for k in ("T1", "T2", "T3", "T4", "T5", "T6"))
        lines.append(f"{s.type.value:<22} {cells}  {s.text}")
    return "\n".join(lines) + ("\n" if lines else "")


def _emit(text: str, out) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        parse_protoforms(args.protoforms)
    except ValueError as exc:
        parser.error(f"--protoforms: {exc}")
    try:
        config = _config(args, parser)
        vocab = _vocabulary(args)
        if args.command == "summarize":
            attrs = _attrs(args, args.input)
            if not attrs:
                raise DataError(f"{args.input}: no attribute columns")
            series = load_csv(args.input, args.date_col, attrs)
            run = summarize(series, config, vocab, args.protoforms, workers=args.workers)
            summaries = run.summaries
            paths = write_provenance(run, args.provenance_dir) if args.provenance_dir else [None] * len(summaries)
        else:
            files = sorted(Path(args.cohort).glob("*.csv"))
            attrs = _attrs(args, files[0] if files else None)
            dataset = load_cohort(args.cohort, args.date_col, attrs, min_days=args.min_days, workers=args.workers)
            for user, days in sorted(dataset.excluded.items()):
                print(f"excluded user {user}: {days} logged days < {args.min_days}", file=sys.stderr)
            cohort = summarize_cohort(dataset, config, vocab, args.protoforms, workers=args.workers)
            summaries = cohort.groups
            paths = [None] * len(summaries)
    except (DataError, OSError, json.JSONDecodeError) as exc:
        print(f"temposum: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.format == "table":
        _emit(_table(summaries), args.out)
    else:
        _emit(jsonl(to_record(s, p) for s, p in zip(summaries, paths)), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
