"""End-to-end orchestration: generate, score and serialize summaries."""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from temposum import protoforms as pf
from temposum.errors import MissingGoal, MissingGuideline, Suppressed, TooFewTuples
from temposum.ingest import Dataset, require_cohort
from temposum.metrics import score
from temposum.model import (INDIVIDUAL_TYPES, WEEKDAYS, WINDOW_FREE_TYPES, ProtoformType, RunConfig, Summary,
                            TimeSeries, Vocabulary, default_health_vocabulary)
from temposum.provenance import chart_for, write_chart

log = logging.getLogger(__name__)
P = ProtoformType

MULTIVARIATE_ONLY = {P.StandardEvalQualifier, P.GeneralIfThen}
_SKIP = (Suppressed, TooFewTuples, MissingGoal, MissingGuideline)


def parse_protoforms(spec: str | Iterable[str] | None) -> list[P]:
    if spec is None or spec == "all":
        return list(INDIVIDUAL_TYPES)
    names = [s.strip() for s in spec.split(",")] if isinstance(spec, str) else list(spec)
    out = []
    for name in names:
        if not name:
            continue
        if name == "all":
            return list(INDIVIDUAL_TYPES)
        out.append(P(name))
    return out


def applicable_types(types: Sequence[P], config: RunConfig) -> list[P]:
    types = [t for t in INDIVIDUAL_TYPES if t in set(types)]
    if config.granularity.full_range:
        types = [t for t in types if t in WINDOW_FREE_TYPES]
    return types


def _attempt(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except _SKIP as exc:
        log.debug("suppressed %s: %s", getattr(fn, "__name__", fn), exc)
        return None


def generate(ctx: pf.Context, attrs: Sequence[str], types: Sequence[P]) -> list[Summary]:
    """Every summary of the requested types for one attribute set, in type order."""
    attrs = tuple(attrs)
    multi = len(attrs) > 1
    cfg = ctx.config
    out: list[Summary] = []

    def add(result):
        if result is None:
            return
        out.extend(result if isinstance(result, list) else [result])

    for t in applicable_types(types, cfg):
        if t in MULTIVARIATE_ONLY and not multi:
            continue
        if t is P.StandardEvalTW:
            add(_attempt(pf.gen_standard_eval, ctx, attrs, "TW"))
        elif t is P.StandardEvalSTW:
            add(_attempt(pf.gen_standard_eval, ctx, attrs, "sTW"))
        elif t is P.StandardEvalQualifier:
            add(_qualified(ctx, attrs))
        elif t is P.GoalEvaluation:
            if all(cfg.goal_for(a) for a in attrs):
                add(_attempt(pf.gen_goal_evaluation, ctx, attrs))
        elif t is P.GoalAssistance:
            add(_attempt(pf.gen_goal_assistance, ctx, attrs))
        elif t is P.DayBasedPattern:
            for day in WEEKDAYS:
                add(_attempt(pf.gen_day_based, ctx, attrs, day))
        elif t is P.GeneralIfThen:
            add(_attempt(pf.gen_general_ifthen, ctx, attrs))
        elif t is P.StandardTrend:
            add(_attempt(pf.gen_standard_trend, ctx, attrs))
        elif t in (P.IfThenPattern, P.DayIfThenPattern):
            rules = _attempt(pf.mine_rules, ctx, attrs, t is P.DayIfThenPattern)
            if rules:
                add(pf.gen_ifthen(rules, ctx, attrs))
        elif t is P.Comparison:
            add(_attempt(pf.gen_comparison, ctx, attrs))
        elif t is P.GoalComparison:
            if all(cfg.goal_for(a) for a in attrs):
                add(_attempt(pf.gen_comparison, ctx, attrs, with_goal=True))
        elif t in (P.ClusterBasedPattern, P.StandardPattern):
            clustered = _attempt(pf.cluster_windows, ctx, attrs)
            if clustered is not None:
                add(_attempt(pf.gen_cluster_pattern, ctx, attrs, clustered[0],
                             last_only=t is P.StandardPattern))
    for s in out:
        s.metrics = score(s, literal_coverage=cfg.coverage_literal)
    return out


def _qualified(ctx: pf.Context, attrs: Sequence[str]) -> list[Summary]:
    """One qualifier summary per (qualifier attribute, label seen in the queried days)."""
    out = []
    for q_attr in attrs:
        rest = tuple(a for a in attrs if a != q_attr)
        view = ctx.view((q_attr, *rest))
        try:
            query, _ = pf._window_query(ctx, view)
        except Suppressed:
            return out
        seen = sorted({int(v) for v in view.cat[q_attr][query]})
        for idx in seen:
            label = view.labels(q_attr)[idx]
            s = _attempt(pf.gen_standard_eval, ctx, rest, "sTW", (q_attr, label))
            if s is not None:
                out.append(s)
    return out


@dataclass
class Run:
    ctx: pf.Context
    summaries: list[Summary]


def attribute_sets(attributes: Sequence[str]) -> list[tuple[str, ...]]:
    sets = [(a,) for a in attributes]
    if len(attributes) > 1:
        sets.append(tuple(attributes))
    return sets


def summarize(series: Mapping[str, TimeSeries], config: RunConfig | None = None,
              vocab: Vocabulary | None = None, protoforms=None, workers: int = 1) -> Run:
    """Univariate summaries per attribute, then multivariate ones over all attributes."""
    config = config or RunConfig()
    vocab = vocab or default_health_vocabulary()
    ctx = pf.Context(series, config, vocab)
    types = parse_protoforms(protoforms)
    sets = attribute_sets(ctx.attributes)
    # build views up front so worker threads only read the cache
    for attrs in sets:
        ctx.view(attrs)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        parts = list(pool.map(lambda attrs: generate(ctx, attrs, types), sets))
    # a multivariate run can restate a univariate sentence (e.g. advice on one attribute)
    seen, summaries = set(), []
    for s in (s for part in parts for s in part):
        if s.text not in seen:
            seen.add(s.text)
            summaries.append(s)
    return Run(ctx, summaries)


@dataclass
class CohortRun:
    runs: dict[str, Run]
    groups: list[Summary]


def summarize_cohort(dataset: Dataset, config: RunConfig | None = None, vocab: Vocabulary | None = None,
                     protoforms=None, workers: int = 1) -> CohortRun:
    require_cohort(dataset)
    config = config or RunConfig()
    vocab = vocab or default_health_vocabulary()
    users = sorted(dataset.users)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        runs = list(pool.map(lambda u: summarize(dataset.users[u], config, vocab, protoforms), users))
    by_user = dict(zip(users, runs))
    groups = pf.gen_group({u: r.summaries for u, r in by_user.items()}, config, vocab)
    for s in groups:
        s.metrics = score(s, literal_coverage=config.coverage_literal)
    return CohortRun(by_user, groups)


def to_record(summary: Summary, provenance_path: str | None = None) -> dict:
    return {
        "type": P(summary.type).value,
        "attributes": list(summary.attributes),
        "text": summary.text,
        "metrics": summary.metrics.to_dict() if summary.metrics is not None else None,
        "provenance_path": provenance_path,
    }


def write_provenance(run: Run, directory) -> list[str]:
    directory = Path(directory)
    paths = []
    for k, s in enumerate(run.summaries, start=1):
        path = directory / f"{k:04d}_{P(s.type).value}.json"
        write_chart(chart_for(s, run.ctx), path)
        paths.append(str(path))
    return paths


def jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
