"""Summary generation: one function per protoform type.

Generators work on a :class:`View`, which aligns a set of attributes on their
common logged dates and carries per-day letters, window partitions and
window-level letters.  A :class:`Context` builds and caches views and holds
the configuration and vocabulary.

Generators raise a :class:`~temposum.errors.Suppressed` subclass when their
preconditions fail; the pipeline treats that as "no summary".
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from itertools import combinations, product
from typing import Mapping, Sequence

import numpy as np

from temposum.discretize import (BinningScheme, Window, band_edges, partition, raw_range_scheme,
                                 sax_scheme, scheme_space)
from temposum.errors import (CohortTooSmall, EmptyQualifierSubset, IncompleteWindow, MissingGoal,
                             MissingGuideline, NoCompleteWindow, OrphanWindow, SingleAttribute,
                             TooFewOccurrences, TooShort)
from temposum.fuzzy import best_pair, best_quantifier
from temposum.mining import (Cluster, SequenceRule, WindowTuple, mine_frequent_segments,
                             mine_projected_rules, pair_with_followers, rules_from_patterns, squeezer,
                             threshold_details)
from temposum.model import WEEKDAYS, Guideline, ProtoformType, RunConfig, Summary, TimeSeries, Vocabulary
from temposum.model import default_health_vocabulary
from temposum.templates import join_sequence, render

P = ProtoformType

@dataclass(frozen=True)
class View:
    attributes: tuple[str, ...]
    dates: tuple[date, ...]
    raw: Mapping[str, np.ndarray]
    cat: Mapping[str, np.ndarray]  # per-day bin index
    windows: tuple[Window, ...]
    wcat: Mapping[str, Mapping[int, int]]  # window-level bin index, complete windows only
    schemes: Mapping[str, BinningScheme]
    edges: Mapping[str, tuple[float, ...]]
    tw_len: int

    @property
    def n(self) -> int:
        return len(self.dates)

    @property
    def complete(self) -> list[Window]:
        return [w for w in self.windows if w.complete]

    def window(self, ordinal: int) -> Window:
        for w in self.windows:
            if w.ordinal == ordinal:
                return w
        raise IncompleteWindow(f"no window {ordinal}")

    def last_complete(self) -> Window:
        done = self.complete
        if not done:
            raise NoCompleteWindow("no complete time window in the data")
        return done[-1]

    def labels(self, attr: str) -> tuple[str, ...]:
        return self.schemes[attr].labels

    def weekday(self, i: int) -> str:
        return WEEKDAYS[self.dates[i].weekday()]

    def x(self, i: int) -> float:
        return 1.0 + i / self.tw_len

    def segments(self) -> list[range]:
        """Index runs whose dates are consecutive calendar days."""
        out, start = [], 0
        for i in range(1, self.n):
            if (self.dates[i] - self.dates[i - 1]).days != 1:
                out.append(range(start, i))
                start = i
        if self.n:
            out.append(range(start, self.n))
        return out


class Context:
    """Per-user data plus configuration; views are built lazily and cached."""

    def __init__(self, series: Mapping[str, TimeSeries], config: RunConfig | None = None,
                 vocab: Vocabulary | None = None):
        if not series:
            raise ValueError("no attributes")
        self.series = dict(series)
        self.attributes = tuple(self.series)
        self.config = config or RunConfig()
        self.vocab = vocab or default_health_vocabulary()
        self._views: dict[tuple[str, ...], View] = {}
        self._schemes = {a: self.scheme_for(a) for a in self.attributes}
        g = self.config.granularity
        kind = g.kind
        self.fields = {
            "poss": self.vocab.possessive,
            "tw": self.vocab.window_name(kind) if not g.full_range else "period",
            "tw_plural": self.vocab.window_name(kind, True) if not g.full_range else "periods",
            "stw": self.vocab.window_name(self.config.sub_window),
            "stw_plural": self.vocab.window_name(self.config.sub_window, True),
            "period": "overall" if g.full_range else f"in the past {self.vocab.window_name(kind)}",
        }

    def scheme_for(self, attr: str) -> BinningScheme:
        bins = self.vocab.raw_bins.get(attr, self.vocab.raw_bins.get("*"))
        if bins:
            return raw_range_scheme(bins)
        n = self.config.alphabet_size
        return sax_scheme(n, self.vocab.level_names(n))

    def view(self, attrs: Sequence[str] | None = None) -> View:
        attrs = tuple(attrs or self.attributes)
        if attrs in self._views:
            return self._views[attrs]
        unknown = [a for a in attrs if a not in self.series]
        if unknown:
            raise KeyError(f"unknown attributes {unknown}")
        common = set(self.series[attrs[0]].dates)
        for a in attrs[1:]:
            common &= set(self.series[a].dates)
        dates = tuple(sorted(common))
        if not dates:
            raise TooShort("attributes share no logged dates")
        g = self.config.granularity
        windows = tuple(partition(dates, g, self.config.calendar))
        tw_len = len(dates) if g.full_range else g.tw_len
        raw, cat, wcat, edges = {}, {}, {}, {}
        for a in attrs:
            s = self.series[a]
            scheme = self._schemes[a]
            # normalization statistics come from the attribute's whole series
            space, mean, sd = scheme_space(s, scheme, fallback=True)
            keep = np.array([d in common for d in s.dates])
            raw[a] = s.array[keep]
            values = space[keep]
            cat[a] = scheme.bin_index(values)
            wcat[a] = {w.ordinal: int(scheme.bin_index([values[list(w.indices)].mean()])[0])
                       for w in windows if w.complete}
            edges[a] = band_edges(scheme, mean, sd)
        view = View(attrs, dates, raw, cat, windows, wcat, dict(self._schemes), edges, tw_len)
        self._views[attrs] = view
        return view


# --- helpers -----------------------------------------------------------------

def _clause(ctx: Context, attr: str, label: str, summarizer: str | None = None, **extra) -> dict:
    return {"attr": attr, "attribute": ctx.vocab.phrase(attr), "label": label,
            "summarizer": label if summarizer is None else summarizer, **extra}


def _build(ctx: Context, ptype: P, attrs, fields: dict, clauses: dict, summarizers, conclusion,
           template_key: str | None = None, **kw) -> Summary:
    template = ctx.vocab.templates[template_key or ptype.value]
    text = render(template, {**ctx.fields, **fields}, clauses)
    details = {"fields": dict(fields), "clauses": {k: [dict(c) for c in v] for k, v in clauses.items()},
               "conclusion": conclusion}
    details.update(kw.pop("details", {}))
    return Summary(type=ptype, attributes=tuple(attrs), text=text, summarizers=tuple(summarizers),
                   details=details, **kw)


def _joint_ratios(cats: Sequence[np.ndarray], sizes: Sequence[int]):
    """Ratio of each category combination over the rows of `cats` (all same length)."""
    n = len(cats[0])
    out = {}
    for combo in product(*(range(k) for k in sizes)):
        mask = np.ones(n, dtype=bool)
        for c, v in zip(cats, combo):
            mask &= c == v
        out[combo] = (int(mask.sum()) / n, mask)
    return out


def _quantify(ctx: Context, query: np.ndarray, cats: Sequence[np.ndarray], names: Sequence[Sequence[str]],
              quantifiers=None):
    """Best (combination, quantifier) over query rows plus bookkeeping for metrics.

    Zero-ratio combinations stay in ``r_values`` (they drive T2) but never
    compete as candidates.
    """
    joint = _joint_ratios([c[query] for c in cats], [len(n) for n in names])
    r_values = {tuple(nm[i] for nm, i in zip(names, combo)): r for combo, (r, _) in joint.items()}
    candidates = {combo: r for combo, (r, _) in joint.items() if r > 0}
    pair = best_pair(candidates, quantifiers or ctx.vocab.quantifiers)
    combo = pair.summarizer
    mask = joint[combo][1]
    labels = tuple(nm[i] for nm, i in zip(names, combo))
    ratios = tuple(int((c[query] == i).sum()) / len(query) for c, i in zip(cats, combo))
    return {
        "combo": combo, "labels": labels, "pair": pair, "r_values": r_values,
        "supporting": tuple(int(i) for i in query[mask]), "ratios": ratios,
    }


def _window_query(ctx: Context, view: View) -> tuple[np.ndarray, int | None]:
    if ctx.config.granularity.full_range:
        return np.arange(view.n), None
    w = view.last_complete()
    return np.asarray(w.indices), w.ordinal


def _require_windows(ctx: Context):
    if ctx.config.granularity.full_range:
        raise NoCompleteWindow("full-range granularity has no time windows")


def _quantified(ctx, ptype, attrs, q, query, fields, clauses, conclusion, summarizers=None, **kw):
    pair = q["pair"]
    fields = {**fields, "quantifier": pair.quantifier.name}
    return _build(
        ctx, ptype, attrs, fields, clauses,
        summarizers if summarizers is not None else q["labels"],
        tuple(conclusion),
        quantifier=pair.quantifier.name, truth=pair.truth, covering=pair.r,
        r_values=q["r_values"], attribute_ratios=kw.pop("attribute_ratios", q["ratios"]),
        query_points=tuple(int(i) for i in query), supporting_points=q["supporting"],
        details={"runners_up": [(c.summarizer, c.quantifier.name, c.truth) for c in pair.runners_up],
                 **kw.pop("details", {})},
        **kw,
    )


# --- evaluation summaries ----------------------------------------------------

def gen_standard_eval(ctx: Context, attrs: Sequence[str] | None = None, mode: str = "sTW",
                      qualifier: tuple[str, str] | None = None) -> Summary:
    """Level of each attribute in the last full window.

    ``mode="TW"`` states the window-level letters; ``mode="sTW"`` quantifies
    the days of that window.  A `qualifier` ``(attribute, label)`` restricts
    the days to those where that attribute carries that label.
    """
    attrs = tuple(attrs or ctx.attributes)
    if mode == "TW":
        _require_windows(ctx)
        view = ctx.view(attrs)
        w = view.last_complete()
        labels = [view.labels(a)[view.wcat[a][w.ordinal]] for a in attrs]
        clauses = {"clause": [_clause(ctx, a, s) for a, s in zip(attrs, labels)]}
        return _build(ctx, P.StandardEvalTW, attrs, {}, clauses, labels, tuple(labels),
                      attribute_ratios=(1.0,) * len(attrs), query_window=w.ordinal,
                      supporting_points=w.indices, query_points=w.indices)
    if mode != "sTW":
        raise ValueError(f"unknown mode {mode!r}")

    if qualifier is None:
        view = ctx.view(attrs)
        query, ordinal = _window_query(ctx, view)
        q = _quantify(ctx, query, [view.cat[a] for a in attrs], [view.labels(a) for a in attrs])
        clauses = {"clause": [_clause(ctx, a, s) for a, s in zip(attrs, q["labels"])]}
        return _quantified(ctx, P.StandardEvalSTW, attrs, q, query, {}, clauses, q["labels"],
                           query_window=ordinal)

    q_attr, q_label = qualifier
    if q_attr in attrs:
        raise ValueError("qualifier attribute must differ from the summarized attributes")
    view = ctx.view((q_attr, *attrs))
    window, ordinal = _window_query(ctx, view)
    q_idx = view.labels(q_attr).index(q_label)
    query = window[view.cat[q_attr][window] == q_idx]
    if query.size == 0:
        raise EmptyQualifierSubset(f"no day with {q_attr} {q_label!r}")
    q = _quantify(ctx, query, [view.cat[a] for a in attrs], [view.labels(a) for a in attrs])
    # per-attribute ratios for T4 are taken over the whole window
    ratios = [int((view.cat[q_attr][window] == q_idx).sum()) / len(window)]
    ratios += [int((view.cat[a][window] == i).sum()) / len(window) for a, i in zip(attrs, q["combo"])]
    clauses = {"qualifier_clause": [_clause(ctx, q_attr, q_label)],
               "clause": [_clause(ctx, a, s) for a, s in zip(attrs, q["labels"])]}
    return _quantified(ctx, P.StandardEvalQualifier, (q_attr, *attrs), q, query, {}, clauses,
                       (q_label, *q["labels"]), summarizers=(q_label, *q["labels"]),
                       attribute_ratios=tuple(ratios), query_window=ordinal,
                       details={"qualifier": [q_attr, q_label]})


def _goal_text(goal) -> str:
    return goal.label


def gen_goal_evaluation(ctx: Context, attrs: Sequence[str] | None = None, goals=None) -> Summary:
    attrs = tuple(attrs or ctx.attributes)
    goals = {g.attribute_name: g for g in (goals if goals is not None else ctx.config.goals)}
    missing = [a for a in attrs if a not in goals]
    if missing:
        raise MissingGoal(f"no goal for {missing}")
    view = ctx.view(attrs)
    query, ordinal = _window_query(ctx, view)
    names = ctx.vocab.labels(P.GoalEvaluation)
    cats = [np.array([0 if goals[a].satisfied(v) else 1 for v in view.raw[a]]) for a in attrs]
    q = _quantify(ctx, query, cats, [names] * len(attrs))
    clauses = {"clause": [_clause(ctx, a, s, goal=_goal_text(goals[a])) for a, s in zip(attrs, q["labels"])]}
    return _quantified(ctx, P.GoalEvaluation, attrs, q, query, {}, clauses, q["labels"],
                       query_window=ordinal, details={"goals": {a: goals[a].reference_lines for a in attrs}})


def gen_goal_assistance(ctx: Context, attrs: Sequence[str] | None = None,
                        guideline: Guideline | None = None) -> Summary | None:
    """Advice to move window means into the guideline range; None when all are inside."""
    attrs = tuple(attrs or ctx.attributes)
    guideline = guideline or ctx.config.guideline
    if guideline is None:
        raise MissingGuideline("no guideline configured")
    missing = [a for a in attrs if a not in guideline.ranges]
    if missing:
        raise MissingGuideline(f"guideline {guideline.name!r} has no range for {missing}")
    view = ctx.view(attrs)
    query, ordinal = _window_query(ctx, view)
    advised = []
    for a in attrs:
        advice = guideline.advice(a, float(view.raw[a][query].mean()))
        if advice is not None:
            advised.append((a, advice))
    if not advised:
        return None
    names = ctx.vocab.labels(P.GoalAssistance)
    words = {"increase": names[0], "decrease": names[1 % len(names)]}
    labels = [words[adv] for _, adv in advised]
    used = tuple(a for a, _ in advised)
    clauses = {"clause": [_clause(ctx, a, s) for a, s in zip(used, labels)]}
    return _build(ctx, P.GoalAssistance, used, {"guideline": guideline.name}, clauses, labels, tuple(labels),
                  query_window=ordinal, query_points=tuple(int(i) for i in query),
                  supporting_points=tuple(int(i) for i in query),
                  details={"guideline_ranges": {a: list(guideline.ranges[a]) for a in used}, "view": list(attrs)})


def gen_day_based(ctx: Context, attrs: Sequence[str] | None = None, weekday: str = "Monday") -> Summary | None:
    """Typical level on one weekday across the whole dataset; None below the emission bar."""
    attrs = tuple(attrs or ctx.attributes)
    if weekday not in WEEKDAYS:
        raise ValueError(f"unknown weekday {weekday!r}")
    view = ctx.view(attrs)
    query = np.array([i for i in range(view.n) if view.weekday(i) == weekday], dtype=int)
    if query.size < 2:
        raise TooFewOccurrences(f"{weekday} occurs {query.size} time(s)")
    # "tends to be" cannot carry a near-zero share, so the none-ish quantifiers sit out
    family = list(ctx.vocab.quantifiers)
    if _has_quantifier(ctx, "some of the"):
        floor = ctx.vocab.quantifier("some of the").rank
        family = [q for q in family if q.rank >= floor]
    q = _quantify(ctx, query, [view.cat[a] for a in attrs], [view.labels(a) for a in attrs], family)
    pair = q["pair"]
    most = ctx.vocab.quantifier("most of the").rank if _has_quantifier(ctx, "most of the") else None
    if not ((most is not None and pair.quantifier.rank >= most)
            or pair.truth >= ctx.config.day_emission_threshold):
        return None
    clauses = {"clause": [_clause(ctx, a, s) for a, s in zip(attrs, q["labels"])]}
    return _quantified(ctx, P.DayBasedPattern, attrs, q, query, {"weekday_plural": weekday + "s"}, clauses,
                       (weekday, *q["labels"]), details={"weekday": weekday})


def _has_quantifier(ctx, name) -> bool:
    return any(q.name == name for q in ctx.vocab.quantifiers)


def gen_general_ifthen(ctx: Context, attrs: Sequence[str] | None = None) -> list[Summary]:
    """Same-day associations: antecedent levels on some attributes imply levels on the rest."""
    attrs = tuple(attrs or ctx.attributes)
    if len(attrs) < 2:
        raise SingleAttribute("general if-then needs at least two attributes")
    view = ctx.view(attrs)
    min_conf = ctx.config.general_min_confidence
    if min_conf is None:
        min_conf = ctx.config.min_confidence
    out = []
    for size in range(1, len(attrs)):
        for ante in combinations(range(len(attrs)), size):
            cons = tuple(i for i in range(len(attrs)) if i not in ante)
            a_attrs = [attrs[i] for i in ante]
            c_attrs = [attrs[i] for i in cons]
            seen = sorted({tuple(int(view.cat[a][d]) for a in a_attrs) for d in range(view.n)})
            for a_combo in seen:
                mask = np.ones(view.n, dtype=bool)
                for a, v in zip(a_attrs, a_combo):
                    mask &= view.cat[a] == v
                query = np.flatnonzero(mask)
                cats = [view.cat[a] for a in c_attrs]
                names = [view.labels(a) for a in c_attrs]
                joint = _joint_ratios([c[query] for c in cats], [len(n) for n in names])
                # arg-max consequent; product order breaks ties
                best = max(joint, key=lambda k: joint[k][0])
                conf, cmask = joint[best]
                if conf < min_conf:
                    continue
                q_best, mu = best_quantifier(conf, ctx.vocab.quantifiers)
                a_labels = tuple(view.labels(a)[v] for a, v in zip(a_attrs, a_combo))
                c_labels = tuple(nm[i] for nm, i in zip(names, best))
                ratios = {a: 1.0 for a in a_attrs}
                ratios.update({a: int((view.cat[a][query] == i).sum()) / len(query)
                               for a, i in zip(c_attrs, best)})
                clauses = {"antecedent_clause": [_clause(ctx, a, s) for a, s in zip(a_attrs, a_labels)],
                           "clause": [_clause(ctx, a, s) for a, s in zip(c_attrs, c_labels)]}
                r_values = {tuple(nm[i] for nm, i in zip(names, k)): r for k, (r, _) in joint.items()}
                out.append(_build(
                    ctx, P.GeneralIfThen, attrs, {"quantifier": q_best.name}, clauses,
                    a_labels + c_labels, (tuple(a_attrs), a_labels, tuple(c_attrs), c_labels),
                    quantifier=q_best.name, truth=mu, covering=conf, confidence=conf, r_values=r_values,
                    attribute_ratios=tuple(ratios[a] for a in attrs),
                    query_points=tuple(int(i) for i in query),
                    supporting_points=tuple(int(i) for i in query[cmask]),
                ))
    return out


def gen_standard_trend(ctx: Context, attrs: Sequence[str] | None = None) -> Summary:
    """Direction of change between consecutive days over the entire dataset."""
    attrs = tuple(attrs or ctx.attributes)
    view = ctx.view(attrs)
    starts = np.array([i for seg in view.segments() for i in list(seg)[:-1]], dtype=int)
    if starts.size == 0:
        raise TooShort("no two consecutive logged days")
    eps = ctx.config.trend_epsilon
    names = ctx.vocab.labels(P.StandardTrend)
    cats = []
    for a in attrs:
        full = np.full(view.n, 2)
        diff = view.raw[a][starts + 1] - view.raw[a][starts]
        full[starts] = np.where(diff > eps, 0, np.where(diff < -eps, 1, 2))
        cats.append(full)
    q = _quantify(ctx, starts, cats, [names] * len(attrs))
    clauses = {"clause": [_clause(ctx, a, s, ctx.vocab.form("trend", s)) for a, s in zip(attrs, q["labels"])]}
    return _quantified(ctx, P.StandardTrend, attrs, q, starts, {}, clauses, q["labels"], point_unit="pair")


# --- if-then patterns ----------------------------------------------------------

def _tokens(view: View, attrs, day: bool) -> list[str]:
    out = []
    for i in range(view.n):
        body = "-".join(view.schemes[a].letters[view.cat[a][i]] for a in attrs)
        out.append(f"{view.weekday(i)}:{body}" if day else body)
    return out


def mine_rules(ctx: Context, attrs: Sequence[str] | None = None, day_annotated: bool = False) -> list[SequenceRule]:
    """Mine prefix -> suffix rules over consecutive days of the view."""
    _require_windows(ctx)
    attrs = tuple(attrs or ctx.attributes)
    view = ctx.view(attrs)
    cfg = ctx.config
    max_len = view.tw_len
    segs = view.segments()
    if len(attrs) == 1 or cfg.ifthen_prefix == "all":
        tokens = _tokens(view, attrs, day_annotated)
        patterns = mine_frequent_segments([[tokens[i] for i in s] for s in segs], max_len, cfg.min_support)
        return rules_from_patterns(patterns, cfg.min_confidence, day_annotated)
    letters = [[tuple(view.schemes[a].letters[view.cat[a][i]] for a in attrs) for i in s] for s in segs]
    weekdays = [[view.weekday(i) for i in s] for s in segs] if day_annotated else None
    rules = []
    for k in range(len(attrs)):
        rules += mine_projected_rules(letters, (k,), max_len, cfg.min_support, cfg.min_confidence, weekdays)
    return sorted(rules, key=lambda r: (-r.confidence, -r.support_count, r.prefix_attributes or (), r.prefix, r.suffix))


def _split_token(token: str) -> tuple[str | None, list[str]]:
    day, _, body = token.rpartition(":")
    return (day or None), body.split("-")


def _occurrences(view: View, attrs, rule: SequenceRule):
    day = rule.day_annotated
    full = _tokens(view, attrs, day)
    pa = rule.prefix_attributes
    proj = _tokens(view, [attrs[i] for i in pa], day) if pa is not None else full
    k, length = len(rule.prefix), rule.length
    admissible, hits = [], []
    for seg in view.segments():
        for i in range(seg.start, seg.stop - length + 1):
            admissible.append(i)
            if tuple(proj[i:i + k]) == rule.prefix and tuple(full[i + k:i + length]) == rule.suffix:
                hits.append(i)
    return admissible, hits


def gen_ifthen(rules: Sequence[SequenceRule], ctx: Context, attrs: Sequence[str] | None = None,
               day_annotated: bool | None = None) -> list[Summary]:
    """One summary per rule, in rule order."""
    attrs = tuple(attrs or ctx.attributes)
    view = ctx.view(attrs)
    out = []
    for rule in rules:
        day = rule.day_annotated if day_annotated is None else day_annotated
        ptype = P.DayIfThenPattern if day else P.IfThenPattern
        p_idx = rule.prefix_attributes if rule.prefix_attributes is not None else tuple(range(len(attrs)))
        prefix = [_split_token(t) for t in rule.prefix]
        suffix = [_split_token(t) for t in rule.suffix]
        summarizers = []
        prefix_clauses = []
        for j, ai in enumerate(p_idx):
            a = attrs[ai]
            scheme = view.schemes[a]
            steps = [scheme.label_of(letters[j]) for _, letters in prefix]
            summarizers += steps
            if day:
                pattern = join_sequence([f"{s} on a {d}" for s, (d, _) in zip(steps, prefix)])
            else:
                pattern = join_sequence(steps)
            prefix_clauses.append(_clause(ctx, a, steps[0] if len(steps) == 1 else tuple(steps),
                                          pattern, pattern=pattern))
        clauses = []
        for ai, a in enumerate(attrs):
            scheme = view.schemes[a]
            steps = [scheme.label_of(letters[ai]) for _, letters in suffix]
            summarizers += steps
            if day:
                pattern = join_sequence([f"{s} the next {d}" for s, (d, _) in zip(steps, suffix)])
            else:
                pattern = join_sequence(steps)
            clauses.append(_clause(ctx, a, steps[0] if len(steps) == 1 else tuple(steps), pattern, pattern=pattern))
        admissible, hits = _occurrences(view, attrs, rule)
        r = len(hits) / len(admissible)
        q, mu = best_quantifier(r, ctx.vocab.quantifiers)
        fields = {"confidence": f"{rule.confidence * 100:.0f}%"}
        key = (rule.prefix, rule.suffix)
        out.append(_build(
            ctx, ptype, attrs, fields, {"prefix_clause": prefix_clauses, "clause": clauses}, summarizers,
            (tuple(attrs[i] for i in p_idx), rule.prefix, rule.suffix),
            quantifier=q.name, truth=mu, covering=r, r_values={key: r}, confidence=rule.confidence,
            query_points=tuple(admissible), supporting_points=tuple(hits), point_unit="occurrence",
            details={"rule_length": rule.length, "prefix_length": len(rule.prefix)},
        ))
    return out


# --- comparisons and window patterns ------------------------------------------

def default_comparison_windows(view: View) -> tuple[int, int]:
    """Last full window K against window K // 2."""
    k = view.last_complete().ordinal
    return k, k // 2


def gen_comparison(ctx: Context, attrs: Sequence[str] | None = None, window_a: int | None = None,
                   window_b: int | None = None, with_goal: bool = False) -> Summary:
    _require_windows(ctx)
    attrs = tuple(attrs or ctx.attributes)
    view = ctx.view(attrs)
    if window_a is None or window_b is None:
        da, db = default_comparison_windows(view)
        window_a = da if window_a is None else window_a
        window_b = db if window_b is None else window_b
    for w in (window_a, window_b):
        if w < 1 or not any(x.ordinal == w and x.complete for x in view.windows):
            raise IncompleteWindow(f"window {w} is not a complete window")
    wa, wb = view.window(window_a), view.window(window_b)
    if with_goal:
        ptype = P.GoalComparison
        missing = [a for a in attrs if ctx.config.goal_for(a) is None]
        if missing:
            raise MissingGoal(f"no goal for {missing}")
        better, worse, same = ctx.vocab.labels(ptype)
        labels, extra = [], []
        for a in attrs:
            goal = ctx.config.goal_for(a)
            na = sum(goal.satisfied(view.raw[a][i]) for i in wa.indices)
            nb = sum(goal.satisfied(view.raw[a][i]) for i in wb.indices)
            labels.append(better if na > nb else worse if na < nb else same)
            extra.append({"goal": _goal_text(goal)})
    else:
        ptype = P.Comparison
        higher, lower, same = ctx.vocab.labels(ptype)
        labels, extra = [], []
        for a in attrs:
            la, lb = view.wcat[a][window_a], view.wcat[a][window_b]
            labels.append(higher if la > lb else lower if la < lb else same)
            extra.append({})
    clauses = {"clause": [_clause(ctx, a, s, **e) for a, s, e in zip(attrs, labels, extra)]}
    fields = {"number1": window_a, "number2": window_b,
              "pronoun": "it was" if len(attrs) == 1 else "they were",
              # "higher than" but "about the same as"
              "connective": "as" if all(s == labels[0] for s in labels) and labels[0] == same else "than"}
    points = tuple(wa.indices) + tuple(wb.indices)
    return _build(ctx, ptype, attrs, fields, clauses, labels, tuple(labels),
                  attribute_ratios=(1.0,) * len(attrs), query_window=window_a, comparison_windows=(window_b,),
                  query_points=points, supporting_points=points)


def window_tuples(view: View) -> list[WindowTuple]:
    out = []
    for w in view.complete:
        tokens = ["-".join(view.schemes[a].letters[view.cat[a][i]] for a in view.attributes) for i in w.indices]
        out.append(WindowTuple(w.ordinal, tuple(tokens)))
    return out


def cluster_windows(ctx: Context, attrs: Sequence[str] | None = None) -> tuple[list[Cluster], float]:
    _require_windows(ctx)
    view = ctx.view(tuple(attrs or ctx.attributes))
    tuples = window_tuples(view)
    est = threshold_details(tuples, ctx.config.sample_fraction, ctx.config.rng_seed)
    return squeezer(tuples, est.s), est.s


def _run_length(labels: Sequence[str]) -> list[str]:
    out = []
    for s in labels:
        if not out or out[-1] != s:
            out.append(s)
    return out


def gen_cluster_pattern(ctx: Context, attrs: Sequence[str] | None = None, clusters: Sequence[Cluster] | None = None,
                        target: int | None = None, last_only: bool = False) -> Summary:
    """What followed windows similar to the target window.

    With `last_only` only the most recent earlier similar window counts and
    the sentence carries no quantifier.
    """
    _require_windows(ctx)
    attrs = tuple(attrs or ctx.attributes)
    view = ctx.view(attrs)
    if clusters is None:
        clusters, _ = cluster_windows(ctx, attrs)
    if target is None:
        target = view.last_complete().ordinal
    home = next((c for c in clusters if target in c.members), None)
    if home is None:
        raise OrphanWindow(f"window {target} is in no cluster")
    members = [w for w in home.members if w != target and w + 1 in view.wcat[attrs[0]]]
    if last_only:
        members = [w for w in members if w < target][-1:]
    if not members:
        raise OrphanWindow(f"no window similar to {target} has a following window")
    names = ctx.vocab.labels(P.StandardPattern if last_only else P.ClusterBasedPattern)
    pairs = {a: pair_with_followers(members, view.wcat[a]) for a in attrs}
    # 0 = rose, 1 = dropped, 2 = stayed the same, matching the summarizer set order
    cats = [np.array([0 if nxt > cur else 1 if nxt < cur else 2 for cur, nxt in pairs[a]]) for a in attrs]
    label_sets = [list(names)] * len(attrs)
    ptype = P.StandardPattern if last_only else P.ClusterBasedPattern
    fields = {"number": target}
    members_arr = np.asarray(members)
    if last_only:
        labels = [label_sets[0][int(c[0])] for c in cats]
        clauses = {"clause": [_clause(ctx, a, s) for a, s in zip(attrs, labels)]}
        w = members[0]
        return _build(ctx, ptype, attrs, fields, clauses, labels, tuple(labels),
                      attribute_ratios=(1.0,) * len(attrs), query_window=target, comparison_windows=(w, w + 1),
                      query_points=(w,), supporting_points=(w,), point_unit="window",
                      details={"members": [w]})
    q = _quantify(ctx, np.arange(len(members)), cats, label_sets)
    desc = []
    desc_labels = []
    tw = view.window(target)
    for a in attrs:
        steps = _run_length([view.labels(a)[view.cat[a][i]] for i in tw.indices])
        desc_labels += steps
        pattern = join_sequence(steps)
        desc.append(_clause(ctx, a, steps[0] if len(steps) == 1 else tuple(steps), pattern, pattern=pattern))
    clauses = {"description_clause": desc, "clause": [_clause(ctx, a, s) for a, s in zip(attrs, q["labels"])]}
    q = {**q, "supporting": tuple(int(members_arr[i]) for i in q["supporting"])}
    return _quantified(ctx, ptype, attrs, q, members_arr, fields, clauses, q["labels"],
                       summarizers=tuple(desc_labels) + q["labels"], query_window=target,
                       comparison_windows=tuple(members), point_unit="window",
                       details={"members": list(members), "threshold": home.threshold})


# --- group level ---------------------------------------------------------------

_GROUP_FORM = {
    P.StandardTrend: "group_trend",
    P.Comparison: "group_comparison",
    P.ClusterBasedPattern: "group_change",
    P.StandardPattern: "group_change",
}
_INNER_QUANTIFIED = {P.StandardEvalSTW, P.StandardEvalQualifier, P.GoalEvaluation, P.StandardTrend}


def _group_template(ptype: P) -> tuple[P, str]:
    if ptype is P.ClusterBasedPattern:
        return P.GroupClusterPattern, "GroupClusterPattern"
    if ptype is P.StandardPattern:
        return P.GroupStandardPattern, "GroupStandardPattern"
    if ptype is P.IfThenPattern:
        return P.GroupIfThen, "GroupIfThen"
    if ptype is P.DayIfThenPattern:
        return P.GroupIfThen, "GroupIfThen.DayIfThenPattern"
    return P.GroupPopulationEval, f"GroupPopulationEval.{ptype.value}"


def gen_group(user_summaries: Mapping[str, Sequence[Summary]], config: RunConfig | None = None,
              vocab: Vocabulary | None = None, subtype: P | str | None = None) -> list[Summary]:
    """Population summaries: the share of users whose own summary reached each conclusion.

    Classes no user falls into are never emitted.
    """
    config = config or RunConfig()
    vocab = vocab or default_health_vocabulary()
    n_users = len(user_summaries)
    if n_users < 2:
        raise CohortTooSmall(f"group summaries need at least 2 users, have {n_users}")
    g = config.granularity
    base_fields = {
        "poss": "their",
        "tw": vocab.window_name(g.kind) if not g.full_range else "period",
        "tw_plural": vocab.window_name(g.kind, True) if not g.full_range else "periods",
        "stw": vocab.window_name(config.sub_window),
        "stw_plural": vocab.window_name(config.sub_window, True),
        "period": "overall" if g.full_range else f"in the past {vocab.window_name(g.kind)}",
    }
    wanted = None if subtype is None else P(subtype)

    classes: dict[tuple, dict] = {}
    for user in sorted(user_summaries):
        seen = set()
        for s in user_summaries[user]:
            ptype = P(s.type)
            if ptype in (P.GroupPopulationEval, P.GroupClusterPattern, P.GroupStandardPattern, P.GroupIfThen):
                continue
            if wanted is not None and ptype is not wanted:
                continue
            conclusion = _freeze(s.details.get("conclusion"))
            if ptype in _INNER_QUANTIFIED:
                conclusion = (s.quantifier, conclusion)
            key = (ptype.value, tuple(s.attributes), conclusion)
            if key in seen:
                continue
            seen.add(key)
            entry = classes.setdefault(key, {"example": s, "users": []})
            entry["users"].append(user)

    # T2 looks at every observed class of the same subtype and attribute set
    family: dict[tuple, list[float]] = {}
    for (pt, attrs, _), entry in classes.items():
        family.setdefault((pt, attrs), []).append(len(entry["users"]) / n_users)

    order = {t.value: i for i, t in enumerate(P)}
    keys = sorted(classes, key=lambda k: (order[k[0]], k[1], -len(classes[k]["users"]), repr(k[2])))
    out = []
    for key in keys:
        entry = classes[key]
        example: Summary = entry["example"]
        ptype = P(example.type)
        gtype, tkey = _group_template(ptype)
        r = len(entry["users"]) / n_users
        q, mu = best_quantifier(r, vocab.quantifiers)
        fields = {**base_fields, **example.details.get("fields", {})}
        if ptype in _INNER_QUANTIFIED:
            fields["inner_quantifier"] = example.quantifier
        fields["quantifier"] = q.name
        form = _GROUP_FORM.get(ptype)
        clauses = {}
        summarizers = []
        for kind, items in example.details.get("clauses", {}).items():
            if kind == "description_clause":
                continue
            rendered = []
            for c in items:
                c = dict(c)
                if form and isinstance(c["label"], str):
                    c["summarizer"] = vocab.form(form, c["label"])
                labels = c["label"] if isinstance(c["label"], tuple) else (c["label"],)
                summarizers += list(labels)
                rendered.append(c)
            clauses[kind] = rendered
        text = render(vocab.templates[tkey], fields, clauses)
        fam = family[(key[0], key[1])]
        r_values = {i: v for i, v in enumerate(fam)}
        out.append(Summary(
            type=gtype, attributes=tuple(example.attributes), text=text, summarizers=tuple(summarizers),
            quantifier=q.name, truth=mu, covering=r, r_values=r_values,
            query_points=tuple(range(n_users)),
            supporting_points=tuple(sorted(user_summaries).index(u) for u in entry["users"]),
            point_unit="user",
            details={"subtype": ptype.value, "users": list(entry["users"]), "conclusion": key[2]},
        ))
    return out


def _freeze(x):
    if isinstance(x, (list, tuple)):
        return tuple(_freeze(v) for v in x)
    if isinstance(x, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in x.items()))
    return x
