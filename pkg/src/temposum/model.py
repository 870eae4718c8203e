"""Shared domain types, configuration and the default vocabulary."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from temposum.fuzzy import Quantifier, default_quantifiers

WEEKDAYS = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")


@dataclass(frozen=True)
class TimeSeries:
    """Dated observations of one attribute; dates strictly increasing."""

    attribute_name: str
    dates: tuple[date, ...]
    values: tuple[float, ...]
    unit: str = ""

    def __post_init__(self):
        dates = tuple(self.dates)
        values = tuple(float(v) for v in self.values)
        if len(dates) != len(values):
            raise ValueError("dates and values differ in length")
        if not dates:
            raise ValueError(f"series {self.attribute_name!r} has no points")
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"series {self.attribute_name!r} contains non-finite values")
        for a, b in zip(dates, dates[1:]):
            if not a < b:
                raise ValueError(f"series {self.attribute_name!r}: dates must be strictly increasing ({a} then {b})")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_points(cls, attribute_name, points, unit=""):
        points = list(points)
        return cls(attribute_name, tuple(d for d, _ in points), tuple(v for _, v in points), unit)

    @property
    def points(self):
        return list(zip(self.dates, self.values))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def __len__(self):
        return len(self.values)


GRANULARITY_KINDS = ("day", "week", "month", "none")
_DEFAULT_TW_LEN = {"day": 1, "week": 7, "month": 30}


@dataclass(frozen=True)
class Granularity:
    kind: str = "week"
    tw_len: int | None = None

    def __post_init__(self):
        if self.kind not in GRANULARITY_KINDS:
            raise ValueError(f"unknown granularity {self.kind!r}")
        if self.kind == "none":
            if self.tw_len is not None:
                raise ValueError("full-range granularity takes no tw_len")
        else:
            tw_len = _DEFAULT_TW_LEN[self.kind] if self.tw_len is None else int(self.tw_len)
            if tw_len < 1:
                raise ValueError("tw_len must be >= 1")
            object.__setattr__(self, "tw_len", tw_len)

    @property
    def full_range(self) -> bool:
        return self.kind == "none"


COMPARATORS = ("at-most", "at-least", "within-range")


@dataclass(frozen=True)
class Goal:
    attribute_name: str
    comparator: str
    threshold: float
    label: str
    upper: float | None = None

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.comparator!r}")
        if self.comparator == "within-range":
            if self.upper is None or not self.threshold < self.upper:
                raise ValueError("within-range goal needs lower < upper")

    def satisfied(self, value: float) -> bool:
        if self.comparator == "at-most":
            return value <= self.threshold
        if self.comparator == "at-least":
            return value >= self.threshold
        return self.threshold <= value <= self.upper

    @property
    def reference_lines(self) -> list[float]:
        if self.comparator == "within-range":
            return [self.threshold, self.upper]
        return [self.threshold]


@dataclass(frozen=True)
class Guideline:
    """A named diet-style guideline: target range (either end open) per attribute."""

    name: str
    ranges: Mapping[str, tuple[float | None, float | None]]

    def advice(self, attribute: str, mean: float) -> str | None:
        lo, hi = self.ranges[attribute]
        if lo is not None and mean < lo:
            return "increase"
        if hi is not None and mean > hi:
            return "decrease"
        return None

    def to_dict(self):
        return {"name": self.name, "ranges": {k: list(v) for k, v in self.ranges.items()}}

    @classmethod
    def from_dict(cls, d):
        return cls(d["name"], {k: (v[0], v[1]) for k, v in d["ranges"].items()})


class ProtoformType(str, Enum):
    StandardEvalTW = "StandardEvalTW"
    StandardEvalSTW = "StandardEvalSTW"
    StandardEvalQualifier = "StandardEvalQualifier"
    GoalEvaluation = "GoalEvaluation"
    GoalAssistance = "GoalAssistance"
    DayBasedPattern = "DayBasedPattern"
    GeneralIfThen = "GeneralIfThen"
    StandardTrend = "StandardTrend"
    IfThenPattern = "IfThenPattern"
    DayIfThenPattern = "DayIfThenPattern"
    Comparison = "Comparison"
    GoalComparison = "GoalComparison"
    ClusterBasedPattern = "ClusterBasedPattern"
    StandardPattern = "StandardPattern"
    GroupPopulationEval = "GroupPopulationEval"
    GroupClusterPattern = "GroupClusterPattern"
    GroupStandardPattern = "GroupStandardPattern"
    GroupIfThen = "GroupIfThen"


P = ProtoformType

# types that need no time window at all
WINDOW_FREE_TYPES = (P.StandardEvalSTW, P.GoalEvaluation, P.StandardTrend, P.DayBasedPattern)
INDIVIDUAL_TYPES = tuple(t for t in P if not t.value.startswith("Group"))
GROUP_TYPES = tuple(t for t in P if t.value.startswith("Group"))

LEVEL_LABELS = {
    2: ["low", "high"],
    3: ["low", "moderate", "high"],
    4: ["very low", "low", "high", "very high"],
    5: ["very low", "low", "moderate", "high", "very high"],
    6: ["very low", "low", "moderately low", "moderately high", "high", "very high"],
    7: ["extremely low", "very low", "low", "moderate", "high", "very high", "extremely high"],
}

LEVEL_TYPES = (
    P.StandardEvalTW, P.StandardEvalSTW, P.StandardEvalQualifier, P.DayBasedPattern,
    P.GeneralIfThen, P.IfThenPattern, P.DayIfThenPattern, P.GroupPopulationEval, P.GroupIfThen,
)

_TREND = ["increased", "decreased", "stayed the same"]
_CLUSTER = ["rose", "dropped", "stayed the same"]


def _default_summarizer_sets() -> dict[str, list[str]]:
    sets = {t.value: list(LEVEL_LABELS[5]) for t in LEVEL_TYPES}
    sets[P.GoalEvaluation.value] = ["reached", "did not reach"]
    sets[P.GoalAssistance.value] = ["increase", "decrease"]
    sets[P.StandardTrend.value] = list(_TREND)
    sets[P.Comparison.value] = ["higher", "lower", "about the same"]
    sets[P.GoalComparison.value] = ["better", "not do as well", "about the same"]
    for t in (P.ClusterBasedPattern, P.StandardPattern, P.GroupClusterPattern, P.GroupStandardPattern):
        sets[t.value] = list(_CLUSTER)
    return {t.value: sets[t.value] for t in P}


_DEFAULT_FORMS = {
    # how a summarizer label reads inside particular sentence slots
    "trend": {"increased": "increases", "decreased": "decreases", "stayed the same": "stays the same"},
    "group_trend": {"increased": "increase", "decreased": "decrease", "stayed the same": "keep the same"},
    "group_change": {"rose": "a rise", "dropped": "a drop", "stayed the same": "little to no change"},
    "group_comparison": {"higher": "a higher", "lower": "a lower", "about the same": "a similar"},
}

_DEFAULT_ATTRIBUTE_PHRASES = {
    "Calories": "calorie intake",
    "Carbohydrates": "carbohydrate intake",
    "HeartRate": "heart rate",
    "heart_rate": "heart rate",
}

_WINDOW_NAMES = {
    "day": ["day", "days"],
    "week": ["week", "weeks"],
    "month": ["month", "months"],
    "hour": ["hour", "hours"],
}


@dataclass
class Vocabulary:
    quantifiers: list[Quantifier]
    summarizer_sets: dict[str, list[str]]
    templates: dict[str, dict[str, str]]
    forms: dict[str, dict[str, str]] = field(default_factory=lambda: {k: dict(v) for k, v in _DEFAULT_FORMS.items()})
    attribute_phrases: dict[str, str] = field(default_factory=lambda: dict(_DEFAULT_ATTRIBUTE_PHRASES))
    window_names: dict[str, list[str]] = field(default_factory=lambda: {k: list(v) for k, v in _WINDOW_NAMES.items()})
    level_labels: dict[int, list[str]] = field(default_factory=lambda: {k: list(v) for k, v in LEVEL_LABELS.items()})
    possessive: str = "your"
    # attribute -> [{"upper_bound": float|None, "label": str}, ...]; "*" applies to all
    raw_bins: dict[str, list[dict]] = field(default_factory=dict)

    def __post_init__(self):
        for key, labels in self.summarizer_sets.items():
            if not labels:
                raise ValueError(f"summarizer set {key!r} is empty")
        missing = [t.value for t in P if t.value not in self.summarizer_sets]
        if missing:
            raise ValueError(f"summarizer sets missing for {missing}")

    def labels(self, ptype, alphabet_size: int | None = None) -> list[str]:
        ptype = P(ptype)
        labels = self.summarizer_sets[ptype.value]
        if alphabet_size is not None and ptype in LEVEL_TYPES and len(labels) != alphabet_size:
            return self.level_names(alphabet_size)
        return list(labels)

    def level_names(self, alphabet_size: int) -> list[str]:
        if alphabet_size in self.level_labels:
            return list(self.level_labels[alphabet_size])
        return [f"level {i + 1}" for i in range(alphabet_size)]

    def phrase(self, attribute: str) -> str:
        if attribute in self.attribute_phrases:
            return self.attribute_phrases[attribute]
        return attribute.replace("_", " ").lower()

    def form(self, slot: str, label: str) -> str:
        return self.forms.get(slot, {}).get(label, label)

    def window_name(self, key: str, plural: bool = False) -> str:
        names = self.window_names.get(key, [key, key + "s"])
        return names[1] if plural else names[0]

    def quantifier(self, name: str) -> Quantifier:
        for q in self.quantifiers:
            if q.name == name:
                return q
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "quantifiers": [q.to_dict() for q in self.quantifiers],
            "summarizer_sets": {k: list(v) for k, v in self.summarizer_sets.items()},
            "templates": {k: dict(v) for k, v in self.templates.items()},
            "forms": {k: dict(v) for k, v in self.forms.items()},
            "attribute_phrases": dict(self.attribute_phrases),
            "window_names": {k: list(v) for k, v in self.window_names.items()},
            "level_labels": {str(k): list(v) for k, v in self.level_labels.items()},
            "possessive": self.possessive,
            "raw_bins": {k: [dict(b) for b in v] for k, v in self.raw_bins.items()},
        }

    @classmethod
    def from_dict(cls, d: Mapping, base: "Vocabulary | None" = None) -> "Vocabulary":
        """Build from a JSON mapping; missing sections come from `base` (default vocabulary)."""
        base = base or default_health_vocabulary()
        kw: dict[str, Any] = {}
        kw["quantifiers"] = ([Quantifier.from_dict(q) for q in d["quantifiers"]]
                             if "quantifiers" in d else list(base.quantifiers))
        sets = dict(base.summarizer_sets)
        sets.update({k: list(v) for k, v in d.get("summarizer_sets", {}).items()})
        kw["summarizer_sets"] = sets
        templates = {k: dict(v) for k, v in base.templates.items()}
        for k, v in d.get("templates", {}).items():
            templates[k] = {**templates.get(k, {}), **v}
        kw["templates"] = templates
        forms = {k: dict(v) for k, v in base.forms.items()}
        for k, v in d.get("forms", {}).items():
            forms.setdefault(k, {}).update(v)
        kw["forms"] = forms
        kw["attribute_phrases"] = {**base.attribute_phrases, **d.get("attribute_phrases", {})}
        kw["window_names"] = {**base.window_names, **{k: list(v) for k, v in d.get("window_names", {}).items()}}
        kw["level_labels"] = {**base.level_labels,
                              **{int(k): list(v) for k, v in d.get("level_labels", {}).items()}}
        kw["possessive"] = d.get("possessive", base.possessive)
        kw["raw_bins"] = {**base.raw_bins, **{k: [dict(b) for b in v] for k, v in d.get("raw_bins", {}).items()}}
        return cls(**kw)


def default_health_vocabulary() -> Vocabulary:
    from temposum.templates import default_templates

    return Vocabulary(
        quantifiers=default_quantifiers(),
        summarizer_sets=_default_summarizer_sets(),
        templates=default_templates(),
    )


HEART_RATE_BINS = [
    {"upper_bound": 50.0, "label": "abnormally low"},
    {"upper_bound": 60.0, "label": "low"},
    {"upper_bound": 110.0, "label": "within range"},
    {"upper_bound": 120.0, "label": "high"},
    {"upper_bound": None, "label": "abnormally high"},
]


def heart_rate_vocabulary():
    """Raw-value heart-rate bins (bpm) and their labels."""
    from temposum.discretize import raw_range_scheme

    scheme = raw_range_scheme(HEART_RATE_BINS)
    return scheme, list(scheme.labels)


@dataclass(frozen=True)
class RunConfig:
    alphabet_size: int = 5
    granularity: Granularity = field(default_factory=Granularity)
    min_support: float = 0.20
    min_confidence: float = 0.80
    sample_fraction: float = 0.20
    rng_seed: int = 42
    goals: tuple[Goal, ...] = ()
    guideline: Guideline | None = None
    calendar: bool = False
    trend_epsilon: float = 0.0
    day_emission_threshold: float = 0.7
    general_min_confidence: float | None = None
    ifthen_prefix: str = "single"
    sub_window: str = "day"
    coverage_literal: bool = False

    def __post_init__(self):
        if not 2 <= self.alphabet_size <= 26:
            raise ValueError("alphabet_size must be within 2..26")
        for name in ("min_support", "min_confidence", "sample_fraction"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        if self.ifthen_prefix not in ("single", "all"):
            raise ValueError("ifthen_prefix must be 'single' or 'all'")
        object.__setattr__(self, "goals", tuple(self.goals))

    def goal_for(self, attribute: str) -> Goal | None:
        for g in self.goals:
            if g.attribute_name == attribute:
                return g
        return None

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["granularity"] = {"kind": self.granularity.kind, "tw_len": self.granularity.tw_len}
        d["goals"] = [asdict(g) for g in self.goals]
        d["guideline"] = self.guideline.to_dict() if self.guideline else None
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "RunConfig":
        d = dict(d)
        if "granularity" in d:
            d["granularity"] = Granularity(**d["granularity"])
        if "goals" in d:
            d["goals"] = tuple(Goal(**g) for g in d["goals"])
        if d.get("guideline"):
            d["guideline"] = Guideline.from_dict(d["guideline"])
        return cls(**d)


def save_config(path, vocabulary: Vocabulary, config: RunConfig | None = None) -> None:
    doc = {"vocabulary": vocabulary.to_dict()}
    if config is not None:
        doc["config"] = config.to_dict()
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_config(path) -> tuple[Vocabulary, RunConfig | None]:
    """Read a vocabulary/config document.  A bare vocabulary mapping is accepted too."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    vocab_doc = doc.get("vocabulary", doc)
    config = RunConfig.from_dict(doc["config"]) if "config" in doc else None
    return Vocabulary.from_dict(vocab_doc), config


# --- summaries -------------------------------------------------------------

@dataclass
class Summary:
    type: ProtoformType
    attributes: tuple[str, ...]
    text: str
    summarizers: tuple[str, ...]
    quantifier: str | None = None
    truth: float | None = None
    covering: float | None = None
    r_values: dict = field(default_factory=dict)
    attribute_ratios: tuple[float, ...] = ()
    query_points: tuple[int, ...] = ()
    supporting_points: tuple[int, ...] = ()
    point_unit: str = "day"
    query_window: int | None = None
    comparison_windows: tuple[int, ...] = ()
    confidence: float | None = None
    details: dict = field(default_factory=dict)
    metrics: Any = None

    @property
    def quantified(self) -> bool:
        return self.quantifier is not None or self.truth is not None
