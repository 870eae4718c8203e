"""Quality measures T1..T6 for a summary.

Measures that do not apply to a summary type come back as ``NA`` rather than
a number.  Stored values keep full precision; round only for display.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from numbers import Real

from temposum.model import ProtoformType as P
from temposum.model import Summary

COVERAGE_R1 = 0.02
COVERAGE_R2 = 0.15


class _NotApplicable:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "N/A"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_NotApplicable, ())


NA = _NotApplicable()
NotApplicable = _NotApplicable

# summaries that state a fact without a quantifier
NON_QUANTIFIED = frozenset({P.StandardEvalTW, P.Comparison, P.GoalComparison, P.StandardPattern, P.GoalAssistance})
IF_THEN = frozenset({P.IfThenPattern, P.DayIfThenPattern})


@dataclass(frozen=True)
class MetricSet:
    T1: object
    T2: object
    T3: object
    T4: object
    T5: object
    T6: object

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not NA and not 0.0 <= v <= 1.0:
                raise ValueError(f"{f.name}={v} outside [0, 1]")

    def to_dict(self) -> dict:
        return {f.name: (None if getattr(self, f.name) is NA else getattr(self, f.name)) for f in fields(self)}

    def display(self) -> dict:
        return {k: ("N/A" if v is None else f"{v:.2f}") for k, v in self.to_dict().items()}


def _type(summary: Summary) -> P:
    return P(summary.type)


def degree_of_truth(summary: Summary):
    if _type(summary) in NON_QUANTIFIED or summary.truth is None:
        return NA
    return float(summary.truth)


def imprecision(ratios) -> float:
    """1 - geometric mean of the ratios; a single zero makes it 1."""
    ratios = [float(r) for r in ratios]
    if not ratios:
        raise ValueError("no ratios")
    if any(r <= 0.0 for r in ratios):
        return 1.0
    value = 1.0 - math.exp(sum(math.log(r) for r in ratios) / len(ratios))
    return min(1.0, max(0.0, value))


def degree_of_imprecision(summary: Summary):
    if _type(summary) in NON_QUANTIFIED or not summary.r_values:
        return NA
    return imprecision(summary.r_values.values())


def degree_of_covering(summary: Summary):
    t = _type(summary)
    if t is P.GoalAssistance:
        return NA
    if t in NON_QUANTIFIED:
        return 1.0
    return float(summary.covering)


def appropriateness(attribute_ratios, covering: float) -> float:
    ratios = list(attribute_ratios)
    if len(ratios) <= 1:
        return 0.0
    return abs(math.prod(ratios) - covering)


def degree_of_appropriateness(summary: Summary):
    t = _type(summary)
    if t in IF_THEN or t in (P.GoalAssistance, P.GroupIfThen):
        return NA
    if len(summary.attribute_ratios) <= 1:
        return 0.0
    return appropriateness(summary.attribute_ratios, degree_of_covering(summary))


def s_function(r: float, r1: float = COVERAGE_R1, r2: float = COVERAGE_R2, literal: bool = False) -> float:
    """Zadeh S-curve rising from 0 at `r1` to 1 at `r2`.

    ``literal=True`` uses the linear-numerator variant, which overshoots 1
    inside the transition; it exists only for comparison.
    """
    if r <= r1:
        return 0.0
    if r >= r2:
        return 1.0
    mid = (r1 + r2) / 2
    width = r2 - r1
    if literal:
        if r <= mid:
            return 2 * (r - r1) / width ** 2
        return 1 - 2 * (r - r1) / width ** 2
    if r <= mid:
        return 2 * ((r - r1) / width) ** 2
    return 1 - 2 * ((r - r2) / width) ** 2


def degree_of_coverage(summary, literal: bool = False):
    """T5 of a summary, or of a bare covering ratio."""
    if isinstance(summary, Real):
        return s_function(float(summary), literal=literal)
    if _type(summary) is P.GoalAssistance:
        return NA
    return s_function(degree_of_covering(summary), literal=literal)


def length_quality(summary) -> float:
    """T6 = 2 * 0.5**k for k summarizer tokens (a Summary or k itself)."""
    k = summary if isinstance(summary, int) else len(summary.summarizers)
    if k < 0:
        raise ValueError("negative summarizer count")
    return 2.0 * 0.5 ** k


def score(summary: Summary, literal_coverage: bool = False) -> MetricSet:
    t5 = degree_of_coverage(summary, literal=literal_coverage)
    if literal_coverage and t5 is not NA:
        # the literal curve leaves [0, 1]; clamp so the set stays valid
        t5 = min(1.0, max(0.0, t5))
    return MetricSet(
        T1=degree_of_truth(summary),
        T2=degree_of_imprecision(summary),
        T3=degree_of_covering(summary),
        T4=degree_of_appropriateness(summary),
        T5=t5,
        T6=length_quality(summary),
    )
