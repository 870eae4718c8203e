"""Sentence templates and rendering.

A template is a mapping with a ``sentence`` frame plus one entry per clause
list it uses (``clause``, ``qualifier_clause``, ``prefix_clause``, ...).  The
frame refers to a rendered clause list as ``{clauses}``,
``{qualifier_clauses}``, ``{prefix_clauses}`` and so on.  Everything is plain
``str.format`` so vocabularies can replace templates from JSON.
"""
from __future__ import annotations

from typing import Mapping, Sequence

# group-level templates for the generic population evaluation are keyed
# "GroupPopulationEval.<underlying type>"
_TEMPLATES: dict[str, dict[str, str]] = {
    "StandardEvalTW": {
        "sentence": "In the past full {tw}, {clauses}.",
        "clause": "{poss} {attribute} has been {summarizer}",
    },
    "StandardEvalSTW": {
        "sentence": "On {quantifier} {stw_plural} {period}, {clauses}.",
        "clause": "{poss} {attribute} has been {summarizer}",
    },
    "StandardEvalQualifier": {
        "sentence": "On {quantifier} {stw_plural} {period}, when {qualifier_clauses}, {clauses}.",
        "qualifier_clause": "{poss} {attribute} was {summarizer}",
        "clause": "{poss} {attribute} was {summarizer}",
    },
    "GoalEvaluation": {
        "sentence": "On {quantifier} {stw_plural} {period}, {clauses}.",
        "clause": "you {summarizer} your goal to keep {poss} {attribute} {goal}",
    },
    "GoalAssistance": {
        "sentence": "In order to better follow the {guideline}, you should {clauses}.",
        "clause": "{summarizer} {poss} {attribute}",
    },
    "DayBasedPattern": {
        "sentence": "{clauses} on {weekday_plural}.",
        "clause": "{poss} {attribute} tends to be {summarizer}",
    },
    "GeneralIfThen": {
        "sentence": "In general, if {antecedent_clauses}, then {clauses}.",
        "antecedent_clause": "{poss} {attribute} is {summarizer}",
        "clause": "{poss} {attribute} is {summarizer}",
    },
    "StandardTrend": {
        "sentence": "{quantifier} time, {clauses} from one {stw} to the next.",
        "clause": "{poss} {attribute} {summarizer}",
    },
    "IfThenPattern": {
        "sentence": "There is {confidence} confidence that, when {prefix_clauses}, {clauses} the next {stw}.",
        "prefix_clause": "{poss} {attribute} follows the pattern of being {pattern}",
        "clause": "{poss} {attribute} tends to be {pattern}",
    },
    "DayIfThenPattern": {
        "sentence": "There is {confidence} confidence that, when {prefix_clauses}, {clauses}.",
        "prefix_clause": "{poss} {attribute} follows the pattern of being {pattern}",
        "clause": "{poss} {attribute} tends to be {pattern}",
    },
    "Comparison": {
        "sentence": "{clauses} in {tw} {number1} {connective} {pronoun} in {tw} {number2}.",
        "clause": "{poss} {attribute} was {summarizer}",
    },
    "GoalComparison": {
        "sentence": "{clauses} in {tw} {number1} than you did in {tw} {number2}.",
        "clause": "you did {summarizer} overall with keeping {poss} {attribute} {goal}",
    },
    "ClusterBasedPattern": {
        "sentence": ("In {tw} {number}, {description_clauses}. During {quantifier} {tw_plural} similar to "
                     "{tw} {number}, {clauses} the next {tw}."),
        "description_clause": "{poss} {attribute} was {pattern}",
        "clause": "{poss} {attribute} {summarizer}",
    },
    "StandardPattern": {
        "sentence": "The last time you had a {tw} similar to {tw} {number}, {clauses} the next {tw}.",
        "clause": "{poss} {attribute} {summarizer}",
    },
    "GroupPopulationEval.StandardEvalTW": {
        "sentence": "{quantifier} participants in this study had {clauses} in the past full {tw}.",
        "clause": "a {summarizer} {attribute}",
    },
    "GroupPopulationEval.StandardEvalSTW": {
        "sentence": "{quantifier} participants in this study had {clauses} on {inner_quantifier} {stw_plural} {period}.",
        "clause": "a {summarizer} {attribute}",
    },
    "GroupPopulationEval.StandardEvalQualifier": {
        "sentence": ("{quantifier} participants in this study had {clauses}, when they had {qualifier_clauses} "
                     "on {inner_quantifier} {stw_plural} {period}."),
        "qualifier_clause": "a {summarizer} {attribute}",
        "clause": "a {summarizer} {attribute}",
    },
    "GroupPopulationEval.GoalEvaluation": {
        "sentence": "{quantifier} participants in this study {clauses} on {inner_quantifier} {stw_plural} {period}.",
        "clause": "{summarizer} their goal to keep their {attribute} {goal}",
    },
    "GroupPopulationEval.GoalAssistance": {
        "sentence": "{quantifier} participants in this study have been given advice to {clauses}.",
        "clause": "{summarizer} their {attribute}",
    },
    "GroupPopulationEval.DayBasedPattern": {
        "sentence": "{quantifier} participants in this study tend to have {clauses} on {weekday_plural}.",
        "clause": "a {summarizer} {attribute}",
    },
    "GroupPopulationEval.StandardTrend": {
        "sentence": "{quantifier} participants in this study {clauses} from one {stw} to the next {inner_quantifier} time.",
        "clause": "{summarizer} their {attribute}",
    },
    "GroupPopulationEval.Comparison": {
        "sentence": "{quantifier} participants in this study had {clauses} in their past full {tw} than in an earlier {tw}.",
        "clause": "{summarizer} {attribute}",
    },
    "GroupPopulationEval.GoalComparison": {
        "sentence": "{quantifier} participants in this study did {clauses} in their past full {tw} than in an earlier {tw}.",
        "clause": "{summarizer} with keeping their {attribute} {goal}",
    },
    "GroupPopulationEval.GeneralIfThen": {
        "sentence": "For {quantifier} participants in this study, it is true that when they had {antecedent_clauses}, they had {clauses}.",
        "antecedent_clause": "a {summarizer} {attribute}",
        "clause": "a {summarizer} {attribute}",
    },
    "GroupClusterPattern": {
        "sentence": ("After looking at clusters containing {tw_plural} similar to this past one, it can be seen that "
                     "{quantifier} participants with these clusters may see {clauses} next {tw}."),
        "clause": "{summarizer} in their {attribute}",
    },
    "GroupStandardPattern": {
        "sentence": ("Based on the most recent {tw} similar to this past one, it can be seen that "
                     "{quantifier} participants may see {clauses} next {tw}."),
        "clause": "{summarizer} in their {attribute}",
    },
    "GroupIfThen": {
        "sentence": "For {quantifier} participants in this study, it is true that when {prefix_clauses}, {clauses} the next {stw}.",
        "prefix_clause": "their {attribute} follows the pattern of being {pattern}",
        "clause": "their {attribute} tends to be {pattern}",
    },
    "GroupIfThen.DayIfThenPattern": {
        "sentence": "For {quantifier} participants in this study, it is true that when {prefix_clauses}, {clauses}.",
        "prefix_clause": "their {attribute} follows the pattern of being {pattern}",
        "clause": "their {attribute} tends to be {pattern}",
    },
}


def default_templates() -> dict[str, dict[str, str]]:
    return {k: dict(v) for k, v in _TEMPLATES.items()}


def join_clauses(parts: Sequence[str]) -> str:
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to join")
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return f"{parts[0]} and {parts[1]}"
    return ", ".join(parts[:-1]) + ", and " + parts[-1]


def join_sequence(parts: Sequence[str]) -> str:
    return ", then ".join(parts)


def render(template: Mapping[str, str], fields: Mapping[str, object],
           clauses: Mapping[str, Sequence[Mapping[str, object]]]) -> str:
    """Fill a template.

    `clauses` maps a clause kind (``"clause"``, ``"prefix_clause"``...) to one
    field mapping per clause; shared `fields` are visible inside clauses too.
    """
    filled = dict(fields)
    for kind, items in clauses.items():
        pattern = template[kind]
        parts = [pattern.format_map({**fields, **item}) for item in items]
        filled[kind + "s"] = join_clauses(parts)
    text = template["sentence"].format_map(filled)
    return text[:1].upper() + text[1:]
