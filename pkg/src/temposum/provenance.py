"""Chart specifications showing the data behind each summary.

A :class:`ChartSpec` is renderer-agnostic: series, label bands, highlighted
windows and points, per-window mean segments and goal lines, all in plot
coordinates.  The x axis counts time windows: day ``i`` of the view sits at
``1 + i / tw_len``, so window ``k`` spans ``[k, k + 1)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from temposum.model import ProtoformType as P
from temposum.model import Summary

PRECISION = 6

_SEGMENT_TYPES = {P.StandardEvalTW, P.Comparison, P.GoalComparison, P.ClusterBasedPattern,
                  P.StandardPattern, P.GoalAssistance}


def _r(x: float) -> float:
    return round(float(x), PRECISION) + 0.0  # + 0.0 folds -0.0 into 0.0


@dataclass
class ChartSpec:
    title: str
    x_axis: dict
    series: list = field(default_factory=list)  # {"attribute", "points": [[x, y], ...]}
    bands: list = field(default_factory=list)  # {"attribute", "label", "y_lo", "y_hi", "role"}
    windows: list = field(default_factory=list)  # {"ordinal", "x_lo", "x_hi", "role"}
    highlighted_points: list = field(default_factory=list)  # {"attribute", "index", "x", "y"}
    segments: list = field(default_factory=list)  # {"attribute", "x_lo", "x_hi", "y", "role"}
    goal_lines: list = field(default_factory=list)  # {"attribute", "y", "label"}

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "ChartSpec":
        return cls(**{f.name: d[f.name] for f in fields(cls)})


def _label_sets(summary: Summary) -> dict[str, set]:
    out: dict[str, set] = {}
    for kind, items in summary.details.get("clauses", {}).items():
        for c in items:
            labels = c["label"] if isinstance(c["label"], (list, tuple)) else [c["label"]]
            out.setdefault(c["attr"], set()).update(labels)
    return out


def chart_for(summary: Summary, ctx) -> ChartSpec:
    """Build the chart for an individual summary from its generation context."""
    ptype = P(summary.type)
    attrs = tuple(summary.details.get("view", summary.attributes))
    view = ctx.view(attrs)
    tw = view.tw_len
    spec = ChartSpec(
        title=summary.text,
        x_axis={"unit": ctx.fields["tw"], "points_per_unit": tw, "min": 1.0, "max": _r(view.x(view.n))},
    )
    for a in attrs:
        spec.series.append({"attribute": a,
                            "points": [[_r(view.x(i)), _r(v)] for i, v in enumerate(view.raw[a])]})

    winning = _label_sets(summary)
    for a in attrs:
        values = view.raw[a]
        edges = list(view.edges[a])
        lows = [min(float(values.min()), edges[0])] + edges
        highs = edges + [max(float(values.max()), edges[-1])]
        for label, lo, hi in zip(view.labels(a), lows, highs):
            role = "winning" if label in winning.get(a, ()) else "context"
            spec.bands.append({"attribute": a, "label": label, "y_lo": _r(lo), "y_hi": _r(hi), "role": role})

    def span(ordinal, role):
        w = view.window(ordinal)
        spec.windows.append({"ordinal": ordinal, "x_lo": _r(view.x(w.indices[0])),
                             "x_hi": _r(view.x(w.indices[-1]) + 1 / tw), "role": role})
        if ptype in _SEGMENT_TYPES:
            for a in attrs:
                spec.segments.append({"attribute": a, "x_lo": _r(view.x(w.indices[0])),
                                      "x_hi": _r(view.x(w.indices[-1]) + 1 / tw),
                                      "y": _r(np.mean(view.raw[a][list(w.indices)])), "role": "window mean"})

    if summary.query_window is not None:
        span(summary.query_window, "focus")
    for w in summary.comparison_windows:
        if any(x.ordinal == w for x in view.windows) and w != summary.query_window:
            span(w, "comparison")

    days: list[int] = []
    unit = summary.point_unit
    if unit == "day" and ptype not in (P.StandardEvalTW, P.Comparison, P.GoalComparison, P.GoalAssistance):
        days = list(summary.supporting_points)
    elif unit == "pair":
        days = sorted({j for i in summary.supporting_points for j in (i, i + 1)})
    elif unit == "occurrence":
        length = summary.details.get("rule_length", 1)
        days = sorted({j for i in summary.supporting_points for j in range(i, i + length)})
    for a in attrs:
        for i in days:
            spec.highlighted_points.append({"attribute": a, "index": int(i), "x": _r(view.x(i)),
                                            "y": _r(view.raw[a][i])})

    if ptype is P.DayBasedPattern:
        for a in attrs:
            for i in summary.query_points:
                spec.segments.append({"attribute": a, "x_lo": _r(view.x(i)), "x_hi": _r(view.x(i) + 1 / tw),
                                      "y": _r(view.raw[a][i]), "role": "weekday"})

    if ptype in (P.GoalEvaluation, P.GoalComparison):
        for a in attrs:
            goal = ctx.config.goal_for(a)
            if goal is not None:
                for y in goal.reference_lines:
                    spec.goal_lines.append({"attribute": a, "y": _r(y), "label": "goal"})
    if ptype is P.GoalAssistance:
        for a, bounds in summary.details.get("guideline_ranges", {}).items():
            for y in bounds:
                if y is not None:
                    spec.goal_lines.append({"attribute": a, "y": _r(y), "label": "guideline"})
    return spec


def dumps(spec: ChartSpec) -> str:
    return json.dumps(spec.to_dict(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write_chart(spec: ChartSpec, path) -> Path:
    """Write canonical JSON (sorted keys, rounded floats); parent directories are created."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(spec), encoding="utf-8")
    return path


def read_chart(path) -> ChartSpec:
    return ChartSpec.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_svg(spec: ChartSpec, path, width: int = 800, height_per_series: int = 160) -> Path:
    """Minimal static rendering: one panel per series with bands, windows, points and goal lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pad = 30
    x_min, x_max = spec.x_axis["min"], max(spec.x_axis["max"], spec.x_axis["min"] + 1e-9)
    out = []
    total_h = height_per_series * max(1, len(spec.series))

    def sx(x):
        return pad + (x - x_min) / (x_max - x_min) * (width - 2 * pad)

    for k, s in enumerate(spec.series):
        a = s["attribute"]
        top = k * height_per_series
        bands = [b for b in spec.bands if b["attribute"] == a]
        lo = min([b["y_lo"] for b in bands] + [p[1] for p in s["points"]])
        hi = max([b["y_hi"] for b in bands] + [p[1] for p in s["points"]])
        hi = hi if hi > lo else lo + 1

        def sy(y, top=top, lo=lo, hi=hi):
            return top + height_per_series - pad / 2 - (y - lo) / (hi - lo) * (height_per_series - pad)

        for b in bands:
            if b["role"] == "winning":
                out.append(f'<rect x="{pad}" y="{sy(b["y_hi"]):.1f}" width="{width - 2 * pad}" '
                           f'height="{max(0.0, sy(b["y_lo"]) - sy(b["y_hi"])):.1f}" fill="#ddd"/>')
        for w in spec.windows:
            color = "#fde68a" if w["role"] == "focus" else "#bfdbfe"
            out.append(f'<rect x="{sx(w["x_lo"]):.1f}" y="{top + pad / 2:.1f}" width="{sx(w["x_hi"]) - sx(w["x_lo"]):.1f}" '
                       f'height="{height_per_series - pad:.1f}" fill="{color}" fill-opacity="0.5"/>')
        pts = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in s["points"])
        out.append(f'<polyline points="{pts}" fill="none" stroke="#1f2937" stroke-width="1"/>')
        for g in spec.goal_lines:
            if g["attribute"] == a:
                out.append(f'<line x1="{pad}" x2="{width - pad}" y1="{sy(g["y"]):.1f}" y2="{sy(g["y"]):.1f}" '
                           f'stroke="#059669" stroke-dasharray="4"/>')
        for seg in spec.segments:
            if seg["attribute"] == a:
                out.append(f'<line x1="{sx(seg["x_lo"]):.1f}" x2="{sx(seg["x_hi"]):.1f}" y1="{sy(seg["y"]):.1f}" '
                           f'y2="{sy(seg["y"]):.1f}" stroke="#16a34a" stroke-width="2"/>')
        for p in spec.highlighted_points:
            if p["attribute"] == a:
                out.append(f'<circle cx="{sx(p["x"]):.1f}" cy="{sy(p["y"]):.1f}" r="2.5" fill="#dc2626"/>')
        out.append(f'<text x="{pad}" y="{top + 12}" font-size="11">{escape(a)}</text>')
    svg = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{total_h}">'
           f'<title>{escape(spec.title)}</title>' + "".join(out) + "</svg>\n")
    path.write_text(svg, encoding="utf-8")
    return path
