"""Summarize the bundled 182-day diet log and draw a chart for one sentence.

    python3 demos/golden_walkthrough.py [output_dir]
"""
import sys
from pathlib import Path

from temposum import Goal, Guideline, RunConfig, chart_for, load_csv, summarize
from temposum.provenance import write_chart, write_svg

ROOT = Path(__file__).resolve().parent.parent
out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_output")

series = load_csv(ROOT / "tests" / "data" / "golden.csv", "Day", ["Calories", "Carbohydrates"])
config = RunConfig(
    goals=(Goal("Calories", "at-most", 2100, "at most 2100"),),
    guideline=Guideline("2,000-calorie plan", {"Calories": (None, 2000.0), "Carbohydrates": (225.0, 325.0)}),
)
run = summarize(series, config)

for s in run.summaries:
    if s.type.value in ("IfThenPattern", "DayBasedPattern"):
        continue  # these are numerous; the CLI lists them all
    print(f"{s.type.value:<22} {s.text}")
    print(" " * 23 + "  ".join(f"{k}={v}" for k, v in s.metrics.display().items()))

target = next(s for s in run.summaries if s.type.value == "StandardEvalSTW")
spec = chart_for(target, run.ctx)
write_chart(spec, out_dir / "standard_eval.json")
write_svg(spec, out_dir / "standard_eval.svg")
print(f"\nchart for {target.text!r} written to {out_dir}/")
