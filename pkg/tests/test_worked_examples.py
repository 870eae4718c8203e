"""Hand-built inputs with known outcomes for every summary family.

Raw-range bins pin each day's letter exactly: values 0.5, 1.5, 2.5, 3.5 and
4.5 fall in the bins a..e labelled very low .. very high.
"""
import pytest

from helpers import series
from temposum import protoforms as pf
from temposum.discretize import gaussian_breakpoints, paa
from temposum.fuzzy import best_pair
from temposum.ingest import load_csv
from temposum.metrics import NA, appropriateness, score
from temposum.mining import SequenceRule, mine_frequent, rules_from_patterns
from temposum.model import Goal, Guideline, RunConfig, default_health_vocabulary
from temposum.provenance import chart_for

LEVEL = {"a": 0.5, "b": 1.5, "c": 2.5, "d": 3.5, "e": 4.5}
BINS = [{"upper_bound": 1, "label": "very low"}, {"upper_bound": 2, "label": "low"},
        {"upper_bound": 3, "label": "moderate"}, {"upper_bound": 4, "label": "high"},
        {"upper_bound": None, "label": "very high"}]


def binned_vocab():
    vocab = default_health_vocabulary()
    vocab.raw_bins["*"] = BINS
    return vocab


def ctx_for(cal, carb=None, config=None, raw=False):
    """Context over letter strings (or raw value lists with `raw`), starting on a Monday."""
    conv = (lambda v: list(v)) if raw else (lambda s: [LEVEL[c] for c in s])
    data = {"Calories": series("Calories", conv(cal))}
    if carb is not None:
        data["Carbohydrates"] = series("Carbohydrates", conv(carb))
    return pf.Context(data, config or RunConfig(), binned_vocab())


def metrics(summary):
    return score(summary)


# --- standard evaluation ------------------------------------------------------

def test_window_mean_moderate():
    s = pf.gen_standard_eval(ctx_for("ccccccc" * 3), ("Calories",), "TW")
    assert s.text == "In the past full week, your calorie intake has been moderate."
    assert metrics(s).T3 == 1


def test_some_days_low():
    from temposum.fuzzy import best_quantifier
    q, truth = best_quantifier(2 / 7, default_health_vocabulary().quantifiers)
    assert q.name == "some of the" and truth == pytest.approx(0.93, abs=0.005)
    # low on two days only; moderate on five days takes the sentence
    s = pf.gen_standard_eval(ctx_for("eeeeeee" + "bbccccc"), ("Calories",), "sTW")
    assert s.r_values[("low",)] == pytest.approx(2 / 7)
    assert ((1,), "some of the", pytest.approx(0.93, abs=0.005)) in s.details["runners_up"]


def test_qualifier_very_low_calories():
    ctx = ctx_for("ccccccc" + "acccccc", "ccccccc" + "cdddddd")
    s = pf.gen_standard_eval(ctx, ("Carbohydrates",), "sTW", ("Calories", "very low"))
    assert s.text == ("On all of the days in the past week, when your calorie intake was very low, "
                      "your carbohydrate intake was moderate.")


# --- goals ----------------------------------------------------------------------

def test_goal_missed_on_most_days():
    goals = (Goal("Calories", "at-most", 2000, "low"),)
    ctx = ctx_for([1800] * 7 + [2300] * 6 + [1800], config=RunConfig(goals=goals), raw=True)
    s = pf.gen_goal_evaluation(ctx, ("Calories",))
    assert s.text == ("On most of the days in the past week, you did not reach your goal "
                      "to keep your calorie intake low.")
    assert metrics(s).T3 == pytest.approx(6 / 7)
    assert round(metrics(s).T3, 2) == 0.86


def test_joint_goal_ratio():
    goals = (Goal("Calories", "at-most", 2000, "low"), Goal("Carbohydrates", "at-least", 225, "high"))
    cal = [1800] * 7 + [2300, 2300, 2300, 2300, 1800, 1800, 1800]
    carb = [300] * 7 + [200, 200, 200, 300, 300, 300, 300]
    ctx = ctx_for(cal, carb, RunConfig(goals=goals), raw=True)
    s = pf.gen_goal_evaluation(ctx)
    # three days miss both goals
    both_missed = ("did not reach", "did not reach")
    assert s.r_values[both_missed] == pytest.approx(3 / 7)
    assert round(3 / 7, 2) == 0.43


def test_goal_assistance_directions():
    guide = Guideline("2000-calorie diet", {"Calories": (None, 2000.0), "Carbohydrates": (225.0, 325.0)})
    cal = [2000] * 7 + [2300] * 7
    carb = [250] * 7 + [201] * 7
    ctx = ctx_for(cal, carb, RunConfig(guideline=guide), raw=True)
    s = pf.gen_goal_assistance(ctx, ("Calories",))
    assert s.text == "In order to better follow the 2000-calorie diet, you should decrease your calorie intake."
    s = pf.gen_goal_assistance(ctx, ("Carbohydrates",))
    assert "increase your carbohydrate intake" in s.text
    m = metrics(s)
    assert m.T6 == 1 and m.T1 is NA


# --- day-based and general if-then ----------------------------------------------

def test_sundays_very_high():
    days = []
    for week in range(10):
        days += list("cccccc") + ["c" if week == 4 else "e"]
    s = pf.gen_day_based(ctx_for("".join(days)), ("Calories",), "Sunday")
    assert s.text == "Your calorie intake tends to be very high on Sundays."
    assert s.covering == pytest.approx(0.9)


def test_tuesday_low_share_below_most_still_emitted():
    tuesdays = "b" * 7 + "a" * 6 + "c" * 6 + "d" * 6
    days = "".join("c" + t + "ccccc" for t in tuesdays)
    s = pf.gen_day_based(ctx_for(days), ("Calories",), "Tuesday")
    assert s is not None
    assert s.covering == pytest.approx(0.28)
    assert s.truth == pytest.approx(0.9)
    assert "low calorie intake" in s.text or "be low on Tuesdays" in s.text


def test_general_ifthen_low_calories_high_carbs():
    cal = "bcbcbcbcbcbcbc"
    carb = "dcdcdcdcdcdcdc"
    texts = [s.text for s in pf.gen_general_ifthen(ctx_for(cal, carb))]
    assert "In general, if your calorie intake is low, then your carbohydrate intake is high." in texts


# --- trends ------------------------------------------------------------------------

def _walk(steps):
    v, out = 100.0, [100.0]
    for d in steps:
        v += d
        out.append(v)
    return out


def test_trend_half_of_the_time():
    steps = ([1, -1, 0] * 8) + [1] * 10  # 18 rises out of 34 moves
    ctx = pf.Context({"Calories": series("Calories", _walk(steps))})
    s = pf.gen_standard_trend(ctx, ("Calories",))
    assert s.covering == pytest.approx(18 / 34)
    assert s.text == "Half of the time, your calorie intake increases from one day to the next."
    assert s.truth == pytest.approx(0.71, abs=0.01)


def test_joint_trend_some_of_the_time():
    moves = ([(1, 1)] * 8 + [(1, -1)] * 3 + [(1, 0)] * 3 + [(-1, 1)] * 3 + [(-1, -1)] * 2
             + [(-1, 0)] * 2 + [(0, 1)] * 2 + [(0, -1)] + [(0, 0)])
    cal = _walk([m[0] for m in moves])
    carb = _walk([m[1] for m in moves])
    ctx = pf.Context({"Calories": series("Calories", cal), "Carbohydrates": series("Carbohydrates", carb)})
    s = pf.gen_standard_trend(ctx)
    assert s.covering == pytest.approx(0.32)
    assert s.text == ("Some of the time, your calorie intake increases and your carbohydrate intake "
                      "increases from one day to the next.")


# --- if-then patterns ----------------------------------------------------------------

def test_ifthen_full_confidence_sentence():
    ctx = ctx_for("ca" * 10)
    rule = SequenceRule(("c",), ("a",), 10, 10, 1.0)
    (s,) = pf.gen_ifthen([rule], ctx, ("Calories",))
    assert s.text == ("There is 100% confidence that, when your calorie intake follows the pattern of being "
                      "moderate, your calorie intake tends to be very low the next day.")


def test_day_ifthen_sentence():
    ctx = ctx_for("cccccee" * 3)
    rule = SequenceRule(("Saturday:e",), ("Sunday:e",), 3, 3, 1.0, day_annotated=True)
    (s,) = pf.gen_ifthen([rule], ctx, ("Calories",), day_annotated=True)
    assert s.text == ("There is 100% confidence that, when your calorie intake follows the pattern of being "
                      "very high on a Saturday, your calorie intake tends to be very high the next Sunday.")
    assert metrics(s).T4 is NA


def test_day_ifthen_multivariate_suffix():
    ctx = ctx_for("cccccee" * 3, "cccccee" * 3)
    rule = SequenceRule(("Saturday:e",), ("Sunday:e-e",), 3, 3, 1.0, day_annotated=True,
                        prefix_attributes=(0,))
    (s,) = pf.gen_ifthen([rule], ctx, day_annotated=True)
    assert s.text.endswith("your calorie intake tends to be very high the next Sunday and your carbohydrate "
                           "intake tends to be very high the next Sunday.")


# --- comparison and cluster patterns -----------------------------------------------

def test_comparison_about_the_same():
    ctx = ctx_for("c" * 7 * 24)
    s = pf.gen_comparison(ctx, ("Calories",), 24, 12)
    assert s.text == "Your calorie intake was about the same in week 24 as it was in week 12."


def test_cluster_pattern_dropped_more_than_half():
    ctx = ctx_for("c" * 7 * 25)
    view = ctx.view(("Calories",))
    # follower pairs (c,b), (c,b), (c,c)
    view.wcat["Calories"].update({18: 2, 19: 1, 20: 2, 21: 1, 22: 2, 23: 2, 24: 2})
    cluster = pf.Cluster((18, 20, 22, 24), 1.0)
    s = pf.gen_cluster_pattern(ctx, ("Calories",), [cluster], target=24)
    assert s.text.endswith("During more than half of the weeks similar to week 24, your calorie intake dropped "
                           "the next week.")
    assert s.covering == pytest.approx(2 / 3)
    last = pf.gen_cluster_pattern(ctx, ("Calories",), [cluster], target=24, last_only=True)
    assert last.text == "The last time you had a week similar to week 24, your calorie intake stayed the same the next week."


# --- group --------------------------------------------------------------------------

def test_group_share_of_moderate_weeks():
    users = {}
    for u in range(10):
        letter = "c" if u < 3 else "e"
        run = [pf.gen_standard_eval(ctx_for(letter * 14), ("Calories",), "TW")]
        run[0].metrics = score(run[0])
        users[f"u{u}"] = run
    texts = [g.text for g in pf.gen_group(users)]
    assert ("Some of the participants in this study had a moderate calorie intake in the past full week."
            in texts)


def test_group_shared_rule_for_all():
    users = {}
    rule = SequenceRule(("e",), ("d",), 5, 5, 1.0)
    for u in range(3):
        ctx = ctx_for("ed" * 7)
        users[f"u{u}"] = pf.gen_ifthen([rule], ctx, ("Calories",))
    texts = [g.text for g in pf.gen_group(users)]
    assert ("For all of the participants in this study, it is true that when their calorie intake follows the "
            "pattern of being very high, their calorie intake tends to be high the next day.") in texts


# --- ingest, discretization and mining ------------------------------------------

def test_csv_rows_and_paa(tmp_path):
    path = tmp_path / "log.csv"
    rows = [f"{i},{1000 + i}" for i in range(174)]
    path.write_text("Day,Calories\n" + "\n".join(rows) + "\n")
    ts = load_csv(path, "Day", ["Calories"])["Calories"]
    assert len(ts.values) == 174
    assert len(paa(ts.values, 7)) == 24


def test_three_letter_breakpoints():
    assert list(gaussian_breakpoints(3)) == pytest.approx([-0.4307, 0.4307], abs=1e-4)


def test_mining_small_examples():
    assert dict(mine_frequent("abab", 3, 0.6)) == {tuple("ab"): 2}
    pats = mine_frequent("aaaa", 2, 0.5)
    assert dict(pats) == {("a",): 4, ("a", "a"): 3}
    (rule,) = rules_from_patterns(pats, 0.5)
    assert rule.confidence == pytest.approx(0.75)


def test_best_pair_and_ties():
    from temposum.fuzzy import default_quantifiers
    qs = default_quantifiers()
    assert best_pair({"low": 2 / 7, "high": 4 / 7}, qs).summarizer == "low"
    assert best_pair({"high": 1.0}, qs).quantifier.name == "all of the"


def test_appropriateness_values():
    assert appropriateness([0.5, 0.5], 0.25) == pytest.approx(0.0)
    assert appropriateness([0.29, 0.43], 0.29) == pytest.approx(0.165, abs=0.001)


# --- provenance ----------------------------------------------------------------------

def test_goal_chart_line_and_focus_window():
    goals = (Goal("Calories", "at-most", 2000, "low"),)
    ctx = ctx_for([1800, 2300] * 7, config=RunConfig(goals=goals), raw=True)
    spec = chart_for(pf.gen_goal_evaluation(ctx, ("Calories",)), ctx)
    assert [g["y"] for g in spec.goal_lines] == [2000]
    tw = pf.gen_standard_eval(ctx, ("Calories",), "TW")
    assert [w["role"] for w in chart_for(tw, ctx).windows] == ["focus"]


def test_sunday_chart_one_segment_per_sunday():
    s = pf.gen_day_based(ctx_for("cccccce" * 4), ("Calories",), "Sunday")
    spec = chart_for(s, ctx_for("cccccce" * 4))
    assert len([x for x in spec.segments if x["role"] == "weekday"]) == 4


def test_high_minsup_on_sparse_data_yields_no_rules(tmp_path, capsys):
    from temposum.cli import main
    path = tmp_path / "sparse.csv"
    values = [1000 + 37 * ((i * 7919) % 23) for i in range(42)]
    path.write_text("Day,Calories\n" + "".join(f"{i},{v}\n" for i, v in enumerate(values)))
    assert main(["summarize", "--input", str(path), "--minsup", "0.5", "--protoforms", "IfThenPattern"]) == 0
    assert capsys.readouterr().out == ""
