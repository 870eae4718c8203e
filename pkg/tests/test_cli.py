import json

import pytest

from helpers import noisy_user, write_user_csv
from temposum import cli
from temposum.model import default_health_vocabulary, save_config


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_goal():
    g = cli.parse_goal("Calories<=2000:low")
    assert (g.attribute_name, g.comparator, g.threshold, g.label) == ("Calories", "at-most", 2000, "low")
    assert cli.parse_goal("Steps>=8000").label == "at least 8000"
    r = cli.parse_goal("Carbohydrates=200..300")
    assert (r.comparator, r.threshold, r.upper) == ("within-range", 200, 300)
    for bad in ("Calories<2000", "Carbohydrates=200", "=5"):
        with pytest.raises(ValueError):
            cli.parse_goal(bad)


@pytest.mark.parametrize("extra", [["--minsup", "0"], ["--minconf", "1.5"], ["--protoforms", "Nope"],
                                   ["--alphabet", "1"], ["--goal", "Calories<5"], ["--tw-len", "0"]])
def test_bad_flags_exit_2(golden_path, extra, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["summarize", "--input", str(golden_path), *extra])
    assert exc.value.code == 2


def test_bad_data_exit_3(tmp_path, capsys):
    code, _, err = _run(["summarize", "--input", str(tmp_path / "missing.csv")], capsys)
    assert code == 3 and "error" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("Day,A\n2018-01-01,1\n2018-01-02,zzz\n")
    code, _, err = _run(["summarize", "--input", str(bad)], capsys)
    assert code == 3 and "row 3" in err
    code, _, _ = _run(["summarize", "--input", str(bad), "--attrs", "B"], capsys)
    assert code == 3


def test_jsonl_records(golden_path, capsys):
    code, out, _ = _run(["summarize", "--input", str(golden_path), "--protoforms", "StandardEvalSTW,Comparison"],
                        capsys)
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert {r["type"] for r in records} == {"StandardEvalSTW", "Comparison"}
    for r in records:
        assert set(r) == {"type", "attributes", "text", "metrics", "provenance_path"}
        assert set(r["metrics"]) == {"T1", "T2", "T3", "T4", "T5", "T6"}
    cmp_ = next(r for r in records if r["type"] == "Comparison")
    assert cmp_["metrics"]["T1"] is None and cmp_["metrics"]["T3"] == 1


def test_table_and_provenance(golden_path, tmp_path, capsys):
    prov = tmp_path / "charts"
    code, out, _ = _run(["summarize", "--input", str(golden_path), "--format", "table", "--attrs", "Calories",
                         "--protoforms", "StandardEvalTW", "--provenance-dir", str(prov)], capsys)
    assert code == 0 and out.startswith("StandardEvalTW") and "N/A" in out
    assert len(list(prov.glob("*.json"))) == 1


def test_vocab_from_environment(golden_path, tmp_path, monkeypatch, capsys):
    vocab = default_health_vocabulary()
    vocab.attribute_phrases["Calories"] = "energy intake"
    vocab.possessive = "the"
    path = tmp_path / "vocab.json"
    save_config(path, vocab)
    monkeypatch.setenv("TEMPOSUM_VOCAB", str(path))
    code, out, _ = _run(["summarize", "--input", str(golden_path), "--attrs", "Calories",
                         "--protoforms", "StandardEvalSTW"], capsys)
    assert code == 0
    assert "the energy intake has been low" in json.loads(out)["text"]


def test_raw_bins_flag(tmp_path, capsys):
    data = tmp_path / "hr.csv"
    data.write_text("Day,HeartRate\n" + "".join(f"{i},{72 + i % 3}\n" for i in range(14)))
    bins = tmp_path / "bins.json"
    bins.write_text(json.dumps([{"upper_bound": 60, "label": "slow"}, {"upper_bound": None, "label": "normal"}]))
    code, out, _ = _run(["summarize", "--input", str(data), "--bins", str(bins), "--protoforms", "StandardEvalSTW"],
                        capsys)
    assert code == 0
    assert json.loads(out)["text"] == "On all of the days in the past week, your heart rate has been normal."


def test_group_command(tmp_path, capsys):
    cohort = tmp_path / "cohort"
    cohort.mkdir()
    for i in range(3):
        write_user_csv(cohort / f"user{i}.csv", noisy_user(i, days=70 if i else 10))
    code, out, err = _run(["group", "--cohort", str(cohort), "--min-days", "20", "--protoforms", "StandardEvalSTW"],
                          capsys)
    assert code == 0 and "excluded user user0" in err
    records = [json.loads(line) for line in out.splitlines()]
    assert records and all(r["type"] == "GroupPopulationEval" for r in records)
    assert all("participants" in r["text"] for r in records)
    code, _, err = _run(["group", "--cohort", str(cohort), "--min-days", "71"], capsys)
    assert code == 3 and "at least 2" in err


def test_module_entry_point(golden_path):
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "temposum", "summarize", "--input", str(golden_path),
                          "--protoforms", "StandardEvalTW", "--attrs", "Calories"], capture_output=True, text=True)
    assert res.returncode == 0 and "past full week" in res.stdout
