"""Command-line pipeline: wiring, exit codes, determinism, config precedence."""

import json
from pathlib import Path

import pytest

from crimeminer.cli import main
from crimeminer.preprocess import read_unified_jsonl

DENVER_CSV = (
    "INCIDENT_ID,OFFENSE_CATEGORY_ID,FIRST_OCCURRENCE_DATE,NEIGHBORHOOD_ID,IS_CRIME\n"
    + "".join(
        f"{i},{category},{date},{location},{flag}\n"
        for i, (category, date, location, flag) in enumerate(
            [
                ("drug-alcohol", "6/13/14 21:30", "five-points", 1),
                ("larceny", "6/13/14 22:00", "five-points", 1),
                ("larceny", "6/6/14 21:10", "five-points", 1),
                ("burglary", "6/20/14 23:45", "five-points", 1),
                ("aggravated-assault", "6/27/14 21:05", "five-points", 1),
                ("traffic-accident", "6/13/14 09:00", "cbd", 0),
                ("public-disorder", "1/1/15 03:30", "cbd", 1),
                ("white-collar-crime", "3/8/15 12:00", "wellshire", 1),
                ("robbery", "7/4/14 17:30", "cbd", 1),
                ("murder", "12/25/14 02:15", "baker", 1),
            ],
            start=1,
        )
    )
)

DEMO_CSV = (
    "NBHD_NAME,POPULATION_2010,MALE,FEMALE,HOUSING_UNITS,OCCUPIED_HU,VACANT_HU,"
    "OWNER_OCCUPIED_HU,RENTER_OCCUPIED_HU,AGE_0_TO_9,AGE_10_TO_19,AGE_20_TO_29,"
    "AGE_30_TO_39,AGE_40_TO_49,AGE_50_TO_59,AGE_60_TO_69,AGE_70_TO_79,AGE_80_PLUS\n"
    "Five Points,5000,3000,2000,2500,2000,500,1000,1000,500,500,1500,800,700,500,300,150,50\n"
    "CBD,3000,1800,1200,1500,1200,300,600,600,300,300,900,500,400,300,200,80,20\n"
    "Baker,2000,1100,900,1000,900,100,500,400,200,200,600,300,300,200,130,60,10\n"
    "Wellshire,1000,450,550,400,390,10,350,40,100,150,100,150,150,200,100,40,10\n"
)


@pytest.fixture
def pipeline(tmp_path):
    """Run ingest + preprocess once and hand back the working directory."""
    (tmp_path / "denver.csv").write_text(DENVER_CSV, encoding="utf-8")
    (tmp_path / "demo.csv").write_text(DEMO_CSV, encoding="utf-8")
    assert main(
        [
            "ingest", "--schema", "denver",
            "--input", str(tmp_path / "denver.csv"),
            "--output", str(tmp_path / "raw.jsonl"),
            "--report", str(tmp_path / "ingest.json"),
        ]
    ) == 0
    assert main(
        [
            "preprocess", "--schema", "denver",
            "--input", str(tmp_path / "raw.jsonl"),
            "--output", str(tmp_path / "unified.jsonl"),
        ]
    ) == 0
    return tmp_path


def read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


class TestPipeline:
    def test_ingest_filters_and_reports(self, pipeline):
        report = json.loads(read(pipeline / "ingest.json"))
        assert report["rows_read"] == 10
        assert report["rows_accepted"] == 10
        with open(pipeline / "unified.jsonl", encoding="utf-8") as fp:
            unified = read_unified_jsonl(fp)
        assert len(unified) == 9  # the traffic accident is filtered out

    def test_stats_frequency(self, pipeline):
        out = pipeline / "day.csv"
        assert main(
            ["stats", "--dataset", str(pipeline / "unified.jsonl"),
             "--attribute", "day", "--output", str(out)]
        ) == 0
        lines = read(out).splitlines()
        assert lines[0] == "value,count,percentage"
        assert any(line.startswith("Friday,") for line in lines)

    def test_stats_crosstab_and_locations(self, pipeline):
        assert main(
            ["stats", "--dataset", str(pipeline / "unified.jsonl"),
             "--rows", "type", "--cols", "day", "--output", str(pipeline / "ct.csv")]
        ) == 0
        assert read(pipeline / "ct.csv").startswith("type,")
        assert main(
            ["stats", "--dataset", str(pipeline / "unified.jsonl"),
             "--top", "1", "--middle", "1", "--bottom", "1",
             "--output", str(pipeline / "locations.csv")]
        ) == 0
        lines = read(pipeline / "locations.csv").splitlines()
        assert lines[1].startswith("five-points,")

    def test_mine_writes_patterns_and_summary(self, pipeline):
        out = pipeline / "patterns.csv"
        assert main(
            ["mine", "--dataset", str(pipeline / "unified.jsonl"),
             "--min-sup", "0.3", "--output", str(out)]
        ) == 0
        assert read(out).splitlines()[0] == "location,day,time,support,count"
        summary = json.loads(read(pipeline / "patterns.summary.json"))
        assert summary["dataset_size"] == 9
        assert summary["min_sup"] == 0.3

    def test_mine_min_count_equivalent(self, pipeline):
        args = ["mine", "--dataset", str(pipeline / "unified.jsonl")]
        assert main(args + ["--min-sup", str(3 / 9), "--output", str(pipeline / "a.csv")]) == 0
        assert main(args + ["--min-count", "3", "--output", str(pipeline / "b.csv")]) == 0
        assert read(pipeline / "a.csv") == read(pipeline / "b.csv")

    def test_train_predict_roundtrip(self, pipeline):
        model = pipeline / "nb.json"
        assert main(
            ["train", "--dataset", str(pipeline / "unified.jsonl"),
             "--model", "nb", "--train-fraction", "0.8", "--seed", "42",
             "--output", str(model)]
        ) == 0
        out = pipeline / "prediction.json"
        assert main(
            ["predict", "--model", str(model),
             "--month", "June", "--day", "Friday", "--time", "T6",
             "--location", "five-points", "--output", str(out)]
        ) == 0
        result = json.loads(read(out))
        assert 1 <= result["class_id"] <= 6
        assert result["class_name"]
        assert abs(sum(result["posterior"].values()) - 1.0) < 1e-9

    def test_predict_dt_has_no_posterior(self, pipeline):
        model = pipeline / "dt.json"
        assert main(
            ["train", "--dataset", str(pipeline / "unified.jsonl"),
             "--model", "dt", "--train-fraction", "0.8", "--output", str(model)]
        ) == 0
        out = pipeline / "dt_prediction.json"
        assert main(
            ["predict", "--model", str(model), "--month", "june", "--day", "friday",
             "--time", "t6", "--location", "Five Points", "--output", str(out)]
        ) == 0
        result = json.loads(read(out))
        assert "posterior" not in result
        assert 1 <= result["class_id"] <= 6

    def test_train_with_eval_report(self, pipeline):
        assert main(
            ["train", "--dataset", str(pipeline / "unified.jsonl"),
             "--model", "nb", "--output", str(pipeline / "m.json"),
             "--eval-report", str(pipeline / "holdout.json")]
        ) == 0
        report = json.loads(read(pipeline / "holdout.json"))
        assert 0.0 <= report["accuracy"] <= 1.0
        assert set(report["per_class"]) == {
            "Assault", "Drug Alcohol", "Other Crimes", "Public Disorder", "Theft",
            "White Collar Crime",
        }

    def test_evaluate_cross_validation(self, pipeline):
        out = pipeline / "cv.json"
        assert main(
            ["evaluate", "--dataset", str(pipeline / "unified.jsonl"),
             "--model", "nb", "--folds", "3", "--output", str(out),
             "--csv", str(pipeline / "cv.csv")]
        ) == 0
        result = json.loads(read(out))
        assert len(result["fold_accuracies"]) == 3
        assert read(pipeline / "cv.csv").startswith("class,precision")

    def test_demographics_comparison(self, pipeline):
        out = pipeline / "compare.csv"
        assert main(
            ["demographics", "--dataset", str(pipeline / "unified.jsonl"),
             "--demographics", str(pipeline / "demo.csv"),
             "--top", "2", "--bottom", "2",
             "--output", str(out), "--json", str(pipeline / "compare.json")]
        ) == 0
        assert read(out).splitlines()[0] == "group,neighborhood,metric,value"
        obj = json.loads(read(pipeline / "compare.json"))
        assert obj["dangerous"][0] == "five-points"
        assert "wellshire" in obj["safe"]


class TestExitCodes:
    def test_unknown_subcommand_is_usage(self):
        assert main(["transmogrify"]) == 1

    def test_missing_required_flag_is_usage(self):
        assert main(["ingest", "--schema", "denver"]) == 1

    def test_bad_stats_mode_combination_is_usage(self, pipeline):
        assert main(["stats", "--dataset", str(pipeline / "unified.jsonl")]) == 1
        assert main(
            ["stats", "--dataset", str(pipeline / "unified.jsonl"),
             "--attribute", "day", "--rows", "type", "--cols", "day"]
        ) == 1

    def test_missing_input_file_is_data_error(self, tmp_path):
        assert main(
            ["ingest", "--schema", "denver", "--input", str(tmp_path / "nope.csv"),
             "--output", str(tmp_path / "raw.jsonl")]
        ) == 2

    def test_mine_needs_exactly_one_threshold(self, pipeline):
        dataset = str(pipeline / "unified.jsonl")
        assert main(["mine", "--dataset", dataset]) == 1
        assert main(["mine", "--dataset", dataset, "--min-sup", "0.1", "--min-count", "2"]) == 1

    def test_bad_predict_values_are_usage_errors(self, pipeline):
        model = pipeline / "nb2.json"
        assert main(
            ["train", "--dataset", str(pipeline / "unified.jsonl"),
             "--model", "nb", "--output", str(model)]
        ) == 0
        base = ["predict", "--model", str(model), "--day", "Friday",
                "--time", "T6", "--location", "cbd"]
        assert main(base + ["--month", "Juneteenth"]) == 1
        assert main(["predict", "--model", str(model), "--month", "June",
                     "--day", "Friday", "--time", "T9", "--location", "cbd"]) == 1

    def test_corrupt_dataset_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"nope": 1}\n', encoding="utf-8")
        assert main(["stats", "--dataset", str(bad), "--attribute", "day"]) == 2


class TestDeterminism:
    def test_rerun_is_byte_identical(self, pipeline):
        files = {}
        for round_index in ("one", "two"):
            out = pipeline / round_index
            out.mkdir()
            main(["ingest", "--schema", "denver", "--input", str(pipeline / "denver.csv"),
                  "--output", str(out / "raw.jsonl"), "--report", str(out / "ingest.json")])
            main(["preprocess", "--schema", "denver", "--input", str(out / "raw.jsonl"),
                  "--output", str(out / "unified.jsonl")])
            main(["mine", "--dataset", str(out / "unified.jsonl"), "--min-sup", "0.2",
                  "--output", str(out / "patterns.csv")])
            main(["train", "--dataset", str(out / "unified.jsonl"), "--model", "nb",
                  "--seed", "42", "--output", str(out / "model.json")])
            main(["evaluate", "--dataset", str(out / "unified.jsonl"), "--model", "dt",
                  "--folds", "3", "--seed", "42", "--output", str(out / "cv.json")])
            files[round_index] = {
                p.name: p.read_bytes() for p in out.iterdir()
            }
        assert files["one"] == files["two"]

    def test_mine_threads_bit_identical(self, pipeline):
        dataset = str(pipeline / "unified.jsonl")
        main(["mine", "--dataset", dataset, "--min-sup", "0.2", "--threads", "1",
              "--output", str(pipeline / "t1.csv")])
        main(["mine", "--dataset", dataset, "--min-sup", "0.2", "--threads", "4",
              "--output", str(pipeline / "t4.csv")])
        assert (pipeline / "t1.csv").read_bytes() == (pipeline / "t4.csv").read_bytes()


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_override(self, pipeline):
        config = pipeline / "run.json"
        config.write_text(json.dumps({"min_sup": 0.3, "output": str(pipeline / "from_config.csv")}))
        assert main(
            ["mine", "--dataset", str(pipeline / "unified.jsonl"), "--config", str(config)]
        ) == 0
        assert (pipeline / "from_config.csv").exists()
        # explicit flag beats the config value
        assert main(
            ["mine", "--dataset", str(pipeline / "unified.jsonl"), "--config", str(config),
             "--output", str(pipeline / "explicit.csv")]
        ) == 0
        assert (pipeline / "explicit.csv").exists()
        assert read(pipeline / "explicit.csv") == read(pipeline / "from_config.csv")
