import json
import re
import subprocess
import sys

import pytest

from cfkit.cli import main

from conftest import M0_TRIPLES

METRICS_RE = re.compile(r"^MAE: \d\.\d{6}  RMSE: \d\.\d{6}$", re.MULTILINE)


@pytest.fixture
def data_dir(tmp_path):
    train = tmp_path / "m0.tsv"
    train.write_text(
        "".join(f"{t.user}\t{t.item}\t{t.rating}\t0\n" for t in M0_TRIPLES)
    )
    test = tmp_path / "m0_test.tsv"
    test.write_text("u3\ta\t5\t0\nu1\tb\t2\t0\nghost\ta\t3\t0\n")
    return tmp_path


def run(args):
    return main([str(a) for a in args])


class TestTrain:
    def test_happy_path_writes_model(self, data_dir, capsys):
        model = data_dir / "m.json"
        code = run(["train", "--algo", "itemavg", "--train", data_dir / "m0.tsv", "--model", model])
        assert code == 0
        assert model.exists()
        assert "train_time_ms:" in capsys.readouterr().out

    def test_missing_train_flag_is_usage_error(self, data_dir):
        with pytest.raises(SystemExit) as err:
            run(["train", "--algo", "itemavg", "--model", data_dir / "m.json"])
        assert err.value.code == 2

    def test_zero_factors_is_config_error(self, data_dir):
        with pytest.raises(SystemExit) as err:
            run(
                [
                    "train", "--algo", "funksvd", "--factors", "0",
                    "--train", data_dir / "m0.tsv", "--model", data_dir / "m.json",
                ]
            )
        assert err.value.code == 2

    def test_missing_data_file_is_runtime_error(self, data_dir, capsys):
        code = run(["train", "--algo", "useravg", "--train", data_dir / "nope.tsv", "--model", data_dir / "m.json"])
        assert code == 1

    def test_malformed_line_reports_number(self, data_dir, capsys):
        bad = data_dir / "bad.tsv"
        bad.write_text("u1\ta\t5\nu2\tb\n")
        code = run(["train", "--algo", "useravg", "--train", bad, "--model", data_dir / "m.json"])
        assert code == 1
        assert "line 2" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "algo", ["useravg", "itemavg", "mostpopular", "slopeone", "userknn", "itemknn", "funksvd"]
    )
    def test_all_algorithms_train(self, data_dir, algo, capsys):
        model = data_dir / f"{algo}.json"
        code = run(
            [
                "train", "--algo", algo, "--train", data_dir / "m0.tsv",
                "--model", model, "--factors", "2", "--max-iter", "2", "--k", "2",
            ]
        )
        assert code == 0
        assert model.exists()


class TestTest:
    def _train(self, data_dir, algo="itemavg", extra=()):
        model = data_dir / f"{algo}-m.json"
        assert run(["train", "--algo", algo, "--train", data_dir / "m0.tsv", "--model", model, *extra]) == 0
        return model

    def test_prints_metrics_at_six_decimals(self, data_dir, capsys):
        model = self._train(data_dir)
        code = run(["test", "--model", model, "--test", data_dir / "m0_test.tsv"])
        assert code == 0
        assert METRICS_RE.search(capsys.readouterr().out)

    def test_unknown_model_version_exits_1(self, data_dir, capsys):
        model = self._train(data_dir)
        payload = json.loads(model.read_text())
        payload["version"] = 42
        model.write_text(json.dumps(payload))
        code = run(["test", "--model", model, "--test", data_dir / "m0_test.tsv"])
        assert code == 1

    def test_json_predictions_output(self, data_dir, capsys):
        model = self._train(data_dir)
        out = data_dir / "preds.json"
        code = run(["test", "--model", model, "--test", data_dir / "m0_test.tsv", "--out", out, "--format", "json"])
        assert code == 0
        records = json.loads(out.read_text())
        assert len(records) == 3
        assert set(records[0]) == {"user", "item", "prediction"}

    def test_txt_predictions_output(self, data_dir):
        model = self._train(data_dir)
        out = data_dir / "preds.txt"
        run(["test", "--model", model, "--test", data_dir / "m0_test.tsv", "--out", out])
        lines = out.read_text().splitlines()
        assert len(lines) == 3
        assert re.match(r"^u3\ta\t\d\.\d{6}$", lines[0])

    def test_slopeone_uses_recorded_train_path(self, data_dir, capsys):
        model = self._train(data_dir, algo="slopeone")
        code = run(["test", "--model", model, "--test", data_dir / "m0_test.tsv"])
        assert code == 0
        assert METRICS_RE.search(capsys.readouterr().out)

    def test_mostpopular_cannot_be_tested(self, data_dir, capsys):
        model = self._train(data_dir, algo="mostpopular")
        code = run(["test", "--model", model, "--test", data_dir / "m0_test.tsv"])
        assert code == 2

    def test_csv_row_appended(self, data_dir):
        model = self._train(data_dir)
        csv = data_dir / "bench.csv"
        run(["test", "--model", model, "--test", data_dir / "m0_test.tsv", "--csv", csv])
        run(["test", "--model", model, "--test", data_dir / "m0_test.tsv", "--csv", csv])
        lines = csv.read_text().splitlines()
        assert len(lines) == 3  # header + two rows
        assert lines[1].startswith("itemavg,")


class TestRecommend:
    def _train(self, data_dir, algo):
        model = data_dir / f"{algo}-r.json"
        assert run(["train", "--algo", algo, "--train", data_dir / "m0.tsv", "--model", model, "--k", "2"]) == 0
        return model

    def test_json_to_stdout(self, data_dir, capsys):
        model = self._train(data_dir, "mostpopular")
        capsys.readouterr()
        code = run(["recommend", "--model", model, "--user", "u3", "--top-n", "2"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["user"] == "u3"
        assert payload["items"] == ["a"]

    def test_unknown_user_gets_global_ranking(self, data_dir, capsys):
        model = self._train(data_dir, "mostpopular")
        capsys.readouterr()
        code = run(["recommend", "--model", model, "--user", "stranger", "--top-n", "3"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["items"] == ["b", "a", "c"]

    def test_top_n_zero_is_usage_error(self, data_dir):
        model = self._train(data_dir, "mostpopular")
        with pytest.raises(SystemExit) as err:
            run(["recommend", "--model", model, "--user", "u1", "--top-n", "0"])
        assert err.value.code == 2

    @pytest.mark.parametrize("algo", ["useravg", "slopeone", "userknn", "funksvd"])
    def test_exclusion_across_model_kinds(self, data_dir, algo, capsys):
        model = self._train(data_dir, algo)
        capsys.readouterr()
        code = run(["recommend", "--model", model, "--user", "u1", "--top-n", "5"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["items"] == []  # u1 rated the whole catalog

    def test_include_rated(self, data_dir, capsys):
        model = self._train(data_dir, "useravg")
        capsys.readouterr()
        code = run(["recommend", "--model", model, "--user", "u1", "--top-n", "5", "--include-rated"])
        assert code == 0
        assert len(json.loads(capsys.readouterr().out)["items"]) == 3


class TestBenchmark:
    def test_seven_row_csv(self, data_dir, capsys):
        csv = data_dir / "bench.csv"
        code = run(
            [
                "benchmark", "--train", data_dir / "m0.tsv", "--test", data_dir / "m0_test.tsv",
                "--csv", csv, "--factors", "2", "--max-iter", "2", "--k", "2",
            ]
        )
        assert code == 0
        lines = csv.read_text().splitlines()
        assert len(lines) == 8
        assert [l.split(",")[0] for l in lines[1:]] == [
            "useravg", "itemavg", "mostpopular", "slopeone", "userknn", "itemknn", "funksvd",
        ]

    def test_subset(self, data_dir):
        csv = data_dir / "two.csv"
        code = run(
            [
                "benchmark", "--train", data_dir / "m0.tsv", "--test", data_dir / "m0_test.tsv",
                "--csv", csv, "--algos", "slopeone,funksvd", "--factors", "2", "--max-iter", "2",
            ]
        )
        assert code == 0
        lines = csv.read_text().splitlines()
        assert len(lines) == 3

    def test_factor_grid_writes_timing_csv(self, data_dir):
        csv = data_dir / "bench.csv"
        code = run(
            [
                "benchmark", "--train", data_dir / "m0.tsv", "--test", data_dir / "m0_test.tsv",
                "--csv", csv, "--algos", "useravg", "--factor-grid", "1,2,3", "--max-iter", "2",
            ]
        )
        assert code == 0
        timing = data_dir / "bench_timing.csv"
        lines = timing.read_text().splitlines()
        assert len(lines) == 4
        assert [l.split(",")[1] for l in lines[1:]] == ["1", "2", "3"]

    def test_unknown_algo_is_config_error(self, data_dir, capsys):
        code = run(
            [
                "benchmark", "--train", data_dir / "m0.tsv", "--test", data_dir / "m0_test.tsv",
                "--csv", data_dir / "x.csv", "--algos", "pagerank",
            ]
        )
        assert code == 2

    def test_byte_identical_reruns_modulo_times(self, data_dir):
        def one_run(tag):
            csv = data_dir / f"bench-{tag}.csv"
            outdir = data_dir / f"models-{tag}"
            assert run(
                [
                    "benchmark", "--train", data_dir / "m0.tsv", "--test", data_dir / "m0_test.tsv",
                    "--csv", csv, "--outdir", outdir,
                    "--factors", "2", "--max-iter", "3", "--k", "2", "--seed", "42",
                ]
            ) == 0
            rows = [line.split(",") for line in csv.read_text().splitlines()]
            stripped = [fields[:-2] for fields in rows]
            models = {
                p.name: p.read_bytes() for p in sorted(outdir.glob("*.model.json"))
            }
            return stripped, models

        csv1, models1 = one_run("a")
        csv2, models2 = one_run("b")
        assert csv1 == csv2
        assert models1 == models2


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "cfkit", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "train" in proc.stdout
