import json
import os

import numpy as np
import pandas as pd
import pytest

from src.cascade import fit_pipeline, load_pipeline, predict_pipeline
from src.config_loader import load_config_file, validate_config
from src.datasets import SplitSpec, load_csv, make_blobs, make_parity, shuffle_split, write_csv
from src.evolution import EAConfig, run
from src.genome import SearchBounds
from src.metrics import balanced_accuracy
from src.pipeline_runner.main import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from src.primitives import NodeSpec, get_spec, predict
from src.seeding import derive_seed

from conftest import FAST_PRIMITIVES, ROOT


def search_args(data, out, *extra):
    return [
        "search", "--data", data, "--label-col", "label", "--out", str(out),
        "--population", "4", "--iterations", "1", "--cv-folds", "3",
        "--primitives", ",".join(FAST_PRIMITIVES), *extra,
    ]


class TestInfo:
    def test_primitives(self, capsys):
        assert main(["info", "primitives"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        tree = next(p for p in doc if p["name"] == "decision_tree")
        assert tree["hyper_grid"]["max_depth"] == [1, 2, 3, 5, 8, 12]

    def test_config_schema_accepts_example(self, capsys):
        assert main(["info", "config-schema"]) == EXIT_OK
        schema = json.loads(capsys.readouterr().out)
        example = load_config_file(os.path.join(ROOT, "config", "search.yaml"))
        assert set(example) <= set(schema["properties"])
        validate_config(example)

    def test_unknown_topic(self):
        assert main(["info", "nonsense"]) == EXIT_USAGE


class TestSearch:
    def test_missing_data_flag(self, tmp_path, caplog):
        assert main(["search", "--out", str(tmp_path)]) == EXIT_USAGE
        assert "--data" in caplog.text

    def test_missing_data_file(self, tmp_path):
        assert main(search_args(str(tmp_path / "none.csv"), tmp_path / "out")) == EXIT_DATA

    def test_bad_flag_value(self, tmp_path, blobs_csv):
        assert main(search_args(blobs_csv, tmp_path / "out", "--population", "5")) == EXIT_USAGE
        assert main(search_args(blobs_csv, tmp_path / "out", "--primitives", "svc")) == EXIT_USAGE

    def test_broken_config_file(self, tmp_path, blobs_csv):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("population_n: nine\n")
        assert main(search_args(blobs_csv, tmp_path / "out", "--config", str(cfg))) == EXIT_USAGE

    def test_fewer_training_rows_than_folds(self, tmp_path, caplog):
        csv = tmp_path / "six.csv"
        csv.write_text("x,label\n0.1,a\n0.2,b\n0.3,a\n0.4,b\n0.5,a\n0.6,b\n")
        out = tmp_path / "out"
        assert main(search_args(str(csv), out, "--cv-folds", "5")) == EXIT_DATA
        assert "4 training rows into 5 cross-validation folds" in caplog.text
        assert not out.exists()

    def test_tiny_run_writes_artifacts(self, tmp_path, blobs_csv):
        out = tmp_path / "out"
        assert main(search_args(blobs_csv, out)) == EXIT_OK
        pipelines = sorted(p for p in os.listdir(out) if p.startswith("pipeline_"))
        assert 1 <= len(pipelines) <= 10
        summary = pd.read_csv(out / "summary.csv")
        assert list(summary.columns) == ["rank", "cv_score", "test_score", "layers", "total_nodes", "genome_digest"]
        assert list(summary["rank"]) == list(range(1, len(pipelines) + 1))
        lines = (out / "generations.jsonl").read_text().splitlines()
        assert [json.loads(line)["generation"] for line in lines] == [0, 1]
        assert load_pipeline(str(out / "pipeline_1.json")).label_column == "label"

    def test_same_seed_same_summary(self, tmp_path, blobs_csv):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(search_args(blobs_csv, a, "--seed", "7")) == EXIT_OK
        assert main(search_args(blobs_csv, b, "--seed", "7")) == EXIT_OK
        assert (a / "summary.csv").read_bytes() == (b / "summary.csv").read_bytes()

    def test_workers_give_identical_bytes(self, tmp_path, blobs_csv):
        outs = []
        for workers in (1, 4, 8):
            out = tmp_path / f"w{workers}"
            assert main(search_args(blobs_csv, out, "--seed", "3", "--workers", str(workers))) == EXIT_OK
            outs.append(out)
        for out in outs[1:]:
            assert (out / "summary.csv").read_bytes() == (outs[0] / "summary.csv").read_bytes()
            assert (out / "pipeline_1.json").read_bytes() == (outs[0] / "pipeline_1.json").read_bytes()

    def test_trials_baseline_plot(self, tmp_path, blobs_csv):
        out = tmp_path / "out"
        args = search_args(blobs_csv, out, "--trials", "2", "--baseline", "--plot")
        assert main(args) == EXIT_OK
        trials = pd.read_csv(out / "trials.csv")
        assert list(trials["trial"]) == [0, 1]
        assert (trials["elapsed_s"] >= 0).all()
        for t in (0, 1):
            assert (out / f"trial_{t}" / "summary.csv").exists()
            assert (out / f"trial_{t}" / "fitness_curve.png").exists()
            baseline = json.loads((out / f"trial_{t}" / "baseline.json").read_text())
            assert 0.0 <= baseline["test_score"] <= 1.0

    def test_fixed_shape(self, tmp_path, blobs_csv):
        out = tmp_path / "out"
        assert main(search_args(blobs_csv, out, "--fixed-shape", "2,1")) == EXIT_OK
        assert set(pd.read_csv(out / "summary.csv")["layers"]) == {"2-1"}


class TestPredict:
    def test_every_saved_pipeline_matches_in_process_run(self, tmp_path, blobs_csv):
        out = tmp_path / "out"
        assert main(search_args(blobs_csv, out, "--seed", "2")) == EXIT_OK

        data = load_csv(blobs_csv, "label")
        train, test = shuffle_split(data, SplitSpec(0.8, 2))
        bounds = SearchBounds(max_layers=5, max_nodes=3, allowed_primitives=FAST_PRIMITIVES)
        ranked = run(EAConfig(population_n=4, iterations_m=1, bounds=bounds, cv_folds=3, master_seed=2), train)
        summary = pd.read_csv(out / "summary.csv")
        assert len(summary) == len(ranked)

        test_csv = write_csv(test, str(tmp_path / "test.csv"))
        for rank, (in_process, _) in enumerate(ranked, start=1):
            path = out / f"pipeline_{rank}.json"
            expected = predict_pipeline(in_process, test.features)
            np.testing.assert_array_equal(predict_pipeline(load_pipeline(str(path)), test.features), expected)

            pred_csv = tmp_path / f"pred_{rank}.csv"
            assert main(["predict", "--pipeline", str(path), "--data", test_csv, "--out", str(pred_csv)]) == EXIT_OK
            assert list(pd.read_csv(pred_csv, dtype=str)["prediction"]) == [data.class_names[c] for c in expected]
            score = balanced_accuracy(test.labels, expected, test.n_classes)
            assert summary["test_score"].iloc[rank - 1] == pytest.approx(score)

    def test_single_node_round_trip(self, tmp_path, capsys):
        from src.cascade import save_pipeline
        from src.genome import PipelineGenome

        d = make_blobs(n_rows=40, n_features=2, separation=1.0, seed=1)
        csv = write_csv(d, str(tmp_path / "d.csv"))
        spec = NodeSpec("knn", {"k": 3, "weighting": "uniform"})
        pipeline = fit_pipeline(PipelineGenome(layers=((spec,),)), d, seed=6)
        save_pipeline(pipeline, str(tmp_path / "p.json"))

        capsys.readouterr()
        assert main(["predict", "--pipeline", str(tmp_path / "p.json"), "--data", csv, "--label-col", "label"]) == EXIT_OK
        printed = capsys.readouterr().out.splitlines()
        from src.primitives import fit

        alone = fit(spec, d, derive_seed(6, 0, 0))
        assert printed[1:] == [d.class_names[c] for c in predict(alone, d.features)]

    def test_corrupt_pipeline(self, tmp_path, blobs_csv):
        bad = tmp_path / "bad.json"
        bad.write_text('{"format_version": 1, "genome": ')
        assert main(["predict", "--pipeline", str(bad), "--data", blobs_csv]) == EXIT_USAGE

    def test_width_mismatch(self, tmp_path, blobs_csv, caplog):
        out = tmp_path / "out"
        assert main(search_args(blobs_csv, out)) == EXIT_OK
        narrow = tmp_path / "narrow.csv"
        narrow.write_text("a,b\n1,2\n3,4\n")
        assert main(["predict", "--pipeline", str(out / "pipeline_1.json"), "--data", str(narrow)]) == EXIT_USAGE
        assert "expected 3" in caplog.text and "got 2" in caplog.text


class TestGenerate:
    def test_parity(self, tmp_path):
        path = tmp_path / "p.csv"
        assert main(["generate", "parity", "--out", str(path)]) == EXIT_OK
        d = load_csv(str(path), "label")
        assert d.n_rows == 256 and d.n_cols == 5
        np.testing.assert_array_equal(d.labels, make_parity(5, 8).labels)

    def test_shipped_sample_matches_generator(self):
        d = load_csv(os.path.join(ROOT, "data", "sample", "parity5.csv"), "label")
        np.testing.assert_array_equal(d.features, make_parity(5, 8).features)


@pytest.mark.slow
class TestAcceptance:
    def test_parity_needs_the_search(self, tmp_path):
        from src.primitives import fit as fit_primitive

        csv = os.path.join(ROOT, "data", "sample", "parity5.csv")
        data = load_csv(csv, "label")
        train, test = shuffle_split(data, SplitSpec(0.8, 0))
        perceptron = NodeSpec("perceptron", {k: v[0] for k, v in get_spec("perceptron").hyper_grid.items()})
        tp = fit_primitive(perceptron, train, seed=0)
        assert balanced_accuracy(test.labels, predict(tp, test.features), 2) <= 0.65

        out = tmp_path / "parity"
        args = ["search", "--data", csv, "--label-col", "label", "--out", str(out),
                "--population", "20", "--iterations", "5", "--seed", "0", "--workers", "4"]
        assert main(args) == EXIT_OK
        assert pd.read_csv(out / "summary.csv")["test_score"].iloc[0] >= 0.95

    def test_blobs_search(self, tmp_path):
        csv = write_csv(make_blobs(n_rows=200, seed=0), str(tmp_path / "blobs.csv"))
        out = tmp_path / "blobs"
        args = ["search", "--data", csv, "--label-col", "label", "--out", str(out),
                "--population", "10", "--iterations", "2", "--seed", "0"]
        assert main(args) == EXIT_OK
        assert pd.read_csv(out / "summary.csv")["test_score"].iloc[0] >= 0.95
