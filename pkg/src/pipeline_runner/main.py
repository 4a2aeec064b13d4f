from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from src.cascade import TrainedPipeline, load_pipeline, predict_pipeline, save_pipeline
from src.config_loader import (
    CONFIG_SCHEMA,
    RunConfig,
    build_run_config,
    load_config_file,
    parse_int_list,
    parse_name_list,
)
from src.datasets import (
    Dataset,
    SplitSpec,
    load_csv,
    make_blobs,
    make_parity,
    parse_feature_matrix,
    read_table,
    resolve_label_column,
    shuffle_split,
    write_csv,
)
from src.errors import (
    ConfigError,
    DatasetError,
    GenomeError,
    PipelineFormatError,
    TooFewRowsForFoldsError,
    WidthMismatchError,
)
from src.evolution import EAConfig, GenerationReport, run
from src.genome import SearchBounds, genome_digest, shape_label
from src.metrics import balanced_accuracy
from src.primitives import RandomForestClassifier, catalog
from src.seeding import derive_seed, make_rng
from src.visuals import plot_fitness_curve


ROOT = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))
CONFIG_DIR = os.path.join(ROOT, "config")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3

SUMMARY_COLUMNS = ["rank", "cv_score", "test_score", "layers", "total_nodes", "genome_digest"]
BASELINE_TREES = 500

logger = logging.getLogger("cascade_stacker")


def ensure_dirs(*paths: str):
    for p in paths:
        os.makedirs(p, exist_ok=True)


def label_column_name(path: str, label_col) -> str:
    header = pd.read_csv(path, nrows=0, dtype=str)
    return resolve_label_column(header, label_col)


def run_baseline(train: Dataset, test: Dataset, seed: int) -> float:
    """The reference model: a 500-tree random forest fit on the training split."""
    model = RandomForestClassifier(n_estimators=BASELINE_TREES, max_depth=None, max_features="sqrt")
    model.fit(train.features, train.labels, train.n_classes, make_rng(derive_seed(seed, "baseline")))
    return balanced_accuracy(test.labels, model.predict(test.features), test.n_classes)


def run_trial(cfg: RunConfig, data: Dataset, bounds: SearchBounds, label_name: str, seed: int, out_dir: str, progress: bool) -> Dict[str, Any]:
    started = time.perf_counter()
    train, test = shuffle_split(data, SplitSpec(cfg.train_fraction, seed), stratify=cfg.stratify)
    if train.n_rows < cfg.cv_folds:
        raise TooFewRowsForFoldsError(train.n_rows, cfg.cv_folds)
    ensure_dirs(out_dir)
    ea = EAConfig(
        population_n=cfg.population_n,
        iterations_m=cfg.iterations_m,
        bounds=bounds,
        cv_folds=cfg.cv_folds,
        master_seed=seed,
        worker_count=cfg.workers,
    )

    reports: List[GenerationReport] = []
    with open(os.path.join(out_dir, "generations.jsonl"), "w") as log_f:

        def on_generation(report: GenerationReport) -> None:
            reports.append(report)
            log_f.write(json.dumps(report.to_dict()) + "\n")
            log_f.flush()

        ranked = run(ea, train, on_generation=on_generation, progress=progress)

    rows = []
    for rank, (pipeline, record) in enumerate(ranked, start=1):
        pipeline = dataclasses.replace(pipeline, label_column=label_name)
        save_pipeline(pipeline, os.path.join(out_dir, f"pipeline_{rank}.json"))
        test_score = balanced_accuracy(test.labels, predict_pipeline(pipeline, test.features), test.n_classes)
        rows.append(
            {
                "rank": rank,
                "cv_score": record.cv_score,
                "test_score": test_score,
                "layers": shape_label(pipeline.genome),
                "total_nodes": pipeline.genome.total_nodes,
                "genome_digest": genome_digest(pipeline.genome),
            }
        )
    summary = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    summary.to_csv(os.path.join(out_dir, "summary.csv"), index=False)

    result: Dict[str, Any] = {
        "best_cv_score": float(summary["cv_score"].iloc[0]) if len(summary) else float("nan"),
        "best_test_score": float(summary["test_score"].iloc[0]) if len(summary) else float("nan"),
        "mean_top_test_score": float(summary["test_score"].mean()) if len(summary) else float("nan"),
    }
    # covers split, search, refit and test scoring; excludes the baseline fit
    result["elapsed_s"] = round(time.perf_counter() - started, 3)

    if cfg.baseline:
        score = run_baseline(train, test, seed)
        with open(os.path.join(out_dir, "baseline.json"), "w") as f:
            json.dump({"model": "random_forest", "n_estimators": BASELINE_TREES, "test_score": score}, f, indent=1)
        logger.info("Random forest baseline (%d trees): test balanced accuracy %.4f", BASELINE_TREES, score)
        result["baseline_test_score"] = score

    if cfg.plot and reports:
        plot_fitness_curve(reports, f"Search progress, seed {seed}", os.path.join(out_dir, "fitness_curve.png"))
    return result


def cmd_search(cfg: RunConfig, progress: bool = False) -> int:
    if not cfg.data:
        logger.error("missing dataset path: pass --data <path> or set 'data' in the config file")
        return EXIT_USAGE
    try:
        bounds = SearchBounds(
            max_layers=cfg.max_layers,
            max_nodes=cfg.max_nodes,
            allowed_primitives=tuple(cfg.primitives) if cfg.primitives else tuple(p.name for p in catalog()),
            fixed_shape=tuple(cfg.fixed_shape) if cfg.fixed_shape else None,
        )
        # validates population/fold/worker settings before any data is read
        EAConfig(cfg.population_n, cfg.iterations_m, bounds, cfg.cv_folds, cfg.seed, cfg.workers)
    except (ConfigError, GenomeError) as e:
        logger.error("invalid configuration: %s", e)
        return EXIT_USAGE

    try:
        data = load_csv(cfg.data, cfg.label_col)
        label_name = label_column_name(cfg.data, cfg.label_col)
        trials = []
        for t in range(cfg.trials):
            out_dir = cfg.output_dir if cfg.trials == 1 else os.path.join(cfg.output_dir, f"trial_{t}")
            result = run_trial(cfg, data, bounds, label_name, cfg.seed + t, out_dir, progress)
            trials.append({"trial": t, **result})
            print(
                f"Trial {t}: best pipeline cv balanced accuracy {result['best_cv_score']:.4f}, "
                f"test balanced accuracy {result['best_test_score']:.4f} ({result['elapsed_s']:.1f} s)"
            )
    except DatasetError as e:
        logger.error("data error: %s", e)
        return EXIT_DATA

    if cfg.trials > 1:
        pd.DataFrame(trials).to_csv(os.path.join(cfg.output_dir, "trials.csv"), index=False)
    print(f"Done. Artifacts written to {cfg.output_dir}")
    return EXIT_OK


def _feature_frame(df: pd.DataFrame, pipeline: TrainedPipeline, label_col) -> pd.DataFrame:
    if label_col is not None:
        df = df.drop(columns=[resolve_label_column(df, label_col)])
    elif pipeline.label_column is not None and pipeline.label_column in df.columns:
        df = df.drop(columns=[pipeline.label_column])
    if df.shape[1] != pipeline.raw_width:
        raise WidthMismatchError(pipeline.raw_width, df.shape[1])
    if pipeline.feature_names and set(pipeline.feature_names) <= set(df.columns):
        df = df[list(pipeline.feature_names)]
    return df


def cmd_predict(pipeline_path: str, data_path: str, out: Optional[str] = None, label_col=None) -> int:
    try:
        pipeline = load_pipeline(pipeline_path)
    except PipelineFormatError as e:
        logger.error("cannot load pipeline: %s", e)
        return EXIT_USAGE
    try:
        X = parse_feature_matrix(_feature_frame(read_table(data_path), pipeline, label_col))
    except WidthMismatchError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except DatasetError as e:
        logger.error("data error: %s", e)
        return EXIT_DATA

    pred = predict_pipeline(pipeline, X)
    names = [pipeline.class_names[c] for c in pred]
    frame = pd.DataFrame({"prediction": names})
    if out:
        frame.to_csv(out, index=False)
        logger.info("Wrote %d predictions to %s", len(frame), out)
    else:
        frame.to_csv(sys.stdout, index=False)
    return EXIT_OK


def cmd_info(topic: str) -> int:
    if topic == "primitives":
        doc: Any = [spec.to_dict() for spec in catalog()]
    elif topic == "config-schema":
        doc = CONFIG_SCHEMA
    else:
        logger.error("unknown info topic %r; choose 'primitives' or 'config-schema'", topic)
        return EXIT_USAGE
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_generate(kind: str, out: str, n_bits: int, replicas: int, rows: int, features: int, classes: int, seed: int) -> int:
    if kind == "parity":
        data = make_parity(n_bits, replicas)
    else:
        data = make_blobs(rows, features, classes, seed=seed)
    ensure_dirs(os.path.dirname(os.path.abspath(out)))
    write_csv(data, out)
    logger.info("Wrote %d rows to %s", data.n_rows, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Evolutionary search over cascading stacked classifiers")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="no progress bar, warnings only")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="evolve pipelines on a CSV dataset")
    s.add_argument("--config", default=None, help=f"YAML/JSON config file (example: {os.path.join(CONFIG_DIR, 'search.yaml')})")
    s.add_argument("--data", default=None)
    s.add_argument("--label-col", dest="label_col", default=None)
    s.add_argument("--train-frac", dest="train_fraction", type=float, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--stratify", action="store_const", const=True, default=None)
    s.add_argument("--max-layers", dest="max_layers", type=int, default=None)
    s.add_argument("--max-nodes", dest="max_nodes", type=int, default=None)
    s.add_argument("--primitives", type=parse_name_list, default=None, help="comma-separated allow-list")
    s.add_argument("--fixed-shape", dest="fixed_shape", type=parse_int_list, default=None, help="e.g. 3,2,1")
    s.add_argument("--population", dest="population_n", type=int, default=None)
    s.add_argument("--iterations", dest="iterations_m", type=int, default=None)
    s.add_argument("--cv-folds", dest="cv_folds", type=int, default=None)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--out", dest="output_dir", default=None)
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--baseline", action="store_const", const=True, default=None)
    s.add_argument("--plot", action="store_const", const=True, default=None)

    p = sub.add_parser("predict", help="apply a saved pipeline to a CSV")
    p.add_argument("--pipeline", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--label-col", dest="label_col", default=None, help="drop this column before predicting")

    i = sub.add_parser("info", help="print the primitive catalog or the config schema as JSON")
    i.add_argument("topic")

    g = sub.add_parser("generate", help="write a synthetic dataset CSV")
    g.add_argument("kind", choices=["parity", "blobs"])
    g.add_argument("--out", required=True)
    g.add_argument("--bits", type=int, default=5)
    g.add_argument("--replicas", type=int, default=8)
    g.add_argument("--rows", type=int, default=200)
    g.add_argument("--features", type=int, default=2)
    g.add_argument("--classes", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    return parser


SEARCH_KEYS = [
    "data", "label_col", "train_fraction", "stratify", "max_layers", "max_nodes", "primitives",
    "fixed_shape", "population_n", "iterations_m", "cv_folds", "seed", "workers", "output_dir",
    "trials", "baseline", "plot",
]


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else (logging.WARNING if args.quiet else logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if args.command == "search":
        try:
            file_cfg = load_config_file(args.config) if args.config else {}
            cfg = build_run_config(file_cfg, {k: getattr(args, k) for k in SEARCH_KEYS})
        except ConfigError as e:
            logger.error("invalid configuration: %s", e)
            return EXIT_USAGE
        progress = not args.quiet and sys.stderr.isatty()
        return cmd_search(cfg, progress=progress)
    if args.command == "predict":
        return cmd_predict(args.pipeline, args.data, args.out, args.label_col)
    if args.command == "info":
        return cmd_info(args.topic)
    return cmd_generate(args.kind, args.out, args.bits, args.replicas, args.rows, args.features, args.classes, args.seed)


if __name__ == "__main__":
    sys.exit(main())
