"""Batch command-line interface.

Subcommands: featurize, train, grid-search, evaluate, predict,
gen-synthetic.  Every command is deterministic given its flags (all
randomness flows from --seed), and flags override values from an
optional JSON config file given with --config.

Exit codes: 0 success, 2 input or validation error, 3 model/feature
compatibility error, 1 internal fault.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import traceback
from typing import Any, Sequence

from authorlink import ensemble as ens
from authorlink import evaluation as ev
from authorlink import features as ft
from authorlink import records as rec
from authorlink import synthetic as syn
from authorlink.errors import (
    AuthorlinkError,
    ConfigError,
    DataError,
    IntegrityError,
    ParseError,
    SchemaMismatchError,
)
from authorlink.network import NetworkConfig

__all__ = ["main", "main_entry"]

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_COMPAT = 3

_INPUT_ERRORS = (
    ConfigError,
    ParseError,
    IntegrityError,
    DataError,
    FileNotFoundError,
    IsADirectoryError,
    PermissionError,
)

DEFAULTS: dict[str, Any] = {
    "hidden_layers": 7,
    "hidden_width": 50,
    "columns": 5,
    "activation": "softsign",
    "max_epochs": 1000,
    "patience": 25,
    "k_folds": 5,
    "test_fraction": 0.2,
    "depths": "1,2,3,4,5,6,7,8",
    "widths": "10,25,50,75,100",
    "authors": 10,
    "records_per_author": 10,
    "negative_ratio": syn.DEFAULT_NEGATIVE_RATIO,
    "variant_ops": ",".join(syn.VARIANT_OPS),
    "missing_coauthors": syn.DEFAULT_MISSINGNESS["coauthors"],
    "missing_affiliation": syn.DEFAULT_MISSINGNESS["affiliation"],
    "missing_paper_keywords": syn.DEFAULT_MISSINGNESS["paper_keywords"],
    "missing_interest_keywords": syn.DEFAULT_MISSINGNESS["interest_keywords"],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="authorlink",
        description=(
            "Decide whether pairs of publication records share an author: "
            "string-similarity features plus an averaged MLP ensemble."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--seed", type=int, default=None, help="global random seed")

    p = sub.add_parser("featurize", help="compute the 30-feature CSV for a pair file")
    common(p)
    p.add_argument("--records", required=True, help="records JSONL path")
    p.add_argument("--pairs", required=True, help="pairs CSV path")
    p.add_argument("--out", required=True, help="output feature CSV path")
    p.set_defaults(handler=cmd_featurize)

    p = sub.add_parser("train", help="train a multi-column ensemble")
    common(p)
    p.add_argument("--records", help="records JSONL path")
    p.add_argument("--pairs", help="pairs CSV path")
    p.add_argument("--features", help="feature CSV path (alternative to records/pairs)")
    p.add_argument("--model", required=True, help="output model file")
    p.add_argument("--log", help="output training-log CSV (default: <model>.log)")
    p.add_argument("--hidden-layers", type=int, dest="hidden_layers", default=None)
    p.add_argument("--hidden-width", type=int, dest="hidden_width", default=None)
    p.add_argument("--columns", type=int, default=None, help="ensemble columns")
    p.add_argument("--activation", default=None, choices=["softsign", "tanh", "rectifier"])
    p.add_argument("--max-epochs", type=int, dest="max_epochs", default=None)
    p.add_argument("--patience", type=int, default=None)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("grid-search", help="rank network sizes by cross-validated accuracy")
    common(p)
    p.add_argument("--records", help="records JSONL path")
    p.add_argument("--pairs", help="pairs CSV path")
    p.add_argument("--features", help="feature CSV path (alternative to records/pairs)")
    p.add_argument("--out", required=True, help="output ranked CSV")
    p.add_argument("--depths", default=None, help="comma-separated hidden layer counts")
    p.add_argument("--widths", default=None, help="comma-separated hidden unit counts")
    p.add_argument("--k-folds", type=int, dest="k_folds", default=None)
    p.add_argument("--activation", default=None, choices=["softsign", "tanh", "rectifier"])
    p.add_argument("--max-epochs", type=int, dest="max_epochs", default=None)
    p.add_argument("--patience", type=int, default=None)
    p.set_defaults(handler=cmd_grid_search)

    p = sub.add_parser("evaluate", help="accuracy/error report on a labeled test set")
    common(p)
    p.add_argument("--model", required=True, help="model file to evaluate")
    p.add_argument("--records", help="records JSONL path")
    p.add_argument("--pairs", help="pairs CSV path")
    p.add_argument("--features", help="feature CSV path (alternative to records/pairs)")
    p.add_argument("--out", required=True, help="output report CSV")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("predict", help="posteriors and labels for candidate pairs")
    common(p)
    p.add_argument("--model", required=True, help="model file")
    p.add_argument("--records", required=True, help="records JSONL path")
    p.add_argument("--pairs", required=True, help="candidate pairs CSV (labels optional)")
    p.add_argument("--out", required=True, help="output prediction CSV")
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("gen-synthetic", help="emit a synthetic labeled corpus")
    common(p)
    p.add_argument("--out-records", dest="out_records", required=True)
    p.add_argument("--out-pairs", dest="out_pairs", required=True)
    p.add_argument("--authors", type=int, default=None)
    p.add_argument(
        "--records-per-author", type=int, dest="records_per_author", default=None
    )
    p.add_argument(
        "--negative-ratio", type=float, dest="negative_ratio", default=None,
        help="negative pairs per positive pair",
    )
    p.add_argument(
        "--variant-ops", dest="variant_ops", default=None,
        help=f"comma-separated subset of {','.join(syn.VARIANT_OPS)} (empty for none)",
    )
    p.add_argument(
        "--missing-coauthors", type=float, dest="missing_coauthors", default=None
    )
    p.add_argument(
        "--missing-affiliation", type=float, dest="missing_affiliation", default=None
    )
    p.add_argument(
        "--missing-paper-keywords",
        type=float,
        dest="missing_paper_keywords",
        default=None,
    )
    p.add_argument(
        "--missing-interest-keywords",
        type=float,
        dest="missing_interest_keywords",
        default=None,
    )
    p.set_defaults(handler=cmd_gen_synthetic)
    return parser


class Options:
    """Flag values merged with the optional config file and defaults."""

    def __init__(self, args: argparse.Namespace):
        self._args = vars(args)
        self._config: dict[str, Any] = {}
        config_path = self._args.get("config")
        if config_path:
            with open(config_path, encoding="utf-8") as fh:
                try:
                    loaded = json.load(fh)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"{config_path}: invalid JSON ({exc.msg})") from None
            if not isinstance(loaded, dict):
                raise ConfigError(f"{config_path}: config must be a JSON object")
            unknown = set(loaded) - set(DEFAULTS) - set(self._args)
            if unknown:
                raise ConfigError(
                    f"{config_path}: unknown config keys {sorted(unknown)}"
                )
            self._config = loaded

    def get(self, key: str) -> Any:
        value = self._args.get(key)
        if value is not None:
            return value
        if key in self._config:
            return self._config[key]
        return DEFAULTS.get(key)

    def require_seed(self) -> int:
        seed = self.get("seed")
        if seed is None:
            raise ConfigError("--seed is required for this command")
        return int(seed)


def _int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in str(text).split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"{flag} must be a comma-separated list of integers") from None
    if not values:
        raise ConfigError(f"{flag} must name at least one value")
    return values


def _load_features(opts: Options) -> tuple[Any, Any, rec.PairDataset | None]:
    """Features and labels from either a feature CSV or records+pairs."""
    feature_path = opts.get("features")
    records_path = opts.get("records")
    pairs_path = opts.get("pairs")
    if feature_path:
        features, labels = ft.read_feature_csv(feature_path)
        return features, labels, None
    if not records_path or not pairs_path:
        raise ConfigError("provide either --features or both --records and --pairs")
    records = rec.load_records(records_path)
    dataset = rec.load_labeled_pairs(pairs_path, {r.record_id: r for r in records})
    features, labels, _ = ft.featurize_dataset(dataset)
    return features, labels, dataset


def _require_labeled(labels) -> None:
    if (labels < 0).any():
        raise DataError("this command requires every pair to be labeled")


def _load_any_model(path: str):
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc.msg})") from None
    if isinstance(payload, dict) and payload.get("format") == ens.ENSEMBLE_FORMAT:
        return ens.load_ensemble(path)
    from authorlink.network import load_model

    return load_model(path)


def _check_schema(model, source: str) -> None:
    version = model.feature_schema_version
    if version != ft.FEATURE_SCHEMA_VERSION:
        raise SchemaMismatchError(
            f"{source}: model was trained on feature schema version {version}, "
            f"but this build computes version {ft.FEATURE_SCHEMA_VERSION}"
        )


def cmd_featurize(opts: Options) -> int:
    records = rec.load_records(opts.get("records"))
    dataset = rec.load_labeled_pairs(
        opts.get("pairs"), {r.record_id: r for r in records}
    )
    features, labels, schema = ft.featurize_dataset(dataset)
    ft.write_feature_csv(features, labels, opts.get("out"), schema)
    counts = dataset.class_counts()
    print(
        f"featurized {len(dataset.pairs)} pairs "
        f"(label 0: {counts[0]}, label 1: {counts[1]}, unlabeled: {counts[None]}) "
        f"-> {opts.get('out')}"
    )
    return EXIT_OK


def cmd_train(opts: Options) -> int:
    seed = opts.require_seed()
    features, labels, _ = _load_features(opts)
    _require_labeled(labels)
    config = NetworkConfig(
        input_dim=features.shape[1],
        hidden_layers=int(opts.get("hidden_layers")),
        hidden_width=int(opts.get("hidden_width")),
        activation=opts.get("activation"),
        seed=seed,
    )
    model, logs = ens.train_multicolumn(
        features,
        labels,
        config,
        n_columns=int(opts.get("columns")),
        seed=seed,
        max_epochs=int(opts.get("max_epochs")),
        patience=int(opts.get("patience")),
    )
    model_path = opts.get("model")
    ens.save_ensemble(model, model_path)
    log_path = opts.get("log") or f"{model_path}.log"
    with open(log_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["column", "epoch", "loss", "train_accuracy", "val_accuracy"])
        for column, log in enumerate(logs):
            for entry in log:
                writer.writerow(
                    [
                        column,
                        entry.epoch,
                        repr(entry.loss),
                        repr(entry.train_accuracy),
                        repr(entry.val_accuracy),
                    ]
                )
    for column, log in enumerate(logs):
        best = max(entry.val_accuracy for entry in log)
        print(
            f"column {column}: {len(log)} epochs, best validation accuracy {best:.4f}"
        )
    print(f"saved {model.n_columns}-column model -> {model_path} (log: {log_path})")
    return EXIT_OK


def cmd_grid_search(opts: Options) -> int:
    seed = opts.require_seed()
    features, labels, _ = _load_features(opts)
    _require_labeled(labels)
    grid = ev.GridSpec(
        depths=_int_list(opts.get("depths"), "--depths"),
        widths=_int_list(opts.get("widths"), "--widths"),
        activation=opts.get("activation"),
        max_epochs=int(opts.get("max_epochs")),
        patience=int(opts.get("patience")),
    )
    split = ev.SplitSpec(
        test_fraction=float(opts.get("test_fraction")),
        k_folds=int(opts.get("k_folds")),
        seed=seed,
    )
    cells = ev.grid_search(features, labels, grid, split)
    ev.write_grid_csv(cells, opts.get("out"))
    print("depth width mean_val_accuracy")
    for cell in cells:
        print(f"{cell.depth:5d} {cell.width:5d} {cell.mean_val_accuracy:.4f}")
    print(f"wrote {len(cells)} rows -> {opts.get('out')}")
    return EXIT_OK


def cmd_evaluate(opts: Options) -> int:
    model = _load_any_model(opts.get("model"))
    _check_schema(model, opts.get("model"))
    features, labels, _ = _load_features(opts)
    _require_labeled(labels)
    report = ev.evaluate(model, features, labels)
    ev.write_eval_report_csv(report, opts.get("out"))
    print(ev.format_eval_report(report))
    print(f"wrote report -> {opts.get('out')}")
    return EXIT_OK


def cmd_predict(opts: Options) -> int:
    model = _load_any_model(opts.get("model"))
    _check_schema(model, opts.get("model"))
    records = rec.load_records(opts.get("records"))
    dataset = rec.load_labeled_pairs(
        opts.get("pairs"), {r.record_id: r for r in records}
    )
    features, _, _ = ft.featurize_dataset(dataset)
    out_path = opts.get("out")
    if len(dataset.pairs) > 0:
        probs = model.posteriors(features)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["left_id", "right_id", "posterior", "label"])
        for row, pair in enumerate(dataset.pairs):
            posterior = float(probs[row, 1])
            writer.writerow(
                [pair.left_id, pair.right_id, repr(posterior), int(posterior >= 0.5)]
            )
    print(f"predicted {len(dataset.pairs)} pairs -> {out_path}")
    return EXIT_OK


def cmd_gen_synthetic(opts: Options) -> int:
    seed = opts.require_seed()
    ops_text = opts.get("variant_ops")
    ops = frozenset(part.strip() for part in str(ops_text).split(",") if part.strip())
    spec = syn.SyntheticSpec(
        n_authors=int(opts.get("authors")),
        records_per_author=int(opts.get("records_per_author")),
        variant_ops=ops,
        missingness={
            "coauthors": float(opts.get("missing_coauthors")),
            "affiliation": float(opts.get("missing_affiliation")),
            "paper_keywords": float(opts.get("missing_paper_keywords")),
            "interest_keywords": float(opts.get("missing_interest_keywords")),
        },
        negative_pair_ratio=float(opts.get("negative_ratio")),
        seed=seed,
    )
    dataset = syn.generate_synthetic(spec)
    rec.save_records(dataset.records.values(), opts.get("out_records"))
    rec.save_pairs(dataset.pairs, opts.get("out_pairs"))
    counts = dataset.class_counts()
    total = counts[0] + counts[1]
    share = 100.0 * counts[1] / total if total else 0.0
    print(
        f"generated {len(dataset.records)} records, {total} pairs "
        f"(label 1: {counts[1]} = {share:.2f}%) -> "
        f"{opts.get('out_records')}, {opts.get('out_pairs')}"
    )
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = Options(args)
        return args.handler(opts)
    except SchemaMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPAT
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AuthorlinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
