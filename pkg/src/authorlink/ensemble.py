"""Multi-column ensemble: N networks trained on rotating folds.

The training set is shuffled once and partitioned into N folds; column
i trains on every fold except fold i and uses fold i for early
stopping, so each sample validates exactly one column and trains the
other N-1.  Predictions average the class posteriors of all columns
uniformly, and the averaged same-author posterior is thresholded at
0.5.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from authorlink.errors import DataError, SchemaMismatchError
from authorlink.network import (
    EpochStats,
    MlpModel,
    NetworkConfig,
    Prediction,
    model_from_dict,
    model_to_dict,
    train,
)

__all__ = [
    "EnsembleModel",
    "load_ensemble",
    "predict_ensemble",
    "save_ensemble",
    "train_multicolumn",
]

ENSEMBLE_FORMAT = "authorlink-mlp-ensemble"
ENSEMBLE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class EnsembleModel:
    """N trained columns whose posteriors are averaged uniformly."""

    columns: tuple[MlpModel, ...]
    n_columns: int
    fold_seed: int

    @property
    def feature_schema_version(self) -> int:
        return self.columns[0].feature_schema_version

    def posteriors(self, features: np.ndarray) -> np.ndarray:
        """Mean of column posteriors; rows still sum to 1.

        The mean uses exactly-rounded summation, so it is bit-identical
        under any reordering of the columns.
        """
        stacked = np.stack([column.posteriors(features) for column in self.columns])
        n_cols, n_rows, n_classes = stacked.shape
        out = np.empty((n_rows, n_classes))
        for i in range(n_rows):
            for j in range(n_classes):
                out[i, j] = math.fsum(stacked[:, i, j]) / n_cols
        return out


def train_multicolumn(
    features: np.ndarray,
    labels: np.ndarray,
    config: NetworkConfig,
    n_columns: int = 5,
    seed: int = 0,
    max_epochs: int = 1000,
    patience: int = 25,
) -> tuple[EnsembleModel, list[list[EpochStats]]]:
    """Train N columns on rotating folds of the training data.

    ``config`` is a template; each column gets its own seed derived
    deterministically from ``seed`` and the column index, so results do
    not depend on scheduling.  With a single column there is no fold to
    rotate, so it early-stops on an internal 90/10 split.  Requires at
    least two samples per column.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    n = x.shape[0]
    if n_columns < 1:
        raise DataError(f"n_columns must be >= 1, got {n_columns}")
    if n < 2 * n_columns:
        raise DataError(
            f"dataset of {n} samples is too small to fold into {n_columns} columns"
        )
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    column_seeds = rng.integers(0, 2**63, size=n_columns, dtype=np.int64)

    if n_columns == 1:
        n_val = max(1, int(round(0.1 * n)))
        fold_val = [order[:n_val]]
        fold_train = [order[n_val:]]
    else:
        folds = np.array_split(order, n_columns)
        fold_val = folds
        fold_train = [
            np.concatenate([folds[j] for j in range(n_columns) if j != i])
            for i in range(n_columns)
        ]

    columns: list[MlpModel] = []
    logs: list[list[EpochStats]] = []
    for i in range(n_columns):
        column_config = replace(config, seed=int(column_seeds[i]))
        model, log = train(
            x[fold_train[i]],
            y[fold_train[i]],
            x[fold_val[i]],
            y[fold_val[i]],
            column_config,
            max_epochs=max_epochs,
            patience=patience,
        )
        columns.append(model)
        logs.append(log)
    return EnsembleModel(tuple(columns), n_columns, seed), logs


def predict_ensemble(model: EnsembleModel, features: np.ndarray) -> Prediction:
    """Label 1 iff the averaged same-author posterior is >= 0.5."""
    probs = model.posteriors(features)
    posterior = float(probs[0, 1])
    return Prediction(posterior=posterior, label=1 if posterior >= 0.5 else 0)


def save_ensemble(model: EnsembleModel, path: str | Path) -> None:
    """Write a container file embedding every column's payload."""
    payload = {
        "format": ENSEMBLE_FORMAT,
        "format_version": ENSEMBLE_FORMAT_VERSION,
        "n_columns": model.n_columns,
        "fold_seed": model.fold_seed,
        "columns": [model_to_dict(column) for column in model.columns],
    }
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_ensemble(path: str | Path) -> EnsembleModel:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        payload = json.load(fh)
    source = str(path)
    if payload.get("format") != ENSEMBLE_FORMAT:
        raise SchemaMismatchError(
            f"{source}: not an {ENSEMBLE_FORMAT} payload "
            f"(format={payload.get('format')!r})"
        )
    if payload.get("format_version") != ENSEMBLE_FORMAT_VERSION:
        raise SchemaMismatchError(
            f"{source}: ensemble format version {payload.get('format_version')!r} "
            f"is not the supported version {ENSEMBLE_FORMAT_VERSION}"
        )
    columns = tuple(
        model_from_dict(entry, source=f"{source}[column {i}]")
        for i, entry in enumerate(payload["columns"])
    )
    if not columns:
        raise SchemaMismatchError(f"{source}: ensemble has no columns")
    return EnsembleModel(columns, int(payload["n_columns"]), int(payload["fold_seed"]))
