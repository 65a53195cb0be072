"""Experimental protocol: stratified splits, k-fold CV, grid search,
and accuracy/error reporting.

Splits operate on label vectors and return index arrays, so they
compose with either feature matrices or raw pair lists.  All splits are
seeded and deterministic; holdout and folds partition exactly, with
per-class proportions within one sample of the parent's.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from authorlink.errors import ConfigError, DataError
from authorlink.network import NetworkConfig, train

__all__ = [
    "DEFAULT_DEPTHS",
    "DEFAULT_WIDTHS",
    "EvalReport",
    "GridCell",
    "GridSpec",
    "SplitSpec",
    "evaluate",
    "format_eval_report",
    "grid_search",
    "kfold_splits",
    "stratified_holdout",
    "write_eval_report_csv",
    "write_grid_csv",
]

DEFAULT_DEPTHS = (1, 2, 3, 4, 5, 6, 7, 8)
DEFAULT_WIDTHS = (10, 25, 50, 75, 100)


class PosteriorModel(Protocol):
    """Anything exposing batch class posteriors (single model or ensemble)."""

    def posteriors(self, features: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class SplitSpec:
    """Holdout fraction, fold count, and seed for the protocol splits."""

    test_fraction: float = 0.2
    k_folds: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError(
                f"test_fraction must be in (0, 1), got {self.test_fraction}"
            )
        if self.k_folds < 2:
            raise ConfigError(f"k_folds must be >= 2, got {self.k_folds}")


def _class_indices(labels: np.ndarray) -> list[np.ndarray]:
    y = np.asarray(labels)
    classes = np.unique(y)
    if classes.size < 2:
        raise DataError("both classes must be present")
    return [np.flatnonzero(y == c) for c in classes]


def stratified_holdout(
    labels: np.ndarray, spec: SplitSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class random split into (train_idx, test_idx).

    Each class contributes round(n_class * test_fraction) samples to the
    test side, keeping class proportions within one sample of the
    parent's.  Deterministic given the seed; the two index arrays
    partition range(len(labels)) exactly.
    """
    rng = np.random.default_rng(spec.seed)
    train_parts: list[np.ndarray] = []
    test_parts: list[np.ndarray] = []
    for idx in _class_indices(labels):
        if idx.size < 2:
            raise DataError(f"a class has only {idx.size} sample(s); need at least 2")
        permuted = idx[rng.permutation(idx.size)]
        n_test = int(round(idx.size * spec.test_fraction))
        test_parts.append(permuted[:n_test])
        train_parts.append(permuted[n_test:])
    train_idx = np.sort(np.concatenate(train_parts)).astype(np.int64)
    test_idx = np.sort(np.concatenate(test_parts)).astype(np.int64)
    return train_idx, test_idx


def kfold_splits(
    labels: np.ndarray, k: int, seed: int
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified k-fold partition: every sample validates exactly once.

    Each class is shuffled and dealt into k nearly-equal chunks; fold i
    validates on the union of the i-th chunks.  Errors when any class
    has fewer than k samples.
    """
    if k < 2:
        raise ConfigError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    per_class_chunks: list[list[np.ndarray]] = []
    for idx in _class_indices(labels):
        if idx.size < k:
            raise DataError(
                f"a class has {idx.size} sample(s), fewer than k = {k}"
            )
        permuted = idx[rng.permutation(idx.size)]
        per_class_chunks.append(np.array_split(permuted, k))
    n = int(np.asarray(labels).shape[0])
    splits: list[tuple[np.ndarray, np.ndarray]] = []
    for fold in range(k):
        val_idx = np.sort(
            np.concatenate([chunks[fold] for chunks in per_class_chunks])
        ).astype(np.int64)
        mask = np.ones(n, dtype=bool)
        mask[val_idx] = False
        splits.append((np.flatnonzero(mask).astype(np.int64), val_idx))
    return splits


@dataclass(frozen=True)
class GridSpec:
    """Depth x width search space plus the fixed training knobs."""

    depths: tuple[int, ...] = DEFAULT_DEPTHS
    widths: tuple[int, ...] = DEFAULT_WIDTHS
    activation: str = "softsign"
    max_epochs: int = 200
    patience: int = 15

    def __post_init__(self) -> None:
        if not self.depths or not self.widths:
            raise ConfigError("depths and widths must be non-empty")
        if any(d < 1 for d in self.depths) or any(w < 1 for w in self.widths):
            raise ConfigError("depths and widths must be positive")


@dataclass(frozen=True)
class GridCell:
    depth: int
    width: int
    mean_val_accuracy: float


def _cell_seed(seed: int, depth: int, width: int, fold: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(depth, width, fold))
    return int(ss.generate_state(1)[0])


def grid_search(
    features: np.ndarray,
    labels: np.ndarray,
    grid: GridSpec,
    split: SplitSpec,
) -> list[GridCell]:
    """Cross-validated accuracy for every (depth, width) configuration.

    Each cell trains one network per fold (the fold doubles as the
    early-stopping set) and averages the fold validation accuracies.
    Rows come back sorted by mean accuracy descending, ties broken by
    (depth, width) ascending, so the ranking is deterministic.
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    folds = kfold_splits(y, split.k_folds, split.seed)
    cells: list[GridCell] = []
    for depth in grid.depths:
        for width in grid.widths:
            accuracies = []
            for fold_index, (train_idx, val_idx) in enumerate(folds):
                config = NetworkConfig(
                    input_dim=x.shape[1],
                    hidden_layers=depth,
                    hidden_width=width,
                    activation=grid.activation,
                    seed=_cell_seed(split.seed, depth, width, fold_index),
                )
                _, log = train(
                    x[train_idx],
                    y[train_idx],
                    x[val_idx],
                    y[val_idx],
                    config,
                    max_epochs=grid.max_epochs,
                    patience=grid.patience,
                )
                accuracies.append(max(entry.val_accuracy for entry in log))
            cells.append(GridCell(depth, width, float(np.mean(accuracies))))
    cells.sort(key=lambda c: (-c.mean_val_accuracy, c.depth, c.width))
    return cells


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts and derived rates for one evaluation run."""

    accuracy: float
    error: float
    tp: int
    fp: int
    tn: int
    fn: int
    precision_label_1: float
    recall_label_1: float
    precision_label_0: float
    recall_label_0: float

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @staticmethod
    def from_counts(tp: int, fp: int, tn: int, fn: int) -> "EvalReport":
        total = tp + fp + tn + fn
        if total == 0:
            raise DataError("cannot evaluate an empty test set")
        accuracy = (tp + tn) / total

        def rate(num: int, den: int) -> float:
            return num / den if den else 0.0

        return EvalReport(
            accuracy=accuracy,
            error=1.0 - accuracy,
            tp=tp,
            fp=fp,
            tn=tn,
            fn=fn,
            precision_label_1=rate(tp, tp + fp),
            recall_label_1=rate(tp, tp + fn),
            precision_label_0=rate(tn, tn + fn),
            recall_label_0=rate(tn, tn + fp),
        )


def evaluate(
    model: PosteriorModel, features: np.ndarray, labels: np.ndarray
) -> EvalReport:
    """Confusion counts for the >= 0.5 decision rule on a labeled set."""
    y = np.asarray(labels, dtype=np.int64)
    if y.size == 0:
        raise DataError("cannot evaluate an empty test set")
    if np.any((y != 0) & (y != 1)):
        raise DataError("evaluation requires every pair to be labeled 0 or 1")
    probs = model.posteriors(np.asarray(features, dtype=np.float64))
    predicted = (probs[:, 1] >= 0.5).astype(np.int64)
    tp = int(np.sum((predicted == 1) & (y == 1)))
    fp = int(np.sum((predicted == 1) & (y == 0)))
    tn = int(np.sum((predicted == 0) & (y == 0)))
    fn = int(np.sum((predicted == 0) & (y == 1)))
    return EvalReport.from_counts(tp, fp, tn, fn)


def write_grid_csv(cells: list[GridCell], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["depth", "width", "mean_val_accuracy"])
        for cell in cells:
            writer.writerow([cell.depth, cell.width, repr(cell.mean_val_accuracy)])


def write_eval_report_csv(report: EvalReport, path: str | Path) -> None:
    """metric,value rows followed by a confusion-matrix block."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["metric", "value"])
        writer.writerow(["accuracy", repr(report.accuracy)])
        writer.writerow(["error", repr(report.error)])
        writer.writerow(["precision_label_1", repr(report.precision_label_1)])
        writer.writerow(["recall_label_1", repr(report.recall_label_1)])
        writer.writerow(["precision_label_0", repr(report.precision_label_0)])
        writer.writerow(["recall_label_0", repr(report.recall_label_0)])
        writer.writerow([])
        writer.writerow(["confusion", "pred_1", "pred_0"])
        writer.writerow(["actual_1", report.tp, report.fn])
        writer.writerow(["actual_0", report.fp, report.tn])


def format_eval_report(report: EvalReport) -> str:
    """Human-readable summary block for standard output."""
    lines = [
        f"pairs evaluated: {report.total}",
        f"accuracy: {report.accuracy:.4f}",
        f"error:    {report.error:.4f}",
        f"confusion: tp={report.tp} fp={report.fp} tn={report.tn} fn={report.fn}",
        (
            f"label 1: precision={report.precision_label_1:.4f} "
            f"recall={report.recall_label_1:.4f}"
        ),
        (
            f"label 0: precision={report.precision_label_0:.4f} "
            f"recall={report.recall_label_0:.4f}"
        ),
    ]
    return "\n".join(lines)
