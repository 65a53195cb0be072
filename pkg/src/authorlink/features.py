"""Pair featurization: 6 similarity measures x 5 record attributes.

The feature vector is attribute-major: for each attribute in
``FeatureSchema.attributes`` order, the six measures in
``FeatureSchema.measures`` order.  A trained model is only valid for
the schema version it was trained on.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from authorlink import metrics
from authorlink.errors import ParseError, SchemaMismatchError
from authorlink.records import ATTRIBUTES, LIST_ATTRIBUTES, PairDataset, PublicationRecord

__all__ = [
    "CURRENT_SCHEMA",
    "FEATURE_SCHEMA_VERSION",
    "FeatureSchema",
    "featurize_dataset",
    "featurize_pair",
    "read_feature_csv",
    "write_feature_csv",
]

MEASURES = (
    "jaccard",
    "levenshtein",
    "jaro",
    "jaro_winkler",
    "smith_waterman",
    "monge_elkan",
)

FEATURE_SCHEMA_VERSION = 1

#: Default value for every measure of an attribute missing on either record.
MISSING_VALUE = 0.0


@dataclass(frozen=True)
class FeatureSchema:
    """Fixed feature layout: attributes x measures, attribute-major."""

    attributes: tuple[str, ...] = ATTRIBUTES
    measures: tuple[str, ...] = MEASURES
    version: int = FEATURE_SCHEMA_VERSION

    @property
    def length(self) -> int:
        return len(self.attributes) * len(self.measures)

    def column_names(self) -> list[str]:
        return [f"{a}.{m}" for a in self.attributes for m in self.measures]


CURRENT_SCHEMA = FeatureSchema()


@dataclass(frozen=True)
class _AttributeView:
    """Comparison-ready forms of one present attribute value."""

    text: str
    token_seq: tuple[str, ...]
    tokens: frozenset[str]


def _attribute_view(record: PublicationRecord, attribute: str) -> _AttributeView | None:
    """None when the attribute is missing (or carries no tokens)."""
    value = getattr(record, attribute)
    if attribute in LIST_ATTRIBUTES:
        if not value:
            return None
        # Edit measures compare the canonical joined string; token measures
        # use the union of tokens across items.
        text = " ".join(sorted(value))
        token_seq = tuple(sorted({t for item in value for t in item.split()}))
    else:
        if not value:
            return None
        text = value
        token_seq = tuple(value.split())
    return _AttributeView(text, token_seq, frozenset(token_seq))


def _measure_block(left: _AttributeView, right: _AttributeView) -> tuple[float, ...]:
    return (
        metrics.jaccard_sim(left.tokens, right.tokens),
        metrics.levenshtein_sim(left.text, right.text),
        metrics.jaro(left.text, right.text),
        metrics.jaro_winkler(left.text, right.text),
        metrics.smith_waterman_sim(left.text, right.text),
        metrics.monge_elkan(left.token_seq, right.token_seq),
    )


def _record_views(record: PublicationRecord) -> tuple[_AttributeView | None, ...]:
    return tuple(_attribute_view(record, a) for a in CURRENT_SCHEMA.attributes)


def _featurize_views(
    left_views: tuple[_AttributeView | None, ...],
    right_views: tuple[_AttributeView | None, ...],
) -> np.ndarray:
    values = np.empty(CURRENT_SCHEMA.length, dtype=np.float64)
    n_measures = len(CURRENT_SCHEMA.measures)
    for i, (lv, rv) in enumerate(zip(left_views, right_views)):
        base = i * n_measures
        if lv is None or rv is None:
            values[base : base + n_measures] = MISSING_VALUE
        else:
            values[base : base + n_measures] = _measure_block(lv, rv)
    return values


def featurize_pair(left: PublicationRecord, right: PublicationRecord) -> np.ndarray:
    """30-dimensional similarity vector for one record pair.

    Records must already be normalized.  Symmetric in its arguments;
    every entry lies in [0, 1]; an attribute missing on either side
    contributes a block of zeros.
    """
    return _featurize_views(_record_views(left), _record_views(right))


def featurize_dataset(
    dataset: PairDataset,
) -> tuple[np.ndarray, np.ndarray, FeatureSchema]:
    """Feature matrix and label vector for every pair, in dataset order.

    Labels are int64 with -1 standing for "unlabeled".  Deterministic:
    equal datasets produce bit-identical outputs.
    """
    n = len(dataset.pairs)
    features = np.empty((n, CURRENT_SCHEMA.length), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    view_cache: dict[str, tuple[_AttributeView | None, ...]] = {}

    def views_for(record_id: str) -> tuple[_AttributeView | None, ...]:
        views = view_cache.get(record_id)
        if views is None:
            views = _record_views(dataset.records[record_id])
            view_cache[record_id] = views
        return views

    for row, pair in enumerate(dataset.pairs):
        features[row] = _featurize_views(views_for(pair.left_id), views_for(pair.right_id))
        labels[row] = -1 if pair.label is None else pair.label
    return features, labels, CURRENT_SCHEMA


def write_feature_csv(
    features: np.ndarray,
    labels: np.ndarray,
    path: str | Path,
    schema: FeatureSchema = CURRENT_SCHEMA,
) -> None:
    """Dump features to CSV: one column per feature plus ``label``.

    Floats are written with ``repr`` so reading the file back restores
    them bit-exactly; unlabeled rows get an empty label cell.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(schema.column_names() + ["label"])
        for row, label in zip(features, labels):
            cells = [repr(float(v)) for v in row]
            cells.append("" if label < 0 else str(int(label)))
            writer.writerow(cells)


def read_feature_csv(
    path: str | Path, schema: FeatureSchema = CURRENT_SCHEMA
) -> tuple[np.ndarray, np.ndarray]:
    """Read a feature CSV back into (features, labels).

    Raises SchemaMismatchError when the column layout is not the current
    schema's, and ParseError on malformed rows.
    """
    path = Path(path)
    expected = schema.column_names() + ["label"]
    rows: list[list[float]] = []
    labels: list[int] = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or list(header) != expected:
            raise SchemaMismatchError(
                f"{path}: feature columns do not match schema version {schema.version}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected):
                raise ParseError(
                    f"{path}:{lineno}: expected {len(expected)} columns, got {len(row)}"
                )
            try:
                rows.append([float(cell) for cell in row[:-1]])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric feature value") from None
            label_text = row[-1].strip()
            if label_text == "":
                labels.append(-1)
            elif label_text in ("0", "1"):
                labels.append(int(label_text))
            else:
                raise ParseError(
                    f"{path}:{lineno}: label must be 0, 1, or empty, got {label_text!r}"
                )
    features = np.asarray(rows, dtype=np.float64).reshape(len(rows), schema.length)
    return features, np.asarray(labels, dtype=np.int64)
