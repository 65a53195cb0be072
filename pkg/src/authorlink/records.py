"""Publication records, labeled pairs, text normalization, and file IO.

File formats:

* records: JSON Lines, one object per line with keys ``record_id``,
  ``author_name``, ``coauthors`` (array), ``affiliation`` (string or
  null), ``paper_keywords`` (array or null), ``interest_keywords``
  (array or null), UTF-8;
* pairs: CSV with header ``left_id,right_id,label`` where label is 0, 1,
  or empty for unlabeled pairs.

Loading normalizes every textual attribute; loaded datasets are
immutable and safe to share across threads.
"""

from __future__ import annotations

import csv
import json
import re
import unicodedata
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

from authorlink.errors import IntegrityError, ParseError

__all__ = [
    "LabeledPair",
    "PairDataset",
    "PublicationRecord",
    "build_dataset",
    "load_labeled_pairs",
    "load_records",
    "normalize_dataset",
    "normalize_record",
    "normalize_text",
    "pair_key",
    "save_pairs",
    "save_records",
]

_WS_RE = re.compile(r"\s+")

PAIRS_HEADER = ("left_id", "right_id", "label")

#: The five comparable record attributes, in feature order.
ATTRIBUTES = (
    "author_name",
    "coauthors",
    "affiliation",
    "paper_keywords",
    "interest_keywords",
)

LIST_ATTRIBUTES = frozenset({"coauthors", "paper_keywords", "interest_keywords"})


def normalize_text(raw: str) -> str:
    """Canonical text form: NFD-decomposed with combining marks removed,
    lowercased, inner whitespace collapsed to single spaces, trimmed.

    Deterministic and idempotent.
    """
    decomposed = unicodedata.normalize("NFD", raw)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return _WS_RE.sub(" ", stripped.lower()).strip()


@dataclass(frozen=True)
class PublicationRecord:
    """One bibliographic record with the five comparable attributes.

    Missing attributes are explicit: ``None`` for scalar attributes and
    ``None`` or an empty tuple for list attributes, never an empty
    string standing in for "absent".
    """

    record_id: str
    author_name: str
    coauthors: tuple[str, ...] = ()
    affiliation: str | None = None
    paper_keywords: tuple[str, ...] | None = None
    interest_keywords: tuple[str, ...] | None = None


@dataclass(frozen=True)
class LabeledPair:
    """Two record ids plus an optional same-author label (1, 0, or None).

    Pairs are unordered: (a, b) and (b, a) denote the same pair and may
    not both appear in one dataset.
    """

    left_id: str
    right_id: str
    label: int | None = None

    def key(self) -> tuple[str, str]:
        return pair_key(self.left_id, self.right_id)


@dataclass(frozen=True)
class PairDataset:
    """Immutable records map plus labeled pairs."""

    records: Mapping[str, PublicationRecord]
    pairs: tuple[LabeledPair, ...]
    provenance: str = ""

    def class_counts(self) -> dict[int | None, int]:
        """Pair counts per label value (0, 1, and None for unlabeled)."""
        counts: dict[int | None, int] = {0: 0, 1: 0, None: 0}
        for pair in self.pairs:
            counts[pair.label] += 1
        return counts


def pair_key(left_id: str, right_id: str) -> tuple[str, str]:
    """Canonical unordered-pair key: lexicographically smaller id first."""
    if left_id == right_id:
        raise IntegrityError(f"a record cannot be paired with itself: {left_id!r}")
    return (left_id, right_id) if left_id < right_id else (right_id, left_id)


def normalize_record(record: PublicationRecord) -> PublicationRecord:
    """Normalized copy of a record; raises when the author name vanishes.

    Scalar attributes that normalize to the empty string become None,
    keeping missingness explicit; empty list items are dropped.
    """
    name = normalize_text(record.author_name)
    if not name:
        raise IntegrityError(
            f"record {record.record_id!r}: author_name is empty after normalization"
        )
    affiliation = None
    if record.affiliation is not None:
        affiliation = normalize_text(record.affiliation) or None
    return replace(
        record,
        author_name=name,
        coauthors=_normalize_items(record.coauthors) or (),
        affiliation=affiliation,
        paper_keywords=_normalize_items(record.paper_keywords),
        interest_keywords=_normalize_items(record.interest_keywords),
    )


def _normalize_items(items: Iterable[str] | None) -> tuple[str, ...] | None:
    if items is None:
        return None
    normalized = [normalize_text(item) for item in items]
    return tuple(item for item in normalized if item)


def build_dataset(
    records: Iterable[PublicationRecord],
    pairs: Iterable[LabeledPair],
    provenance: str = "",
) -> PairDataset:
    """Assemble a dataset, enforcing all pair/record invariants."""
    record_map: dict[str, PublicationRecord] = {}
    for record in records:
        if not record.record_id:
            raise IntegrityError("record_id must be non-empty")
        if record.record_id in record_map:
            raise IntegrityError(f"duplicate record_id {record.record_id!r}")
        record_map[record.record_id] = record
    seen: dict[tuple[str, str], LabeledPair] = {}
    pair_list: list[LabeledPair] = []
    for pair in pairs:
        for rid in (pair.left_id, pair.right_id):
            if rid not in record_map:
                raise IntegrityError(f"pair references unknown record id {rid!r}")
        key = pair.key()
        if key in seen:
            raise IntegrityError(f"duplicate pair {key[0]!r}/{key[1]!r}")
        if pair.label not in (0, 1, None):
            raise IntegrityError(f"label must be 0, 1, or absent, got {pair.label!r}")
        seen[key] = pair
        pair_list.append(pair)
    return PairDataset(record_map, tuple(pair_list), provenance)


def normalize_dataset(dataset: PairDataset) -> PairDataset:
    """Dataset with every record normalized, pairs untouched."""
    normalized = [normalize_record(r) for r in dataset.records.values()]
    return build_dataset(normalized, dataset.pairs, dataset.provenance)


def load_records(path: str | Path) -> list[PublicationRecord]:
    """Parse and normalize a JSON-Lines records file.

    Raises ParseError naming the offending line for malformed input and
    IntegrityError (naming both lines) for duplicate record ids.
    """
    path = Path(path)
    records: list[PublicationRecord] = []
    seen: dict[str, int] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            record = normalize_record(_record_from_obj(obj, path, lineno))
            if record.record_id in seen:
                raise IntegrityError(
                    f"{path}: duplicate record_id {record.record_id!r} "
                    f"on lines {seen[record.record_id]} and {lineno}"
                )
            seen[record.record_id] = lineno
            records.append(record)
    return records


def _record_from_obj(obj: object, path: Path, lineno: int) -> PublicationRecord:
    where = f"{path}:{lineno}"
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected a JSON object")
    record_id = obj.get("record_id")
    if not isinstance(record_id, str) or not record_id:
        raise ParseError(f"{where}: record_id must be a non-empty string")
    author_name = obj.get("author_name")
    if not isinstance(author_name, str) or not author_name.strip():
        raise ParseError(f"{where}: author_name must be a non-empty string")
    affiliation = obj.get("affiliation")
    if affiliation is not None and not isinstance(affiliation, str):
        raise ParseError(f"{where}: affiliation must be a string or null")
    return PublicationRecord(
        record_id=record_id,
        author_name=author_name,
        coauthors=_string_array(obj.get("coauthors", []), "coauthors", where) or (),
        affiliation=affiliation,
        paper_keywords=_string_array(obj.get("paper_keywords"), "paper_keywords", where),
        interest_keywords=_string_array(
            obj.get("interest_keywords"), "interest_keywords", where
        ),
    )


def _string_array(
    value: object, key: str, where: str
) -> tuple[str, ...] | None:
    if value is None:
        return None
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(f"{where}: {key} must be an array of strings or null")
    return tuple(value)


def save_records(records: Iterable[PublicationRecord], path: str | Path) -> None:
    """Write records as JSON Lines (keys sorted, UTF-8, one per line)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            obj = {
                "record_id": record.record_id,
                "author_name": record.author_name,
                "coauthors": list(record.coauthors),
                "affiliation": record.affiliation,
                "paper_keywords": None
                if record.paper_keywords is None
                else list(record.paper_keywords),
                "interest_keywords": None
                if record.interest_keywords is None
                else list(record.interest_keywords),
            }
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def load_labeled_pairs(
    path: str | Path,
    records: Mapping[str, PublicationRecord],
    provenance: str = "",
) -> PairDataset:
    """Parse a pairs CSV against an already-loaded record map.

    Enforces: every id resolves, no duplicate unordered pairs, labels in
    {0, 1} or empty.  An empty file yields a dataset with zero pairs.
    """
    path = Path(path)
    pairs: list[LabeledPair] = []
    seen: dict[tuple[str, str], int] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is not None:
            if tuple(h.strip() for h in header) != PAIRS_HEADER:
                raise ParseError(
                    f"{path}:1: expected header {','.join(PAIRS_HEADER)!r}, "
                    f"got {','.join(header)!r}"
                )
            for lineno, row in enumerate(reader, start=2):
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if len(row) != 3:
                    raise ParseError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
                left, right, label_text = (cell.strip() for cell in row)
                if label_text == "":
                    label: int | None = None
                elif label_text in ("0", "1"):
                    label = int(label_text)
                else:
                    raise ParseError(
                        f"{path}:{lineno}: label must be 0, 1, or empty, got {label_text!r}"
                    )
                key = pair_key(left, right)
                if key in seen:
                    raise IntegrityError(
                        f"{path}: duplicate pair {left!r}/{right!r} "
                        f"on lines {seen[key]} and {lineno}"
                    )
                seen[key] = lineno
                pairs.append(LabeledPair(left, right, label))
    dataset = build_dataset(records.values(), pairs, provenance or str(path))
    return dataset


def save_pairs(pairs: Iterable[LabeledPair], path: str | Path) -> None:
    """Write pairs as CSV with the standard header."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PAIRS_HEADER)
        for pair in pairs:
            label = "" if pair.label is None else str(pair.label)
            writer.writerow([pair.left_id, pair.right_id, label])
