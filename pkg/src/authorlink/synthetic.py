"""Synthetic ambiguous-author corpus generator.

Builds author identities with Vietnamese-style names, emits several
publication records per author whose instance names vary by a
configurable set of operations (part reordering, middle-name dropping,
initialing, diacritic stripping, typos), and derives labeled pairs:
every within-author record pair is a positive, and negatives are drawn
across authors with a preference for confusable names (shared name
tokens).  The default negative:positive ratio reproduces a heavily
imbalanced corpus of roughly 87% negatives.

Records come out raw (title-cased, diacritics intact); pass them
through the normal loaders or :func:`authorlink.records.normalize_dataset`
before featurizing.  Everything is deterministic given the seed.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

import numpy as np

from authorlink.errors import ConfigError, DataError
from authorlink.records import (
    LabeledPair,
    PairDataset,
    PublicationRecord,
    build_dataset,
    normalize_text,
)

__all__ = [
    "DEFAULT_MISSINGNESS",
    "DEFAULT_NEGATIVE_RATIO",
    "VARIANT_OPS",
    "SyntheticSpec",
    "generate_synthetic",
]

#: Supported name-variant operations.
VARIANT_OPS = (
    "part-permutation",
    "middle-name",
    "initialing",
    "diacritics",
    "typo",
)

#: Negatives per positive matching an 87.07% / 12.93% class imbalance.
DEFAULT_NEGATIVE_RATIO = 26591 / 3946

DEFAULT_MISSINGNESS: Mapping[str, float] = {
    "coauthors": 0.05,
    "affiliation": 0.2,
    "paper_keywords": 0.15,
    "interest_keywords": 0.3,
}

_FAMILY_NAMES = (
    "nguyễn", "trần", "lê", "phạm", "hoàng", "phan", "vũ", "bùi",
    "hồ", "ngô", "dương", "lý", "cao", "trương", "mai", "võ",
)
_MIDDLE_NAMES = (
    "văn", "thị", "hữu", "quang", "ngọc", "minh", "anh", "hoài",
    "xuân", "thanh", "công", "bá", "viết", "tuấn",
)
_GIVEN_NAMES = (
    "kiếm", "tươi", "bắc", "thành", "duy", "thủy", "bảo", "diên",
    "trụ", "hùng", "tín", "tiến", "nam", "lan", "hương", "sơn",
    "hải", "long", "phúc", "cường", "nhung", "trang", "tâm", "bình",
)

_AFFILIATIONS = (
    "university of information technology",
    "vietnam national university hanoi",
    "hcmc university of science",
    "hanoi university of science and technology",
    "can tho university",
    "danang university of technology",
    "hue university of sciences",
    "posts and telecommunications institute",
    "ton duc thang university",
    "international university hcmc",
    "fpt university",
    "vinh university",
)

_KEYWORDS = (
    "machine learning", "neural network", "data mining", "information retrieval",
    "digital library", "image processing", "natural language processing",
    "ontology", "semantic web", "pattern recognition", "computer vision",
    "software engineering", "distributed system", "database", "knowledge graph",
    "speech recognition", "feature extraction", "classification", "clustering",
    "record linkage", "entity resolution", "text mining", "web mining",
    "recommender system", "sensor network", "network security", "cryptography",
    "parallel computing", "grid computing", "cloud computing", "embedded system",
    "robotics", "human computer interaction", "bioinformatics", "e-learning",
    "geographic information system", "wireless network", "signal processing",
    "optimization", "time series analysis",
)


@dataclass(frozen=True)
class SyntheticSpec:
    """Knobs for one synthetic corpus.

    ``missingness`` maps attribute name to the per-record dropout
    probability; attributes not listed never go missing.  The author
    name itself is always present.
    """

    n_authors: int = 10
    records_per_author: int = 10
    variant_ops: frozenset[str] = frozenset(VARIANT_OPS)
    missingness: Mapping[str, float] = field(
        default_factory=lambda: dict(DEFAULT_MISSINGNESS)
    )
    negative_pair_ratio: float = DEFAULT_NEGATIVE_RATIO
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_authors < 2:
            raise ConfigError(f"n_authors must be >= 2, got {self.n_authors}")
        if self.records_per_author < 2:
            raise ConfigError(
                f"records_per_author must be >= 2, got {self.records_per_author}"
            )
        unknown = set(self.variant_ops) - set(VARIANT_OPS)
        if unknown:
            raise ConfigError(
                f"unknown variant ops {sorted(unknown)}; expected subset of {VARIANT_OPS}"
            )
        for attribute, rate in self.missingness.items():
            if attribute not in DEFAULT_MISSINGNESS:
                raise ConfigError(f"unknown missingness attribute {attribute!r}")
            if not 0.0 <= rate <= 1.0:
                raise ConfigError(
                    f"missingness rate for {attribute!r} must be in [0, 1], got {rate}"
                )
        if self.negative_pair_ratio <= 0:
            raise ConfigError(
                f"negative_pair_ratio must be positive, got {self.negative_pair_ratio}"
            )


@dataclass(frozen=True)
class _Author:
    family: str
    middle: str
    given: str
    coauthor_pool: tuple[str, ...]
    affiliations: tuple[str, ...]
    paper_pool: tuple[str, ...]
    interest_pool: tuple[str, ...]


def _pick(rng: np.random.Generator, pool: tuple[str, ...]) -> str:
    return pool[int(rng.integers(len(pool)))]


def _sample(
    rng: np.random.Generator, pool: tuple[str, ...], count: int
) -> list[str]:
    count = min(count, len(pool))
    idx = rng.choice(len(pool), size=count, replace=False)
    return [pool[int(i)] for i in idx]


def _full_name(rng: np.random.Generator) -> str:
    if rng.random() < 0.5:
        parts = [_pick(rng, _FAMILY_NAMES), _pick(rng, _MIDDLE_NAMES), _pick(rng, _GIVEN_NAMES)]
    else:
        parts = [_pick(rng, _FAMILY_NAMES), _pick(rng, _GIVEN_NAMES)]
    return " ".join(parts)


def _make_authors(spec: SyntheticSpec, rng: np.random.Generator) -> list[_Author]:
    authors: list[_Author] = []
    used: set[tuple[str, str, str]] = set()
    for i in range(spec.n_authors):
        for _ in range(1000):
            family = _pick(rng, _FAMILY_NAMES)
            middle = _pick(rng, _MIDDLE_NAMES)
            given = _pick(rng, _GIVEN_NAMES)
            # Force confusable names: later authors often reuse an earlier
            # author's family or given name, so hard negatives exist.
            if authors and rng.random() < 0.6:
                other = authors[int(rng.integers(len(authors)))]
                if rng.random() < 0.5:
                    family = other.family
                else:
                    given = other.given
            if (family, middle, given) not in used:
                used.add((family, middle, given))
                break
        else:
            raise DataError(
                f"could not draw {spec.n_authors} distinct author names from the pools"
            )
        coauthors = tuple(
            dict.fromkeys(_full_name(rng) for _ in range(int(rng.integers(6, 11))))
        )
        primary = _pick(rng, _AFFILIATIONS)
        if rng.random() < 0.3:
            secondary = _pick(rng, _AFFILIATIONS)
            affiliations = (primary, secondary) if secondary != primary else (primary,)
        else:
            affiliations = (primary,)
        authors.append(
            _Author(
                family=family,
                middle=middle,
                given=given,
                coauthor_pool=coauthors,
                affiliations=affiliations,
                paper_pool=tuple(_sample(rng, _KEYWORDS, int(rng.integers(8, 15)))),
                interest_pool=tuple(_sample(rng, _KEYWORDS, int(rng.integers(6, 11)))),
            )
        )
    return authors


def _strip_marks(text: str) -> str:
    # Keep casing; normalize_text would also lowercase.
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def _typo(rng: np.random.Generator, word: str) -> str:
    if len(word) < 3:
        return word
    pos = int(rng.integers(1, len(word) - 1))
    kind = int(rng.integers(3))
    if kind == 0:  # drop a character
        return word[:pos] + word[pos + 1 :]
    if kind == 1:  # duplicate a character
        return word[:pos] + word[pos] + word[pos:]
    # swap two adjacent characters
    return word[:pos] + word[pos + 1] + word[pos] + word[pos + 2 :]


def _instance_name(
    author: _Author, ops: frozenset[str], rng: np.random.Generator
) -> str:
    include_middle = True
    if "middle-name" in ops:
        include_middle = rng.random() < 0.5
    given_first = "part-permutation" in ops and rng.random() < 0.5
    if given_first:
        parts = [author.given] + ([author.middle] if include_middle else []) + [author.family]
    else:
        parts = [author.family] + ([author.middle] if include_middle else []) + [author.given]
    if "initialing" in ops and rng.random() < 0.3:
        # Shorten one of the outer parts to an initial.
        index = 0 if rng.random() < 0.5 else len(parts) - 1
        parts[index] = parts[index][0] + "."
    if "typo" in ops and rng.random() < 0.15:
        index = int(rng.integers(len(parts)))
        parts[index] = _typo(rng, parts[index])
    name = " ".join(parts)
    if "diacritics" in ops and rng.random() < 0.5:
        name = _strip_marks(name)
    return name.title()


def _make_record(
    record_id: str,
    author: _Author,
    spec: SyntheticSpec,
    rng: np.random.Generator,
) -> PublicationRecord:
    missing = spec.missingness

    def dropped(attribute: str) -> bool:
        return rng.random() < missing.get(attribute, 0.0)

    name = _instance_name(author, spec.variant_ops, rng)
    coauthors: tuple[str, ...] = ()
    if not dropped("coauthors"):
        coauthors = tuple(
            n.title() for n in _sample(rng, author.coauthor_pool, int(rng.integers(1, 5)))
        )
    affiliation = None
    if not dropped("affiliation"):
        affiliation = _pick(rng, author.affiliations).title()
    paper_keywords = None
    if not dropped("paper_keywords"):
        paper_keywords = tuple(_sample(rng, author.paper_pool, int(rng.integers(2, 6))))
    interest_keywords = None
    if not dropped("interest_keywords"):
        interest_keywords = tuple(
            _sample(rng, author.interest_pool, int(rng.integers(2, 5)))
        )
    return PublicationRecord(
        record_id=record_id,
        author_name=name,
        coauthors=coauthors,
        affiliation=affiliation,
        paper_keywords=paper_keywords,
        interest_keywords=interest_keywords,
    )


def generate_synthetic(spec: SyntheticSpec) -> PairDataset:
    """Deterministic synthetic corpus of records and labeled pairs.

    Positives are all within-author record pairs; negatives are
    round(ratio * positives) cross-author pairs, preferring pairs whose
    normalized names share at least one token.  Raises when the spec
    asks for more negatives than cross-author pairs exist.
    """
    rng = np.random.default_rng(spec.seed)
    authors = _make_authors(spec, rng)
    records: list[PublicationRecord] = []
    by_author: list[list[str]] = []
    counter = 0
    for author in authors:
        ids: list[str] = []
        for _ in range(spec.records_per_author):
            record_id = f"r{counter:05d}"
            counter += 1
            records.append(_make_record(record_id, author, spec, rng))
            ids.append(record_id)
        by_author.append(ids)

    pairs: list[LabeledPair] = [
        LabeledPair(a, b, 1)
        for ids in by_author
        for a, b in combinations(ids, 2)
    ]
    n_positive = len(pairs)
    n_negative = int(round(spec.negative_pair_ratio * n_positive))

    name_tokens = {
        r.record_id: frozenset(normalize_text(r.author_name).split()) for r in records
    }
    hard: list[tuple[str, str]] = []
    easy: list[tuple[str, str]] = []
    for left_ids, right_ids in combinations(by_author, 2):
        for a in left_ids:
            for b in right_ids:
                if name_tokens[a] & name_tokens[b]:
                    hard.append((a, b))
                else:
                    easy.append((a, b))
    if n_negative > len(hard) + len(easy):
        raise DataError(
            f"spec requests {n_negative} negative pairs but only "
            f"{len(hard) + len(easy)} cross-author pairs exist"
        )
    rng.shuffle(hard)
    rng.shuffle(easy)
    chosen = hard[:n_negative]
    if len(chosen) < n_negative:
        chosen = chosen + easy[: n_negative - len(chosen)]
    pairs.extend(LabeledPair(a, b, 0) for a, b in chosen)

    provenance = (
        f"synthetic(seed={spec.seed}, authors={spec.n_authors}, "
        f"records_per_author={spec.records_per_author})"
    )
    return build_dataset(records, pairs, provenance)
