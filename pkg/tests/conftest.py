import numpy as np
import pytest

from authorlink.features import featurize_dataset
from authorlink.records import (
    LabeledPair,
    PublicationRecord,
    build_dataset,
    normalize_dataset,
)
from authorlink.synthetic import SyntheticSpec, generate_synthetic


def make_record(record_id, name, coauthors=(), affiliation=None, paper=None, interest=None):
    return PublicationRecord(
        record_id=record_id,
        author_name=name,
        coauthors=tuple(coauthors),
        affiliation=affiliation,
        paper_keywords=None if paper is None else tuple(paper),
        interest_keywords=None if interest is None else tuple(interest),
    )


@pytest.fixture(scope="session")
def small_synthetic():
    """A feasible small corpus shared by training-oriented tests."""
    spec = SyntheticSpec(
        n_authors=8,
        records_per_author=5,
        negative_pair_ratio=4.0,
        seed=99,
    )
    return normalize_dataset(generate_synthetic(spec))


@pytest.fixture(scope="session")
def small_features(small_synthetic):
    features, labels, schema = featurize_dataset(small_synthetic)
    return features, labels, schema


@pytest.fixture()
def toy_dataset():
    """Four hand-built records and three labeled pairs."""
    records = [
        make_record(
            "a1",
            "hoang van kiem",
            coauthors=("nguyen minh", "tran bao"),
            affiliation="university of information technology",
            paper=("machine learning", "data mining"),
            interest=("neural network",),
        ),
        make_record(
            "a2",
            "kiem hoang",
            coauthors=("nguyen minh",),
            affiliation="university of information technology",
            paper=("machine learning",),
            interest=("neural network", "pattern recognition"),
        ),
        make_record(
            "b1",
            "le thi lan",
            coauthors=("pham duc",),
            affiliation="hanoi university of science",
            paper=("cryptography",),
            interest=None,
        ),
        make_record("b2", "lan le", coauthors=(), affiliation=None, paper=None, interest=None),
    ]
    pairs = [
        LabeledPair("a1", "a2", 1),
        LabeledPair("b1", "b2", 1),
        LabeledPair("a1", "b1", 0),
    ]
    return build_dataset(records, pairs, "toy")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
