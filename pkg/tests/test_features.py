"""Featurization: layout, symmetry, missing-attribute handling."""

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given
from hypothesis import strategies as st

from authorlink import metrics
from authorlink.errors import SchemaMismatchError
from authorlink.features import (
    CURRENT_SCHEMA,
    featurize_dataset,
    featurize_pair,
    read_feature_csv,
    write_feature_csv,
)
from authorlink.records import LabeledPair, build_dataset
from conftest import make_record
from helpers import brute_force_monge_elkan

FULL = dict(
    coauthors=("nguyen minh", "tran bao"),
    affiliation="fpt university",
    paper=("machine learning",),
    interest=("neural network",),
)


def feature_index(attribute: str, measure: str) -> int:
    return (
        CURRENT_SCHEMA.attributes.index(attribute) * len(CURRENT_SCHEMA.measures)
        + CURRENT_SCHEMA.measures.index(measure)
    )


def test_schema_shape():
    assert CURRENT_SCHEMA.length == 30
    names = CURRENT_SCHEMA.column_names()
    assert len(names) == 30
    assert names[0] == "author_name.jaccard"
    assert names[5] == "author_name.monge_elkan"
    assert names[-1] == "interest_keywords.monge_elkan"


def test_identical_records_score_all_ones():
    left = make_record("l", "hoang van kiem", **FULL)
    right = make_record("r", "hoang van kiem", **FULL)
    npt.assert_array_equal(featurize_pair(left, right), np.ones(30))


def test_missing_affiliation_zeroes_only_its_block():
    base = dict(FULL)
    left_full = make_record("l", "hoang kiem", **base)
    right_full = make_record("r", "hoang kiem", **base)
    missing = dict(base, affiliation=None)
    left_missing = make_record("l", "hoang kiem", **missing)
    right_missing = make_record("r", "hoang kiem", **missing)

    vec = featurize_pair(left_missing, right_missing)
    block = slice(feature_index("affiliation", "jaccard"), feature_index("affiliation", "monge_elkan") + 1)
    npt.assert_array_equal(vec[block], np.zeros(6))
    full_vec = featurize_pair(left_full, right_full)
    outside = np.ones(30, dtype=bool)
    outside[block] = False
    npt.assert_array_equal(vec[outside], full_vec[outside])


def test_one_side_missing_also_zeroes_block():
    left = make_record("l", "hoang kiem", **FULL)
    right = make_record("r", "hoang kiem", **dict(FULL, affiliation=None))
    vec = featurize_pair(left, right)
    assert vec[feature_index("affiliation", "levenshtein")] == 0.0


def test_name_only_pair_matches_measure_oracles():
    left = make_record("l", "kiem hoang")
    right = make_record("r", "hoang van kiem")
    vec = featurize_pair(left, right)

    assert vec[feature_index("author_name", "jaccard")] == pytest.approx(2 / 3)
    expected_me = brute_force_monge_elkan(
        ("hoang", "kiem"), ("hoang", "kiem", "van"), metrics.jaro_winkler
    )
    assert vec[feature_index("author_name", "monge_elkan")] == pytest.approx(expected_me)
    assert vec[feature_index("author_name", "levenshtein")] == metrics.levenshtein_sim(
        "kiem hoang", "hoang van kiem"
    )
    assert vec[feature_index("author_name", "jaro")] == metrics.jaro(
        "kiem hoang", "hoang van kiem"
    )
    assert vec[feature_index("author_name", "smith_waterman")] == metrics.smith_waterman_sim(
        "kiem hoang", "hoang van kiem"
    )
    # Every non-name block is missing on both sides.
    npt.assert_array_equal(vec[6:], np.zeros(24))


def test_list_attributes_use_sorted_join_and_token_union():
    left = make_record("l", "x", paper=("data mining", "ai"))
    right = make_record("r", "x", paper=("ai", "data mining"))
    vec = featurize_pair(left, right)
    block = slice(feature_index("paper_keywords", "jaccard"), feature_index("paper_keywords", "monge_elkan") + 1)
    npt.assert_array_equal(vec[block], np.ones(6))

    other = make_record("o", "x", paper=("ai",))
    vec2 = featurize_pair(left, other)
    assert vec2[feature_index("paper_keywords", "jaccard")] == pytest.approx(1 / 3)
    assert vec2[feature_index("paper_keywords", "levenshtein")] == metrics.levenshtein_sim(
        "ai data mining", "ai"
    )


def test_empty_list_treated_as_missing():
    left = make_record("l", "x", coauthors=())
    right = make_record("r", "x", coauthors=("someone",))
    vec = featurize_pair(left, right)
    assert vec[feature_index("coauthors", "jaccard")] == 0.0


def test_symmetry_on_handmade_records():
    left = make_record("l", "kiem hoang", **FULL)
    right = make_record("r", "hoang van kiem", coauthors=("nguyen minh",))
    npt.assert_array_equal(featurize_pair(left, right), featurize_pair(right, left))


names = st.text(alphabet="abcdef ", min_size=1, max_size=12).filter(lambda s: s.strip())


@given(names, names, st.booleans())
def test_symmetry_and_bounds_fuzz(name_a, name_b, with_affiliation):
    left = make_record("l", " ".join(name_a.split()), affiliation="inst a" if with_affiliation else None)
    right = make_record("r", " ".join(name_b.split()), affiliation="inst b")
    forward_vec = featurize_pair(left, right)
    npt.assert_array_equal(forward_vec, featurize_pair(right, left))
    assert np.all(forward_vec >= 0.0) and np.all(forward_vec <= 1.0)


def test_missing_block_unaffected_by_counterpart_perturbation():
    left = make_record("l", "x", affiliation=None)
    for text in ("aaa", "bbb", "totally different"):
        right = make_record("r", "x", affiliation=text)
        vec = featurize_pair(left, right)
        assert vec[feature_index("affiliation", "monge_elkan")] == 0.0


class TestFeaturizeDataset:
    def test_empty_dataset(self):
        dataset = build_dataset([make_record("a", "x"), make_record("b", "y")], [])
        features, labels, schema = featurize_dataset(dataset)
        assert features.shape == (0, 30)
        assert labels.shape == (0,)
        assert schema == CURRENT_SCHEMA

    def test_order_and_labels(self, toy_dataset):
        features, labels, _ = featurize_dataset(toy_dataset)
        assert features.shape == (3, 30)
        npt.assert_array_equal(labels, [1, 1, 0])
        pair = toy_dataset.pairs[0]
        expected = featurize_pair(
            toy_dataset.records[pair.left_id], toy_dataset.records[pair.right_id]
        )
        npt.assert_array_equal(features[0], expected)

    def test_deterministic(self, toy_dataset):
        a = featurize_dataset(toy_dataset)[0]
        b = featurize_dataset(toy_dataset)[0]
        npt.assert_array_equal(a, b)


class TestFeatureCsv:
    def test_round_trip_exact(self, tmp_path, toy_dataset):
        features, labels, schema = featurize_dataset(toy_dataset)
        path = tmp_path / "features.csv"
        write_feature_csv(features, labels, path, schema)
        loaded_features, loaded_labels = read_feature_csv(path)
        npt.assert_array_equal(loaded_features, features)
        npt.assert_array_equal(loaded_labels, labels)

    def test_header_mismatch_raises(self, tmp_path):
        path = tmp_path / "features.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(SchemaMismatchError):
            read_feature_csv(path)
