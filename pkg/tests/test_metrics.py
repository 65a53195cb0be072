"""Unit tests for the six similarity measures."""

import pytest

from authorlink.errors import ConfigError
from authorlink.metrics import (
    AlignmentParams,
    jaccard_sim,
    jaro,
    jaro_winkler,
    levenshtein_sim,
    monge_elkan,
    smith_waterman_sim,
    token_list,
    token_set,
)
from helpers import brute_force_monge_elkan, naive_edit_distance


class TestLevenshtein:
    def test_identical(self):
        assert levenshtein_sim("abc", "abc") == 1.0

    def test_empty_vs_nonempty(self):
        assert levenshtein_sim("", "abc") == 0.0
        assert levenshtein_sim("abc", "") == 0.0

    def test_both_empty(self):
        assert levenshtein_sim("", "") == 1.0

    def test_kitten_sitting(self):
        # Brute-force recursion confirms the distance is 3.
        assert naive_edit_distance("kitten", "sitting") == 3
        assert levenshtein_sim("kitten", "sitting") == pytest.approx(1 - 3 / 7)


class TestJaro:
    def test_identical(self):
        assert jaro("MARTHA", "MARTHA") == 1.0

    def test_disjoint(self):
        assert jaro("abc", "xyz") == 0.0

    def test_martha_marhta(self):
        # m = 6 matches, one transposed pair: (1 + 1 + 5/6) / 3.
        assert jaro("MARTHA", "MARHTA") == pytest.approx(0.9444444444, abs=1e-9)

    def test_both_empty(self):
        assert jaro("", "") == 1.0

    def test_single_chars_outside_window(self):
        assert jaro("a", "a") == 1.0
        assert jaro("a", "b") == 0.0


class TestJaroWinkler:
    def test_identical(self):
        assert jaro_winkler("abc", "abc") == 1.0

    def test_no_match(self):
        assert jaro_winkler("abc", "xyz") == 0.0

    def test_martha_marhta(self):
        # 0.9444 + 3 * 0.1 * (1 - 0.9444)
        assert jaro_winkler("MARTHA", "MARHTA") == pytest.approx(0.9611111111, abs=1e-9)

    def test_prefix_capped_at_four(self):
        j = jaro("abcdefgh", "abcdexyz")
        assert jaro_winkler("abcdefgh", "abcdexyz") == pytest.approx(j + 4 * 0.1 * (1 - j))

    def test_boost_applies_at_low_jaro(self):
        # No boost threshold: any shared prefix lifts the score.
        a, b = "ax", "aq"
        assert jaro_winkler(a, b) > jaro(a, b)


class TestJaccard:
    def test_identical_sets(self):
        assert jaccard_sim({"a", "b", "c"}, {"a", "b", "c"}) == 1.0

    def test_disjoint(self):
        assert jaccard_sim({"a"}, {"b"}) == 0.0

    def test_partial_overlap(self):
        assert jaccard_sim({"a", "b", "c"}, {"b", "c", "d"}) == 0.5

    def test_both_empty(self):
        assert jaccard_sim(set(), set()) == 1.0

    def test_accepts_iterables(self):
        assert jaccard_sim(["a", "a", "b"], ("b", "a")) == 1.0


class TestSmithWaterman:
    def test_identity(self):
        assert smith_waterman_sim("abcd", "abcd") == 1.0

    def test_no_positive_cell(self):
        assert smith_waterman_sim("aaa", "zzz") == 0.0

    def test_substring(self):
        # Local score 2 against bound 1 * min(4, 2).
        assert smith_waterman_sim("abcd", "bc") == 1.0

    def test_empty(self):
        assert smith_waterman_sim("", "abc") == 0.0
        assert smith_waterman_sim("", "") == 0.0

    def test_gap_alignment(self):
        # "ab-d" vs "abd": 3 matches + 1 gap = 2, bound 3.
        assert smith_waterman_sim("abcd", "abd") == pytest.approx(2 / 3)

    def test_params_validation(self):
        with pytest.raises(ConfigError):
            AlignmentParams(match_score=0)
        with pytest.raises(ConfigError):
            AlignmentParams(mismatch_penalty=0.5)
        with pytest.raises(ConfigError):
            AlignmentParams(gap_penalty=1.0)

    def test_custom_params(self):
        params = AlignmentParams(match_score=2.0, mismatch_penalty=-1.0, gap_penalty=-0.5)
        assert smith_waterman_sim("abc", "abc", params) == 1.0


class TestMongeElkan:
    def test_identical_lists(self):
        assert monge_elkan(["kiem", "hoang"], ["kiem", "hoang"]) == 1.0

    def test_single_tokens_reduce_to_inner(self):
        assert monge_elkan(["kiem"], ["kiem"]) == jaro_winkler("kiem", "kiem") == 1.0
        assert monge_elkan(["abc"], ["abd"]) == pytest.approx(jaro_winkler("abc", "abd"))

    def test_middle_name_case_matches_brute_force(self):
        # The unmatched middle token keeps the averaged score below 1.
        a = ["kiem", "hoang"]
        b = ["hoang", "van", "kiem"]
        expected = brute_force_monge_elkan(a, b, jaro_winkler)
        assert expected < 1.0
        assert monge_elkan(a, b) == pytest.approx(expected, abs=1e-12)

    def test_empty_sequence(self):
        assert monge_elkan([], ["a"]) == 0.0
        assert monge_elkan(["a"], []) == 0.0

    def test_inner_metric_selection(self):
        a = ["kitten"]
        b = ["sitting"]
        assert monge_elkan(a, b, inner="levenshtein") == pytest.approx(1 - 3 / 7)

    def test_unknown_inner_metric(self):
        with pytest.raises(ConfigError):
            monge_elkan(["a"], ["b"], inner="soundex")


def test_token_helpers():
    assert token_list("kiem  hoang ") == ["kiem", "hoang"]
    assert token_set("a b a") == {"a", "b"}
    assert token_set("") == set()
