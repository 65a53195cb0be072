"""Data model: normalization, loaders, invariants, round-trips."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from authorlink.errors import IntegrityError, ParseError
from authorlink.records import (
    LabeledPair,
    build_dataset,
    load_labeled_pairs,
    load_records,
    normalize_record,
    normalize_text,
    pair_key,
    save_pairs,
    save_records,
)
from conftest import make_record


class TestNormalizeText:
    def test_strips_diacritics_and_case(self):
        assert normalize_text("Hoàng  Kiếm") == "hoang kiem"

    def test_already_normal(self):
        assert normalize_text("abc") == "abc"

    def test_whitespace_rules(self):
        assert normalize_text("  A  B ") == "a b"

    def test_tabs_and_newlines_collapse(self):
        assert normalize_text("a\t\nb") == "a b"

    @given(st.text(max_size=40))
    def test_idempotent(self, s):
        once = normalize_text(s)
        assert normalize_text(once) == once


class TestPairKey:
    def test_orders_lexicographically(self):
        assert pair_key("b", "a") == ("a", "b")
        assert pair_key("a", "b") == ("a", "b")

    def test_self_pair_rejected(self):
        with pytest.raises(IntegrityError):
            pair_key("a", "a")


class TestNormalizeRecord:
    def test_all_fields_normalized(self):
        record = make_record(
            "r1",
            "Hoàng Kiếm",
            coauthors=("Trần  Bảo",),
            affiliation="  FPT University ",
            paper=("Machine  Learning",),
        )
        normalized = normalize_record(record)
        assert normalized.author_name == "hoang kiem"
        assert normalized.coauthors == ("tran bao",)
        assert normalized.affiliation == "fpt university"
        assert normalized.paper_keywords == ("machine learning",)
        assert normalized.interest_keywords is None

    def test_empty_affiliation_becomes_missing(self):
        record = make_record("r1", "abc", affiliation="   ")
        assert normalize_record(record).affiliation is None

    def test_empty_author_name_rejected(self):
        record = make_record("r1", " ̀ ")
        with pytest.raises(IntegrityError):
            normalize_record(record)


class TestLoadRecords:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "records.jsonl"
        path.write_text("", encoding="utf-8")
        assert load_records(path) == []

    def test_single_record_normalized(self, tmp_path):
        path = tmp_path / "records.jsonl"
        path.write_text(
            '{"record_id": "r1", "author_name": "Hoàng Kiếm", '
            '"coauthors": ["Trần Bảo"], "affiliation": null, '
            '"paper_keywords": null, "interest_keywords": ["Data Mining"]}\n',
            encoding="utf-8",
        )
        records = load_records(path)
        assert len(records) == 1
        record = records[0]
        assert record.author_name == "hoang kiem"
        assert record.coauthors == ("tran bao",)
        assert record.interest_keywords == ("data mining",)

    def test_duplicate_id_names_both_lines(self, tmp_path):
        path = tmp_path / "records.jsonl"
        lines = []
        for i in range(1, 8):
            rid = "dup" if i in (3, 7) else f"r{i}"
            lines.append(f'{{"record_id": "{rid}", "author_name": "a{i}", "coauthors": []}}')
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        with pytest.raises(IntegrityError, match=r"lines 3 and 7"):
            load_records(path)

    def test_malformed_line_names_line_number(self, tmp_path):
        path = tmp_path / "records.jsonl"
        path.write_text(
            '{"record_id": "r1", "author_name": "a", "coauthors": []}\n'
            "{not json}\n",
            encoding="utf-8",
        )
        with pytest.raises(ParseError, match=r":2:"):
            load_records(path)

    def test_bad_field_types_rejected(self, tmp_path):
        path = tmp_path / "records.jsonl"
        path.write_text('{"record_id": "r1", "author_name": "a", "coauthors": "x"}\n')
        with pytest.raises(ParseError, match="coauthors"):
            load_records(path)


class TestLoadLabeledPairs:
    def _record_map(self):
        records = [make_record(rid, f"name {rid}") for rid in ("a", "b", "c")]
        return {r.record_id: r for r in records}

    def test_three_valid_rows(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("left_id,right_id,label\na,b,1\na,c,0\nb,c,\n", encoding="utf-8")
        dataset = load_labeled_pairs(path, self._record_map())
        assert len(dataset.pairs) == 3
        assert dataset.class_counts() == {0: 1, 1: 1, None: 1}

    def test_dangling_reference(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("left_id,right_id,label\na,x9,1\n", encoding="utf-8")
        with pytest.raises(IntegrityError, match="x9"):
            load_labeled_pairs(path, self._record_map())

    def test_duplicate_unordered_pair(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("left_id,right_id,label\na,b,1\nb,a,1\n", encoding="utf-8")
        with pytest.raises(IntegrityError, match="duplicate pair"):
            load_labeled_pairs(path, self._record_map())

    def test_bad_label(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("left_id,right_id,label\na,b,2\n", encoding="utf-8")
        with pytest.raises(ParseError, match="label"):
            load_labeled_pairs(path, self._record_map())

    def test_bad_header(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("lhs,rhs,y\na,b,1\n", encoding="utf-8")
        with pytest.raises(ParseError, match="header"):
            load_labeled_pairs(path, self._record_map())

    def test_empty_file_gives_empty_dataset(self, tmp_path):
        path = tmp_path / "pairs.csv"
        path.write_text("", encoding="utf-8")
        dataset = load_labeled_pairs(path, self._record_map())
        assert dataset.pairs == ()


class TestRoundTrip:
    def test_save_load_identical(self, tmp_path, toy_dataset):
        from authorlink.records import normalize_dataset

        dataset = normalize_dataset(toy_dataset)
        records_path = tmp_path / "records.jsonl"
        pairs_path = tmp_path / "pairs.csv"
        save_records(dataset.records.values(), records_path)
        save_pairs(dataset.pairs, pairs_path)

        loaded_records = load_records(records_path)
        reloaded = load_labeled_pairs(
            pairs_path, {r.record_id: r for r in loaded_records}
        )
        assert dict(reloaded.records) == dict(dataset.records)
        assert reloaded.pairs == dataset.pairs

    def test_class_counts_match_direct_fold(self, toy_dataset):
        counts = toy_dataset.class_counts()
        direct = {0: 0, 1: 0, None: 0}
        for pair in toy_dataset.pairs:
            direct[pair.label] += 1
        assert counts == direct


class TestBuildDataset:
    def test_self_pair_rejected(self):
        records = [make_record("a", "x"), make_record("b", "y")]
        with pytest.raises(IntegrityError):
            build_dataset(records, [LabeledPair("a", "a", 1)])

    def test_bad_label_rejected(self):
        records = [make_record("a", "x"), make_record("b", "y")]
        with pytest.raises(IntegrityError):
            build_dataset(records, [LabeledPair("a", "b", 7)])
