import pytest
from hypothesis import given
from hypothesis import strategies as st

from pipedefect.corpus import (
    SECTION_NAMES,
    UNSECTIONED,
    GoldEntity,
    GoldRecord,
    format_gold,
    parse_document,
    parse_gold,
    split_corpus,
)
from pipedefect.errors import (
    CorpusTooSmall,
    DuplicateGoldRecord,
    EmptyDocument,
    InvalidRating,
    InvalidSpan,
)


class TestParseDocument:
    def test_single_header(self):
        doc = parse_document("Defects: Frequent leaks at joint.", "d1")
        assert list(doc.sections) == ["Defects"]
        assert doc.sections["Defects"] == " Frequent leaks at joint."

    def test_no_header_goes_to_unsectioned(self):
        doc = parse_document("Frequent leaks at joint.", "d1")
        assert list(doc.sections) == [UNSECTIONED]
        assert doc.sections[UNSECTIONED] == "Frequent leaks at joint."

    def test_two_headers_hand_split(self):
        raw = "Defects: leaks here.\nSummary: all done."
        doc = parse_document(raw, "d1")
        # oracle: substring indexing of the two header positions
        first_body = raw[len("Defects:") : raw.index("Summary:")]
        second_body = raw[raw.index("Summary:") + len("Summary:") :]
        assert doc.sections["Defects"] == first_body
        assert doc.sections["Summary"] == second_body

    def test_header_case_insensitive(self):
        doc = parse_document("dEfEcTs: leaks.", "d1")
        assert "Defects" in doc.sections

    def test_repeated_header_is_body_text(self):
        raw = "Defects: one.\nDefects: two."
        doc = parse_document(raw, "d1")
        assert doc.sections["Defects"] == " one.\nDefects: two."

    def test_leading_text_before_first_header(self):
        raw = "preamble\nDefects: leaks."
        doc = parse_document(raw, "d1")
        assert doc.sections[UNSECTIONED] == "preamble\n"

    def test_empty_document_rejected(self):
        with pytest.raises(EmptyDocument):
            parse_document("   \n ", "d1")

    def test_body_bytes_roundtrip(self):
        raw = "intro text\nDefects: a, b & c!\nCapacity: 77%\nSummary:"
        doc = parse_document(raw, "d1")
        for name, (start, end) in doc.section_spans.items():
            assert doc.sections[name] == raw[start:end]
        # spans tile the document except for the header lines themselves
        covered = sorted(doc.section_spans.values())
        reassembled = "".join(raw[s:e] for s, e in covered)
        stripped = raw
        for name in SECTION_NAMES:
            stripped = stripped.replace(f"{name}:", "", 1)
        assert reassembled == stripped


class TestParseGold:
    def test_basic_record(self):
        recs = parse_gold("doc1\t5\tDefect:3-8\tann1\n")
        assert len(recs) == 1
        r = recs[0]
        assert r.rating == 5
        assert r.entities == [GoldEntity("Defect", (3, 8))]
        assert r.annotator_id == "ann1"

    def test_no_entities_dash(self):
        recs = parse_gold("doc1\t1\t-\tann1\n")
        assert recs[0].entities == []

    def test_rating_zero_rejected(self):
        with pytest.raises(InvalidRating):
            parse_gold("doc1\t0\t-\tann1\n")

    def test_rating_six_rejected(self):
        with pytest.raises(InvalidRating):
            parse_gold("doc1\t6\t-\tann1\n")

    def test_malformed_span_rejected(self):
        with pytest.raises(InvalidSpan):
            parse_gold("doc1\t3\tDefect:3\tann1\n")

    def test_unknown_entity_type_rejected(self):
        with pytest.raises(InvalidSpan):
            parse_gold("doc1\t3\tBogus:1-2\tann1\n")

    def test_empty_span_rejected(self):
        with pytest.raises(InvalidSpan):
            parse_gold("doc1\t3\tDefect:5-5\tann1\n")

    def test_duplicate_doc_annotator_rejected(self):
        raw = "doc1\t3\t-\tann1\ndoc1\t4\t-\tann1\n"
        with pytest.raises(DuplicateGoldRecord):
            parse_gold(raw)

    def test_same_doc_different_annotators_ok(self):
        raw = "doc1\t3\t-\tann1\ndoc1\t4\t-\tann2\n"
        assert len(parse_gold(raw)) == 2

    def test_record_count_matches_line_count(self):
        lines = [f"doc{i}\t{(i % 5) + 1}\tDefect:0-4\tann1" for i in range(500)]
        recs = parse_gold("\n".join(lines) + "\n")
        assert len(recs) == 500

    def test_format_parse_roundtrip(self):
        records = [
            GoldRecord("a", [GoldEntity("Defect", (0, 4))], 5, "x"),
            GoldRecord("b", [], 1, "x"),
            GoldRecord(
                "c",
                [GoldEntity("LocationOfDefect", (2, 9)), GoldEntity("SizeOfDefect", (10, 15))],
                3,
                "y",
            ),
        ]
        assert parse_gold(format_gold(records)) == records


class TestSplitCorpus:
    def test_sizes_500_at_08(self):
        ids = [f"d{i}" for i in range(500)]
        split = split_corpus(ids, 0.8, seed=1)
        assert len(split.train) == 400
        assert len(split.test) == 100

    def test_same_seed_identical(self):
        ids = [f"d{i}" for i in range(10)]
        assert split_corpus(ids, 0.8, 7) == split_corpus(ids, 0.8, 7)

    def test_different_seeds_differ(self):
        ids = [f"d{i}" for i in range(10)]
        a = split_corpus(ids, 0.8, 1)
        b = split_corpus(ids, 0.8, 2)
        assert a.train != b.train or a.test != b.test

    def test_too_few_ids(self):
        with pytest.raises(CorpusTooSmall):
            split_corpus(["only"], 0.8, 1)

    def test_bad_ratio(self):
        with pytest.raises(ValueError):
            split_corpus(["a", "b"], 1.0, 1)

    def test_order_insensitive(self):
        ids = [f"d{i}" for i in range(20)]
        assert split_corpus(ids, 0.7, 5) == split_corpus(list(reversed(ids)), 0.7, 5)

    @given(
        ids=st.lists(st.text(alphabet="abcdef", min_size=1, max_size=6), min_size=2, unique=True),
        ratio=st.floats(min_value=0.05, max_value=0.95),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_partition_property(self, ids, ratio, seed):
        split = split_corpus(ids, ratio, seed)
        assert set(split.train) | set(split.test) == set(ids)
        assert set(split.train) & set(split.test) == set()
        assert len(split.train) >= 1 and len(split.test) >= 1
