import json

import pytest

from nlgcrowd.config import load_mr_set
from nlgcrowd.store import (
    CorpusStore,
    CorruptRecord,
    RatingRecord,
    SimilarityRecord,
    SubmissionRecord,
    TaskRecord,
    apply_between_subject_filter,
    export_corpus,
    import_ratings_csv,
    load_corpus,
    load_export,
)


def make_submission(uid, worker, modality, text="Some text.", mr_id="mr000"):
    return SubmissionRecord(
        utterance_id=uid,
        task_id=f"t-{uid}",
        worker=worker,
        mr_id=mr_id,
        batch_id="b1" if modality == "textual" else "b2",
        modality=modality,
        text=text,
        issued_at=100.0,
        submitted_at=150.0,
        country="GB",
    )


@pytest.fixture
def store(tmp_path):
    return CorpusStore(tmp_path / "corpus.jsonl")


class TestAppendAndLoad:
    def test_round_trip_all_record_kinds(self, store, tmp_path):
        store.append(TaskRecord("t0", "mr000", "b1", "textual", "w1", 100.0))
        store.append(make_submission("u0", "w1", "textual"))
        store.append(
            RatingRecord("r0", "u0", "judge", "crowd", 5, 4, 4, True)
        )
        store.append(SimilarityRecord("u0", "baseline", 0.8, 5.0, "higher_than_average"))
        loaded = load_corpus(store.path)
        assert len(loaded.tasks) == 1
        assert len(loaded.submissions) == 1
        assert len(loaded.ratings) == 1
        assert len(loaded.similarities) == 1
        assert loaded.submissions[0].text == "Some text."

    def test_ids_are_sequential_and_stable_across_reload(self, store):
        assert store.next_id("task") == "t000000"
        store.append(TaskRecord("t000000", "mr000", "b1", "textual", "w1", 100.0))
        assert store.next_id("task") == "t000001"
        reopened = CorpusStore(store.path)
        assert reopened.next_id("task") == "t000001"

    def test_truncated_final_line_reports_line_number(self, store):
        store.append(make_submission("u0", "w1", "textual"))
        with store.path.open("a", encoding="utf-8") as fh:
            fh.write('{"kind": "submission", "utterance_id": "u1"')  # torn write
        with pytest.raises(CorruptRecord) as err:
            load_corpus(store.path)
        assert ":2:" in str(err.value)

    def test_skip_corrupt_is_opt_in(self, store):
        store.append(make_submission("u0", "w1", "textual"))
        with store.path.open("a", encoding="utf-8") as fh:
            fh.write("garbage\n")
        store.append(make_submission("u1", "w1", "textual", text="Other text."))
        corpus = load_corpus(store.path, skip_corrupt=True)
        assert [s.utterance_id for s in corpus.submissions] == ["u0", "u1"]

    def test_rating_validation(self):
        with pytest.raises(ValueError):
            RatingRecord("r0", "u0", "j", "crowd", 7, 4, 4, True)
        with pytest.raises(ValueError):
            RatingRecord("r0", "u0", "j", "self", 3, 3, 3, True)
        RatingRecord("r0", "u0", "j", "self", "average", "average", "higher_than_average", True)


class TestBetweenSubjectFilter:
    def test_cross_condition_worker_loses_pictorial_only(self, store):
        for rec in [
            make_submission("u0", "w1", "textual"),
            make_submission("u1", "w1", "textual"),
            make_submission("u2", "w1", "textual"),
            make_submission("u3", "w1", "pictorial"),
            make_submission("u4", "w1", "pictorial"),
        ]:
            store.append(rec)
        filtered, log = apply_between_subject_filter(store.corpus)
        assert [s.utterance_id for s in filtered.submissions] == ["u0", "u1", "u2"]
        assert log == [("w1", 2)]

    def test_single_condition_workers_keep_everything(self, store):
        store.append(make_submission("u0", "w1", "textual"))
        store.append(make_submission("u1", "w2", "pictorial"))
        filtered, log = apply_between_subject_filter(store.corpus)
        assert len(filtered.submissions) == 2
        assert log == []

    def test_hand_enumerated_two_worker_corpus(self, store):
        records = [
            make_submission("u0", "wa", "textual", text="A."),
            make_submission("u1", "wa", "pictorial", text="B."),
            make_submission("u2", "wb", "pictorial", text="C."),
            make_submission("u3", "wa", "textual", text="D."),
            make_submission("u4", "wb", "pictorial", text="E."),
        ]
        for rec in records:
            store.append(rec)
        filtered, log = apply_between_subject_filter(store.corpus)
        assert [s.utterance_id for s in filtered.submissions] == ["u0", "u2", "u3", "u4"]
        assert log == [("wa", 1)]

    def test_idempotent(self, store):
        for rec in [
            make_submission("u0", "w1", "textual"),
            make_submission("u1", "w1", "pictorial"),
        ]:
            store.append(rec)
        once, _ = apply_between_subject_filter(store.corpus)
        twice, log2 = apply_between_subject_filter(once)
        assert [s.utterance_id for s in twice.submissions] == [
            s.utterance_id for s in once.submissions
        ]
        assert log2 == []

    def test_never_removes_textual(self, store):
        for i in range(6):
            store.append(
                make_submission(f"u{i}", f"w{i % 2}", "textual" if i % 3 else "pictorial")
            )
        filtered, _ = apply_between_subject_filter(store.corpus)
        textual_before = {s.utterance_id for s in store.corpus.submissions if s.modality == "textual"}
        textual_after = {s.utterance_id for s in filtered.submissions if s.modality == "textual"}
        assert textual_before == textual_after


class TestExport:
    def make_corpus(self, store, schema, mrs75):
        mr = mrs75[0]
        for i, text in enumerate(["First utterance.", "Second one.", "Third text here."]):
            store.append(make_submission(f"u{i}", f"w{i}", "textual", text=text, mr_id=mr.id))
        store.append(RatingRecord("r0", "u0", "judge", "crowd", 5, 4, 4, True))
        store.append(SimilarityRecord("u0", "baseline", 0.5, 3.5, "average"))
        return {mr.id: mr}

    def test_round_trip_pairs(self, store, schema, mrs75, tmp_path):
        from nlgcrowd.schema import canonical_textual_mr

        mrs = self.make_corpus(store, schema, mrs75)
        out = tmp_path / "export.jsonl"
        count = export_corpus(store.corpus, mrs, schema, out)
        assert count == 3
        loaded = load_export(out)
        expected_pairs = [
            (canonical_textual_mr(mrs[s.mr_id], schema), s.text)
            for s in store.corpus.submissions
        ]
        assert [(r["mr"], r["ref"]) for r in loaded] == expected_pairs
        # A second export of the loaded pairs is byte-identical.
        out2 = tmp_path / "export2.jsonl"
        export_corpus(store.corpus, mrs, schema, out2)
        assert out.read_bytes() == out2.read_bytes()

    def test_field_order_is_fixed(self, store, schema, mrs75, tmp_path):
        mrs = self.make_corpus(store, schema, mrs75)
        out = tmp_path / "export.jsonl"
        export_corpus(store.corpus, mrs, schema, out)
        first = out.read_text().splitlines()[0]
        keys = list(json.loads(first).keys())
        assert keys == ["mr", "ref", "modality", "attr_count", "worker", "scores", "ratings"]

    def test_scores_and_ratings_travel_with_the_pair(self, store, schema, mrs75, tmp_path):
        mrs = self.make_corpus(store, schema, mrs75)
        out = tmp_path / "export.jsonl"
        export_corpus(store.corpus, mrs, schema, out)
        by_ref = {r["ref"]: r for r in load_export(out)}
        rec = by_ref["First utterance."]
        assert rec["scores"]["similarity"]["raw"] == 0.5
        assert rec["ratings"][0]["informativeness"] == 5

    def test_filtered_submissions_never_exported(self, store, schema, mrs75, tmp_path):
        mr = mrs75[0]
        store.append(make_submission("u0", "w1", "textual", text="Keep me.", mr_id=mr.id))
        store.append(make_submission("u1", "w1", "pictorial", text="Drop me.", mr_id=mr.id))
        out = tmp_path / "export.jsonl"
        export_corpus(store.corpus, {mr.id: mr}, schema, out)
        refs = {r["ref"] for r in load_export(out)}
        assert refs == {"Keep me."}


def test_distinct_utterance_count(store):
    texts = ["One.", "Two.", "One.", "Three.", "Two."]
    for i, text in enumerate(texts):
        store.append(make_submission(f"u{i}", "w1", "textual", text=text))
    assert store.corpus.distinct_utterance_count() == 3


def test_ratings_csv_import(store, tmp_path):
    store.append(make_submission("u0", "w1", "textual"))
    csv_path = tmp_path / "ratings.csv"
    csv_path.write_text(
        "utterance_id,rater_id,rater_kind,informativeness,naturalness,phrasing,grammatical\n"
        "u0,judge1,crowd,5,4,4,true\n"
        "u0,w1,self,average,higher_than_average,average,yes\n",
        "utf-8",
    )
    added = import_ratings_csv(store, csv_path)
    assert added == 2
    assert store.corpus.ratings[0].informativeness == 5
    assert store.corpus.ratings[1].rater_kind == "self"

    bad = tmp_path / "bad.csv"
    bad.write_text("utterance,who\nu0,j\n", "utf-8")
    with pytest.raises(Exception):
        import_ratings_csv(store, bad)
