import json

import pytest

from nlgcrowd.analysis import build_analysis, crowd_bucket
from nlgcrowd.schema import parse_textual_mr
from nlgcrowd.similarity import Bucket
from nlgcrowd.store import (
    RatingRecord,
    SimilarityRecord,
    SubmissionRecord,
    load_corpus,
)

from helpers import load_fixture


def template_mrs(schema):
    return {
        "m3": parse_textual_mr("name[Aromi], eatType[pub], priceRange[cheap]", schema, "m3"),
        "m5": parse_textual_mr(
            "name[Aromi], eatType[pub], priceRange[cheap], food[Italian], area[riverside]",
            schema,
            "m5",
        ),
        "m8": parse_textual_mr(
            "name[Aromi], eatType[pub], priceRange[cheap], food[Italian], area[riverside], "
            "familyFriendly[Yes], near[Cafe Adriatic], customerRating[4 of 5 (high)]",
            schema,
            "m8",
        ),
    }


@pytest.fixture
def oracle_corpus(tmp_path):
    doc = load_fixture("analyze_oracle.json")
    path = tmp_path / "corpus.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        for rec in doc["records"]:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return load_corpus(path), doc["expected"]


class TestAgainstOracle:
    def test_all_statistics_match_frozen_reference(self, schema, oracle_corpus):
        corpus, expected = oracle_corpus
        report = build_analysis(corpus, template_mrs(schema))
        assert report.counts["analyzed"] == expected["n_analyzed"]

        for metric, exp in expected["anovas"].items():
            table = report.anovas[metric]
            for effect in ("modality", "attr_count", "modality:attr_count"):
                row = table.row(effect)
                assert row.df == exp[effect]["df"]
                assert row.f_stat == pytest.approx(exp[effect]["F"], rel=1e-6)
                assert row.p_value == pytest.approx(exp[effect]["p"], rel=1e-6, abs=1e-12)
            assert table.row("residual").df == exp["residual_df"]

        for crit, exp in expected["kappas"].items():
            got = report.kappas[crit]
            assert got.kappa == pytest.approx(exp["kappa"], rel=1e-6, abs=1e-12)
            assert got.p_value == pytest.approx(exp["p"], rel=1e-6, abs=1e-12)

        for name, exp in expected["agreements"].items():
            assert report.agreements[name] == pytest.approx(exp, abs=1e-12)

        exp_r = expected["pearson_naturalness_phrasing"]
        got_r = report.pearson_naturalness_phrasing
        assert got_r.n == exp_r["n"]
        assert got_r.r == pytest.approx(exp_r["r"], rel=1e-6)
        assert got_r.p_value == pytest.approx(exp_r["p"], rel=1e-6, abs=1e-12)

    def test_between_subject_exclusions_logged(self, schema, oracle_corpus):
        corpus, _ = oracle_corpus
        report = build_analysis(corpus, template_mrs(schema))
        assert report.exclusions == [("xw", 2)]

    def test_report_renders_both_ways(self, schema, oracle_corpus):
        corpus, _ = oracle_corpus
        report = build_analysis(corpus, template_mrs(schema))
        doc = json.loads(report.to_json())
        assert "anovas" in doc and "kappas" in doc
        text = report.to_text()
        assert "ANOVA" in text
        assert "kappa" in text


def submission(uid, worker, modality, mr_id, text="A fine pub."):
    return SubmissionRecord(
        utterance_id=uid,
        task_id=f"t-{uid}",
        worker=worker,
        mr_id=mr_id,
        batch_id="b",
        modality=modality,
        text=text,
        issued_at=0.0,
        submitted_at=60.0,
        country="GB",
    )


def crowd(uid, rater, value):
    return RatingRecord(f"r-{uid}-{rater}", uid, rater, "crowd", value, value, value, True)


def selfr(uid, worker, label):
    return RatingRecord(f"rs-{uid}", uid, worker, "self", label, label, label, True)


class TestKappaAssembly:
    def test_perfect_self_crowd_agreement_gives_kappa_one(self, schema):
        from nlgcrowd.store import Corpus

        mrs = template_mrs(schema)
        corpus = Corpus()
        # Vary the bucket so kappa is defined (not degenerate).
        cases = [("u0", 5, "higher_than_average"), ("u1", 2, "lower_than_average"),
                 ("u2", 6, "higher_than_average"), ("u3", 1, "lower_than_average")]
        for uid, rating, label in cases:
            corpus.submissions.append(submission(uid, f"w-{uid}", "textual", "m3"))
            corpus.ratings.append(crowd(uid, "j1", rating))
            corpus.ratings.append(selfr(uid, f"w-{uid}", label))
        report = build_analysis(corpus, mrs)
        for crit in ("informativeness", "naturalness", "phrasing"):
            assert report.kappas[crit].kappa == pytest.approx(1.0)

    def test_single_modality_isolates_anova_only(self, schema):
        from nlgcrowd.store import Corpus

        mrs = template_mrs(schema)
        corpus = Corpus()
        for i, (rating, label) in enumerate(
            [(5, "higher_than_average"), (2, "lower_than_average"), (4, "average")]
        ):
            uid = f"u{i}"
            corpus.submissions.append(
                submission(uid, f"w{i}", "textual", "m3", text=f"Pub number {i}.")
            )
            corpus.ratings.append(crowd(uid, "j1", rating))
            corpus.ratings.append(selfr(uid, f"w{i}", label))
        report = build_analysis(corpus, mrs)
        assert all(k.startswith("anova:") or k.startswith("agreement:") or
                   k.startswith("pearson:") for k in report.problems)
        assert any(k.startswith("anova:") for k in report.problems)
        assert set(report.kappas) == {"informativeness", "naturalness", "phrasing"}


def test_crowd_bucket_thresholds_match_similarity_rule():
    assert crowd_bucket(4.5) is Bucket.HIGHER
    assert crowd_bucket(2.9) is Bucket.LOWER
    assert crowd_bucket(4.0) is Bucket.AVERAGE
    assert crowd_bucket(3.0) is Bucket.AVERAGE


def test_include_self_adds_descriptive_columns(schema, oracle_corpus):
    corpus, _ = oracle_corpus
    base = build_analysis(corpus, template_mrs(schema))
    extended = build_analysis(corpus, template_mrs(schema), include_self=True)
    assert base.descriptive.cell("self_informativeness", "textual") is None
    assert extended.descriptive.cell("self_informativeness", "textual") is not None


def test_empty_corpus_rejected(schema):
    from nlgcrowd.store import Corpus

    with pytest.raises(ValueError):
        build_analysis(Corpus(), template_mrs(schema))
