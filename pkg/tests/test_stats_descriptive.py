import pytest

from nlgcrowd.stats import (
    POOLED,
    count_sentences,
    descriptive_stats,
    render_descriptive_text,
)

from helpers import load_fixture, materialize_cells


class TestSentenceCount:
    @pytest.mark.parametrize(
        "text,count",
        [
            ("A pub. Near the river.", 2),
            ("A pub.", 1),
            ("A pub", 1),
            ("A pub. Near the river", 2),
            ("One. Two. Three.", 3),
            ("...", 0),
            ("A pub.. Near.", 2),
        ],
    )
    def test_rule(self, text, count):
        assert count_sentences(text) == count


def records(*rows):
    out = []
    for modality, attr_count, value in rows:
        out.append({"modality": modality, "attr_count": attr_count, "char_length": value})
    return out


class TestDescriptive:
    def test_single_observation_has_no_stdev(self):
        report = descriptive_stats(records(("textual", 3, 10.0)))
        cell = report.cell("char_length", "textual", 3)
        assert cell.mean == 10.0
        assert cell.stdev is None
        assert cell.n == 1

    def test_two_identical_observations_stdev_zero(self):
        report = descriptive_stats(records(("textual", 3, 10.0), ("textual", 3, 10.0)))
        assert report.cell("char_length", "textual", 3).stdev == 0.0

    def test_sample_stdev_uses_n_minus_one(self):
        report = descriptive_stats(records(("textual", 3, 1.0), ("textual", 3, 3.0)))
        # variance = ((1-2)^2 + (3-2)^2) / 1 = 2
        assert report.cell("char_length", "textual", 3).stdev == pytest.approx(2 ** 0.5)

    def test_pooled_row_is_union_not_mean_of_means(self):
        report = descriptive_stats(
            records(("textual", 3, 1.0), ("textual", 3, 1.0), ("textual", 8, 4.0))
        )
        pooled = report.cell("char_length", "textual", POOLED)
        assert pooled.n == 3
        assert pooled.mean == pytest.approx(2.0)  # mean of means would be 2.5

    def test_missing_metric_rows_skipped(self):
        rows = [
            {"modality": "textual", "attr_count": 3, "char_length": 5.0, "informativeness": None},
        ]
        report = descriptive_stats(rows)
        assert report.cell("informativeness", "textual", 3) is None

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            descriptive_stats([])


class TestPublishedCells:
    def test_textual_pooled_means_match_published_values(self):
        fixture = load_fixture("table2_cells.json")
        report = descriptive_stats(materialize_cells(fixture))
        expected = fixture["expected_pooled"]["textual"]
        for metric, value in expected.items():
            pooled = report.cell(metric, "textual", POOLED)
            assert pooled.n == 744
            assert pooled.mean == pytest.approx(value, abs=0.01)

    def test_pictorial_pooled_means_match_published_values(self):
        fixture = load_fixture("table2_cells.json")
        report = descriptive_stats(materialize_cells(fixture))
        expected = fixture["expected_pooled"]["pictorial"]
        for metric, value in expected.items():
            pooled = report.cell(metric, "pictorial", POOLED)
            assert pooled.n == 498
            assert pooled.mean == pytest.approx(value, abs=0.01)

    def test_cell_means_survive_materialization_exactly(self):
        fixture = load_fixture("table2_cells.json")
        report = descriptive_stats(materialize_cells(fixture))
        for cell in fixture["cells"]:
            got = report.cell("char_length", cell["modality"], cell["attr_count"])
            assert got.n == cell["n"]
            assert got.mean == pytest.approx(cell["means"]["char_length"], abs=1e-9)


def test_text_rendering_is_aligned_and_complete():
    fixture = load_fixture("table2_cells.json")
    report = descriptive_stats(materialize_cells(fixture))
    text = render_descriptive_text(report)
    lines = text.splitlines()
    assert any("char_length" in l for l in lines)
    assert any("3 attributes" in l for l in lines)
    # Aligned: every non-empty line fits the same header width pattern.
    assert "textual mean" in lines[0]
    assert "pictorial mean" in lines[0]
