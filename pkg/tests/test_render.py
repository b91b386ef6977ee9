"""Rendering analyses as canonical JSON and standalone HTML."""

import json

import pytest

from genforge.analysis import (
    AnalysisReport,
    bar_chart_svg,
    boxplot_svg,
    bucket_scores,
    render_report,
)
from genforge.analysis.render import bucket_label
from genforge.errors import ConfigError, GenforgeError


def one_bucket_stats(scores):
    sources = [" ".join(["w"] * 3) for _ in scores]
    return bucket_scores(sources, scores, edges=(0, 10))


def full_report():
    return AnalysisReport(
        title="nightly",
        metric="rouge-1",
        corpus_scores={"rouge-1": 0.5, "bleu": 0.25},
        buckets=one_bucket_stats([0.1, 0.2, 0.9]),
    )


def test_bucket_label_formats():
    assert bucket_label(0, 256) == "[0, 256)"
    assert bucket_label(1024, None) == "[1024, inf)"
    assert bucket_label(1024, float("inf")) == "[1024, inf)"


def test_json_round_trip_is_byte_identical():
    first = render_report(full_report(), fmt="json")
    again = render_report(json.loads(first), fmt="json")
    assert first == again


def test_json_has_sorted_keys():
    data = json.loads(render_report(full_report(), fmt="json"))
    assert list(data) == sorted(data)
    assert data["title"] == "nightly"
    assert data["buckets"]["total"] == 3


def test_json_rejects_unserializable_payload():
    with pytest.raises(ConfigError):
        render_report({"oops": object()}, fmt="json")


def test_unknown_format_rejected():
    with pytest.raises(GenforgeError, match="html"):
        render_report(full_report(), fmt="pdf")


def test_html_needs_report_object():
    with pytest.raises(ConfigError):
        render_report({"title": "x"}, fmt="html")


def test_html_is_single_self_contained_file():
    page = render_report(full_report(), fmt="html")
    assert page.startswith("<!DOCTYPE html>")
    assert "<svg" in page
    assert "<script" not in page
    assert "<link" not in page
    assert 'src="http' not in page
    assert "nightly" in page


def test_html_absent_sections_say_no_data():
    page = render_report(AnalysisReport(title="empty"), fmt="html")
    assert page.count("no data") == 4  # scores, buckets, comparison, board


def test_html_is_byte_stable():
    assert render_report(full_report(), fmt="html") == \
        render_report(full_report(), fmt="html")


def test_boxplot_marks_quartiles():
    # scores 0..4 in one bucket: min 0, q1 1, median 2, q3 3, max 4.
    # The drawing maps value v to x = 150 + v/4 * 466.
    svg = boxplot_svg(one_bucket_stats([0.0, 1.0, 2.0, 3.0, 4.0]))
    assert '<rect x="266.50"' in svg            # box starts at q1
    assert 'width="233.00"' in svg              # box spans q1..q3
    assert 'x1="383.00"' in svg                 # median line
    assert 'x1="150.00"' in svg and 'x2="616.00"' in svg  # whisker tips
    assert "(n=5)" in svg


def test_boxplot_empty_bucket_labelled():
    svg = boxplot_svg(one_bucket_stats([0.5]))
    assert ">empty<" in svg                     # the overflow bucket


def test_boxplot_no_scores_is_no_data():
    stats = bucket_scores([], [], edges=(0, 10))
    assert boxplot_svg(stats) == "<p>no data</p>"


def test_bar_chart_scales_to_peak():
    svg = bar_chart_svg([("1-gram", 1.0, 0.5)], name_a="ours", name_b="BART")
    assert "ours" in svg and "BART" in svg
    assert 'width="466.00"' in svg              # full-scale bar
    assert 'width="233.00"' in svg              # half-scale bar
    assert bar_chart_svg([]) == "<p>no data</p>"


def test_html_escapes_titles():
    page = render_report(AnalysisReport(title="<b>&"), fmt="html")
    assert "<b>&</b>" not in page
    assert "&lt;b&gt;&amp;" in page
