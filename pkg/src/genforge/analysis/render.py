"""Static rendering of analysis results: canonical JSON or one-file HTML.

JSON output is byte-stable (sorted keys, fixed indentation), so parsing and
re-rendering a document reproduces it exactly.  HTML output embeds all
styling and SVG charts inline — no external assets.
"""

from __future__ import annotations

import html
import json
import math
from dataclasses import dataclass

from .._validation import check_choice
from ..errors import ConfigError
from .buckets import BucketStats
from .compare import ModelComparison
from .leaderboard import leaderboard_render

FORMATS = ("json", "html")

_SVG_WIDTH = 640
_PAD_LEFT = 150
_PAD_RIGHT = 24
_ROW_HEIGHT = 44


@dataclass
class AnalysisReport:
    """Bundle of whatever analyses were run; absent parts render as 'no data'."""

    title: str = "analysis"
    metric: str | None = None
    corpus_scores: dict[str, float] | None = None
    buckets: BucketStats | None = None
    comparison: ModelComparison | None = None
    leaderboard: dict | None = None
    leaderboard_metric: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "title": self.title,
            "metric": self.metric,
            "corpus_scores": self.corpus_scores,
            "buckets": self.buckets.to_json_dict() if self.buckets else None,
            "comparison": (self.comparison.to_json_dict()
                           if self.comparison else None),
            "leaderboard": self.leaderboard,
            "leaderboard_metric": self.leaderboard_metric,
        }


def bucket_label(low, high) -> str:
    if high is None or (isinstance(high, float) and math.isinf(high)):
        return f"[{low}, inf)"
    return f"[{low}, {int(high)})"


def _x_scale(stats: BucketStats):
    filled = [b for b in stats.buckets if b.count]
    lo = min(b.min for b in filled)
    hi = max(b.max for b in filled)
    span = (hi - lo) or 1.0
    inner = _SVG_WIDTH - _PAD_LEFT - _PAD_RIGHT

    def x(value: float) -> float:
        return _PAD_LEFT + (value - lo) / span * inner

    return x


def boxplot_svg(stats: BucketStats, label: str = "") -> str:
    """Horizontal boxplots, one row per bucket: whiskers, IQR box, median."""
    if stats.total == 0 or all(b.count == 0 for b in stats.buckets):
        return "<p>no data</p>"
    x = _x_scale(stats)
    height = _ROW_HEIGHT * len(stats.buckets) + 20
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" role="img" '
             f'width="{_SVG_WIDTH}" height="{height}" '
             f'data-label="{html.escape(label, quote=True)}">']
    for row, b in enumerate(stats.buckets):
        cy = 10 + row * _ROW_HEIGHT + _ROW_HEIGHT // 2
        name = html.escape(bucket_label(b.low, b.high))
        parts.append(f'<text x="8" y="{cy + 4}" font-size="12">'
                     f'{name} (n={b.count})</text>')
        if b.count == 0:
            parts.append(f'<text x="{_PAD_LEFT}" y="{cy + 4}" '
                         f'font-size="12" fill="#888">empty</text>')
            continue
        x_min, x_q1 = x(b.min), x(b.q1)
        x_med, x_q3, x_max = x(b.median), x(b.q3), x(b.max)
        top, bottom = cy - 12, cy + 12
        parts.append(f'<line x1="{x_min:.2f}" y1="{cy}" x2="{x_q1:.2f}" '
                     f'y2="{cy}" stroke="#444"/>')
        parts.append(f'<line x1="{x_q3:.2f}" y1="{cy}" x2="{x_max:.2f}" '
                     f'y2="{cy}" stroke="#444"/>')
        parts.append(f'<rect x="{x_q1:.2f}" y="{top}" '
                     f'width="{max(x_q3 - x_q1, 0.01):.2f}" '
                     f'height="{bottom - top}" fill="#cfe3ff" stroke="#224"/>')
        parts.append(f'<line x1="{x_med:.2f}" y1="{top}" x2="{x_med:.2f}" '
                     f'y2="{bottom}" stroke="#c22" stroke-width="2"/>')
        for xv in (x_min, x_max):
            parts.append(f'<line x1="{xv:.2f}" y1="{cy - 6}" x2="{xv:.2f}" '
                         f'y2="{cy + 6}" stroke="#444"/>')
    parts.append("</svg>")
    return "".join(parts)


def bar_chart_svg(groups: list[tuple[str, float, float]],
                  name_a: str = "A", name_b: str = "B") -> str:
    """Grouped horizontal bars comparing two series."""
    if not groups:
        return "<p>no data</p>"
    peak = max((max(a, b) for _, a, b in groups), default=0.0) or 1.0
    inner = _SVG_WIDTH - _PAD_LEFT - _PAD_RIGHT
    height = len(groups) * _ROW_HEIGHT + 30
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" role="img" '
             f'width="{_SVG_WIDTH}" height="{height}">']
    parts.append(f'<text x="8" y="14" font-size="12">'
                 f'{html.escape(name_a)} = blue, {html.escape(name_b)} = '
                 f'orange</text>')
    for row, (label, a, b) in enumerate(groups):
        y = 24 + row * _ROW_HEIGHT
        parts.append(f'<text x="8" y="{y + 16}" font-size="12">'
                     f'{html.escape(label)}</text>')
        for offset, value, color in ((0, a, "#4a78c2"), (16, b, "#d98032")):
            width = inner * value / peak
            parts.append(f'<rect x="{_PAD_LEFT}" y="{y + offset}" '
                         f'width="{width:.2f}" height="12" fill="{color}"/>')
            parts.append(f'<text x="{_PAD_LEFT + width + 4:.2f}" '
                         f'y="{y + offset + 10}" font-size="10">'
                         f'{value:.4f}</text>')
    parts.append("</svg>")
    return "".join(parts)


def _scores_table(scores: dict[str, float]) -> str:
    rows = "".join(
        f"<tr><td>{html.escape(name)}</td><td>{value:.4f}</td></tr>"
        for name, value in sorted(scores.items())
    )
    return ("<table><thead><tr><th>metric</th><th>score</th></tr></thead>"
            f"<tbody>{rows}</tbody></table>")


def _comparison_html(cmp: ModelComparison) -> str:
    delta_rows = "".join(
        f"<tr><td>{html.escape(name)}</td><td>{delta:+.4f}</td></tr>"
        for name, delta in sorted(cmp.deltas.items())
    )
    bucket_rows = "".join(
        f"<tr><td>{html.escape(bucket_label(row['low'], row['high']))}</td>"
        f"<td>{row['a']}</td><td>{row['b']}</td><td>{row['ties']}</td></tr>"
        for row in cmp.per_bucket
    )
    curves = [(f"{n}-gram", cmp.copy_rate_a.get(n) or 0.0,
               cmp.copy_rate_b.get(n) or 0.0)
              for n in sorted(cmp.copy_rate_a)]
    flag = ("<p><strong>A copies the source more than B at every "
            "n-gram order.</strong></p>" if cmp.copying else "")
    return (
        f"<h3>corpus deltas (A - B)</h3><table><thead><tr><th>metric</th>"
        f"<th>delta</th></tr></thead><tbody>{delta_rows}</tbody></table>"
        f"<h3>winner counts by source length ({html.escape(cmp.metric)})"
        f"</h3><table><thead><tr><th>bucket</th><th>A</th><th>B</th>"
        f"<th>ties</th></tr></thead><tbody>{bucket_rows}</tbody></table>"
        f"<h3>copy-rate curves</h3>{bar_chart_svg(curves)}{flag}"
    )


_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
body {{ font-family: sans-serif; margin: 2em; color: #222; }}
table {{ border-collapse: collapse; margin: 0.5em 0; }}
td, th {{ border: 1px solid #bbb; padding: 4px 10px; font-size: 14px; }}
h2 {{ border-bottom: 1px solid #ccc; padding-bottom: 4px; }}
pre {{ background: #f6f6f6; padding: 1em; }}
</style>
</head>
<body>
<h1>{title}</h1>
{sections}
</body>
</html>
"""


def render_report(report: AnalysisReport | dict, fmt: str = "json") -> str:
    """Render an analysis bundle as canonical JSON or standalone HTML."""
    check_choice(fmt, "format", FORMATS)
    if fmt == "json":
        payload = report if isinstance(report, dict) else report.to_json_dict()
        try:
            return json.dumps(payload, sort_keys=True, indent=2) + "\n"
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"analysis results are not JSON-safe: {exc}")
    if isinstance(report, dict):
        raise ConfigError("html rendering needs an AnalysisReport")
    sections = []
    if report.corpus_scores:
        sections.append("<h2>corpus scores</h2>"
                        + _scores_table(report.corpus_scores))
    else:
        sections.append("<h2>corpus scores</h2><p>no data</p>")
    sections.append(f"<h2>score by source length"
                    f"{f' ({html.escape(report.metric)})' if report.metric else ''}"
                    "</h2>")
    sections.append(boxplot_svg(report.buckets, report.metric or "")
                    if report.buckets else "<p>no data</p>")
    sections.append("<h2>model comparison</h2>")
    sections.append(_comparison_html(report.comparison)
                    if report.comparison else "<p>no data</p>")
    sections.append("<h2>leaderboard</h2>")
    if report.leaderboard and report.leaderboard_metric:
        text = leaderboard_render(report.leaderboard, report.leaderboard_metric)
        sections.append(f"<pre>{html.escape(text)}</pre>")
    else:
        sections.append("<p>no data</p>")
    return _PAGE.format(title=html.escape(report.title),
                        sections="\n".join(sections))
