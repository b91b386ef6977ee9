"""Generation analysis: length buckets, copy rates, comparisons, leaderboards."""

from .buckets import (
    DEFAULT_EDGES,
    BucketStats,
    BucketSummary,
    bucket_scores,
    sample_std,
)
from .compare import ModelComparison, WinnerCounts, compare_models
from .copyrate import copy_rate, copy_rate_profile
from .leaderboard import (
    LeaderboardEntry,
    entry_from_dict,
    leaderboard_load,
    leaderboard_path,
    leaderboard_render,
    leaderboard_update,
)
from .render import AnalysisReport, bar_chart_svg, boxplot_svg, render_report

__all__ = [
    "DEFAULT_EDGES",
    "BucketStats",
    "BucketSummary",
    "bucket_scores",
    "sample_std",
    "ModelComparison",
    "WinnerCounts",
    "compare_models",
    "copy_rate",
    "copy_rate_profile",
    "LeaderboardEntry",
    "entry_from_dict",
    "leaderboard_load",
    "leaderboard_path",
    "leaderboard_render",
    "leaderboard_update",
    "AnalysisReport",
    "bar_chart_svg",
    "boxplot_svg",
    "render_report",
]
