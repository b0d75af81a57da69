from src.utils.metrics.clip_metrics import (
    ClipEstimate,
    LengthHistogram,
    HistogramMetrics,
    aggregate_clip,
    build_histogram,
    compare_histograms,
    compare_lengths,
)

__all__ = [
    "ClipEstimate",
    "LengthHistogram",
    "HistogramMetrics",
    "aggregate_clip",
    "build_histogram",
    "compare_histograms",
    "compare_lengths",
]
