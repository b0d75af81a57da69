"""
CSV длин и метрик.

Lengths CSV: header with a `length_mm` column; when a `kind` column is
present only rows with kind == "clip" are lengths of whole fish.
Clip CSV (written by estimate-clip): frame,kind,length_mm,kept,low_confidence,
one "frame" row per frame in frame order, then one "clip" row.
Metrics CSV: metric,value.
"""
import csv
import logging
from pathlib import Path
from typing import Dict, List, Sequence, Union

from src.utils.errors import InvalidInputError
from src.utils.metrics import ClipEstimate, HistogramMetrics

logger = logging.getLogger(__name__)

CLIP_FIELDS = ["frame", "kind", "length_mm", "kept", "low_confidence"]
METRIC_FIELDS = ["metric", "value"]


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def read_lengths_csv(path: Union[str, Path]) -> List[float]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if "length_mm" not in fields:
            raise InvalidInputError(f"{path}: missing column 'length_mm'")
        has_kind = "kind" in fields
        lengths = []
        for line_no, row in enumerate(reader, start=2):
            if has_kind and row["kind"] != "clip":
                continue
            try:
                lengths.append(float(row["length_mm"]))
            except (TypeError, ValueError) as e:
                raise InvalidInputError(f"{path}: line {line_no}: bad length_mm {row['length_mm']!r}") from e
    logger.debug("Read %d lengths from %s", len(lengths), path)
    return lengths


def write_clip_csv(
    path: Union[str, Path],
    frames: Sequence[str],
    clip: ClipEstimate,
    low_confidence: Sequence[bool],
    clip_name: str = "clip",
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CLIP_FIELDS)
        for frame, length, kept, flag in zip(frames, clip.frame_lengths, clip.kept_mask, low_confidence):
            writer.writerow([frame, "frame", _fmt(length), int(kept), int(flag)])
        writer.writerow([clip_name, "clip", _fmt(clip.final_length_mm), clip.n_kept, 0])
    return path


def write_metrics_csv(path: Union[str, Path], metrics: HistogramMetrics) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METRIC_FIELDS)
        for name, value in metrics.as_dict().items():
            writer.writerow([name, _fmt(value)])
    return path


def read_metrics_csv(path: Union[str, Path]) -> Dict[str, float]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != METRIC_FIELDS:
            raise InvalidInputError(f"{path}: expected header {','.join(METRIC_FIELDS)}")
        return {row["metric"]: float(row["value"]) for row in reader}
