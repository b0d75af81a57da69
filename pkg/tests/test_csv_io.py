import pytest

from src.utils.errors import InvalidInputError
from src.utils.io import read_lengths_csv, read_metrics_csv, write_clip_csv, write_metrics_csv
from src.utils.metrics import HistogramMetrics, aggregate_clip


def test_clip_csv_round_trip(tmp_path):
    clip = aggregate_clip([700.0] * 9 + [1400.0])
    frames = [f"f{i:02d}.png" for i in range(10)]
    path = write_clip_csv(tmp_path / "out" / "clip.csv", frames, clip, [False] * 9 + [True], clip_name="clip01")

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "frame,kind,length_mm,kept,low_confidence"
    assert lines[1] == "f00.png,frame,700.000000,1,0"
    assert lines[10] == "f09.png,frame,1400.000000,0,1"
    assert lines[11] == "clip01,clip,700.000000,9,0"
    # only the clip row is a whole-fish length
    assert read_lengths_csv(path) == [700.0]


def test_plain_lengths_csv(tmp_path):
    path = tmp_path / "gt.csv"
    path.write_text("fish,length_mm\na,612.5\nb,730\n", encoding="utf-8")
    assert read_lengths_csv(path) == [612.5, 730.0]


def test_lengths_csv_errors(tmp_path):
    missing = tmp_path / "missing.csv"
    missing.write_text("fish,length\na,1\n", encoding="utf-8")
    with pytest.raises(InvalidInputError, match="length_mm"):
        read_lengths_csv(missing)

    bad = tmp_path / "bad.csv"
    bad.write_text("length_mm\n700\nabc\n", encoding="utf-8")
    with pytest.raises(InvalidInputError, match="line 3"):
        read_lengths_csv(bad)


def test_metrics_csv_round_trip(tmp_path):
    metrics = HistogramMetrics(bias_mm=-12.5, emd_mm=20.0, rmsd=0.031, kl=0.25)
    path = write_metrics_csv(tmp_path / "metrics.csv", metrics)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "metric,value"
    assert read_metrics_csv(path) == pytest.approx(metrics.as_dict())
