from src.utils.io.mask_io import read_mask, write_mask, parse_pgm, encode_pgm
from src.utils.io.calibration import (
    parse_calibration,
    load_calibration,
    save_calibration,
    calibration_to_file,
)
from src.utils.io.csv_io import (
    read_lengths_csv,
    write_clip_csv,
    write_metrics_csv,
    read_metrics_csv,
)
from src.utils.io.synthetic import render_synthetic, ground_truth, write_scene, load_scene_spec

__all__ = [
    "read_mask",
    "write_mask",
    "parse_pgm",
    "encode_pgm",
    "parse_calibration",
    "load_calibration",
    "save_calibration",
    "calibration_to_file",
    "read_lengths_csv",
    "write_clip_csv",
    "write_metrics_csv",
    "read_metrics_csv",
    "render_synthetic",
    "ground_truth",
    "write_scene",
    "load_scene_spec",
]
