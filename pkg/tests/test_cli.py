"""End-to-end runs of the fishpose command line."""
import json

import numpy as np
import pytest

from src.config import settings
from src.main import main
from src.routers.common import load_optimizer_config
from src.schemas.io import FrameResult, GroundTruth, SceneSpec
from src.schemas.params import DeformParams, GridSpec, ParamRange
from src.utils.io import read_lengths_csv, read_mask, read_metrics_csv, render_synthetic, write_mask
from src.utils.template import procedural_fish_mask
from tests.helpers import calibration_file, make_camera


def _write_calib(path, camera=None, drop=None):
    data = calibration_file(camera or make_camera()).model_dump()
    if drop:
        del data[drop]
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def _scene_spec(params: DeformParams, length_mm: float = 700.0) -> SceneSpec:
    return SceneSpec(
        camera=calibration_file(make_camera(T=(0.0, 0.0, 3000.0))),
        params=params,
        length_mm=length_mm,
    )


@pytest.fixture
def template_mask_file(tmp_path):
    path = tmp_path / "template.pgm"
    assert main(["template", "--out", str(path)]) == 0
    return path


def test_template_command(template_mask_file):
    np.testing.assert_array_equal(read_mask(template_mask_file).bits, procedural_fish_mask().bits)


def test_eval_identical_sets(tmp_path):
    lengths = tmp_path / "lengths.csv"
    lengths.write_text("fish,length_mm\na,610\nb,655\nc,702\nd,702\ne,890\n", encoding="utf-8")
    out = tmp_path / "metrics.csv"
    assert main(["eval", "--pred", str(lengths), "--gt", str(lengths), "--out", str(out)]) == 0
    assert read_metrics_csv(out) == {"bias_mm": 0.0, "emd_mm": 0.0, "rmsd": 0.0, "kl": 0.0}


def test_missing_calibration_key(template_mask_file, tmp_path, caplog):
    calib = _write_calib(tmp_path / "calib.json", drop="K")
    code = main([
        "estimate-frame", "--mask", str(template_mask_file), "--calib", str(calib), "--out", str(tmp_path / "r.json"),
    ])
    assert code == 2
    assert "missing key 'K'" in caplog.text
    assert not (tmp_path / "r.json").exists()


def test_missing_mask_file(tmp_path, caplog):
    calib = _write_calib(tmp_path / "calib.json")
    code = main([
        "estimate-frame", "--mask", str(tmp_path / "nope.pgm"), "--calib", str(calib), "--out", str(tmp_path / "r.json"),
    ])
    assert code == 2
    assert "nope.pgm" in caplog.text


def test_bad_optimizer_config(template_mask_file, tmp_path):
    calib = _write_calib(tmp_path / "calib.json")
    config = tmp_path / "opt.json"
    config.write_text(json.dumps({"multi_start": 9}), encoding="utf-8")
    code = main([
        "estimate-frame", "--mask", str(template_mask_file), "--calib", str(calib),
        "--config", str(config), "--out", str(tmp_path / "r.json"),
    ])
    assert code == 2


def test_config_file_without_raster_pad_keeps_the_setting(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "RASTER_PAD", 5)
    config = tmp_path / "opt.json"
    config.write_text(json.dumps({"multi_start": 1}), encoding="utf-8")
    cfg = load_optimizer_config(str(config))
    assert cfg.raster_pad == 5
    assert cfg.multi_start == 1

    config.write_text(json.dumps({"raster_pad": 3}), encoding="utf-8")
    assert load_optimizer_config(str(config)).raster_pad == 3
    assert load_optimizer_config(None, no_bending=True).raster_pad == 5


def test_clip_needs_a_directory(tmp_path):
    calib = _write_calib(tmp_path / "calib.json")
    code = main(["estimate-clip", "--masks", str(tmp_path / "missing"), "--calib", str(calib), "--out", "x.csv"])
    assert code == 2


@pytest.mark.slow
def test_synth_then_estimate_frame(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(_scene_spec(DeformParams(kappa=0.002, alpha=0.1, gamma=0.6)).model_dump_json(), encoding="utf-8")
    scene_dir = tmp_path / "scene"
    assert main(["synth", "--spec", str(spec), "--out", str(scene_dir)]) == 0

    out = tmp_path / "result.json"
    code = main([
        "estimate-frame", "--mask", str(scene_dir / "mask.pgm"), "--calib", str(scene_dir / "calib.json"),
        "--out", str(out),
    ])
    assert code == 0
    result = FrameResult.model_validate_json(out.read_text(encoding="utf-8"))
    truth = GroundTruth.model_validate_json((scene_dir / "truth.json").read_text(encoding="utf-8"))
    assert result.length_mm == pytest.approx(truth.length_mm, rel=0.02)
    assert result.bend_ratio >= 1.0

    chord_out = tmp_path / "chord.json"
    code = main([
        "estimate-frame", "--mask", str(scene_dir / "mask.pgm"), "--calib", str(scene_dir / "calib.json"),
        "--out", str(chord_out), "--no-bend-ratio",
    ])
    assert code == 0
    chord = FrameResult.model_validate_json(chord_out.read_text(encoding="utf-8"))
    assert chord.bend_ratio == 1.0
    assert chord.params == result.params
    assert chord.length_mm == pytest.approx(result.length_mm / result.bend_ratio, rel=1e-9)


@pytest.mark.slow
def test_behind_camera_is_degenerate(template_mask_file, tmp_path):
    calib = _write_calib(tmp_path / "calib.json", make_camera(T=(0.0, 0.0, -5000.0), width=120, height=240))
    code = main([
        "estimate-frame", "--mask", str(template_mask_file), "--calib", str(calib), "--out", str(tmp_path / "r.json"),
    ])
    assert code == 3


@pytest.mark.slow
def test_estimate_clip_is_deterministic(template, tmp_path):
    frames = tmp_path / "clip07"
    truths = []
    for i, params in enumerate([
        DeformParams(kappa=0.001, gamma=0.5),
        DeformParams(kappa=0.002, gamma=0.6, alpha=0.1),
        DeformParams(kappa=-0.001, gamma=0.4, beta=0.1),
    ]):
        scene = render_synthetic(_scene_spec(params, 650.0 + 10.0 * i), template)
        write_mask(frames / f"frame_{i:03d}.pgm", scene.mask)
        truths.append(scene.true_length_mm)
    calib = _write_calib(tmp_path / "calib.json", make_camera(T=(0.0, 0.0, 3000.0)))

    outputs = []
    for workers in ("1", "3"):
        out = tmp_path / f"clip_{workers}.csv"
        code = main([
            "estimate-clip", "--masks", str(frames), "--calib", str(calib), "--out", str(out), "--workers", workers,
        ])
        assert code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]

    lines = outputs[0].decode("utf-8").splitlines()
    assert [line.split(",")[0] for line in lines[1:4]] == ["frame_000.pgm", "frame_001.pgm", "frame_002.pgm"]
    assert lines[4].startswith("clip07,clip,")
    clip_length = read_lengths_csv(tmp_path / "clip_1.csv")
    assert clip_length[0] == pytest.approx(np.mean(truths), rel=0.03)

    gt = tmp_path / "gt.csv"
    gt.write_text(f"length_mm\n{np.mean(truths):.3f}\n", encoding="utf-8")
    metrics_path = tmp_path / "metrics.csv"
    assert main(["eval", "--pred", str(tmp_path / "clip_1.csv"), "--gt", str(gt), "--out", str(metrics_path)]) == 0
    assert set(read_metrics_csv(metrics_path)) == {"bias_mm", "emd_mm", "rmsd", "kl"}


@pytest.mark.slow
def test_bfs_build_and_estimate(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(_scene_spec(DeformParams(gamma=0.8)).model_dump_json(), encoding="utf-8")
    scene_dir = tmp_path / "scene"
    assert main(["synth", "--spec", str(spec), "--out", str(scene_dir)]) == 0

    single = ParamRange(lo=0.0, hi=0.0, steps=1)
    grid = GridSpec(
        s=ParamRange(lo=1.0, hi=1.3, steps=4),
        kappa=single,
        alpha=single,
        beta=single,
        gamma=ParamRange(lo=0.0, hi=6.283185307179586, steps=8, endpoint=False),
    )
    grid_path = tmp_path / "grid.json"
    grid_path.write_text(grid.model_dump_json(), encoding="utf-8")
    db_dir = tmp_path / "db"
    assert main(["bfs-build", "--grid", str(grid_path), "--out", str(db_dir)]) == 0
    assert len(list(db_dir.glob("entry_*.pgm"))) == 32

    out = tmp_path / "bfs.json"
    code = main([
        "bfs-estimate", "--mask", str(scene_dir / "mask.pgm"), "--db", str(db_dir),
        "--calib", str(scene_dir / "calib.json"), "--out", str(out),
    ])
    assert code == 0
    result = FrameResult.model_validate_json(out.read_text(encoding="utf-8"))
    truth = GroundTruth.model_validate_json((scene_dir / "truth.json").read_text(encoding="utf-8"))
    assert result.params.gamma == pytest.approx(0.785398, abs=1e-5)
    assert result.length_mm == pytest.approx(truth.length_mm, rel=0.1)

    flat_out = tmp_path / "bfs_flat.json"
    code = main([
        "bfs-estimate", "--mask", str(scene_dir / "mask.pgm"), "--db", str(db_dir),
        "--calib", str(scene_dir / "calib.json"), "--out", str(flat_out), "--no-bending", "--no-bend-ratio",
    ])
    assert code == 0
    flat = FrameResult.model_validate_json(flat_out.read_text(encoding="utf-8"))
    assert flat.params.kappa == 0.0
    assert flat.bend_ratio == 1.0


def test_bfs_no_bending_needs_flat_entries(tmp_path):
    single = ParamRange(lo=0.0, hi=0.0, steps=1)
    bent = ParamRange(lo=0.004, hi=0.004, steps=1)
    grid = GridSpec(s=ParamRange(lo=1.0, hi=1.0, steps=1), kappa=bent, alpha=single, beta=single, gamma=single)
    grid_path = tmp_path / "grid.json"
    grid_path.write_text(grid.model_dump_json(), encoding="utf-8")
    db_dir = tmp_path / "db"
    assert main(["bfs-build", "--grid", str(grid_path), "--out", str(db_dir)]) == 0

    calib = _write_calib(tmp_path / "calib.json")
    mask = write_mask(tmp_path / "mask.pgm", procedural_fish_mask())
    code = main([
        "bfs-estimate", "--mask", str(mask), "--db", str(db_dir), "--calib", str(calib),
        "--out", str(tmp_path / "r.json"), "--no-bending",
    ])
    assert code == 2
