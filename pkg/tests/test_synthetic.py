import json

import cv2
import numpy as np
import pytest
from pydantic import ValidationError

from src.schemas.io import GroundTruth, SceneSpec
from src.schemas.params import DeformParams
from src.utils.contour import pixel_labels
from src.utils.errors import InvalidSpecError
from src.utils.io import load_calibration, load_scene_spec, read_mask, render_synthetic, write_scene
from tests.helpers import calibration_file, make_camera, rot_x_column


def _spec(**kwargs) -> SceneSpec:
    camera = kwargs.pop("camera", make_camera())
    kwargs.setdefault("length_mm", 700.0)
    return SceneSpec(camera=calibration_file(camera), **kwargs)


def test_fronto_parallel_extent(template):
    scene = render_synthetic(_spec(), template)
    rows, _ = np.nonzero(scene.mask.bits)
    # head toward +y, so the body spans image rows
    assert rows.max() - rows.min() == pytest.approx(140.0, abs=2.0)
    assert scene.true_length_mm == pytest.approx(700.0)
    assert scene.bend_ratio == 1.0
    np.testing.assert_allclose(scene.true_center, [0.0, 0.0, 5000.0], atol=1e-9)


def test_keypoints_inside_silhouette(template):
    spec = _spec(
        camera=make_camera(R=rot_x_column(0.3), T=(0.0, 0.0, 4000.0)),
        params=DeformParams(s=1.1, kappa=0.004, alpha=0.2, beta=-0.3, gamma=1.0),
        center_world=(50.0, -20.0),
    )
    scene = render_synthetic(spec, template)
    dilated = cv2.dilate(scene.mask.bits.astype(np.uint8), np.ones((7, 7), dtype=np.uint8)) > 0
    for col, row in pixel_labels(scene.keypoints_2d):
        assert dilated[row, col]
    assert scene.bend_ratio > 1.0
    assert scene.mask.area > 0


def test_mm_per_px_scale(template):
    scene = render_synthetic(_spec(length_mm=None, mm_per_px=2.0), template)
    assert scene.true_length_mm == pytest.approx(2.0 * template.flat_arc)


def test_fish_behind_camera(template):
    with pytest.raises(InvalidSpecError):
        render_synthetic(_spec(camera=make_camera(T=(0.0, 0.0, -5000.0))), template)


def test_fish_outside_image(template):
    with pytest.raises(InvalidSpecError, match="outside"):
        render_synthetic(_spec(center_world=(2000.0, 0.0)), template)


def test_over_bent_params(template):
    with pytest.raises(InvalidSpecError):
        render_synthetic(_spec(params=DeformParams(kappa=4.0 / template.max_abs_y)), template)


@pytest.mark.parametrize("scale", [{"length_mm": 700.0, "mm_per_px": 2.0}, {"length_mm": None}])
def test_exactly_one_scale(scale):
    with pytest.raises(ValidationError):
        _spec(**scale)


def test_write_scene_re_parses(template, tmp_path):
    spec = _spec(params=DeformParams(kappa=0.003, gamma=0.5))
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(spec.model_dump_json(indent=2), encoding="utf-8")
    scene = render_synthetic(load_scene_spec(spec_path), template)

    out = write_scene(tmp_path / "scene", scene)
    np.testing.assert_array_equal(read_mask(out / "mask.pgm").bits, scene.mask.bits)
    np.testing.assert_allclose(load_calibration(out / "calib.json").H, scene.camera.H)
    truth = GroundTruth.model_validate_json((out / "truth.json").read_text(encoding="utf-8"))
    assert truth.length_mm == pytest.approx(700.0)
    assert truth.params == scene.params
    np.testing.assert_allclose(truth.keypoints_2d, scene.keypoints_2d)
    assert json.loads((out / "truth.json").read_text(encoding="utf-8"))["bend_ratio"] > 1.0
