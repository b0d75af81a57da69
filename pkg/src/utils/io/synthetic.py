"""
Генератор синтетических сцен.

Forward model: the deformed template is placed with its center keypoint on
the reference plane, scaled to mm, perspective-projected through K and
rasterized. The fitter itself projects orthographically, so the synthetic
masks carry the same perspective mismatch as real footage.
"""
import json
import logging
import math
from pathlib import Path
from typing import Optional, Union

import cv2
import numpy as np

from src.models.scene import SyntheticScene
from src.models.mask import BinaryMask
from src.models.template import Template
from src.schemas.io import GroundTruth, SceneSpec
from src.utils.contour import pixel_labels
from src.utils.errors import InvalidSpecError, OverBendError
from src.utils.io.calibration import save_calibration
from src.utils.io.mask_io import write_mask
from src.utils.template import check_bend, deform_points, get_default_template

logger = logging.getLogger(__name__)


def render_synthetic(spec: SceneSpec, template: Optional[Template] = None) -> SyntheticScene:
    """
    Render a scene spec into a mask with ground-truth keypoints and length.

    Raises:
        InvalidSpecError: over-bent params, fish behind the camera or outside the image
    """
    template = template or get_default_template()
    camera = spec.camera.to_camera()
    params = spec.params.model_copy(update={"tx": 0.0, "ty": 0.0})
    try:
        check_bend(template, params)
    except OverBendError as e:
        raise InvalidSpecError(f"scene params over-bend the template: {e.message}") from e

    arc_px = params.s * template.flat_arc
    mm_per_px = spec.mm_per_px if spec.mm_per_px is not None else spec.length_mm / arc_px
    true_length = arc_px * mm_per_px

    s4 = deform_points(template.points0.points, params)
    center = s4[template.center_idx]
    x_w, y_w = spec.center_world
    center_cam = camera.world_to_camera(np.array([x_w, y_w, 0.0]))[0]
    points_cam = center_cam + mm_per_px * (s4 - center)

    if np.any(points_cam[:, 2] <= 0):
        raise InvalidSpecError("fish is not entirely in front of the camera")

    uv = camera.project(points_cam)
    width, height = spec.camera.image_width, spec.camera.image_height
    labels = pixel_labels(uv)
    inside = (labels[:, 0] >= 0) & (labels[:, 0] < width) & (labels[:, 1] >= 0) & (labels[:, 1] < height)
    if not np.all(inside):
        raise InvalidSpecError(
            f"{int(np.count_nonzero(~inside))} of {len(inside)} fish points fall outside the {width}x{height} image"
        )

    bits = np.zeros((height, width), dtype=np.uint8)
    bits[labels[:, 1], labels[:, 0]] = 1
    # image pixels per template pixel at the fish center
    magnification = camera.focal * mm_per_px / center_cam[2]
    k = max(3, 2 * math.ceil(magnification * template.stride) + 1)
    bits = cv2.morphologyEx(bits, cv2.MORPH_CLOSE, np.ones((k, k), dtype=np.uint8))
    mask = BinaryMask(bits > 0)

    keypoint_idx = [template.head_idx, template.center_idx, template.tail_idx]
    chord = float(np.linalg.norm(s4[template.head_idx] - s4[template.tail_idx]))
    logger.debug(
        "Synthetic scene: length %.1f mm, depth %.1f mm, magnification %.3f, closing kernel %d",
        true_length, center_cam[2], magnification, k,
    )
    return SyntheticScene(
        template=template,
        params=spec.params,
        camera=camera,
        mask=mask,
        true_length_mm=true_length,
        mm_per_px=mm_per_px,
        bend_ratio=arc_px / chord if params.kappa != 0.0 else 1.0,
        keypoints_2d=uv[keypoint_idx],
        keypoints_3d=points_cam[keypoint_idx],
    )


def ground_truth(scene: SyntheticScene) -> GroundTruth:
    return GroundTruth(
        params=scene.params,
        length_mm=scene.true_length_mm,
        mm_per_px=scene.mm_per_px,
        keypoints_2d=[tuple(p) for p in scene.keypoints_2d.tolist()],
        keypoints_3d=[tuple(p) for p in scene.keypoints_3d.tolist()],
        bend_ratio=scene.bend_ratio,
    )


def write_scene(out_dir: Union[str, Path], scene: SyntheticScene) -> Path:
    """mask.pgm, calib.json and truth.json in out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_mask(out_dir / "mask.pgm", scene.mask)
    save_calibration(out_dir / "calib.json", scene.camera)
    truth = ground_truth(scene).model_dump(mode="json")
    (out_dir / "truth.json").write_text(json.dumps(truth, indent=2, ensure_ascii=False), encoding="utf-8")
    logger.info("Synthetic scene written to %s (%.1f mm)", out_dir, scene.true_length_mm)
    return out_dir


def load_scene_spec(path: Union[str, Path]) -> SceneSpec:
    return SceneSpec.model_validate_json(Path(path).read_text(encoding="utf-8"))
