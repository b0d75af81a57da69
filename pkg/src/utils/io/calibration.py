"""
Файл калибровки камеры.

JSON object with keys K (9 reals, row-major), R (9 reals, row-major),
T (3 reals, mm), image_width and image_height (pixels). Unknown keys are ignored.
"""
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from src.models.camera import CameraModel
from src.schemas.io import CalibrationFile
from src.utils.errors import InvalidCalibrationError

logger = logging.getLogger(__name__)


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        key = ".".join(str(p) for p in item["loc"]) or "<root>"
        if item["type"] == "missing":
            parts.append(f"missing key '{key}'")
        else:
            parts.append(f"key '{key}': {item['msg']}")
    return "; ".join(parts)


def parse_calibration(text: str, source: str = "<calibration>") -> CameraModel:
    try:
        calib = CalibrationFile.model_validate_json(text)
    except ValidationError as e:
        raise InvalidCalibrationError(f"{source}: {_describe(e)}") from e
    try:
        return calib.to_camera()
    except InvalidCalibrationError as e:
        raise InvalidCalibrationError(f"{source}: {e.message}") from e


def load_calibration(path: Union[str, Path]) -> CameraModel:
    path = Path(path)
    camera = parse_calibration(path.read_text(encoding="utf-8"), str(path))
    logger.debug("Calibration loaded from %s, focal %.1f px", path, camera.focal)
    return camera


def calibration_to_file(camera: CameraModel) -> CalibrationFile:
    return CalibrationFile(
        K=camera.K.ravel().tolist(),
        R=camera.R.ravel().tolist(),
        T=camera.T.tolist(),
        image_width=max(camera.image_width, 1),
        image_height=max(camera.image_height, 1),
    )


def save_calibration(path: Union[str, Path], camera: CameraModel) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = calibration_to_file(camera).model_dump()
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    return path
