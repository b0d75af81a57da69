import json

import numpy as np
import pytest

from src.utils.errors import InvalidCalibrationError
from src.utils.io import load_calibration, parse_calibration, save_calibration
from tests.helpers import calibration_file, make_camera, rot_x_column


def _calib_dict(**overrides):
    data = calibration_file(make_camera(R=rot_x_column(0.3))).model_dump()
    data.update(overrides)
    return data


def test_parse():
    cam = parse_calibration(json.dumps(_calib_dict(comment="ignored")))
    np.testing.assert_allclose(cam.K, [[1000, 0, 320], [0, 1000, 240], [0, 0, 1]])
    assert cam.image_width == 640
    np.testing.assert_allclose(cam.H, cam.K @ np.column_stack([cam.R[:, 0], cam.R[:, 1], cam.T]))


def test_round_trip(tmp_path):
    cam = make_camera(R=rot_x_column(0.3), T=(10.0, -5.0, 3000.0))
    loaded = load_calibration(save_calibration(tmp_path / "calib.json", cam))
    np.testing.assert_array_equal(loaded.K, cam.K)
    np.testing.assert_array_equal(loaded.R, cam.R)
    np.testing.assert_array_equal(loaded.T, cam.T)


@pytest.mark.parametrize("key", ["K", "R", "T", "image_width"])
def test_missing_key_is_named(key):
    data = _calib_dict()
    del data[key]
    with pytest.raises(InvalidCalibrationError, match=f"missing key '{key}'"):
        parse_calibration(json.dumps(data), "calib.json")


def test_wrong_length():
    with pytest.raises(InvalidCalibrationError, match="'K'"):
        parse_calibration(json.dumps(_calib_dict(K=[1.0] * 8)))


def test_not_a_rotation():
    with pytest.raises(InvalidCalibrationError, match="orthonormal"):
        parse_calibration(json.dumps(_calib_dict(R=[1, 0, 0, 0, 2, 0, 0, 0, 1])))


def test_reflection():
    with pytest.raises(InvalidCalibrationError, match="determinant"):
        parse_calibration(json.dumps(_calib_dict(R=[-1, 0, 0, 0, 1, 0, 0, 0, 1])))


def test_bad_intrinsics():
    with pytest.raises(InvalidCalibrationError):
        parse_calibration(json.dumps(_calib_dict(K=[1000, 0, 320, 0, 1000, 240, 0, 0, 2])))


def test_not_json():
    with pytest.raises(InvalidCalibrationError, match="calib.json"):
        parse_calibration("K = 1", "calib.json")
