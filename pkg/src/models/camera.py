from dataclasses import dataclass, field

import numpy as np

from src.utils.errors import InvalidCalibrationError

ORTHONORMAL_TOL = 1e-9


@dataclass(frozen=True)
class CameraModel:
    """
    Pinhole camera with the reference plane Z_world = 0.

    K: intrinsics (pixels). R, T: world -> camera extrinsics, T in mm.
    H = K @ [R1 R2 T] maps plane coordinates (X, Y, 1) to image pixels.
    """

    K: np.ndarray
    R: np.ndarray
    T: np.ndarray
    image_width: int = 0
    image_height: int = 0
    H: np.ndarray = field(init=False)

    def __post_init__(self):
        K = np.array(self.K, dtype=float).reshape(3, 3)
        R = np.array(self.R, dtype=float).reshape(3, 3)
        T = np.array(self.T, dtype=float).reshape(3)
        if not (np.all(np.isfinite(K)) and np.all(np.isfinite(R)) and np.all(np.isfinite(T))):
            raise InvalidCalibrationError("calibration contains non-finite values")
        if abs(K[2, 2] - 1.0) > 1e-12:
            raise InvalidCalibrationError(f"K[2][2] must be 1, got {K[2, 2]}")
        if abs(np.linalg.det(K)) < 1e-12:
            raise InvalidCalibrationError("intrinsics matrix K is singular")
        if not np.allclose(R.T @ R, np.eye(3), atol=ORTHONORMAL_TOL):
            raise InvalidCalibrationError("rotation R is not orthonormal")
        if abs(np.linalg.det(R) - 1.0) > ORTHONORMAL_TOL:
            raise InvalidCalibrationError("rotation R must have determinant 1")

        H = K @ np.column_stack([R[:, 0], R[:, 1], T])
        if abs(np.linalg.det(H)) < 1e-12:
            raise InvalidCalibrationError("plane homography is singular (camera lies in the plane)")

        for name, value in (("K", K), ("R", R), ("T", T), ("H", H)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def K_inv(self) -> np.ndarray:
        return np.linalg.inv(self.K)

    @property
    def focal(self) -> float:
        return float((self.K[0, 0] + self.K[1, 1]) / 2.0)

    def world_to_camera(self, points_world: np.ndarray) -> np.ndarray:
        """World points (rows, mm) to camera frame."""
        return np.atleast_2d(points_world) @ self.R.T + self.T

    def project(self, points_cam: np.ndarray) -> np.ndarray:
        """Perspective projection of camera-frame points (rows, mm) to pixels (U, V)."""
        pts = np.atleast_2d(np.asarray(points_cam, dtype=float))
        uvw = pts @ self.K.T
        return uvw[:, :2] / uvw[:, 2:3]
