"""
Elementary 3D geometry: elemental rotations, the composed template rotation
and the closest points between two 3D lines.

Points are ROW vectors: a point p is rotated as p @ M.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.utils.errors import DegenerateGeometryError, InvalidArgumentError

TWO_PI = 2.0 * math.pi
MIN_DIRECTION_NORM = 1e-12
PARALLEL_SIN_TOL = 1e-9


def _reduce_angle(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
    return math.fmod(value, TWO_PI)


def rot_x(angle: float) -> np.ndarray:
    """Counterclockwise rotation about x for row vectors."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])


def rot_y(angle: float) -> np.ndarray:
    """Counterclockwise rotation about y for row vectors."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    """Counterclockwise rotation about z for row vectors."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """
    Composed template rotation R(gamma) @ R(beta) @ R(alpha).

    A row-vector point p maps to p @ rotation_matrix(alpha, beta, gamma), so the
    in-plane rotation gamma acts first and the tilt alpha about x acts last.
    """
    alpha = _reduce_angle("alpha", alpha)
    beta = _reduce_angle("beta", beta)
    gamma = _reduce_angle("gamma", gamma)
    return rot_z(gamma) @ rot_y(beta) @ rot_x(alpha)


@dataclass(frozen=True)
class Line3:
    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        origin = np.asarray(self.origin, dtype=float).reshape(3)
        direction = np.asarray(self.direction, dtype=float).reshape(3)
        if not (np.all(np.isfinite(origin)) and np.all(np.isfinite(direction))):
            raise InvalidArgumentError("line origin and direction must be finite")
        if np.linalg.norm(direction) <= MIN_DIRECTION_NORM:
            raise InvalidArgumentError("line direction has zero length")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "direction", direction)

    def distance_to(self, point: np.ndarray) -> float:
        """Perpendicular distance from a point to the line."""
        d = self.direction / np.linalg.norm(self.direction)
        w = np.asarray(point, dtype=float) - self.origin
        return float(np.linalg.norm(w - np.dot(w, d) * d))


def closest_points_between_lines(
    l1: Line3, l2: Line3
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """
    Closest pair of points between two non-parallel 3D lines.

    Solves the 2x2 normal equations of |o1 + s*d1 - o2 - t*d2|^2.

    Returns:
        (p1 on l1, p2 on l2, midpoint, gap = |p1 - p2|)
    """
    d1, d2 = l1.direction, l2.direction
    n1, n2 = np.linalg.norm(d1), np.linalg.norm(d2)
    sin_angle = np.linalg.norm(np.cross(d1, d2)) / (n1 * n2)
    if sin_angle < PARALLEL_SIN_TOL:
        raise DegenerateGeometryError(
            f"lines are parallel (sin of angle {sin_angle:.3e}); closest points are not unique"
        )

    w0 = l1.origin - l2.origin
    a = np.dot(d1, d1)
    b = np.dot(d1, d2)
    c = np.dot(d2, d2)
    d = np.dot(d1, w0)
    e = np.dot(d2, w0)
    denom = a * c - b * b

    s = (b * e - c * d) / denom
    t = (a * e - b * d) / denom

    p1 = l1.origin + s * d1
    p2 = l2.origin + t * d2
    midpoint = (p1 + p2) / 2.0
    gap = float(np.linalg.norm(p1 - p2))
    return p1, p2, midpoint, gap
