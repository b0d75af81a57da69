"""Mask boundaries, rasterization and the template projection contour."""
import math

import numpy as np
import pytest
from scipy.ndimage import binary_fill_holes
from scipy.spatial import cKDTree

from src.models.mask import BinaryMask
from src.models.pointset import PointSet3
from src.schemas.params import DeformParams
from src.utils.contour import (
    boundary_bits,
    closing_radius,
    extract_target_contour,
    pixel_labels,
    project_template_contour,
    rasterize,
    rasterize_closed,
)
from src.utils.errors import InvalidInputError
from src.utils.template import apply_deformation
from tests.helpers import rect_mask


def _enumerate_boundary(bits: np.ndarray) -> np.ndarray:
    """Foreground pixels with a background 4-neighbour, by direct neighbour lookup."""
    padded = np.pad(bits, 1, constant_values=False)
    h, w = bits.shape
    out = np.zeros_like(bits)
    for r in range(h):
        for c in range(w):
            if not bits[r, c]:
                continue
            neighbours = (padded[r, c + 1], padded[r + 2, c + 1], padded[r + 1, c], padded[r + 1, c + 2])
            out[r, c] = not all(neighbours)
    return out


def _disk(radius: int, size: int = 64) -> BinaryMask:
    yy, xx = np.mgrid[0:size, 0:size]
    c = size / 2.0
    return BinaryMask((xx - c) ** 2 + (yy - c) ** 2 <= radius * radius)


def _hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    d_ab, _ = cKDTree(b).query(a)
    d_ba, _ = cKDTree(a).query(b)
    return float(max(d_ab.max(), d_ba.max()))


class TestTargetContour:
    def test_full_3x3(self):
        contour = extract_target_contour(BinaryMask(np.ones((3, 3), dtype=bool)))
        assert len(contour) == 8
        assert not np.any(np.all(contour.points == [-0.5, -0.5], axis=1))

    def test_single_pixel(self):
        bits = np.zeros((5, 5), dtype=bool)
        bits[0, 0] = True
        contour = extract_target_contour(BinaryMask(bits))
        np.testing.assert_array_equal(contour.points, [[-2.5, -2.5]])

    def test_disk_matches_enumeration(self):
        disk = _disk(20)
        contour = extract_target_contour(disk)
        expected = _enumerate_boundary(disk.bits)
        np.testing.assert_array_equal(boundary_bits(disk.bits), expected)
        # a 4-connected digital circle has about 4*sqrt(2)*r boundary pixels
        assert 4.0 * math.sqrt(2.0) * 20 - 8 <= len(contour) <= 2.0 * math.pi * 20 + 8

    def test_empty_mask(self):
        with pytest.raises(InvalidInputError):
            extract_target_contour(BinaryMask.empty(8, 8))

    def test_translation_equivariance(self):
        disk = _disk(10, size=48)
        shifted = BinaryMask(np.roll(np.roll(disk.bits, 3, axis=1), -2, axis=0))
        a = extract_target_contour(disk).points + [3.0, -2.0]
        b = extract_target_contour(shifted).points
        np.testing.assert_array_equal(np.array(sorted(map(tuple, a))), np.array(sorted(map(tuple, b))))

    def test_boundary_is_idempotent(self):
        edge = boundary_bits(_disk(15).bits)
        np.testing.assert_array_equal(boundary_bits(edge), edge)

    def test_points_inside_mask_bounds(self, fish_mask):
        contour = extract_target_contour(fish_mask)
        cx, cy = fish_mask.center_offset
        cols, rows = contour.points[:, 0] + cx, contour.points[:, 1] + cy
        assert np.all((cols >= 0) & (cols < fish_mask.width) & (rows >= 0) & (rows < fish_mask.height))


class TestRasterize:
    def test_one_point(self):
        raster, origin = rasterize(np.array([[3.2, -1.7]]))
        assert raster.bits.shape == (1, 1) and raster.area == 1
        assert origin == (3, -2)

    def test_two_points(self):
        raster, origin = rasterize(np.array([[0.0, 0.0], [10.0, 0.0]]), pad=2)
        assert raster.area == 2
        assert raster.width == 15
        assert origin == (-2, -2)

    def test_popcount_bounded(self, rng):
        pts = rng.uniform(-20, 20, size=(300, 2))
        raster, _ = rasterize(pts, pad=1)
        assert raster.area <= 300

    def test_labels_round_half_up(self):
        np.testing.assert_array_equal(pixel_labels(np.array([[0.5, -0.5], [1.49, -1.51]])), [[1, 0], [1, -2]])

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            rasterize(np.zeros((0, 2)))


class TestProjectTemplateContour:
    def test_flat_rectangle_is_its_silhouette(self, rect_template):
        s4, _, _, _ = apply_deformation(rect_template, DeformParams())
        contour = project_template_contour(s4)
        mask = rect_mask(40, 120)
        # template frame is centered on the centroid rather than on the image center
        silhouette = extract_target_contour(mask).points - mask.centroid()
        assert _hausdorff(contour.points, silhouette) <= 1.0

    def test_flat_fish_is_close_to_its_silhouette(self, fine_template, fish_mask):
        s4, _, _, _ = apply_deformation(fine_template, DeformParams())
        contour = project_template_contour(s4)
        silhouette = pixel_labels(extract_target_contour(fish_mask).points - fish_mask.centroid())
        # the closing pass may fill single-pixel notches
        assert _hausdorff(contour.points, silhouette.astype(float)) <= 1.5

    def test_edge_on_sheet(self, template):
        s4, _, _, _ = apply_deformation(template, DeformParams(beta=math.pi / 2.0))
        contour = project_template_contour(s4)
        assert len(contour) > 0
        assert np.ptp(contour.points[:, 0]) <= 2.0

    def test_duplicates_do_not_matter(self, template):
        s4, _, _, _ = apply_deformation(template, DeformParams(gamma=0.4, kappa=0.003))
        doubled = PointSet3(np.vstack([s4.points, s4.points]))
        a = project_template_contour(s4).points
        b = project_template_contour(doubled).points
        np.testing.assert_array_equal(np.array(sorted(map(tuple, a))), np.array(sorted(map(tuple, b))))

    def test_source_points_are_close(self, fine_template):
        params = DeformParams(s=1.0, gamma=0.3, tx=2.5, ty=-1.25)
        s4, _, _, _ = apply_deformation(fine_template, params)
        contour = project_template_contour(s4)
        sources = s4.points[contour.source_idx, :2]
        assert np.max(np.linalg.norm(contour.points - sources, axis=1)) <= 1.5

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            project_template_contour(PointSet3(np.zeros((0, 3))))

    def test_closing_radius(self):
        assert closing_radius(1.0) == 1
        assert closing_radius(2.0) == 1
        assert closing_radius(3.0) == 2
        assert closing_radius(2.9) == 1
        assert closing_radius(4.4) == 2
        assert closing_radius(5.0) == 3

    def test_enlarged_template_has_no_holes(self, template):
        s = 1.5
        s4, _, _, _ = apply_deformation(template, DeformParams(s=s, gamma=0.3))
        raster, _ = rasterize_closed(s4.points[:, :2], 2, s * template.stride)
        np.testing.assert_array_equal(raster.bits, binary_fill_holes(raster.bits))
