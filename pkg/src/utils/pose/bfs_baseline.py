"""
Полный перебор по базе проекций (baseline).

The database holds the orthographic silhouette of the template at every point
of a (s, kappa, alpha, beta, gamma) grid. A query mask is resized to the area
of each thumbnail and compared with it by IoU after both are aligned on their
foreground centroids, so an entry stands for its shape at any scale. The best
entry's parameters are re-materialized at the scale implied by the area ratio,
with the bend angle kept and the translation that puts its centroid on the
target's.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import cv2
import numpy as np

from src.models.mask import BinaryMask
from src.models.pose import RelativePose
from src.models.template import Template
from src.schemas.io import DatabaseEntry, DatabaseIndex
from src.schemas.params import DeformParams, GridSpec
from src.utils.contour import extract_target_contour, project_template_contour, rasterize_closed
from src.utils.errors import InvalidInputError, OverBendError
from src.utils.geometry.core_geometry import rotation_matrix
from src.utils.io.mask_io import read_mask, write_mask
from src.utils.pose.base import PoseEstimatorInterface
from src.utils.pose.pose_optimizer import chamfer_distance
from src.utils.template import apply_deformation, check_bend, deform_points

logger = logging.getLogger(__name__)

INDEX_FILE = "index.json"


def iou(a: BinaryMask, b: BinaryMask) -> float:
    """|a & b| / |a | b| of two equally sized masks."""
    if a.bits.shape != b.bits.shape:
        raise InvalidInputError(f"mask shapes differ: {a.bits.shape} vs {b.bits.shape}")
    union = np.count_nonzero(a.bits | b.bits)
    if union == 0:
        raise InvalidInputError("IoU of two empty masks is undefined")
    return float(np.count_nonzero(a.bits & b.bits) / union)


def _local_centroid(bits: np.ndarray) -> np.ndarray:
    m = cv2.moments(bits.astype(np.uint8), binaryImage=True)
    return np.array([m["m10"] / m["m00"], m["m01"] / m["m00"]])


@dataclass(frozen=True)
class ProjectionEntry:
    """
    One rendered grid point.

    The thumbnail is kept bit-packed; a default grid holds tens of thousands
    of entries.
    """

    params: DeformParams
    packed: np.ndarray = field(repr=False)
    shape: Tuple[int, int]
    # centered-frame coordinates of thumbnail pixel (0, 0)
    origin: Tuple[int, int]
    area: int
    # foreground centroid in thumbnail pixel coordinates (col, row)
    local_centroid: np.ndarray = field(repr=False)

    @classmethod
    def from_mask(cls, params: DeformParams, thumbnail: BinaryMask, origin: Tuple[int, int]) -> "ProjectionEntry":
        area = thumbnail.area
        if area == 0:
            raise InvalidInputError("projection thumbnail is empty")
        return cls(
            params=params,
            packed=np.packbits(thumbnail.bits),
            shape=thumbnail.bits.shape,
            origin=(int(origin[0]), int(origin[1])),
            area=area,
            local_centroid=_local_centroid(thumbnail.bits),
        )

    @property
    def bits(self) -> np.ndarray:
        n = self.shape[0] * self.shape[1]
        return np.unpackbits(self.packed, count=n).reshape(self.shape).astype(bool)

    @property
    def thumbnail(self) -> BinaryMask:
        return BinaryMask(self.bits)

    def centroid(self) -> np.ndarray:
        """Foreground centroid in the centered frame."""
        return self.local_centroid + np.asarray(self.origin, dtype=float)


@dataclass(frozen=True)
class ProjectionDatabase:
    template: Template
    grid: GridSpec
    entries: Tuple[ProjectionEntry, ...]
    raster_pad: int = 1
    skipped: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    def flat(self) -> "ProjectionDatabase":
        """Only the kappa = 0 entries, for the no-bending ablation."""
        entries = tuple(e for e in self.entries if e.params.kappa == 0.0)
        if not entries:
            raise InvalidInputError("projection database has no flat (kappa = 0) entries")
        return replace(self, entries=entries)


def render_thumbnail(template: Template, params: DeformParams, pad: int = 1) -> ProjectionEntry:
    """Closed orthographic silhouette of the deformed template, cropped to its bounding box plus pad."""
    s4 = deform_points(template.points0.points, params)
    raster, origin = rasterize_closed(s4[:, :2], pad, params.s * template.stride)
    return ProjectionEntry.from_mask(params, raster, origin)


def build_projection_database(
    template: Template, grid: Optional[GridSpec] = None, raster_pad: int = 1
) -> ProjectionDatabase:
    """Render every grid point; over-bent points are skipped and counted."""
    grid = grid or GridSpec.default_for(template.max_abs_y)
    entries: List[ProjectionEntry] = []
    skipped = 0
    axes = [grid.s.values(), grid.kappa.values(), grid.alpha.values(), grid.beta.values(), grid.gamma.values()]
    for s, kappa, alpha, beta, gamma in itertools.product(*axes):
        params = DeformParams(s=s, kappa=kappa, alpha=alpha, beta=beta, gamma=gamma)
        try:
            check_bend(template, params)
        except OverBendError:
            skipped += 1
            continue
        entries.append(render_thumbnail(template, params, raster_pad))

    if skipped:
        logger.warning("Projection database: skipped %d of %d over-bent grid points", skipped, grid.size)
    if not entries:
        raise InvalidInputError("every grid point over-bends the template")
    logger.info("Projection database built: %d entries", len(entries))
    return ProjectionDatabase(template, grid, tuple(entries), raster_pad, skipped)


class _ResizedTarget:
    """The cropped query mask resampled to the sizes the entries ask for, each size computed once."""

    def __init__(self, mask: BinaryMask):
        rows, cols = np.nonzero(mask.bits)
        self.crop = mask.bits[rows.min():rows.max() + 1, cols.min():cols.max() + 1]
        self.area = int(np.count_nonzero(self.crop))
        self._cache: Dict[Tuple[int, int], Tuple[np.ndarray, int, np.ndarray]] = {}

    def at_area(self, area: int) -> Tuple[np.ndarray, int, np.ndarray]:
        """(bits, area, local centroid) of the crop scaled to roughly the given area."""
        k = math.sqrt(area / self.area)
        h, w = self.crop.shape
        size = (max(1, round(w * k)), max(1, round(h * k)))
        if size not in self._cache:
            if size == (w, h):
                bits = self.crop
            else:
                interpolation = cv2.INTER_AREA if k < 1.0 else cv2.INTER_LINEAR
                resized = cv2.resize(self.crop.astype(np.uint8) * 255, size, interpolation=interpolation)
                bits = resized > 127
            n = int(np.count_nonzero(bits))
            centroid = _local_centroid(bits) if n else np.zeros(2)
            self._cache[size] = (bits, n, centroid)
        return self._cache[size]


def aligned_iou(
    target: np.ndarray,
    target_centroid: np.ndarray,
    entry: ProjectionEntry,
    target_area: Optional[int] = None,
) -> float:
    """IoU of a target crop and an entry thumbnail placed so their centroids meet (to the pixel)."""
    thumb = entry.bits
    # thumbnail pixel (0, 0) lands on target pixel (dx, dy)
    dx, dy = (int(v) for v in np.rint(target_centroid - entry.local_centroid))
    x0, x1 = max(0, dx), min(target.shape[1], dx + thumb.shape[1])
    y0, y1 = max(0, dy), min(target.shape[0], dy + thumb.shape[0])
    inter = 0
    if x1 > x0 and y1 > y0:
        inter = int(np.count_nonzero(target[y0:y1, x0:x1] & thumb[y0 - dy:y1 - dy, x0 - dx:x1 - dx]))
    if target_area is None:
        target_area = int(np.count_nonzero(target))
    union = target_area + entry.area - inter
    return inter / union if union else 0.0


def score_database(mask: BinaryMask, db: ProjectionDatabase) -> np.ndarray:
    """Centroid-aligned IoU of the query mask, resized to each entry's area, against every entry."""
    if len(db) == 0:
        raise InvalidInputError("projection database is empty")
    if mask.area == 0:
        raise InvalidInputError("query mask has no foreground pixels")
    target = _ResizedTarget(mask)
    scores = np.empty(len(db))
    for i, entry in enumerate(db.entries):
        bits, area, centroid = target.at_area(entry.area)
        scores[i] = aligned_iou(bits, centroid, entry, area) if area else 0.0
    return scores


def _best_index(scores: np.ndarray, db: ProjectionDatabase) -> int:
    # max IoU, then smaller |kappa|, then smaller index
    return min(range(len(scores)), key=lambda i: (-scores[i], abs(db.entries[i].params.kappa), i))


def rescaled_params(entry: ProjectionEntry, target_area: int) -> Tuple[DeformParams, float]:
    """
    Entry parameters at the scale whose silhouette has target_area pixels.

    kappa is divided by the same factor s is multiplied by, which keeps the bend
    angle and scales every untranslated point uniformly.

    Returns:
        (params with tx = ty = 0, scale factor)
    """
    k = math.sqrt(target_area / entry.area)
    p = entry.params
    return p.model_copy(update={"s": p.s * k, "kappa": p.kappa / k, "tx": 0.0, "ty": 0.0}), k


def bfs_estimate(mask: BinaryMask, db: ProjectionDatabase) -> RelativePose:
    """Relative pose from the database entry with the highest area-normalized IoU."""
    scores = score_database(mask, db)
    best = _best_index(scores, db)
    entry = db.entries[best]
    params, k = rescaled_params(entry, mask.area)

    # rotation acts after translation: (tx, ty) @ M[:2, :2] must move the centroid onto the target's
    shift = mask.centroid() - k * entry.centroid()
    m = rotation_matrix(params.alpha, params.beta, params.gamma)[:2, :2]
    tx, ty = np.linalg.lstsq(m.T, shift, rcond=None)[0]
    params = params.model_copy(update={"tx": float(tx), "ty": float(ty)})

    s4, h, c, t = apply_deformation(db.template, params)
    contour = project_template_contour(s4, db.raster_pad, params.s * db.template.stride)
    loss = chamfer_distance(contour, extract_target_contour(mask))

    logger.info(
        "BFS: entry %d of %d, IoU %.4f, scale x%.3f, chamfer %.2f", best, len(db), scores[best], k, loss
    )
    return RelativePose.from_keypoints(h, c, t, params, loss, (mask.width, mask.height))


class BruteForcePoseSearch(PoseEstimatorInterface):
    """PoseEstimatorInterface over a prebuilt projection database."""

    def __init__(self, db: ProjectionDatabase):
        self.db = db

    def estimate(self, mask: BinaryMask, template: Template) -> RelativePose:
        if template.n_points != self.db.template.n_points:
            raise InvalidInputError("template does not match the one the database was built from")
        return bfs_estimate(mask, self.db)


def save_database(db: ProjectionDatabase, directory: Union[str, Path]) -> Path:
    """One PGM thumbnail per entry plus index.json."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    records = []
    for i, entry in enumerate(db.entries):
        name = f"entry_{i:06d}.pgm"
        write_mask(directory / name, entry.thumbnail)
        records.append(DatabaseEntry(file=name, params=entry.params, origin=entry.origin, area=entry.area))
    index = DatabaseIndex(
        grid=db.grid,
        raster_pad=db.raster_pad,
        template_points=db.template.n_points,
        template_flat_arc=db.template.flat_arc,
        skipped=db.skipped,
        entries=records,
    )
    (directory / INDEX_FILE).write_text(index.model_dump_json(indent=2), encoding="utf-8")
    logger.info("Projection database saved to %s", directory)
    return directory


def load_database(directory: Union[str, Path], template: Template) -> ProjectionDatabase:
    directory = Path(directory)
    index = DatabaseIndex.model_validate_json((directory / INDEX_FILE).read_text(encoding="utf-8"))
    if index.template_points != template.n_points or not np.isclose(index.template_flat_arc, template.flat_arc):
        raise InvalidInputError(
            f"{directory}: database was built from a different template "
            f"({index.template_points} points, expected {template.n_points})"
        )
    entries = []
    for record in index.entries:
        thumbnail = read_mask(directory / record.file)
        if thumbnail.area != record.area:
            raise InvalidInputError(f"{directory / record.file}: area {thumbnail.area} != indexed {record.area}")
        entries.append(ProjectionEntry.from_mask(record.params, thumbnail, tuple(record.origin)))
    return ProjectionDatabase(template, index.grid, tuple(entries), index.raster_pad, index.skipped)
