"""
Агрегация длины по клипу и сравнение гистограмм длин.

A clip is reduced to one length by dropping frames beyond two population
standard deviations of the mean (single pass) and averaging the rest.
Predicted and ground-truth length distributions are compared as histograms
over identical edges.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from scipy.special import rel_entr
from scipy.stats import wasserstein_distance

from src.config import settings
from src.utils.errors import InvalidArgumentError, InvalidInputError

logger = logging.getLogger(__name__)

KL_EPSILON = 1e-9
OUTLIER_SIGMAS = 2.0


@dataclass(frozen=True)
class ClipEstimate:
    frame_lengths: Tuple[float, ...]
    kept_mask: Tuple[bool, ...]
    final_length_mm: float
    n_kept: int
    mean_mm: float
    std_mm: float


@dataclass(frozen=True)
class LengthHistogram:
    """Equal-width bins; mass sums to 1 over the in-range values."""

    edges: np.ndarray
    mass: np.ndarray
    n_values: int

    @property
    def centers(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2.0

    @property
    def bin_width(self) -> float:
        return float(self.edges[1] - self.edges[0])

    @property
    def mean(self) -> float:
        return float(np.dot(self.centers, self.mass))


@dataclass(frozen=True)
class HistogramMetrics:
    bias_mm: float
    emd_mm: float
    rmsd: float
    kl: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def _finite_array(values: Iterable[float], what: str) -> np.ndarray:
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise InvalidInputError(f"{what}: no values")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{what}: values must be finite")
    return arr


def aggregate_clip(frame_lengths: Iterable[float]) -> ClipEstimate:
    """
    Mean of the frames within 2 sigma of the clip mean.

    sigma is the population standard deviation; the test is strict. When
    sigma is 0 or every frame would be dropped, all frames are kept.
    """
    lengths = _finite_array(frame_lengths, "clip lengths")
    mean = float(np.mean(lengths))
    std = float(np.std(lengths))

    kept = np.abs(lengths - mean) < OUTLIER_SIGMAS * std
    if std == 0.0 or not np.any(kept):
        kept = np.ones(lengths.shape, dtype=bool)

    n_kept = int(np.count_nonzero(kept))
    if n_kept < lengths.size:
        logger.debug("Clip: dropped %d of %d frames as outliers", lengths.size - n_kept, lengths.size)
    return ClipEstimate(
        frame_lengths=tuple(float(v) for v in lengths),
        kept_mask=tuple(bool(k) for k in kept),
        final_length_mm=float(np.mean(lengths[kept])),
        n_kept=n_kept,
        mean_mm=mean,
        std_mm=std,
    )


def build_histogram(
    lengths: Iterable[float],
    lo: Optional[float] = None,
    hi: Optional[float] = None,
    n_bins: Optional[int] = None,
) -> LengthHistogram:
    """Equal-width histogram over [lo, hi); out-of-range values are dropped."""
    lo = settings.HIST_LO if lo is None else float(lo)
    hi = settings.HIST_HI if hi is None else float(hi)
    n_bins = settings.HIST_BINS if n_bins is None else int(n_bins)
    if n_bins < 1:
        raise InvalidArgumentError(f"n_bins must be >= 1, got {n_bins}")
    if not hi > lo:
        raise InvalidArgumentError(f"histogram range [{lo}, {hi}) is empty")

    values = _finite_array(lengths, "histogram lengths")
    in_range = values[(values >= lo) & (values < hi)]
    if in_range.size == 0:
        raise InvalidInputError(f"no lengths inside [{lo}, {hi}) mm")

    counts, edges = np.histogram(in_range, bins=n_bins, range=(lo, hi))
    return LengthHistogram(edges=edges, mass=counts / in_range.size, n_values=int(in_range.size))


def compare_histograms(pred: LengthHistogram, gt: LengthHistogram) -> HistogramMetrics:
    """
    bias: difference of bin-center means, mm.
    emd: exact 1D earth mover's distance between the masses, mm.
    rmsd: root mean square of the per-bin mass difference (fraction of total).
    kl: KL(pred || gt) in nats with gt smoothed by 1e-9 per bin.
    """
    if pred.edges.shape != gt.edges.shape or not np.allclose(pred.edges, gt.edges, rtol=0.0, atol=1e-9):
        raise InvalidInputError("histograms have different bin edges")

    centers = pred.centers
    bias = pred.mean - gt.mean
    emd = float(wasserstein_distance(centers, centers, pred.mass, gt.mass))
    rmsd = float(np.sqrt(np.mean((pred.mass - gt.mass) ** 2)))
    smoothed = (gt.mass + KL_EPSILON) / (1.0 + KL_EPSILON * gt.mass.size)
    kl = float(np.sum(rel_entr(pred.mass, smoothed)))
    return HistogramMetrics(bias_mm=bias, emd_mm=emd, rmsd=rmsd, kl=kl)


def compare_lengths(
    pred: Iterable[float],
    gt: Iterable[float],
    lo: Optional[float] = None,
    hi: Optional[float] = None,
    n_bins: Optional[int] = None,
) -> HistogramMetrics:
    """Histogram both length sets over identical edges and compare them."""
    metrics = compare_histograms(build_histogram(pred, lo, hi, n_bins), build_histogram(gt, lo, hi, n_bins))
    logger.info(
        "Length metrics: bias %.1f mm, EMD %.1f mm, RMSD %.2f%%, KL %.3f",
        metrics.bias_mm, metrics.emd_mm, 100.0 * metrics.rmsd, metrics.kl,
    )
    return metrics
