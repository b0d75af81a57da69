"""
Оценка относительной 3D позы минимизацией chamfer distance.

Outer iterations re-render the template contour and freeze nearest-neighbour
correspondences; inner iterations take finite-difference gradient steps on the
frozen loss, preconditioned by the damped Gauss-Newton matrix built from the
same differences.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from src.models.mask import BinaryMask
from src.models.pointset import ContourSet, PointSet3
from src.models.pose import RelativePose
from src.models.template import Template
from src.schemas.params import PARAM_NAMES, DeformParams, OptimizerConfig
from src.utils.contour import extract_target_contour, project_template_contour
from src.utils.errors import InvalidInputError, OverBendError
from src.utils.geometry.core_geometry import rotation_matrix
from src.utils.pose.base import PoseEstimatorInterface
from src.utils.template import apply_deformation, check_bend, deform_points

logger = logging.getLogger(__name__)

KAPPA = PARAM_NAMES.index("kappa")
TILTS = [PARAM_NAMES.index("alpha"), PARAM_NAMES.index("beta")]


def chamfer_distance(a: ContourSet, b: ContourSet) -> float:
    """
    Symmetric chamfer distance: sum over a of the squared distance to the
    nearest point of b, plus the same with a and b swapped.
    """
    if len(a) == 0 or len(b) == 0:
        raise InvalidInputError("chamfer distance needs two non-empty point sets")
    d_ab, _ = b.nearest(a.points)
    d_ba, _ = a.nearest(b.points)
    return float(np.sum(d_ab * d_ab) + np.sum(d_ba * d_ba))


def chamfer_distance_brute(a: ContourSet, b: ContourSet) -> float:
    """O(n*m) reference implementation of chamfer_distance."""
    if len(a) == 0 or len(b) == 0:
        raise InvalidInputError("chamfer distance needs two non-empty point sets")
    sq = cdist(a.points, b.points, "sqeuclidean")
    return float(sq.min(axis=1).sum() + sq.min(axis=0).sum())


def principal_axis_angle(mask: BinaryMask) -> float:
    """Angle of the foreground major axis from +x, image orientation (y down)."""
    xy = mask.foreground_xy()
    if xy.shape[0] < 2:
        return 0.0
    eigvals, eigvecs = np.linalg.eigh(np.cov(xy.T))
    major = eigvecs[:, int(np.argmax(eigvals))]
    return math.atan2(major[1], major[0])


@dataclass(frozen=True)
class FrozenCorrespondences:
    """Pairs (template point index, matched target point) held fixed during inner steps."""

    src_idx: np.ndarray
    targets: np.ndarray

    def __len__(self) -> int:
        return int(self.src_idx.shape[0])


@dataclass(frozen=True)
class _Evaluation:
    contour: ContourSet
    loss: float
    template_to_target: np.ndarray
    target_to_template: np.ndarray


def _params(vec: np.ndarray) -> DeformParams:
    return DeformParams.model_construct(**{name: float(v) for name, v in zip(PARAM_NAMES, vec)})


def _is_valid(template: Template, vec: np.ndarray) -> bool:
    if not (np.all(np.isfinite(vec)) and vec[0] > 0):
        return False
    try:
        check_bend(template, _params(vec))
    except OverBendError:
        return False
    return True


def _evaluate(
    template: Template,
    params: DeformParams,
    target: ContourSet,
    raster_pad: int,
    point_spacing: float,
) -> _Evaluation:
    s4 = deform_points(template.points0.points, params)
    contour = project_template_contour(PointSet3(s4), raster_pad, point_spacing)
    d_tt, idx_tt = target.nearest(contour.points)
    d_back, idx_back = contour.nearest(target.points)
    loss = float(np.sum(d_tt * d_tt) + np.sum(d_back * d_back))
    return _Evaluation(contour, loss, idx_tt, idx_back)


def _freeze(evaluation: _Evaluation, target: ContourSet) -> FrozenCorrespondences:
    contour = evaluation.contour
    src_first = contour.source_idx
    tgt_first = target.points[evaluation.template_to_target]
    src_second = contour.source_idx[evaluation.target_to_template]
    return FrozenCorrespondences(
        src_idx=np.concatenate([src_first, src_second]),
        targets=np.concatenate([tgt_first, target.points]),
    )


def freeze_correspondences(
    mask: BinaryMask,
    template: Template,
    params: DeformParams,
    cfg: Optional[OptimizerConfig] = None,
) -> FrozenCorrespondences:
    """Nearest-neighbour pairs of both chamfer terms at the given parameters."""
    cfg = cfg or OptimizerConfig()
    target = extract_target_contour(mask)
    evaluation = _evaluate(template, params, target, cfg.raster_pad, params.s * template.stride)
    return _freeze(evaluation, target)


def frozen_residuals(
    template: Template, params: DeformParams, corr: FrozenCorrespondences
) -> np.ndarray:
    """Projected (x, y) of the corresponded template points minus their targets, flattened."""
    pts = deform_points(template.points0.points[corr.src_idx], params)
    return (pts[:, :2] - corr.targets).ravel()


def frozen_loss(template: Template, params: DeformParams, corr: FrozenCorrespondences) -> float:
    r = frozen_residuals(template, params, corr)
    return float(r @ r)


def _fd_system(
    template: Template,
    vec: np.ndarray,
    corr: FrozenCorrespondences,
    steps: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Central differences of the frozen residuals.

    Returns:
        (loss gradient, residual Jacobian, residuals at vec)
    """
    r0 = frozen_residuals(template, _params(vec), corr)
    loss0 = float(r0 @ r0)
    grad = np.zeros(len(vec))
    jac = np.zeros((r0.shape[0], len(vec)))

    for k, h in enumerate(steps):
        plus, minus = vec.copy(), vec.copy()
        plus[k] += h
        minus[k] -= h
        r_plus = frozen_residuals(template, _params(plus), corr) if _is_valid(template, plus) else None
        r_minus = frozen_residuals(template, _params(minus), corr) if _is_valid(template, minus) else None

        if r_plus is not None and r_minus is not None:
            jac[:, k] = (r_plus - r_minus) / (2.0 * h)
            grad[k] = (float(r_plus @ r_plus) - float(r_minus @ r_minus)) / (2.0 * h)
        elif r_plus is not None:
            jac[:, k] = (r_plus - r0) / h
            grad[k] = (float(r_plus @ r_plus) - loss0) / h
        elif r_minus is not None:
            jac[:, k] = (r0 - r_minus) / h
            grad[k] = (loss0 - float(r_minus @ r_minus)) / h

    return grad, jac, r0


def fd_gradient(
    mask: BinaryMask,
    template: Template,
    params: DeformParams,
    cfg: Optional[OptimizerConfig] = None,
    correspondences: Optional[FrozenCorrespondences] = None,
) -> np.ndarray:
    """
    Finite-difference gradient of the frozen-correspondence chamfer loss
    with respect to (s, kappa, tx, ty, alpha, beta, gamma).

    Correspondences are frozen at params unless given. Near the over-bend
    boundary a one-sided difference is used.
    """
    cfg = cfg or OptimizerConfig()
    corr = correspondences or freeze_correspondences(mask, template, params, cfg)
    grad, _, _ = _fd_system(template, params.to_vector(), corr, cfg.fd_steps())
    return grad


class ChamferPoseOptimizer(PoseEstimatorInterface):
    """
    Gradient-descent fit of the seven deformation parameters to a target mask.

    Open/Closed: the step rule lives in _inner_descent, initialization in
    initial_params.
    """

    def __init__(self, cfg: Optional[OptimizerConfig] = None, seed: int = 0):
        self.cfg = cfg or OptimizerConfig()
        self.seed = seed

    def gamma_seeds(self, mask: BinaryMask) -> List[float]:
        """Principal-axis seeds (both head directions) first, then the four quadrants in seeded order."""
        phi = principal_axis_angle(mask)
        quadrants = [0.0, math.pi / 2.0, math.pi, 3.0 * math.pi / 2.0]
        order = np.random.default_rng(self.seed).permutation(len(quadrants))
        seeds = [phi - math.pi / 2.0, phi + math.pi / 2.0] + [quadrants[i] for i in order]
        return seeds[: self.cfg.multi_start]

    def initial_params(self, mask: BinaryMask, template: Template, gamma: float) -> DeformParams:
        cfg = self.cfg
        s = math.sqrt(mask.area / template.area)
        kappa = 0.0 if cfg.fixed_kappa else cfg.init_bend_angle / (s * template.max_abs_y)
        alpha = beta = cfg.init_tilt
        # the translation is rotated with the fish, so pick it to land on the target centroid
        m = rotation_matrix(alpha, beta, gamma)[:2, :2]
        tx, ty = np.linalg.solve(m.T, mask.centroid())
        return DeformParams(s=s, kappa=kappa, tx=float(tx), ty=float(ty), alpha=alpha, beta=beta, gamma=gamma)

    def _inner_descent(
        self, template: Template, vec: np.ndarray, corr: FrozenCorrespondences
    ) -> np.ndarray:
        cfg = self.cfg
        steps = cfg.fd_steps()
        rates = cfg.learning_rates()
        loss = frozen_loss(template, _params(vec), corr)

        for _ in range(cfg.inner_steps):
            grad, jac, _ = _fd_system(template, vec, corr, steps)
            if cfg.fixed_kappa:
                grad[KAPPA] = 0.0
                jac[:, KAPPA] = 0.0

            normal = jac.T @ jac
            # floor keeps columns that vanish at symmetric poses solvable
            floor = 1e-10 * jac.shape[0] / (steps * steps)
            damping = np.full(len(vec), cfg.damping)
            # bend and tilt foreshorten the body alike; slowing the tilts lets the bend take it
            damping[TILTS] += cfg.tilt_damping
            normal += np.diag(damping * np.diag(normal) + floor)
            if cfg.fixed_kappa:
                normal[KAPPA, KAPPA] = 1.0
            delta = -np.linalg.solve(normal, grad / 2.0) * rates

            improved = False
            for _ in range(cfg.max_halvings + 1):
                trial = vec + delta
                if _is_valid(template, trial):
                    trial_loss = frozen_loss(template, _params(trial), corr)
                    if trial_loss < loss:
                        vec, loss, improved = trial, trial_loss, True
                        break
                delta = delta / 2.0
            if not improved:
                break
        return vec

    def _fit_from(
        self,
        template: Template,
        start: DeformParams,
        target: ContourSet,
    ) -> Tuple[np.ndarray, float, List[float]]:
        cfg = self.cfg
        vec = start.to_vector()
        # closing radius fixed for the whole fit so the outer loss does not jump with s
        spacing = start.s * template.stride
        current = _evaluate(template, start, target, cfg.raster_pad, spacing)
        trace = [current.loss]
        tol = cfg.convergence_tol
        if tol is None:
            tol = 1e-3 * (len(current.contour) + len(target))

        for outer in range(cfg.max_outer_iters):
            corr = _freeze(current, target)
            step = self._inner_descent(template, vec, corr) - vec

            accepted: Optional[Tuple[np.ndarray, _Evaluation]] = None
            for _ in range(cfg.max_halvings + 1):
                trial = vec + step
                if _is_valid(template, trial):
                    evaluation = _evaluate(template, _params(trial), target, cfg.raster_pad, spacing)
                    if evaluation.loss <= current.loss:
                        accepted = (trial, evaluation)
                        break
                step = step / 2.0
            if accepted is None:
                logger.debug("Outer iteration %d: no improving step, stopping", outer)
                break

            improvement = current.loss - accepted[1].loss
            vec, current = accepted
            trace.append(current.loss)
            logger.debug("Outer iteration %d: loss %.2f", outer, current.loss)
            if improvement < tol:
                break

        return vec, current.loss, trace

    def estimate(self, mask: BinaryMask, template: Template) -> RelativePose:
        """
        Fit the template to the target mask.

        Runs one fit per gamma seed and keeps the lowest final loss.
        Non-convergence is not an error: the best iterate is returned.
        """
        target = extract_target_contour(mask)

        best: Optional[Tuple[np.ndarray, float, List[float]]] = None
        for gamma in self.gamma_seeds(mask):
            start = self.initial_params(mask, template, gamma)
            vec, loss, trace = self._fit_from(template, start, target)
            logger.debug("Seed gamma=%.3f: final loss %.2f after %d accepted steps", gamma, loss, len(trace) - 1)
            if best is None or loss < best[1]:
                best = (vec, loss, trace)

        vec, loss, trace = best
        params = DeformParams.from_vector(vec).normalized()
        if self.cfg.fixed_kappa:
            params = params.model_copy(update={"kappa": 0.0})
        _, h, c, t = apply_deformation(template, params)
        logger.info("Relative pose: loss %.2f, s=%.4f, kappa=%.3e", loss, params.s, params.kappa)
        return RelativePose.from_keypoints(
            h, c, t, params, loss, (mask.width, mask.height), trace
        )


def estimate_relative_pose(
    mask: BinaryMask,
    template: Template,
    cfg: Optional[OptimizerConfig] = None,
    seed: int = 0,
) -> RelativePose:
    """Relative 3D pose, 3D keypoints (pixels) and 2D keypoints of the fish in mask."""
    return ChamferPoseOptimizer(cfg, seed).estimate(mask, template)

