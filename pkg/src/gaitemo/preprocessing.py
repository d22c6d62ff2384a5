"""Walk preprocessing: joint selection, recentering, smoothing, differencing
and front/back segmentation.

Row bookkeeping through the chain for a walk of ``T`` frames::

    select      T rows      row t  <- frame t
    filter      T - 4 rows  row t  <- frames t..t+4, attributed to t+2
    difference  T - 5 rows  row t  <- filtered rows t, t+1, attributed to t+2

Heading labels are computed on the raw walk (recentering zeroes SpineBase,
which is what carries the direction of travel) and looked up per row through
``PoseMatrix.row_frames``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import (EmptyWalk, InvalidConfig, LabelLengthMismatch, NoSegments,
                     TooShort, WrongStage)
from .skeleton import Heading, JointId, JointSet, PoseMatrix, Segment, Stage, Walk

GAUSS_KERNEL = (1 / 16, 4 / 16, 6 / 16, 4 / 16, 1 / 16)
FILTER_LEN = len(GAUSS_KERNEL)
FILTER_CENTER = FILTER_LEN // 2

HeadingLabels = np.ndarray  # int8 codes of Heading, one per walk frame


@dataclass(frozen=True)
class PipelineConfig:
    joint_set: JointSet = JointSet.SIGNIFICANT14
    filter_kernel: tuple[float, ...] = GAUSS_KERNEL
    min_segment_frames: int = 40
    heading_smooth_window: int = 15
    min_heading_speed: float = 0.005  # m/frame

    def __post_init__(self):
        kernel = tuple(float(k) for k in self.filter_kernel)
        object.__setattr__(self, "filter_kernel", kernel)
        if len(kernel) != FILTER_LEN:
            raise InvalidConfig(f"filter kernel must have {FILTER_LEN} taps")
        if abs(sum(kernel) - 1.0) > 1e-12:
            raise InvalidConfig("filter kernel must sum to 1")
        if self.min_segment_frames < 2:
            raise InvalidConfig("min_segment_frames must be >= 2")
        if self.heading_smooth_window < 1 or self.heading_smooth_window % 2 == 0:
            raise InvalidConfig("heading_smooth_window must be odd and >= 1")
        if not self.min_heading_speed >= 0:
            raise InvalidConfig("min_heading_speed must be >= 0")


def select_significant_joints(w: Walk, joint_set: JointSet = JointSet.SIGNIFICANT14) -> PoseMatrix:
    if len(w) == 0:
        raise EmptyWalk(f"walk {w.walk_id!r} has no frames")
    idx = [int(j) for j in joint_set.joints]
    data = w.positions[:, idx, :].reshape(len(w), -1)
    return PoseMatrix(data, joint_set, Stage.Selected)


def recenter_on_spinebase(p: PoseMatrix) -> PoseMatrix:
    """Express every joint relative to SpineBase (columns 0..2) frame by frame.

    Accepts an already recentred matrix, on which it is a no-op.
    """
    if p.stage not in (Stage.Selected, Stage.Recentred):
        raise WrongStage(f"recentering needs a Selected matrix, got {p.stage.name}")
    data = p.data.reshape(p.rows, -1, 3) - p.data[:, None, 0:3]
    data = data.reshape(p.rows, -1)
    data[:, 0:3] = 0.0
    return PoseMatrix(data, p.joint_set, Stage.Recentred, p.row_frames)


def gaussian_filter(p: PoseMatrix, kernel=GAUSS_KERNEL) -> PoseMatrix:
    """Forward 5-tap window ``out[t] = sum_k kernel[k] * in[t + k]``, no padding.

    Evaluated as ``in[t+2] + sum_k kernel[k] * (in[t+k] - in[t+2])``, which is
    the same sum for a normalized kernel but keeps constant columns exact.
    """
    kernel = np.asarray(kernel, dtype=float)
    if kernel.shape != (FILTER_LEN,):
        raise InvalidConfig(f"filter kernel must have {FILTER_LEN} taps")
    if p.rows < FILTER_LEN:
        raise TooShort(p.rows, FILTER_LEN, "filter input")
    windows = sliding_window_view(p.data, FILTER_LEN, axis=0)  # (T-4, cols, 5)
    center = windows[..., FILTER_CENTER]
    out = center + (windows - center[..., None]) @ kernel
    return PoseMatrix(out, p.joint_set, Stage.Filtered,
                      p.row_frames[FILTER_CENTER:p.rows - FILTER_LEN + 1 + FILTER_CENTER])


def differentiate(p: PoseMatrix) -> PoseMatrix:
    if p.rows < 2:
        raise TooShort(p.rows, 2, "difference input")
    return PoseMatrix(np.diff(p.data, axis=0), p.joint_set, Stage.Differenced,
                      p.row_frames[:-1])


def _centered_moving_average(x: np.ndarray, window: int) -> np.ndarray:
    """Centered mean over ``window`` samples; the window shrinks at the ends."""
    half = window // 2
    n = len(x)
    csum = np.concatenate(([0.0], np.cumsum(x)))
    lo = np.clip(np.arange(n) - half, 0, n)
    hi = np.clip(np.arange(n) + half + 1, 0, n)
    return (csum[hi] - csum[lo]) / (hi - lo)


def spinebase_velocity(w: Walk) -> np.ndarray:
    """Per-frame SpineBase z velocity (m/frame); frame 0 reuses frame 1's."""
    if len(w) == 0:
        raise EmptyWalk(f"walk {w.walk_id!r} has no frames")
    z = w.positions[:, JointId.SpineBase, 2]
    if len(z) == 1:
        return np.zeros(1)
    dz = np.diff(z)
    return np.concatenate((dz[:1], dz))


def detect_heading(w: Walk, cfg: PipelineConfig = PipelineConfig()) -> HeadingLabels:
    """Label each frame Front (approaching the camera), Back, or Turning."""
    speed = _centered_moving_average(spinebase_velocity(w), cfg.heading_smooth_window)
    labels = np.full(len(speed), Heading.Turning, dtype=np.int8)
    labels[speed < -cfg.min_heading_speed] = Heading.Front
    labels[speed > cfg.min_heading_speed] = Heading.Back
    return labels


def segment_walk(p: PoseMatrix, h: HeadingLabels,
                 cfg: PipelineConfig = PipelineConfig()) -> tuple[list[Segment], list[Segment]]:
    """Split a differenced matrix into maximal same-direction runs.

    Runs shorter than ``cfg.min_segment_frames`` rows and Turning rows are
    dropped. Returns ``(front, back)`` in time order.
    """
    if p.stage is not Stage.Differenced:
        raise WrongStage(f"segmentation needs a Differenced matrix, got {p.stage.name}")
    h = np.asarray(h)
    if p.rows and (p.row_frames.max() >= len(h) or p.row_frames.min() < 0):
        raise LabelLengthMismatch(f"{len(h)} heading labels do not cover rows of "
                                  f"frames up to {p.row_frames.max()}")
    row_labels = h[p.row_frames]
    front: list[Segment] = []
    back: list[Segment] = []
    if p.rows == 0:
        return front, back
    change = np.flatnonzero(np.diff(row_labels)) + 1
    starts = np.concatenate(([0], change))
    stops = np.concatenate((change, [p.rows]))
    for a, b in zip(starts, stops):
        label = Heading(int(row_labels[a]))
        if label is Heading.Turning or b - a < cfg.min_segment_frames:
            continue
        piece = PoseMatrix(p.data[a:b], p.joint_set, Stage.Differenced, p.row_frames[a:b])
        seg = Segment(label, piece, (int(p.row_frames[a]), int(p.row_frames[b - 1])))
        (front if label is Heading.Front else back).append(seg)
    return front, back


@dataclass
class Preprocessed:
    front: list[Segment]
    back: list[Segment]
    headings: np.ndarray = field(repr=False)
    differenced: PoseMatrix = field(repr=False)


def run_pipeline(w: Walk, cfg: PipelineConfig = PipelineConfig()) -> Preprocessed:
    """Like :func:`preprocess_walk` but keeps the intermediates and never raises NoSegments."""
    # 40 + 4 + 1 + 1: room for one full-length segment after filter and diff
    needed = cfg.min_segment_frames + FILTER_LEN + 1
    if len(w) == 0:
        raise EmptyWalk(f"walk {w.walk_id!r} has no frames")
    if len(w) < needed:
        raise TooShort(len(w), needed, f"walk {w.walk_id!r}")
    headings = detect_heading(w, cfg)
    p = select_significant_joints(w, cfg.joint_set)
    p = recenter_on_spinebase(p)
    p = gaussian_filter(p, cfg.filter_kernel)
    p = differentiate(p)
    front, back = segment_walk(p, headings, cfg)
    return Preprocessed(front, back, headings, p)


def preprocess_walk(w: Walk, cfg: PipelineConfig = PipelineConfig()
                    ) -> tuple[list[Segment], list[Segment]]:
    """Full chain select -> recenter -> filter -> difference -> segment.

    Raises :class:`NoSegments` only when neither direction yields a segment.
    """
    out = run_pipeline(w, cfg)
    if not out.front and not out.back:
        raise NoSegments(f"walk {w.walk_id!r}: no straight segment of at least "
                         f"{cfg.min_segment_frames} rows")
    return out.front, out.back
