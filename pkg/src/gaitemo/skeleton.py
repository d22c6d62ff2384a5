"""Skeleton recording types: joints, frames, walks and pose matrices.

Joint indices follow the Kinect v2 body-tracking order. Coordinates are in
meters in the camera frame: x lateral, y up, z distance from the sensor.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import UnknownLabel

DEFAULT_SAMPLE_RATE = 30.0
N_JOINTS = 25


class JointId(enum.IntEnum):
    SpineBase = 0
    SpineMid = 1
    Neck = 2
    Head = 3
    ShoulderLeft = 4
    ElbowLeft = 5
    WristLeft = 6
    HandLeft = 7
    ShoulderRight = 8
    ElbowRight = 9
    WristRight = 10
    HandRight = 11
    HipLeft = 12
    KneeLeft = 13
    AnkleLeft = 14
    FootLeft = 15
    HipRight = 16
    KneeRight = 17
    AnkleRight = 18
    FootRight = 19
    SpineShoulder = 20
    HandTipLeft = 21
    ThumbLeft = 22
    HandTipRight = 23
    ThumbRight = 24


J = JointId

# Column order of the 42-wide pose matrix; SpineBase must stay first.
SIGNIFICANT_14: tuple[JointId, ...] = (
    J.SpineBase, J.Neck,
    J.ShoulderLeft, J.ShoulderRight,
    J.ElbowLeft, J.ElbowRight,
    J.WristLeft, J.WristRight,
    J.HipLeft, J.HipRight,
    J.KneeLeft, J.KneeRight,
    J.AnkleLeft, J.AnkleRight,
)
ALL_25: tuple[JointId, ...] = tuple(JointId)


class JointSet(enum.Enum):
    SIGNIFICANT14 = "14"
    ALL25 = "25"

    @property
    def joints(self) -> tuple[JointId, ...]:
        return SIGNIFICANT_14 if self is JointSet.SIGNIFICANT14 else ALL_25

    @property
    def n_columns(self) -> int:
        return 3 * len(self.joints)

    @classmethod
    def parse(cls, text: str | int) -> "JointSet":
        text = str(text).strip().lower()
        for member in cls:
            if text in (member.value, member.name.lower()):
                return member
        raise ValueError(f"unknown joint set {text!r} (use 14 or 25)")


def column_names(joint_set: JointSet = JointSet.SIGNIFICANT14) -> list[str]:
    """Joint-major coordinate column names, e.g. ``SpineBase_x``."""
    return [f"{j.name}_{axis}" for j in joint_set.joints for axis in "xyz"]


class EmotionLabel(enum.Enum):
    Natural = "Natural"
    Angry = "Angry"
    Happy = "Happy"

    @classmethod
    def parse(cls, text: str) -> "EmotionLabel":
        key = text.strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise UnknownLabel(text)

    def __str__(self) -> str:
        return self.value

    @property
    def order(self) -> int:
        return list(EmotionLabel).index(self)


class Stage(enum.IntEnum):
    """Position of a :class:`PoseMatrix` in the preprocessing chain."""

    Selected = 0
    Recentred = 1
    Filtered = 2
    Differenced = 3


class Heading(enum.IntEnum):
    Front = 0
    Back = 1
    Turning = 2


@dataclass(frozen=True, eq=False)
class Frame:
    frame_index: int
    timestamp: float
    positions: np.ndarray  # (25, 3)

    def __post_init__(self):
        object.__setattr__(self, "positions", np.asarray(self.positions, dtype=float))


@dataclass(frozen=True, eq=False)
class Walk:
    """One labeled recording: a subject traversing the footpath once.

    Construction does not validate; call :func:`validate_walk` to get the
    list of invariant violations.
    """

    walk_id: str
    subject_id: str
    camera_id: str
    label: EmotionLabel
    frames: tuple[Frame, ...]
    sample_rate: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))

    @classmethod
    def from_arrays(cls, positions: np.ndarray, *, walk_id: str, label: EmotionLabel,
                    subject_id: str = "", camera_id: str = "",
                    sample_rate: float = DEFAULT_SAMPLE_RATE,
                    frame_index: Sequence[int] | None = None,
                    timestamps: Sequence[float] | None = None) -> "Walk":
        positions = np.asarray(positions, dtype=float)
        n = positions.shape[0]
        if frame_index is None:
            frame_index = range(n)
        if timestamps is None:
            timestamps = np.arange(n) / sample_rate
        frames = tuple(Frame(int(i), float(ts), p)
                       for i, ts, p in zip(frame_index, timestamps, positions))
        walk = cls(walk_id, subject_id, camera_id, label, frames, sample_rate)
        if positions.ndim == 3:
            walk.__dict__["positions"] = positions
        return walk

    def __len__(self) -> int:
        return len(self.frames)

    @cached_property
    def positions(self) -> np.ndarray:
        """All joint positions stacked as a ``(T, 25, 3)`` array."""
        if not self.frames:
            return np.zeros((0, N_JOINTS, 3))
        return np.stack([f.positions for f in self.frames])

    @property
    def frame_indices(self) -> np.ndarray:
        return np.array([f.frame_index for f in self.frames], dtype=np.int64)

    @property
    def timestamps(self) -> np.ndarray:
        return np.array([f.timestamp for f in self.frames], dtype=float)

    def same_as(self, other: "Walk") -> bool:
        """Field-for-field equality (positions compared exactly)."""
        return (self.walk_id == other.walk_id and self.subject_id == other.subject_id
                and self.camera_id == other.camera_id and self.label == other.label
                and self.sample_rate == other.sample_rate
                and len(self) == len(other)
                and np.array_equal(self.frame_indices, other.frame_indices)
                and np.array_equal(self.timestamps, other.timestamps)
                and np.array_equal(self.positions, other.positions))


def validate_walk(w: Walk) -> list[str]:
    """Return every invariant violation of ``w``; an empty list means valid."""
    problems: list[str] = []
    if not w.frames:
        problems.append("walk has no frames")
    if not (isinstance(w.sample_rate, (int, float)) and math.isfinite(w.sample_rate)
            and w.sample_rate > 0):
        problems.append(f"sample_rate must be > 0, got {w.sample_rate}")
    if not isinstance(w.label, EmotionLabel):
        problems.append(f"label is not an EmotionLabel: {w.label!r}")
    prev = None
    for k, fr in enumerate(w.frames):
        if fr.frame_index < 0:
            problems.append(f"frame {k}: negative frame_index {fr.frame_index}")
        if prev is not None and fr.frame_index <= prev:
            problems.append("frame_index not strictly increasing")
            prev = None
            break
        prev = fr.frame_index
    for k, fr in enumerate(w.frames):
        pos = fr.positions
        if pos.ndim != 2 or pos.shape[1] != 3:
            problems.append(f"frame {k}: positions must be joint triples, got shape {pos.shape}")
            continue
        if pos.shape[0] != N_JOINTS:
            problems.append(f"frame {k}: expected {N_JOINTS} joints, got {pos.shape[0]}")
        if not np.all(np.isfinite(pos)):
            problems.append(f"frame {k}: non-finite coordinate")
        if not math.isfinite(fr.timestamp):
            problems.append(f"frame {k}: non-finite timestamp")
    if len(w.frames) >= 3 and not problems:
        steps = np.diff(w.timestamps)
        expected = 1.0 / w.sample_rate
        if np.any(np.abs(steps - expected) > 0.5 * expected):
            # uniform sampling is assumed downstream; irregular clocks are not resampled
            warnings.warn(f"walk {w.walk_id!r}: timestamps irregular relative to "
                          f"{w.sample_rate} Hz", stacklevel=2)
    return problems


@dataclass(frozen=True, eq=False)
class PoseMatrix:
    """A ``T x 3|joints|`` coordinate matrix plus its pipeline bookkeeping.

    ``row_frames[t]`` is the position (0-based) in the source walk that row
    ``t`` is attributed to; the filter and difference stages keep it aligned.
    """

    data: np.ndarray
    joint_set: JointSet
    stage: Stage
    row_frames: np.ndarray = field(default=None)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[1] != self.joint_set.n_columns:
            raise ValueError(f"pose matrix must be T x {self.joint_set.n_columns}, "
                             f"got {data.shape}")
        rows = self.row_frames
        rows = np.arange(data.shape[0]) if rows is None else np.asarray(rows, dtype=np.int64)
        if rows.shape != (data.shape[0],):
            raise ValueError("row_frames length must equal row count")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "row_frames", rows)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True, eq=False)
class Segment:
    """A straight-walking slice of a differenced pose matrix."""

    direction: Heading
    data: PoseMatrix
    source_range: tuple[int, int]

    @property
    def rows(self) -> int:
        return self.data.rows
