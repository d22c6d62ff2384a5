"""Synthetic 25-joint walking sequences.

A sinusoidal stick figure: the pelvis translates along the camera's z axis
(toward or away from the sensor), legs and arms swing fore-aft at the stride
frequency with arms in antiphase to the same-side leg, and the torso sways
laterally. Between path legs the walker stands and turns for one second.
Good enough to exercise every stage of the pipeline; not biomechanics.
"""
from __future__ import annotations

import enum
import json
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InvalidParams
from .ingestion import ManifestEntry, Manifest, write_frames_csv, write_manifest
from .skeleton import DEFAULT_SAMPLE_RATE, JointId as J, EmotionLabel, N_JOINTS, Walk

TURN_SECONDS = 1.0


class PathDirection(enum.Enum):
    TowardCamera = "TowardCamera"
    AwayFromCamera = "AwayFromCamera"


@dataclass(frozen=True)
class GaitParams:
    stride_freq: float = 1.8        # Hz
    arm_amp: float = 0.20           # m, wrist fore-aft swing
    leg_amp: float = 0.30           # m, ankle fore-aft swing
    torso_sway: float = 0.02        # m, lateral
    walk_speed: float = 1.2         # m/s
    phase_jitter: float = 0.0       # rad, std of the per-walk gait phase offset
    noise_std: float = 0.0          # m, per-coordinate sensor noise
    duration: float = 10.0          # s
    path: tuple[tuple[PathDirection, float], ...] = (
        (PathDirection.TowardCamera, 4.5), (PathDirection.AwayFromCamera, 4.5))
    seed: int = 0
    extremity_noise_std: float = 0.0  # m, extra noise on head, hands, thumbs, feet
    sample_rate: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        path = tuple((PathDirection(d) if not isinstance(d, PathDirection) else d, float(s))
                     for d, s in self.path)
        object.__setattr__(self, "path", path)
        self.validate()

    def validate(self) -> None:
        if not 0.5 < self.stride_freq < 4:
            raise InvalidParams(f"stride_freq must be in (0.5, 4) Hz, got {self.stride_freq}")
        for name in ("arm_amp", "leg_amp", "torso_sway", "walk_speed", "phase_jitter",
                     "noise_std", "extremity_noise_std"):
            if not getattr(self, name) >= 0:
                raise InvalidParams(f"{name} must be >= 0")
        if not self.duration > 0:
            raise InvalidParams("duration must be > 0")
        if not self.sample_rate > 0:
            raise InvalidParams("sample_rate must be > 0")
        if not self.path or any(s <= 0 for _, s in self.path):
            raise InvalidParams("path needs at least one leg of positive length")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["path"] = [[direction.value, seconds] for direction, seconds in self.path]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GaitParams":
        d = dict(d)
        if "path" in d:
            d["path"] = tuple((PathDirection(a), float(b)) for a, b in d["path"])
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidParams(f"unknown gait parameters {sorted(unknown)}")
        try:
            return cls(**d)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidParams):
                raise
            raise InvalidParams(str(exc)) from None


# Standing pose relative to SpineBase in the body frame: (left, up, forward), meters.
_REST = {
    J.SpineBase: (0.0, 0.0, 0.0),
    J.SpineMid: (0.0, 0.28, 0.0),
    J.SpineShoulder: (0.0, 0.50, 0.0),
    J.Neck: (0.0, 0.56, 0.0),
    J.Head: (0.0, 0.72, 0.02),
    J.ShoulderLeft: (0.18, 0.48, 0.0),
    J.ElbowLeft: (0.21, 0.20, 0.0),
    J.WristLeft: (0.22, -0.05, 0.0),
    J.HandLeft: (0.22, -0.12, 0.01),
    J.HandTipLeft: (0.22, -0.20, 0.02),
    J.ThumbLeft: (0.19, -0.12, 0.04),
    J.ShoulderRight: (-0.18, 0.48, 0.0),
    J.ElbowRight: (-0.21, 0.20, 0.0),
    J.WristRight: (-0.22, -0.05, 0.0),
    J.HandRight: (-0.22, -0.12, 0.01),
    J.HandTipRight: (-0.22, -0.20, 0.02),
    J.ThumbRight: (-0.19, -0.12, 0.04),
    J.HipLeft: (0.09, -0.04, 0.0),
    J.KneeLeft: (0.10, -0.45, 0.02),
    J.AnkleLeft: (0.10, -0.85, 0.0),
    J.FootLeft: (0.10, -0.90, 0.10),
    J.HipRight: (-0.09, -0.04, 0.0),
    J.KneeRight: (-0.10, -0.45, 0.02),
    J.AnkleRight: (-0.10, -0.85, 0.0),
    J.FootRight: (-0.10, -0.90, 0.10),
}

# Fraction of the limb amplitude each joint swings with; sign = antiphase.
_LEG_SWING = {J.HipLeft: 0.1, J.KneeLeft: 0.5, J.AnkleLeft: 1.0, J.FootLeft: 1.0,
              J.HipRight: -0.1, J.KneeRight: -0.5, J.AnkleRight: -1.0, J.FootRight: -1.0}
_ARM_SWING = {J.ElbowLeft: -0.5, J.WristLeft: -1.0, J.HandLeft: -1.1, J.HandTipLeft: -1.2,
              J.ThumbLeft: -1.1, J.ElbowRight: 0.5, J.WristRight: 1.0, J.HandRight: 1.1,
              J.HandTipRight: 1.2, J.ThumbRight: 1.1}
# Knee height oscillation, a quarter cycle ahead of the fore-aft swing.
_KNEE_LIFT = {J.KneeLeft: 0.25, J.KneeRight: -0.25}
_SWAY = {J.SpineMid: 0.5, J.SpineShoulder: 0.9, J.Neck: 1.0, J.Head: 1.1,
         J.ShoulderLeft: 0.9, J.ShoulderRight: 0.9}
EXTREMITIES = (J.Head, J.HandLeft, J.HandRight, J.HandTipLeft, J.HandTipRight,
               J.ThumbLeft, J.ThumbRight, J.FootLeft, J.FootRight)

PELVIS_HEIGHT = 0.95
START_DEPTH = 4.5


def _trajectory(p: GaitParams, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Pelvis depth z and body yaw per frame, cycling the path until ``duration``.

    Yaw 0 faces the camera (forward = -z), yaw pi faces away.
    """
    dt = 1.0 / p.sample_rate
    z = np.empty(n)
    yaw = np.empty(n)
    depth, t0, leg = START_DEPTH, 0.0, 0
    facing = 0.0 if p.path[0][0] is PathDirection.TowardCamera else np.pi
    t = np.arange(n) * dt
    filled = 0
    while filled < n:
        direction, seconds = p.path[leg % len(p.path)]
        target = 0.0 if direction is PathDirection.TowardCamera else np.pi
        if leg > 0:
            # stand and turn in place
            sel = (t >= t0) & (t < t0 + TURN_SECONDS)
            frac = (t[sel] - t0) / TURN_SECONDS
            z[sel] = depth
            yaw[sel] = facing + (target - facing) * frac
            t0 += TURN_SECONDS
        facing = target
        sign = -1.0 if direction is PathDirection.TowardCamera else 1.0
        sel = (t >= t0) & (t < t0 + seconds)
        z[sel] = depth + sign * p.walk_speed * (t[sel] - t0)
        yaw[sel] = facing
        depth += sign * p.walk_speed * seconds
        t0 += seconds
        leg += 1
        filled = int(np.count_nonzero(t < t0))
    return z, yaw


def _body_offsets(p: GaitParams, t: np.ndarray, phase0: float) -> np.ndarray:
    """Joint offsets from SpineBase in the body frame, shape ``(T, 25, 3)``."""
    rest = np.array([_REST[j] for j in J])
    off = np.broadcast_to(rest, (len(t), N_JOINTS, 3)).copy()
    phase = 2 * np.pi * p.stride_freq * t + phase0
    swing = np.sin(phase)
    lift = np.cos(phase)
    for j, frac in _LEG_SWING.items():
        off[:, j, 2] += frac * p.leg_amp * swing
    for j, frac in _KNEE_LIFT.items():
        off[:, j, 1] += frac * p.leg_amp * lift
    for j, frac in _ARM_SWING.items():
        off[:, j, 2] += frac * p.arm_amp * swing
    for j, frac in _SWAY.items():
        off[:, j, 0] += frac * p.torso_sway * swing
    return off


def generate_walk(p: GaitParams, label: EmotionLabel, walk_id: str = "synthetic",
                  subject_id: str = "synthetic", camera_id: str = "synthetic") -> Walk:
    """Render one walk at ``p.sample_rate``; identical params and seed give identical output."""
    p.validate()
    rng = np.random.default_rng(p.seed)
    n = max(int(round(p.duration * p.sample_rate)), 1)
    t = np.arange(n) / p.sample_rate
    z, yaw = _trajectory(p, n)
    phase0 = rng.normal(0.0, p.phase_jitter) if p.phase_jitter > 0 else 0.0
    off = _body_offsets(p, t, phase0)
    # body (left, up, forward) -> camera (x, y, z); forward = (sin yaw, 0, -cos yaw)
    c, s = np.cos(yaw)[:, None], np.sin(yaw)[:, None]
    left, up, fwd = off[..., 0], off[..., 1], off[..., 2]
    pos = np.empty_like(off)
    pos[..., 0] = left * c + fwd * s
    pos[..., 1] = PELVIS_HEIGHT + up
    pos[..., 2] = z[:, None] + left * s - fwd * c
    if p.noise_std > 0:
        pos += rng.normal(0.0, p.noise_std, pos.shape)
    if p.extremity_noise_std > 0:
        idx = [int(j) for j in EXTREMITIES]
        pos[:, idx, :] += rng.normal(0.0, p.extremity_noise_std, (n, len(idx), 3))
    return Walk.from_arrays(pos, walk_id=walk_id, label=label, subject_id=subject_id,
                            camera_id=camera_id, sample_rate=p.sample_rate)


def derived_seeds(seed: int, count: int) -> list[int]:
    """Independent per-walk seeds spawned from one corpus seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


@dataclass(frozen=True)
class CorpusSpec:
    class_a: GaitParams
    class_b: GaitParams
    label_a: EmotionLabel = EmotionLabel.Natural
    label_b: EmotionLabel = EmotionLabel.Angry
    n_per_class: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.n_per_class < 2:
            raise InvalidParams(f"n_per_class must be >= 2, got {self.n_per_class}")
        if self.label_a == self.label_b:
            raise InvalidParams("the two classes need distinct labels")


def generate_walks(spec: CorpusSpec) -> list[Walk]:
    """All walks of a corpus in memory: class A first, then class B."""
    seeds = derived_seeds(spec.seed, 2 * spec.n_per_class)
    walks = []
    for ci, (params, label) in enumerate(((spec.class_a, spec.label_a),
                                          (spec.class_b, spec.label_b))):
        for i in range(spec.n_per_class):
            k = ci * spec.n_per_class + i
            walk_id = f"{label.value.lower()}_{i:03d}"
            walks.append(generate_walk(replace(params, seed=seeds[k]), label, walk_id,
                                       subject_id=f"synth{i:03d}", camera_id="synthetic"))
    return walks


def generate_corpus(spec: CorpusSpec, out_dir: str | os.PathLike) -> Manifest:
    """Write ``manifest.csv`` and ``walks/<walk_id>.csv`` under ``out_dir``."""
    out = Path(out_dir)
    (out / "walks").mkdir(parents=True, exist_ok=True)
    entries = []
    for w in generate_walks(spec):
        fp = out / "walks" / f"{w.walk_id}.csv"
        write_frames_csv(fp, w)
        entries.append(ManifestEntry(w.walk_id, fp, w.subject_id, w.camera_id, w.label))
    write_manifest(out / "manifest.csv", entries, relative_to=out)
    return Manifest(tuple(entries))


def load_corpus_spec(path: str | os.PathLike) -> CorpusSpec:
    """Read a JSON corpus description.

    Keys: ``n_per_class``, ``seed``, and ``class_a`` / ``class_b`` objects
    holding a ``label`` plus any :class:`GaitParams` fields.
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidParams(f"{path}: {exc}") from None
    return corpus_spec_from_dict(raw)


def corpus_spec_from_dict(raw: dict) -> CorpusSpec:
    try:
        a, b = dict(raw["class_a"]), dict(raw["class_b"])
        label_a = EmotionLabel.parse(a.pop("label", "Natural"))
        label_b = EmotionLabel.parse(b.pop("label", "Angry"))
        return CorpusSpec(GaitParams.from_dict(a), GaitParams.from_dict(b), label_a, label_b,
                          int(raw.get("n_per_class", 10)), int(raw.get("seed", 0)))
    except (KeyError, TypeError) as exc:
        raise InvalidParams(f"bad corpus description: {exc!r}") from None
    except ValueError as exc:
        if isinstance(exc, InvalidParams):
            raise
        raise InvalidParams(str(exc)) from None
