"""Fourier gait descriptors.

Each coordinate column of a segment is reduced to its main frequency (the
largest non-DC bin of the half spectrum, in Hz) and the phase of that bin.
Per direction the per-segment vectors are averaged; front and back halves are
concatenated into the walk descriptor (168 values for 14 joints).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BothSidesEmpty, EmptyDirection, EmptyInput, MissingSide, TooShort
from .skeleton import Segment

MAG_EPS = 1e-12
TIE_RTOL = 1e-12


class MissingSidePolicy(enum.Enum):
    REJECT = "reject"
    ZEROFILL = "zerofill"


@dataclass(frozen=True, eq=False)
class FeatureVector:
    values: np.ndarray
    zero_filled: tuple[str, ...] = ()  # "front" and/or "back" when filled with zeros

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def front(self) -> np.ndarray:
        return self.values[: len(self) // 2]

    @property
    def back(self) -> np.ndarray:
        return self.values[len(self) // 2:]


def feature_width(n_joints: int) -> int:
    """Descriptor width: 2 directions x (frequency, phase) x 3 coordinates per joint."""
    return 2 * 2 * 3 * n_joints


def dft(x: Sequence[float]) -> np.ndarray:
    """Discrete Fourier transform ``X[k] = sum_n x[n] exp(-2j pi k n / N)``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise EmptyInput("dft needs a non-empty 1-D sequence")
    return np.fft.fft(x)


def _wrap_phase(phi):
    # map onto (-pi, pi]
    phi = np.asarray(phi, dtype=float)
    return np.where(phi <= -np.pi, phi + 2 * np.pi, phi)


def main_frequencies(data: np.ndarray, sample_rate: float) -> tuple[np.ndarray, np.ndarray]:
    """Column-wise main frequency (Hz) and phase (rad) of a ``(N, cols)`` block."""
    data = np.asarray(data, dtype=float)
    n = data.shape[0]
    if n < 2:
        raise TooShort(n, 2, "spectrum input")
    spectrum = np.fft.fft(data, axis=0)[1: n // 2 + 1]
    mag = np.abs(spectrum)
    # magnitudes within TIE_RTOL of the peak count as ties; the lowest bin wins
    k = np.argmax(mag >= mag.max(axis=0) * (1 - TIE_RTOL), axis=0)
    cols = np.arange(data.shape[1])
    peak = spectrum[k, cols]
    degenerate = mag[k, cols] < MAG_EPS
    freq = np.where(degenerate, 0.0, (k + 1) * sample_rate / n)
    phase = np.where(degenerate, 0.0, _wrap_phase(np.angle(peak)))
    return freq, phase


def main_frequency_phase(x: Sequence[float], sample_rate: float) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a 1-D sequence")
    f, phi = main_frequencies(x[:, None], sample_rate)
    return float(f[0]), float(phi[0])


def segment_features(s: Segment, sample_rate: float) -> np.ndarray:
    """``[f_1..f_C, phi_1..phi_C]`` over the segment's C columns."""
    f, phi = main_frequencies(s.data.data, sample_rate)
    return np.concatenate((f, phi))


def aggregate_direction(segs: Sequence[Segment], sample_rate: float,
                        circular_phase: bool = False) -> np.ndarray:
    """Elementwise mean of :func:`segment_features` over same-direction segments.

    Phases are averaged as plain reals unless ``circular_phase`` is set, in
    which case the angle of the mean unit phasor is used instead.
    """
    if not segs:
        raise EmptyDirection("no segments to aggregate")
    if len({s.direction for s in segs}) > 1:
        raise ValueError("segments must share one direction")
    stacked = np.stack([segment_features(s, sample_rate) for s in segs])
    mean = stacked.mean(axis=0)
    if circular_phase:
        half = stacked.shape[1] // 2
        phasor = np.exp(1j * stacked[:, half:]).mean(axis=0)
        mean[half:] = np.where(np.abs(phasor) < MAG_EPS, 0.0, _wrap_phase(np.angle(phasor)))
    return mean


def walk_features(front: Sequence[Segment], back: Sequence[Segment], sample_rate: float,
                  policy: MissingSidePolicy = MissingSidePolicy.REJECT,
                  circular_phase: bool = False) -> FeatureVector:
    if not front and not back:
        raise BothSidesEmpty("walk has neither front nor back segments")
    any_seg = (front or back)[0]
    half = 2 * any_seg.data.cols
    parts = []
    filled = []
    for name, segs in (("front", front), ("back", back)):
        if segs:
            parts.append(aggregate_direction(segs, sample_rate, circular_phase))
        elif policy is MissingSidePolicy.REJECT:
            raise MissingSide(f"walk has no {name} segments")
        else:
            parts.append(np.zeros(half))
            filled.append(name)
    return FeatureVector(np.concatenate(parts), tuple(filled))
