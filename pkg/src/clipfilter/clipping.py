"""Amplitude clipping primitives"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import SignalError
from ..waveform.signals import TimeSignal, as_samples

SignalLike = Union[TimeSignal, np.ndarray]


@dataclass(frozen=True)
class ClipOutcome:
    """Result of clipping a signal to amplitude ``level``"""
    clipped: TimeSignal
    noise: TimeSignal       # clipped - original
    level: float
    clipped_count: int


def rms(s: SignalLike) -> float:
    samples = as_samples(s)
    return float(np.linalg.norm(samples) / np.sqrt(samples.size))


def level_from_cr(s: SignalLike, cr_db: float) -> float:
    """Clipping amplitude A = 10^{cr/20} * RMS(s)"""
    samples = as_samples(s)
    if samples.size == 0 or not np.any(samples):
        raise SignalError("clipping level undefined for an all-zero signal")
    return float(10.0 ** (cr_db / 20.0) * rms(samples))


def clip_samples(samples: np.ndarray, level: float) -> np.ndarray:
    """Projection onto the sup-norm ball of radius ``level``, phase preserved"""
    if not level > 0:
        raise SignalError(f"clipping level must be positive, got {level}")
    samples = np.asarray(samples, dtype=complex)
    magnitude = np.abs(samples)
    over = magnitude > level
    out = samples.copy()
    out[over] = samples[over] * (level / magnitude[over])
    return out


def clip(s: SignalLike, level: float) -> ClipOutcome:
    if not isinstance(s, TimeSignal):
        s = TimeSignal(s)
    clipped = clip_samples(s.samples, level)
    return ClipOutcome(
        clipped=s.with_samples(clipped),
        noise=s.with_samples(clipped - s.samples),
        level=float(level),
        clipped_count=int(np.count_nonzero(np.abs(s.samples) > level)),
    )
