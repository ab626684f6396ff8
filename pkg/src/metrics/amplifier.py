"""Rapp solid-state power amplifier model"""

from dataclasses import dataclass

import numpy as np

from ..clipfilter.clipping import rms
from ..errors import ConfigError, SignalError
from ..waveform.signals import TimeSignal


@dataclass(frozen=True)
class SspaModel:
    smoothness: float = 3.0     # p
    ibo_db: float = 5.0

    def __post_init__(self):
        if self.smoothness < 1:
            raise ConfigError(f"SSPA smoothness p must be at least 1, got {self.smoothness}")

    def saturation(self, s: TimeSignal) -> float:
        """A_sat = RMS(s) * 10^{IBO/20}"""
        level = rms(s) * 10.0 ** (self.ibo_db / 20.0)
        if level <= 0.0:
            raise SignalError("SSPA saturation undefined for an all-zero signal")
        return level

    def gain(self, magnitude: np.ndarray, saturation: float) -> np.ndarray:
        """g(r) = r / (1 + (r/A_sat)^{2p})^{1/(2p)}"""
        two_p = 2.0 * self.smoothness
        return magnitude / (1.0 + (magnitude / saturation) ** two_p) ** (1.0 / two_p)


def sspa_apply(s: TimeSignal, model: SspaModel) -> TimeSignal:
    """AM/AM compression with the phase of every sample preserved"""
    saturation = model.saturation(s)
    magnitude = np.abs(s.samples)
    scale = np.ones_like(magnitude)
    nonzero = magnitude > 0
    scale[nonzero] = model.gain(magnitude[nonzero], saturation) / magnitude[nonzero]
    return s.with_samples(s.samples * scale)
