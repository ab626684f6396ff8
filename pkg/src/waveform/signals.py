"""Frequency-domain symbol blocks and time-domain sample sequences"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DimensionError
from .numerology import NumerologyPlan


class SignalRole(str, Enum):
    COMPOSITE = "composite"
    SUBSYMBOL = "subsymbol"
    FILTERED = "filtered"
    WINDOWED = "windowed"


@dataclass(frozen=True)
class SubbandSymbols:
    """x_i: 2^{v_i} blocks of K_i modulation symbols, shape (blocks, K_i)"""
    index: int
    blocks: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "blocks", np.atleast_2d(np.asarray(self.blocks, dtype=complex)))

    @property
    def flat(self) -> np.ndarray:
        return self.blocks.reshape(-1)

    def check(self, plan: NumerologyPlan) -> "SubbandSymbols":
        expected = (plan.blocks(self.index), plan.subcarriers[self.index])
        if self.blocks.shape != expected:
            raise DimensionError(
                f"subband {self.index + 1} symbols have shape {self.blocks.shape}, "
                f"plan expects {expected}"
            )
        return self


@dataclass(frozen=True)
class TimeSignal:
    """A complex sample sequence at the unified sampling rate"""
    samples: np.ndarray
    role: SignalRole = SignalRole.COMPOSITE
    sample_rate: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex).reshape(-1))

    def __len__(self) -> int:
        return self.samples.size

    @classmethod
    def composite(cls, samples: np.ndarray, plan: NumerologyPlan) -> "TimeSignal":
        signal = cls(samples, SignalRole.COMPOSITE, plan.sample_rate)
        return signal.check_length(plan.symbol_length)

    def check_length(self, expected: int) -> "TimeSignal":
        if len(self) != expected:
            raise DimensionError(
                f"{self.role.value} signal has {len(self)} samples, expected {expected}"
            )
        return self

    def with_samples(self, samples: np.ndarray) -> "TimeSignal":
        return TimeSignal(samples, self.role, self.sample_rate)


def as_samples(s) -> np.ndarray:
    """Sample array of a TimeSignal or array-like"""
    if isinstance(s, TimeSignal):
        return s.samples
    return np.asarray(s, dtype=complex).reshape(-1)
