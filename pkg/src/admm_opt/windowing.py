"""Raised-cosine windowed (W-OFDM) subband operators"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..errors import DimensionError, PlanError
from ..waveform.numerology import NumerologyPlan
from ..waveform.operators import SubbandOperator


def raised_cosine_ramp(length: int) -> np.ndarray:
    """Ramp-up r(k) = (1 - cos(pi (k + 1/2) / L)) / 2, k = 0..L-1"""
    k = np.arange(length)
    return 0.5 * (1.0 - np.cos(np.pi * (k + 0.5) / length))


@dataclass(frozen=True)
class WindowSpec:
    subband: int
    rolloff: float          # beta
    ramp_length: int        # L_roff
    block_length: int       # J*N_i + L_cp_i

    @property
    def ramp(self) -> np.ndarray:
        return raised_cosine_ramp(self.ramp_length)

    @property
    def weights(self) -> np.ndarray:
        """Weights of one extended segment: ramp-up over the CP head, flat, ramp-down over the postfix"""
        ramp = self.ramp
        return np.concatenate([ramp, np.ones(self.block_length - self.ramp_length), ramp[::-1]])


def build_window(plan: NumerologyPlan, i: int, beta: float) -> WindowSpec:
    if not 0.0 <= beta < 1.0:
        raise PlanError(f"window rolloff must lie in [0, 1), got {beta}")
    block_length = plan.block_length(i)
    ramp_length = int(math.floor(beta * block_length + 0.5))
    if ramp_length > 0 and ramp_length >= plan.cp_lengths[i]:
        raise PlanError(
            f"subband {i + 1}: window ramp of {ramp_length} samples does not fit "
            f"in a {plan.cp_lengths[i]}-sample CP"
        )
    return WindowSpec(i, float(beta), ramp_length, block_length)


def build_windows(plan: NumerologyPlan, beta: float) -> List[WindowSpec]:
    return [build_window(plan, i, beta) for i in range(plan.M)]


def windowed_length(plan: NumerologyPlan, windows: Sequence[WindowSpec]) -> int:
    """L_sys plus the longest postfix"""
    return plan.symbol_length + max(w.ramp_length for w in windows)


class WindowedSubbandOperator(SubbandOperator):
    """F_i^w: cyclic prefix and postfix, raised-cosine weighting, overlap-add
    of each postfix onto the ramp-up of the next sub-symbol."""

    def __init__(self, plan: NumerologyPlan, window: WindowSpec, output_length: Optional[int] = None):
        if window.block_length != plan.block_length(window.subband):
            raise DimensionError(
                f"window for subband {window.subband + 1} built for blocks of "
                f"{window.block_length} samples, plan has {plan.block_length(window.subband)}"
            )
        length = plan.symbol_length + window.ramp_length if output_length is None else output_length
        if length < plan.symbol_length + window.ramp_length:
            raise DimensionError(f"output length {length} cannot hold the window postfix")
        super().__init__(plan, window.subband, length)
        self.window = window
        self._weights = window.weights if window.ramp_length else None

    @property
    def postfix(self) -> int:
        return self.window.ramp_length

    @property
    def weights(self) -> Optional[np.ndarray]:
        return self._weights


def windowed_operators(plan: NumerologyPlan, windows: Sequence[WindowSpec]) -> List[WindowedSubbandOperator]:
    if len(windows) != plan.M:
        raise DimensionError(f"expected {plan.M} windows, got {len(windows)}")
    for i, w in enumerate(windows):
        if w.subband != i:
            raise DimensionError(f"window {i + 1} is built for subband {w.subband + 1}")
    length = windowed_length(plan, windows)
    return [WindowedSubbandOperator(plan, w, length) for w in windows]
