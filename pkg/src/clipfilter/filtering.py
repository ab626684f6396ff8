"""Time-domain subband filters (F-OFDM) and the filtered NS-ICF variant"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import signal as sp_signal

from ..errors import DimensionError, SignalError
from ..utils.logger import setup_logger
from ..waveform.numerology import NumerologyPlan
from ..waveform.operators import SubbandOperator, subband_operators
from ..waveform.signals import SignalRole, SubbandSymbols, TimeSignal
from .clipping import clip, level_from_cr
from .icf import IcfOutcome

logger = setup_logger(__name__)

DEFAULT_FILTER_LENGTH = 128
DEFAULT_ROLLOFF = 0.25


@dataclass(frozen=True)
class FilterSpec:
    """Impulse response a_i of the transmit filter of subband ``subband``"""
    taps: np.ndarray
    subband: int
    unit_energy: bool = True

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=complex).reshape(-1)
        if taps.size == 0:
            raise DimensionError("a filter needs at least one tap")
        if self.unit_energy and abs(np.vdot(taps, taps).real - 1.0) > 1e-12:
            raise SignalError(f"filter taps have energy {np.vdot(taps, taps).real}, expected 1")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def length(self) -> int:
        return self.taps.size

    def response(self, freqs_f1: np.ndarray, sample_rate: float) -> np.ndarray:
        """H(f) = sum_l a(l) exp(-j 2 pi f l / Fs) at frequencies in units of f1"""
        freqs = np.atleast_1d(np.asarray(freqs_f1, dtype=float))
        _, h = sp_signal.freqz(self.taps, worN=2 * np.pi * freqs / sample_rate)
        return h

    def passband_gain(self, plan: NumerologyPlan) -> float:
        """|H| at the centre of the subband's occupied band"""
        lo, hi = plan.occupied_band(self.subband)
        centre = lo + 0.5 * (hi - lo - plan.spacing(self.subband))
        return float(np.abs(self.response(centre, plan.sample_rate))[0])

    def noise_path_gain(self, plan: NumerologyPlan) -> complex:
        """Complex gain at the subband centre of the delay-centred ('same') convolution"""
        lo, hi = plan.occupied_band(self.subband)
        centre = lo + 0.5 * (hi - lo - plan.spacing(self.subband))
        advance = (self.length - 1) // 2
        h = self.response(centre, plan.sample_rate)[0]
        return complex(h * np.exp(2j * np.pi * centre * advance / plan.sample_rate))

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame({
            "index": np.arange(self.length),
            "re": self.taps.real,
            "im": self.taps.imag,
        }).to_csv(path, index=False, float_format="%.17g")
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path], subband: int, unit_energy: bool = True) -> "FilterSpec":
        df = pd.read_csv(path).sort_values("index")
        return cls(df["re"].to_numpy() + 1j * df["im"].to_numpy(), subband, unit_energy)


def design_subband_filter(
    plan: NumerologyPlan,
    i: int,
    length: int = DEFAULT_FILTER_LENGTH,
    rolloff: float = DEFAULT_ROLLOFF,
) -> FilterSpec:
    """Root-raised-cosine windowed sinc matched to the occupied band of subband i.

    The sinc has the occupied width K_i f_i, the window is the square root of
    a Tukey window with the given rolloff, and a complex exponential moves the
    passband to the subband centre. Taps are normalised to unit energy.
    """
    if length < 1:
        raise DimensionError(f"filter length must be at least 1, got {length}")
    if length > plan.symbol_length:
        raise DimensionError(
            f"filter length {length} exceeds the LCM symbol length {plan.symbol_length}"
        )
    if not 0.0 <= rolloff <= 1.0:
        raise ValueError(f"rolloff must lie in [0, 1], got {rolloff}")

    fs = plan.sample_rate
    spacing = plan.spacing(i)
    width = plan.subcarriers[i] * spacing / fs
    centre = (plan.offsets[i] + 0.5 * (plan.subcarriers[i] - 1)) * spacing / fs

    n = np.arange(length) - 0.5 * (length - 1)
    prototype = width * np.sinc(width * n)
    window = np.sqrt(sp_signal.windows.tukey(length, alpha=rolloff))
    taps = prototype * window * np.exp(2j * np.pi * centre * n)
    taps /= np.linalg.norm(taps)
    return FilterSpec(taps, i)


def design_filters(
    plan: NumerologyPlan,
    length: int = DEFAULT_FILTER_LENGTH,
    rolloff: float = DEFAULT_ROLLOFF,
) -> List[FilterSpec]:
    return [design_subband_filter(plan, i, length, rolloff) for i in range(plan.M)]


def _check_filters(filters: Sequence[FilterSpec], plan: NumerologyPlan) -> int:
    if len(filters) != plan.M:
        raise DimensionError(f"expected {plan.M} filters, got {len(filters)}")
    for i, spec in enumerate(filters):
        if spec.subband != i:
            raise DimensionError(f"filter {i + 1} is designed for subband {spec.subband + 1}")
    lengths = {spec.length for spec in filters}
    if len(lengths) != 1:
        raise DimensionError(f"all subband filters must share one length, got {sorted(lengths)}")
    return lengths.pop()


def filtered_length(plan: NumerologyPlan, filters: Sequence[FilterSpec]) -> int:
    return plan.symbol_length + _check_filters(filters, plan) - 1


def compose_filtered(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    filters: Sequence[FilterSpec],
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> TimeSignal:
    """z_f = sum_i a_i * (F_i x_i), full linear convolution"""
    length = filtered_length(plan, filters)
    if len(x) != plan.M:
        raise DimensionError(f"expected {plan.M} subbands of symbols, got {len(x)}")
    operators = operators if operators is not None else subband_operators(plan)
    total = np.zeros(length, dtype=complex)
    for op, xi, spec in zip(operators, x, filters):
        total += sp_signal.convolve(op.forward(xi.check(plan).blocks), spec.taps, mode="full")
    return TimeSignal(total, SignalRole.FILTERED, plan.sample_rate)


def ns_icf_filtered_step(
    z_f: TimeSignal,
    plan: NumerologyPlan,
    filters: Sequence[FilterSpec],
    level: float,
) -> TimeSignal:
    """Clip z_f, filter the clipping noise with every subband filter, add back.

    The noise path uses a delay-centred convolution of the same length as
    z_f, divided by its complex gain at each subband centre so that the
    shaped noise stays aligned with z_f for even filter lengths too.
    """
    z_f.check_length(filtered_length(plan, filters))
    noise = clip(z_f, level).noise.samples
    shaped = np.zeros_like(noise)
    for spec in filters:
        shaped += sp_signal.convolve(noise, spec.taps, mode="same") / spec.noise_path_gain(plan)
    return z_f.with_samples(z_f.samples + shaped)


def ns_icf_filtered_run(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    filters: Sequence[FilterSpec],
    cr_db: float,
    n_exec: int,
) -> IcfOutcome:
    if n_exec < 1:
        raise ValueError(f"n_exec must be at least 1, got {n_exec}")
    z_f = compose_filtered(x, plan, filters)
    levels = []
    for _ in range(n_exec):
        level = level_from_cr(z_f, cr_db)
        z_f = ns_icf_filtered_step(z_f, plan, filters, level)
        levels.append(level)
    logger.debug(f"Filtered NS-ICF finished {n_exec} executions on {len(z_f)} samples")
    return IcfOutcome(z_f, None, levels)
