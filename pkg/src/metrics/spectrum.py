"""Averaged periodogram PSD estimates"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import fft as sp_fft
from scipy import signal as sp_signal

from ..errors import SignalError
from ..waveform.signals import as_samples

DEFAULT_ZERO_PAD = 4
PSD_FLOOR_DB = -300.0


@dataclass(frozen=True)
class PsdEstimate:
    """Power per frequency bin (linear, summing to the mean signal power)"""
    freqs: np.ndarray       # units of f1, ascending
    power: np.ndarray
    count: int

    @property
    def power_db(self) -> np.ndarray:
        return np.maximum(10.0 * np.log10(np.maximum(self.power, 1e-300)), PSD_FLOOR_DB)

    @property
    def total_power(self) -> float:
        return float(np.sum(self.power))

    def band_mask(self, bands: Sequence[Tuple[float, float]]) -> np.ndarray:
        mask = np.zeros(self.freqs.size, dtype=bool)
        for lo, hi in bands:
            mask |= (self.freqs >= lo) & (self.freqs < hi)
        return mask

    def normalized(self, bands: Sequence[Tuple[float, float]]) -> "PsdEstimate":
        """Scale so the in-band peak is 1 (0 dB)"""
        mask = self.band_mask(bands)
        if not np.any(mask):
            raise SignalError("no PSD bins fall inside the given bands")
        peak = float(np.max(self.power[mask]))
        if peak == 0.0:
            raise SignalError("in-band PSD is identically zero")
        return PsdEstimate(self.freqs, self.power / peak, self.count)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"freq_f1": self.freqs, "psd_db": self.power_db})

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        return path


def psd_periodogram(
    signals: Sequence,
    nfft: Optional[int] = None,
    sample_rate: float = 1.0,
    zero_pad: int = DEFAULT_ZERO_PAD,
) -> PsdEstimate:
    """Rectangular-window periodogram averaged over a batch of equal-length signals"""
    batch = [as_samples(s) for s in signals]
    if not batch:
        raise SignalError("PSD needs at least one signal")
    length = batch[0].size
    if any(b.size != length for b in batch):
        raise SignalError("PSD batch signals must share one length")
    nfft = zero_pad * length if nfft is None else int(nfft)
    if nfft < length:
        raise SignalError(f"nfft={nfft} shorter than the signal length {length}")

    total = np.zeros(nfft)
    for samples in batch:
        _, pxx = sp_signal.periodogram(
            samples, fs=sample_rate, window="boxcar", nfft=nfft, detrend=False,
            return_onesided=False, scaling="density",
        )
        total += pxx * sample_rate / nfft
    freqs = sp_fft.fftshift(sp_fft.fftfreq(nfft, d=1.0 / sample_rate))
    return PsdEstimate(freqs, sp_fft.fftshift(total / len(batch)), len(batch))


def combine(estimates: Sequence[PsdEstimate]) -> PsdEstimate:
    """Count-weighted average of estimates on one frequency grid, in list order"""
    if not estimates:
        raise SignalError("nothing to combine")
    freqs = estimates[0].freqs
    total = np.zeros_like(estimates[0].power)
    count = 0
    for est in estimates:
        if est.freqs.shape != freqs.shape or not np.allclose(est.freqs, freqs):
            raise SignalError("PSD estimates are on different frequency grids")
        total += est.power * est.count
        count += est.count
    return PsdEstimate(freqs, total / count, count)


def band_level_db(estimate: PsdEstimate, bands: Sequence[Tuple[float, float]]) -> float:
    """Mean linear power over the bins inside ``bands``, in dB"""
    mask = estimate.band_mask(bands)
    if not np.any(mask):
        raise SignalError("no PSD bins fall inside the given bands")
    return float(10.0 * np.log10(max(np.mean(estimate.power[mask]), 1e-300)))


def guard_band_level_db(estimate: PsdEstimate, plan) -> float:
    """Mean PSD over every non-empty guard band of the plan"""
    bands = [(lo, hi) for lo, hi in plan.guard_bands() if hi > lo]
    if not bands:
        raise SignalError("plan has no guard band")
    return band_level_db(estimate, bands)
