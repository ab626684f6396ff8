"""Peak-to-average power ratio and its empirical CCDF"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..errors import SignalError
from ..waveform.signals import as_samples


def papr_db(s) -> float:
    samples = as_samples(s)
    power = np.abs(samples) ** 2
    mean_power = float(np.mean(power)) if power.size else 0.0
    if mean_power == 0.0:
        raise SignalError("PAPR undefined for an all-zero signal")
    return float(10.0 * np.log10(np.max(power) / mean_power))


def ccdf_grid(min_db: float = 0.0, max_db: float = 12.0, step_db: float = 0.05) -> np.ndarray:
    count = int(np.floor((max_db - min_db) / step_db + 0.5)) + 1
    return min_db + step_db * np.arange(count)


@dataclass(frozen=True)
class CcdfCurve:
    thresholds: np.ndarray
    probabilities: np.ndarray
    sample_count: int

    def probability_at(self, threshold_db: float) -> float:
        """Pr(PAPR > threshold) at the first grid point not below ``threshold_db``"""
        idx = int(np.searchsorted(self.thresholds, threshold_db - 1e-12))
        if idx >= self.thresholds.size:
            return float(self.probabilities[-1])
        return float(self.probabilities[idx])

    def threshold_at(self, probability: float) -> Optional[float]:
        """Smallest grid threshold whose exceedance probability is at most ``probability``"""
        hits = np.nonzero(self.probabilities <= probability)[0]
        return float(self.thresholds[hits[0]]) if hits.size else None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"threshold_db": self.thresholds, "ccdf": self.probabilities})

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        return path


def ccdf(papr_samples: Sequence[float], grid: Optional[np.ndarray] = None) -> CcdfCurve:
    samples = np.asarray(papr_samples, dtype=float).reshape(-1)
    if samples.size == 0:
        raise SignalError("CCDF needs at least one PAPR sample")
    grid = ccdf_grid() if grid is None else np.asarray(grid, dtype=float)
    exceed = np.mean(samples[None, :] > grid[:, None], axis=1)
    return CcdfCurve(grid, exceed, int(samples.size))
