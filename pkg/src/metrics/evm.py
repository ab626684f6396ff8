"""Error vector magnitude of modified frequency-domain symbols"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import DimensionError, SignalError

EVM_FLOOR_DB = -200.0


def to_db(evm_linear: float) -> float:
    if evm_linear <= 0.0:
        return EVM_FLOOR_DB
    return max(EVM_FLOOR_DB, float(20.0 * np.log10(evm_linear)))


def _blocks(x) -> np.ndarray:
    return np.asarray(getattr(x, "blocks", x), dtype=complex)


def subband_evm(x, x_hat) -> float:
    """||x_i - x_hat_i|| / ||x_i|| over all blocks of the subband"""
    ref, est = _blocks(x), _blocks(x_hat)
    if ref.shape != est.shape:
        raise DimensionError(f"EVM shape mismatch: {ref.shape} vs {est.shape}")
    norm = np.linalg.norm(ref)
    if norm == 0.0:
        raise SignalError("EVM undefined for an all-zero reference")
    return float(np.linalg.norm(ref - est) / norm)


@dataclass(frozen=True)
class EvmReport:
    per_subband: Tuple[float, ...]
    composite: float

    @property
    def per_subband_db(self) -> Tuple[float, ...]:
        return tuple(to_db(e) for e in self.per_subband)

    @property
    def composite_db(self) -> float:
        return to_db(self.composite)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "per_subband": list(self.per_subband),
            "per_subband_db": list(self.per_subband_db),
            "composite": self.composite,
            "composite_db": self.composite_db,
        }

    def to_frame(self) -> pd.DataFrame:
        labels = [str(i + 1) for i in range(len(self.per_subband))] + ["composite"]
        return pd.DataFrame({
            "subband": labels,
            "evm_db": list(self.per_subband_db) + [self.composite_db],
        })

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        return path


def evm(x: Sequence, x_hat: Sequence, plan=None) -> EvmReport:
    """Per-subband EVMs and the composite sqrt(sum_i EVM_i^2)"""
    if len(x) != len(x_hat):
        raise DimensionError(f"EVM needs matching subband counts, got {len(x)} and {len(x_hat)}")
    if plan is not None:
        if len(x) != plan.M:
            raise DimensionError(f"expected {plan.M} subbands, got {len(x)}")
        for xi in x:
            xi.check(plan)
    per_subband = tuple(subband_evm(a, b) for a, b in zip(x, x_hat))
    return EvmReport(per_subband, float(np.sqrt(np.sum(np.square(per_subband)))))


def blockwise_evm(x: Sequence, x_hat: Sequence) -> float:
    """Composite EVM averaging squared per-block EVMs within each subband"""
    total = 0.0
    for ref, est in zip(x, x_hat):
        ref, est = _blocks(ref), _blocks(est)
        if ref.shape != est.shape:
            raise DimensionError(f"EVM shape mismatch: {ref.shape} vs {est.shape}")
        norms = np.linalg.norm(ref, axis=1)
        if np.any(norms == 0.0):
            raise SignalError("EVM undefined for an all-zero reference block")
        total += float(np.mean((np.linalg.norm(ref - est, axis=1) / norms) ** 2))
    return float(np.sqrt(total))


def rms_evm(reports: Sequence[EvmReport]) -> EvmReport:
    """sqrt(E[EVM^2]) per subband and for the composite, summed in index order"""
    if not reports:
        raise SignalError("RMS EVM needs at least one report")
    per = np.array([r.per_subband for r in reports])
    comp = np.array([r.composite for r in reports])
    return EvmReport(
        tuple(float(v) for v in np.sqrt(np.mean(per ** 2, axis=0))),
        float(np.sqrt(np.mean(comp ** 2))),
    )
