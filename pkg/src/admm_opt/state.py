"""Solver configuration, precomputed factors, iterates and diagnostics"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from ..errors import ConfigError
from ..waveform.signals import SubbandSymbols, TimeSignal

VARIANTS = ("O", "CU")


@dataclass(frozen=True)
class AdmmConfig:
    rho: float = 0.25
    gamma: float = 10 ** 0.25           # amplitude-domain PAPR threshold
    max_iters: int = 10
    primal_tol: Optional[float] = None  # None: 1e-6 * sqrt(L)
    variant: str = "O"
    windowed: bool = False
    window_rolloff: float = 0.0

    def __post_init__(self):
        if not self.rho > 0:
            raise ConfigError(f"rho must be positive, got {self.rho}")
        if not self.gamma > 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.primal_tol is not None and self.primal_tol < 0:
            raise ConfigError(f"primal_tol must be non-negative, got {self.primal_tol}")
        if not 0.0 <= self.window_rolloff < 1.0:
            raise ConfigError(f"window_rolloff must lie in [0, 1), got {self.window_rolloff}")

    @classmethod
    def from_cr_db(cls, cr_db: float, **kwargs) -> "AdmmConfig":
        return cls(gamma=10 ** (cr_db / 20.0), **kwargs)

    @property
    def cr_db(self) -> float:
        return 20.0 * math.log10(self.gamma)

    def tolerance(self, length: int) -> float:
        return 1e-6 * math.sqrt(length) if self.primal_tol is None else self.primal_tol


@dataclass
class AdmmPrecomp:
    sigma_sq: List[float]
    inverses: List[np.ndarray]      # M_i, per block or full when blocks overlap
    level: float                    # A from the initial composite
    rho: float
    reference: List[SubbandSymbols]  # x


@dataclass
class AdmmState:
    iteration: int
    x_hat: List[SubbandSymbols]
    z_hat: TimeSignal
    y: TimeSignal
    level: float
    modulated: List[np.ndarray]     # F_i x_hat_i, kept in sync with x_hat
    residuals: List[float] = field(default_factory=list)
    objectives: List[float] = field(default_factory=list)

    @property
    def composite(self) -> np.ndarray:
        return np.sum(self.modulated, axis=0)


@dataclass
class AdmmDiagnostics:
    """Per-iteration history of one solver run"""
    variant: str
    objective: List[float] = field(default_factory=list)
    primal_residual: List[float] = field(default_factory=list)
    level: List[float] = field(default_factory=list)
    evm_db: List[float] = field(default_factory=list)
    converged: bool = False
    tolerance: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.primal_residual)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "iterations": self.iterations,
            "converged": self.converged,
            "tolerance": self.tolerance,
            "objective": list(self.objective),
            "primal_residual": list(self.primal_residual),
            "A_current": list(self.level),
            "evm_db": list(self.evm_db),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "iter": np.arange(1, self.iterations + 1),
            "objective": self.objective,
            "primal_residual": self.primal_residual,
            "A_current": self.level,
            "evm_db": self.evm_db,
        })

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        return path


@dataclass
class AdmmResult:
    x_hat: List[SubbandSymbols]
    z_hat: TimeSignal
    y: TimeSignal
    diagnostics: AdmmDiagnostics
    history: List[AdmmDiagnostics] = field(default_factory=list)
