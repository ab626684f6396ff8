"""O-ADMM and CU-ADMM solvers, repeated executions and the per-subband baseline"""

from typing import Dict, List, Optional, Sequence, Type

import numpy as np

from ..errors import DimensionError
from ..utils.logger import setup_logger
from ..waveform.numerology import NumerologyPlan
from ..waveform.operators import SubbandOperator
from ..waveform.signals import SubbandSymbols
from .base_solver import BaseAdmmSolver
from .state import AdmmConfig, AdmmDiagnostics, AdmmPrecomp, AdmmResult, AdmmState

logger = setup_logger(__name__)


class OAdmmSolver(BaseAdmmSolver):
    """Fixed clip level A = gamma ||z|| / sqrt(L) from the initial composite"""

    variant = "O"

    def next_level(self, state: AdmmState, precomp: AdmmPrecomp) -> float:
        return precomp.level


class CuAdmmSolver(BaseAdmmSolver):
    """Clip level re-derived from the current z_hat before every z update,
    so the output meets the PAPR target rather than a fixed amplitude."""

    variant = "CU"

    def next_level(self, state: AdmmState, precomp: AdmmPrecomp) -> float:
        z = state.z_hat.samples
        return float(self.config.gamma * np.linalg.norm(z) / np.sqrt(z.size))


SOLVERS: Dict[str, Type[BaseAdmmSolver]] = {
    OAdmmSolver.variant: OAdmmSolver,
    CuAdmmSolver.variant: CuAdmmSolver,
}


def create_solver(config: AdmmConfig) -> BaseAdmmSolver:
    return SOLVERS[config.variant](config)


def o_admm(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    config: AdmmConfig,
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> AdmmResult:
    return OAdmmSolver(config).solve(x, plan, operators)


def cu_admm(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    config: AdmmConfig,
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> AdmmResult:
    return CuAdmmSolver(config).solve(x, plan, operators)


def run_executions(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    config: AdmmConfig,
    n_exec: int,
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> AdmmResult:
    """Run the solver ``n_exec`` times, each starting from the previous x_hat
    as its reference. EVM stays measured against the original ``x``."""
    if n_exec < 1:
        raise ValueError(f"n_exec must be at least 1, got {n_exec}")
    solver = create_solver(config)
    operators = list(operators) if operators is not None else solver.operators(plan)
    current = list(x)
    history: List[AdmmDiagnostics] = []
    result = None
    for _ in range(n_exec):
        result = solver.solve(current, plan, operators, evm_reference=x)
        history.append(result.diagnostics)
        current = result.x_hat
    result.history = history
    return result


def subband_admm(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    config: AdmmConfig,
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> AdmmResult:
    """Optimise every subband alone under the same PAPR threshold and sum the outputs"""
    solver = create_solver(config)
    operators = list(operators) if operators is not None else solver.operators(plan)
    if len(x) != len(operators):
        raise DimensionError(f"expected {len(operators)} subbands of symbols, got {len(x)}")

    x_hat, history = [], []
    z_total = y_total = None
    for xi, op in zip(x, operators):
        part = solver.solve([xi], plan, [op])
        x_hat.extend(part.x_hat)
        history.append(part.diagnostics)
        z_total = part.z_hat if z_total is None else z_total.with_samples(z_total.samples + part.z_hat.samples)
        y_total = part.y if y_total is None else y_total.with_samples(y_total.samples + part.y.samples)

    diagnostics = AdmmDiagnostics(
        f"{solver.variant}-subband",
        converged=all(d.converged for d in history),
        tolerance=history[0].tolerance,
    )
    return AdmmResult(x_hat, z_total, y_total, diagnostics, history)
