"""Base class for the ADMM solvers"""

from abc import ABC, abstractmethod
from typing import List, Optional, Sequence

from ..metrics.evm import evm
from ..utils.logger import setup_logger
from ..waveform.numerology import NumerologyPlan
from ..waveform.operators import SubbandOperator, subband_operators
from ..waveform.signals import SubbandSymbols
from .state import AdmmConfig, AdmmDiagnostics, AdmmPrecomp, AdmmResult, AdmmState
from .steps import initial_state, objective, precompute, sweep
from .windowing import build_windows, windowed_operators

logger = setup_logger(__name__)


class BaseAdmmSolver(ABC):
    """Runs the Gauss-Seidel sweep x_1..x_M, z, y until the primal residual
    reaches the tolerance or ``max_iters`` sweeps are done. Subclasses choose
    the clip level used by each z update."""

    variant = ""

    def __init__(self, config: AdmmConfig):
        self.config = config
        self.name = self.__class__.__name__

    @abstractmethod
    def next_level(self, state: AdmmState, precomp: AdmmPrecomp) -> float:
        """Clip level for the upcoming z update"""
        pass

    def operators(self, plan: NumerologyPlan) -> List[SubbandOperator]:
        if self.config.windowed:
            return windowed_operators(plan, build_windows(plan, self.config.window_rolloff))
        return subband_operators(plan)

    def solve(
        self,
        x: Sequence[SubbandSymbols],
        plan: NumerologyPlan,
        operators: Optional[Sequence[SubbandOperator]] = None,
        evm_reference: Optional[Sequence[SubbandSymbols]] = None,
    ) -> AdmmResult:
        """Minimise the weighted distortion from ``x`` under the clip constraint.

        ``evm_reference`` is the symbol set the per-iteration EVM is measured
        against; it defaults to ``x``.
        """
        operators = list(operators) if operators is not None else self.operators(plan)
        for xi in x:
            xi.check(plan)
        precomp = precompute(x, operators, self.config)
        state = initial_state(precomp, operators, plan.sample_rate)
        tolerance = self.config.tolerance(operators[0].output_length)
        reference = list(evm_reference) if evm_reference is not None else list(x)

        diagnostics = AdmmDiagnostics(self.variant, tolerance=tolerance)
        for _ in range(self.config.max_iters):
            level = self.next_level(state, precomp)
            residual = sweep(state, precomp, operators, level)
            diagnostics.objective.append(objective(x, state.x_hat, precomp.sigma_sq))
            diagnostics.primal_residual.append(residual)
            diagnostics.level.append(level)
            diagnostics.evm_db.append(evm(reference, state.x_hat).composite_db)
            if residual <= tolerance:
                diagnostics.converged = True
                break

        return AdmmResult(list(state.x_hat), state.z_hat, state.y, diagnostics)
