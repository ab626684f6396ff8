"""Iterative clipping and filtering: the classical per-subband receiver loop
and the noise-shaping variant that filters only the clipping noise."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionError
from ..utils.logger import setup_logger
from ..waveform.numerology import NumerologyPlan
from ..waveform.operators import SubbandOperator, compose, subband_operators
from ..waveform.signals import SubbandSymbols, TimeSignal
from .clipping import clip, level_from_cr

logger = setup_logger(__name__)


@dataclass
class IcfOutcome:
    signal: TimeSignal
    symbols: Optional[List[SubbandSymbols]] = None
    levels: List[float] = field(default_factory=list)

    @property
    def executions(self) -> int:
        return len(self.levels)


def _check_run(x: Sequence[SubbandSymbols], plan: NumerologyPlan, n_exec: int):
    if n_exec < 1:
        raise ValueError(f"n_exec must be at least 1, got {n_exec}")
    if len(x) != plan.M:
        raise DimensionError(f"expected {plan.M} subbands of symbols, got {len(x)}")
    for xi in x:
        xi.check(plan)


def icf_step_classical(
    z: TimeSignal,
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    level: float,
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> Tuple[TimeSignal, List[SubbandSymbols]]:
    """Clip, demodulate every subband with its own receiver, re-modulate, sum.

    The receiver of subband i also picks up the other subbands' signals
    (inter-numerology interference), which is re-modulated with the rest.
    """
    if len(x) != plan.M:
        raise DimensionError(f"expected {plan.M} subbands of symbols, got {len(x)}")
    for xi in x:
        xi.check(plan)
    z.check_length(plan.symbol_length)
    operators = operators if operators is not None else subband_operators(plan)

    clipped = clip(z, level).clipped.samples
    estimates = []
    total = np.zeros(plan.symbol_length, dtype=complex)
    for op in operators:
        blocks = op.demodulate(clipped) / op.eta
        estimates.append(SubbandSymbols(op.index, blocks))
        total += op.forward(blocks)
    return z.with_samples(total), estimates


def icf_run_classical(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    cr_db: float,
    n_exec: int,
) -> IcfOutcome:
    _check_run(x, plan, n_exec)
    operators = subband_operators(plan)
    z = compose(x, plan, operators)
    estimates = list(x)
    levels = []
    for _ in range(n_exec):
        level = level_from_cr(z, cr_db)
        z, estimates = icf_step_classical(z, estimates, plan, level, operators)
        levels.append(level)
    return IcfOutcome(z, estimates, levels)


def _shape_noise(
    samples: np.ndarray,
    operators: Sequence[SubbandOperator],
    level: float,
) -> Tuple[np.ndarray, List[np.ndarray]]:
    """Clipping noise projected per subband: (sum_i F_i F_i^H d, [F_i^H d])"""
    noise = clip(samples, level).noise.samples
    shaped = np.zeros_like(samples)
    corrections = []
    for op in operators:
        correction = op.adjoint(noise)
        corrections.append(correction)
        shaped += op.forward(correction)
    return shaped, corrections


def ns_icf_step(
    z: TimeSignal,
    plan: NumerologyPlan,
    level: float,
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> TimeSignal:
    """z + sum_i F_i F_i^H d with d the clipping noise of z"""
    operators = operators if operators is not None else subband_operators(plan)
    z.check_length(operators[0].output_length)
    shaped, _ = _shape_noise(z.samples, operators, level)
    return z.with_samples(z.samples + shaped)


def ns_icf_run(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    cr_db: float,
    n_exec: int,
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> IcfOutcome:
    """Compose and apply ``n_exec`` noise-shaped clipping steps.

    The returned symbols satisfy signal = sum_i F_i symbols_i exactly.
    """
    _check_run(x, plan, n_exec)
    operators = operators if operators is not None else subband_operators(plan)
    z = compose(x, plan, operators)
    estimates = [xi.blocks.copy() for xi in x]
    levels = []
    for _ in range(n_exec):
        level = level_from_cr(z, cr_db)
        shaped, corrections = _shape_noise(z.samples, operators, level)
        z = z.with_samples(z.samples + shaped)
        for blocks, correction in zip(estimates, corrections):
            blocks += correction
        levels.append(level)
    logger.debug(f"NS-ICF finished {n_exec} executions, last level {levels[-1]:.6g}")
    return IcfOutcome(z, [SubbandSymbols(i, b) for i, b in enumerate(estimates)], levels)
