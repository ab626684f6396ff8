"""Sampling-based optimality check for a converged ADMM solution"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..waveform.operators import SubbandOperator
from ..waveform.signals import SubbandSymbols
from .state import AdmmResult
from .steps import evm_sigma, objective


@dataclass
class OptimalityReport:
    objective: float
    peak: float
    level: float
    primal_residual: float
    best_candidate: float
    feasible: bool
    consensus: bool
    no_better_candidate: bool
    candidates: int

    @property
    def passed(self) -> bool:
        return self.feasible and self.consensus and self.no_better_candidate

    def to_dict(self) -> Dict[str, Any]:
        return {
            "objective": self.objective,
            "peak": self.peak,
            "level": self.level,
            "primal_residual": self.primal_residual,
            "best_candidate": self.best_candidate,
            "feasible": self.feasible,
            "consensus": self.consensus,
            "no_better_candidate": self.no_better_candidate,
            "candidates": self.candidates,
            "passed": self.passed,
        }


def _pull_back(blocks: List[np.ndarray], operators: Sequence[SubbandOperator], level: float) -> List[np.ndarray]:
    """Scale a candidate so that its composite meets the clip level"""
    composite = np.sum([op.forward(b) for op, b in zip(operators, blocks)], axis=0)
    peak = float(np.max(np.abs(composite)))
    t = 1.0 if peak <= level else level / peak
    return [t * b for b in blocks]


def optimality_probe(
    result: AdmmResult,
    x: Sequence[SubbandSymbols],
    operators: Sequence[SubbandOperator],
    level: float,
    n_samples: int = 1000,
    rng: Optional[np.random.Generator] = None,
    perturbation: float = 1e-3,
    margin: float = 1e-8,
    tolerance: Optional[float] = None,
) -> OptimalityReport:
    """Check feasibility, consensus and that no sampled feasible point beats the solution.

    Candidates are random draws around ``x`` and small perturbations of the
    solution, each scaled down until its composite satisfies the clip level.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    sigma_sq = [evm_sigma(xi) for xi in x]
    value = objective(x, result.x_hat, sigma_sq)

    composite = np.sum([op.forward(xi.blocks) for op, xi in zip(operators, result.x_hat)], axis=0)
    residual = float(np.linalg.norm(composite - result.z_hat.samples))
    peak = float(np.max(np.abs(result.z_hat.samples)))
    tolerance = result.diagnostics.tolerance if tolerance is None else tolerance

    def draw(center: np.ndarray, scale: float) -> np.ndarray:
        noise = rng.standard_normal(center.shape) + 1j * rng.standard_normal(center.shape)
        return center + scale * noise / np.sqrt(2.0)

    best = np.inf
    for _ in range(n_samples):
        spread = rng.uniform(0.0, 1.0)
        random_point = _pull_back([draw(xi.blocks, spread) for xi in x], operators, level)
        local_point = _pull_back([draw(xi.blocks, perturbation) for xi in result.x_hat], operators, level)
        for blocks in (random_point, local_point):
            candidate = [SubbandSymbols(xi.index, b) for xi, b in zip(x, blocks)]
            best = min(best, objective(x, candidate, sigma_sq))

    return OptimalityReport(
        objective=value,
        peak=peak,
        level=float(level),
        primal_residual=residual,
        best_candidate=float(best),
        feasible=peak <= level * (1.0 + 1e-6),
        consensus=residual <= tolerance,
        no_better_candidate=bool(best >= value * (1.0 - margin)),
        candidates=2 * n_samples,
    )
