"""EVM-minimising PAPR reduction by ADMM, plain and windowed"""

from .base_solver import BaseAdmmSolver
from .probe import OptimalityReport, optimality_probe
from .solvers import CuAdmmSolver, OAdmmSolver, create_solver, cu_admm, o_admm, run_executions, subband_admm
from .state import AdmmConfig, AdmmDiagnostics, AdmmPrecomp, AdmmResult, AdmmState
from .steps import dual_step, evm_sigma, initial_state, objective, precompute, x_step, z_step
from .windowing import (
    WindowSpec,
    WindowedSubbandOperator,
    build_window,
    build_windows,
    raised_cosine_ramp,
    windowed_length,
    windowed_operators,
)

__all__ = [
    'BaseAdmmSolver', 'OptimalityReport', 'optimality_probe',
    'CuAdmmSolver', 'OAdmmSolver', 'create_solver', 'cu_admm', 'o_admm', 'run_executions', 'subband_admm',
    'AdmmConfig', 'AdmmDiagnostics', 'AdmmPrecomp', 'AdmmResult', 'AdmmState',
    'dual_step', 'evm_sigma', 'initial_state', 'objective', 'precompute', 'x_step', 'z_step',
    'WindowSpec', 'WindowedSubbandOperator', 'build_window', 'build_windows', 'raised_cosine_ramp',
    'windowed_length', 'windowed_operators',
]
