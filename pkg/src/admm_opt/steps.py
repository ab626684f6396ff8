"""Single ADMM updates for min sum_i ||x_i - x_hat_i||^2 / (2 sigma_i^2)
subject to z_hat = sum_i F_i x_hat_i and ||z_hat||_inf <= A."""

from typing import List, Optional, Sequence

import numpy as np
from scipy import linalg as sp_linalg

from ..clipfilter.clipping import clip_samples
from ..errors import DimensionError, SignalError
from ..waveform.operators import SubbandOperator
from ..waveform.signals import SignalRole, SubbandSymbols, TimeSignal
from .state import AdmmConfig, AdmmPrecomp, AdmmState


def evm_sigma(x) -> float:
    """sigma_i^2 = ||x_i||^2 over all blocks"""
    blocks = np.asarray(getattr(x, "blocks", x), dtype=complex)
    sigma_sq = float(np.vdot(blocks, blocks).real)
    if sigma_sq == 0.0:
        raise SignalError("sigma^2 undefined for an all-zero symbol vector")
    return sigma_sq


def _hermitian_inverse(matrix: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = sp_linalg.eigh(matrix)
    if eigvals[0] <= 0.0:
        raise SignalError(f"ADMM system matrix is not positive definite (min eigenvalue {eigvals[0]:.3g})")
    return (eigvecs / eigvals) @ eigvecs.conj().T


def objective(x: Sequence[SubbandSymbols], x_hat: Sequence[SubbandSymbols], sigma_sq: Sequence[float]) -> float:
    return float(sum(
        np.linalg.norm(a.blocks - b.blocks) ** 2 / (2.0 * s)
        for a, b, s in zip(x, x_hat, sigma_sq)
    ))


def precompute(
    x: Sequence[SubbandSymbols],
    operators: Sequence[SubbandOperator],
    config: AdmmConfig,
    rho: Optional[float] = None,
) -> AdmmPrecomp:
    """sigma_i^2, M_i = (sigma_i^{-2} I + rho G_i)^{-1} and the initial clip level"""
    if len(x) != len(operators):
        raise DimensionError(f"expected {len(operators)} subbands of symbols, got {len(x)}")
    rho = config.rho if rho is None else rho
    sigma_sq, inverses = [], []
    z = np.zeros(operators[0].output_length, dtype=complex)
    for op, xi in zip(operators, x):
        s = evm_sigma(xi)
        gram = op.gram()
        inverses.append(_hermitian_inverse(np.eye(gram.shape[0]) / s + rho * gram))
        sigma_sq.append(s)
        z += op.forward(xi.blocks)
    norm = np.linalg.norm(z)
    if norm == 0.0:
        raise SignalError("composite signal is all zero")
    level = config.gamma * norm / np.sqrt(z.size)
    return AdmmPrecomp(sigma_sq, inverses, float(level), float(rho), list(x))


def initial_state(precomp: AdmmPrecomp, operators: Sequence[SubbandOperator], sample_rate: float = 1.0) -> AdmmState:
    """(x_hat, z_hat, y) = (x, sum_i F_i x_i, 0)"""
    modulated = [op.forward(xi.blocks) for op, xi in zip(operators, precomp.reference)]
    z = np.sum(modulated, axis=0)
    role = SignalRole.COMPOSITE if operators[0].postfix == 0 else SignalRole.WINDOWED
    return AdmmState(
        iteration=0,
        x_hat=[SubbandSymbols(xi.index, xi.blocks.copy()) for xi in precomp.reference],
        z_hat=TimeSignal(z, role, sample_rate),
        y=TimeSignal(np.zeros_like(z), role, sample_rate),
        level=precomp.level,
        modulated=modulated,
    )


def x_step(
    i: int,
    state: AdmmState,
    precomp: AdmmPrecomp,
    operators: Sequence[SubbandOperator],
) -> SubbandSymbols:
    """Closed-form minimisation over x_hat_i with the latest other iterates"""
    op = operators[i]
    rho = precomp.rho
    others = state.composite - state.modulated[i]
    v = rho * op.adjoint(others - state.z_hat.samples + state.y.samples / rho)
    rhs = precomp.reference[i].blocks / precomp.sigma_sq[i] - v
    inverse = precomp.inverses[i]
    if op.block_diagonal:
        blocks = rhs @ inverse.T
    else:
        blocks = (inverse @ rhs.reshape(-1)).reshape(rhs.shape)
    updated = SubbandSymbols(op.index, blocks)
    state.x_hat[i] = updated
    state.modulated[i] = op.forward(blocks)
    return updated


def z_step(state: AdmmState, level: float, rho: float) -> TimeSignal:
    """Clip u = sum_i F_i x_hat_i + y / rho to amplitude ``level``"""
    u = state.composite + state.y.samples / rho
    state.z_hat = state.z_hat.with_samples(clip_samples(u, level))
    state.level = float(level)
    return state.z_hat


def dual_step(state: AdmmState, rho: float) -> TimeSignal:
    """y <- y + rho (sum_i F_i x_hat_i - z_hat)"""
    state.y = state.y.with_samples(state.y.samples + rho * (state.composite - state.z_hat.samples))
    return state.y


def primal_residual(state: AdmmState) -> float:
    return float(np.linalg.norm(state.composite - state.z_hat.samples))


def sweep(state: AdmmState, precomp: AdmmPrecomp, operators: Sequence[SubbandOperator], level: float) -> float:
    """One Gauss-Seidel pass over the subbands, then z and dual updates"""
    for i in range(len(operators)):
        x_step(i, state, precomp, operators)
    z_step(state, level, precomp.rho)
    dual_step(state, precomp.rho)
    state.iteration += 1
    return primal_residual(state)


