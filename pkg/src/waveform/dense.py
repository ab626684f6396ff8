"""Dense-matrix oracle of the subband operators (small grids only).

Built element by element from the sample-domain definition so that it is
independent of the FFT implementation in ``operators``.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..errors import DimensionError
from .numerology import NumerologyPlan

DENSE_FFT_LIMIT = 64


def _check_small(plan: NumerologyPlan):
    if plan.fft_size(0) > DENSE_FFT_LIMIT:
        raise DimensionError(
            f"dense oracle limited to J*N_1 <= {DENSE_FFT_LIMIT}, plan has {plan.fft_size(0)}"
        )


def idft_columns(plan: NumerologyPlan, i: int) -> np.ndarray:
    """D_i: the K_i used columns of the normalised, shifted J*N_i-point IDFT"""
    size = plan.fft_size(i)
    n = np.arange(size)[:, None]
    k = plan.offsets[i] + np.arange(plan.subcarriers[i])[None, :]
    return np.exp(2j * np.pi * n * k / size) / np.sqrt(size)


def cp_insertion(plan: NumerologyPlan, i: int) -> np.ndarray:
    """P_i = [0, I_Lcp; I_JN]"""
    size, cp = plan.fft_size(i), plan.cp_lengths[i]
    p = np.zeros((size + cp, size))
    for row in range(size + cp):
        p[row, (row - cp) % size] = 1.0
    return p


def cp_removal(plan: NumerologyPlan, i: int) -> np.ndarray:
    """C_i = [0, I_JN]"""
    size, cp = plan.fft_size(i), plan.cp_lengths[i]
    return np.hstack([np.zeros((size, cp)), np.eye(size)])


def subband_matrix(plan: NumerologyPlan, i: int) -> np.ndarray:
    """F_i = blkdiag(eta_i P_i D_i, 2^{v_i}), shape (L_sys, 2^{v_i} K_i)"""
    _check_small(plan)
    block = plan.eta[i] * cp_insertion(plan, i) @ idft_columns(plan, i)
    return np.kron(np.eye(plan.blocks(i)), block)


def block_removal_matrix(plan: NumerologyPlan, i: int) -> np.ndarray:
    """blkdiag(D_i^H C_i, 2^{v_i}): classical per-subband receiver"""
    _check_small(plan)
    block = idft_columns(plan, i).conj().T @ cp_removal(plan, i)
    return np.kron(np.eye(plan.blocks(i)), block)


def windowed_subband_matrix(
    plan: NumerologyPlan,
    i: int,
    ramp: np.ndarray,
    output_length: Optional[int] = None,
) -> np.ndarray:
    """Overlap-added W_i P_i^w D_i blocks for a raised-cosine ``ramp``"""
    _check_small(plan)
    size, cp, roff = plan.fft_size(i), plan.cp_lengths[i], len(ramp)
    hop = size + cp
    length = plan.symbol_length + roff if output_length is None else output_length
    d = idft_columns(plan, i)
    k = plan.subcarriers[i]
    out = np.zeros((length, plan.blocks(i) * k), dtype=complex)
    for u in range(plan.blocks(i)):
        for m in range(hop + roff):
            if m < roff:
                weight = ramp[m]
            elif m >= hop:
                weight = ramp[roff - 1 - (m - hop)]
            else:
                weight = 1.0
            out[u * hop + m, u * k:(u + 1) * k] += plan.eta[i] * weight * d[(m - cp) % size]
    return out


def export_matrix_csv(matrix: np.ndarray, path: Union[str, Path]) -> Path:
    """Row-major CSV, each complex entry written as an "re,im" pair"""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    interleaved = np.empty((matrix.shape[0], 2 * matrix.shape[1]))
    interleaved[:, 0::2] = matrix.real
    interleaved[:, 1::2] = matrix.imag
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(interleaved).to_csv(path, header=False, index=False, float_format="%.17g")
    return path


def import_matrix_csv(path: Union[str, Path]) -> np.ndarray:
    values = pd.read_csv(path, header=None).to_numpy(dtype=float)
    return values[:, 0::2] + 1j * values[:, 1::2]
