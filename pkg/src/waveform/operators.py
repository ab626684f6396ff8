"""Matrix-free subband modulation operators F_i and their adjoints"""

from typing import List, Optional, Sequence

import numpy as np
from scipy import fft as sp_fft

from ..errors import DimensionError
from .numerology import NumerologyPlan
from .signals import SignalRole, SubbandSymbols, TimeSignal


class SubbandOperator:
    """F_i = blkdiag(eta_i P_i D_i, 2^{v_i}) realised with FFTs.

    ``forward`` maps a (blocks, K_i) array to samples, ``adjoint`` maps samples
    back to a (blocks, K_i) array and is the exact Hermitian adjoint. Each
    sub-symbol segment is the cyclic extension of a J*N_i-point normalised
    IDFT: ``cp`` samples in front and ``postfix`` samples behind; segments are
    placed every J*N_i + L_cp_i samples and overlap-added.
    """

    def __init__(self, plan: NumerologyPlan, index: int, output_length: Optional[int] = None):
        if not 0 <= index < plan.M:
            raise DimensionError(f"subband {index + 1} not in plan with M={plan.M}")
        self.plan = plan
        self.index = index
        self.fft_size = plan.fft_size(index)
        self.cp = plan.cp_lengths[index]
        self.n_blocks = plan.blocks(index)
        self.subcarriers = plan.subcarriers[index]
        self.eta = plan.eta[index]
        self.hop = self.fft_size + self.cp
        self.bins = plan.offsets[index] + np.arange(self.subcarriers)
        self.output_length = plan.symbol_length if output_length is None else int(output_length)
        self._gram: Optional[np.ndarray] = None

    @property
    def postfix(self) -> int:
        return 0

    @property
    def weights(self) -> Optional[np.ndarray]:
        """Real per-sample weights of one extended segment, or None for unity"""
        return None

    @property
    def segment_length(self) -> int:
        return self.hop + self.postfix

    @property
    def block_diagonal(self) -> bool:
        """True when F_i^H F_i decomposes into identical per-block Grams"""
        return self.postfix == 0

    @property
    def shape(self):
        return (self.output_length, self.n_blocks * self.subcarriers)

    def _tail_positions(self) -> np.ndarray:
        starts = (np.arange(self.n_blocks) + 1) * self.hop
        return starts[:, None] + np.arange(self.postfix)[None, :]

    def _check_blocks(self, blocks: np.ndarray) -> np.ndarray:
        blocks = np.asarray(blocks, dtype=complex)
        if blocks.ndim == 1 and blocks.size == self.n_blocks * self.subcarriers:
            blocks = blocks.reshape(self.n_blocks, self.subcarriers)
        if blocks.shape != (self.n_blocks, self.subcarriers):
            raise DimensionError(
                f"subband {self.index + 1} expects blocks of shape "
                f"{(self.n_blocks, self.subcarriers)}, got {blocks.shape}"
            )
        return blocks

    def forward(self, blocks: np.ndarray) -> np.ndarray:
        blocks = self._check_blocks(blocks)
        spectrum = np.zeros((self.n_blocks, self.fft_size), dtype=complex)
        spectrum[:, self.bins] = blocks
        body = sp_fft.ifft(spectrum, axis=1, norm="ortho")

        segments = np.concatenate(
            [body[:, self.fft_size - self.cp:], body, body[:, :self.postfix]], axis=1
        ) * self.eta
        if self.weights is not None:
            segments *= self.weights

        out = np.zeros(self.output_length, dtype=complex)
        out[:self.n_blocks * self.hop] = segments[:, :self.hop].reshape(-1)
        if self.postfix:
            out[self._tail_positions()] += segments[:, self.hop:]
        return out

    def adjoint(self, samples: np.ndarray) -> np.ndarray:
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != (self.output_length,):
            raise DimensionError(
                f"subband {self.index + 1} adjoint expects {self.output_length} samples, "
                f"got {samples.shape}"
            )
        segments = np.empty((self.n_blocks, self.segment_length), dtype=complex)
        segments[:, :self.hop] = samples[:self.n_blocks * self.hop].reshape(self.n_blocks, self.hop)
        if self.postfix:
            segments[:, self.hop:] = samples[self._tail_positions()]
        if self.weights is not None:
            segments *= self.weights
        segments *= self.eta

        # fold prefix and postfix back onto the cyclic body (P^H)
        body = segments[:, self.cp:self.cp + self.fft_size].copy()
        if self.cp:
            body[:, self.fft_size - self.cp:] += segments[:, :self.cp]
        if self.postfix:
            body[:, :self.postfix] += segments[:, self.hop:]
        return sp_fft.fft(body, axis=1, norm="ortho")[:, self.bins]

    def demodulate(self, samples: np.ndarray) -> np.ndarray:
        """Classical receiver D_i^H C_i per block: drop the CP, DFT, keep used bins"""
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != (self.output_length,):
            raise DimensionError(
                f"subband {self.index + 1} receiver expects {self.output_length} samples, "
                f"got {samples.shape}"
            )
        body = samples[:self.n_blocks * self.hop].reshape(self.n_blocks, self.hop)[:, self.cp:]
        return sp_fft.fft(body, axis=1, norm="ortho")[:, self.bins]

    def gram(self) -> np.ndarray:
        """F_i^H F_i: per block (K_i x K_i) when block-diagonal, else full"""
        if self._gram is None:
            self._gram = self._block_gram() if self.block_diagonal else self._probe_gram()
        return self._gram

    def _block_gram(self) -> np.ndarray:
        # rows of the normalised IDFT visited by one extended segment
        m = np.arange(self.segment_length)
        rows = (m - self.cp) % self.fft_size
        d = np.exp(2j * np.pi * np.outer(rows, self.bins) / self.fft_size) / np.sqrt(self.fft_size)
        w2 = np.ones(self.segment_length) if self.weights is None else self.weights ** 2
        return self.eta ** 2 * (d.conj().T * w2) @ d

    def _probe_gram(self) -> np.ndarray:
        size = self.n_blocks * self.subcarriers
        gram = np.empty((size, size), dtype=complex)
        for col in range(size):
            unit = np.zeros(size, dtype=complex)
            unit[col] = 1.0
            gram[:, col] = self.adjoint(self.forward(unit.reshape(self.n_blocks, -1))).reshape(-1)
        return 0.5 * (gram + gram.conj().T)


def subband_operators(plan: NumerologyPlan) -> List[SubbandOperator]:
    return [SubbandOperator(plan, i) for i in range(plan.M)]


def modulate_subband(x: SubbandSymbols, plan: NumerologyPlan, i: int) -> TimeSignal:
    """F_i x_i as a length-L_sys composite-rate signal"""
    if x.index != i:
        raise DimensionError(f"symbols belong to subband {x.index + 1}, not {i + 1}")
    x.check(plan)
    return TimeSignal.composite(SubbandOperator(plan, i).forward(x.blocks), plan)


def analyze_subband(s: TimeSignal, plan: NumerologyPlan, i: int) -> SubbandSymbols:
    """F_i^H s: fold the CP, forward DFT, extract the subband bins, scale by eta_i"""
    s.check_length(plan.symbol_length)
    return SubbandSymbols(i, SubbandOperator(plan, i).adjoint(s.samples))


def compose(
    x: Sequence[SubbandSymbols],
    plan: NumerologyPlan,
    operators: Optional[Sequence[SubbandOperator]] = None,
) -> TimeSignal:
    """z = sum_i F_i x_i"""
    if len(x) != plan.M:
        raise DimensionError(f"expected {plan.M} subbands of symbols, got {len(x)}")
    operators = operators if operators is not None else subband_operators(plan)
    total = np.zeros(operators[0].output_length, dtype=complex)
    for op, xi in zip(operators, x):
        total += op.forward(xi.check(plan).blocks)
    role = SignalRole.COMPOSITE if operators[0].output_length == plan.symbol_length else SignalRole.WINDOWED
    return TimeSignal(total, role, plan.sample_rate)
