"""Seeded QPSK data source"""

from typing import List

import numpy as np

from .numerology import NumerologyPlan
from .signals import SubbandSymbols

QPSK_POINTS = np.array([1 + 1j, -1 + 1j, 1 - 1j, -1 - 1j]) / np.sqrt(2)


def symbol_rng(seed: int, symbol_index: int, subband: int) -> np.random.Generator:
    """Counter-based generator: the draw depends only on (seed, symbol, subband)"""
    return np.random.default_rng([int(seed), int(symbol_index), int(subband)])


def gen_qpsk(seed: int, plan: NumerologyPlan, symbol_index: int = 0) -> List[SubbandSymbols]:
    """Uniform unit-power QPSK on every used subcarrier of every block"""
    symbols = []
    for i in range(plan.M):
        rng = symbol_rng(seed, symbol_index, i)
        idx = rng.integers(0, 4, size=(plan.blocks(i), plan.subcarriers[i]))
        symbols.append(SubbandSymbols(i, QPSK_POINTS[idx]))
    return symbols
