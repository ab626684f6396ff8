"""Shared fixtures: grids small enough for the dense oracle plus the two-numerology setup"""

import numpy as np
import pytest

from src.config import ExperimentConfig
from src.waveform import SubbandSymbols, build_plan, gen_qpsk


@pytest.fixture
def tiny_plan():
    # K = [4, 2], no guard, J = 1, no CP: N = [8, 4], L_sys = 8
    return build_plan(2, [0, 1], [4, 2], [0], 1, [1.0, 1.0], 0.0)


@pytest.fixture
def small_plan():
    # K = [4, 2], G = [2], J = 2: N = [16, 8], L_cp = [8, 4], L_sys = 40
    return build_plan(2, [0, 1], [4, 2], [2], 2, [1.0, 1.0], 0.25)


@pytest.fixture
def reference_plan():
    return build_plan(2, [0, 1], [56, 28], [8], 4, [1.0, 1.0], 0.07)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_symbols(plan, rng, scale=1.0):
    """Complex Gaussian blocks on every subband"""
    return [
        SubbandSymbols(i, scale * (rng.standard_normal((plan.blocks(i), plan.subcarriers[i]))
                                   + 1j * rng.standard_normal((plan.blocks(i), plan.subcarriers[i]))))
        for i in range(plan.M)
    ]


def random_samples(length, rng):
    return rng.standard_normal(length) + 1j * rng.standard_normal(length)


@pytest.fixture
def small_config():
    """Two numerologies on the small grid, a handful of symbols"""
    config = ExperimentConfig()
    return config.with_overrides(
        v=[0, 1], K=[4, 2], G=[2], J=2, cp_fraction=0.25,
        symbol_count=6, filter_length=8, window_rolloff=0.1,
        outputs=["ccdf", "evm", "symbols"],
    )


@pytest.fixture
def qpsk(reference_plan):
    return gen_qpsk(2024, reference_plan, 0)
