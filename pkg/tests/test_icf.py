import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.clipfilter import icf_run_classical, icf_step_classical, ns_icf_run, ns_icf_step
from src.clipfilter.clipping import clip_samples, level_from_cr
from src.waveform import build_plan, compose, gen_qpsk, subband_operators
from src.waveform.dense import block_removal_matrix, subband_matrix
from tests.conftest import random_symbols


def test_classical_step_without_clipping_adds_only_interference(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    z = compose(xs, small_plan)
    level = 2 * np.max(np.abs(z.samples))
    z_hat, estimates = icf_step_classical(z, xs, small_plan, level)

    f = [subband_matrix(small_plan, i) for i in range(small_plan.M)]
    r = [block_removal_matrix(small_plan, i) for i in range(small_plan.M)]
    expected = sum(f[i] @ (r[i] @ z.samples) for i in range(small_plan.M))
    assert_allclose(z_hat.samples, expected, atol=1e-10)

    interference = f[0] @ r[0] @ f[1] @ xs[1].flat + f[1] @ r[1] @ f[0] @ xs[0].flat
    assert_allclose(z_hat.samples - z.samples, interference, atol=1e-10)
    assert np.linalg.norm(interference) > 1e-6
    assert [e.index for e in estimates] == [0, 1]


@pytest.mark.parametrize("cp_fraction", [0.0, 0.25])
def test_classical_step_is_exact_for_one_numerology(cp_fraction, rng):
    plan = build_plan(1, [0], [6], [], 2, [1.0], cp_fraction)
    xs = random_symbols(plan, rng)
    z = compose(xs, plan)
    z_hat, estimates = icf_step_classical(z, xs, plan, 2 * np.max(np.abs(z.samples)))
    assert_allclose(z_hat.samples, z.samples, atol=1e-12)
    assert_allclose(estimates[0].blocks, xs[0].blocks, atol=1e-12)


def test_classical_run_records_levels(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    outcome = icf_run_classical(xs, small_plan, 3.0, 3)
    assert outcome.executions == 3
    assert outcome.levels[0] == pytest.approx(level_from_cr(compose(xs, small_plan), 3.0))
    assert len(outcome.signal) == small_plan.symbol_length


def test_noise_shaping_is_identity_without_clipping(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    z = compose(xs, small_plan)
    out = ns_icf_step(z, small_plan, 2 * np.max(np.abs(z.samples)))
    assert_allclose(out.samples, z.samples, atol=1e-12)


def test_noise_shaping_matches_dense(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    z = compose(xs, small_plan)
    level = float(np.median(np.abs(z.samples)))
    d = clip_samples(z.samples, level) - z.samples
    f = [subband_matrix(small_plan, i) for i in range(small_plan.M)]
    expected = z.samples + sum(fi @ (fi.conj().T @ d) for fi in f)
    assert_allclose(ns_icf_step(z, small_plan, level).samples, expected, atol=1e-10)


def test_subband_projection_is_idempotent(rng):
    # without a CP, F_i^H F_i = I and F_i F_i^H projects onto range(F_i)
    plan = build_plan(2, [0, 1], [4, 2], [2], 2, [1.0, 1.0], 0.0)
    xs = random_symbols(plan, rng)
    z = compose(xs, plan)
    d = clip_samples(z.samples, float(np.median(np.abs(z.samples)))) - z.samples
    for op in subband_operators(plan):
        once = op.forward(op.adjoint(d))
        assert_allclose(op.forward(op.adjoint(once)), once, atol=1e-10)


def test_tracked_symbols_reproduce_the_signal(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    outcome = ns_icf_run(xs, small_plan, 2.0, 4)
    assert outcome.executions == 4
    assert_allclose(compose(outcome.symbols, small_plan).samples, outcome.signal.samples, atol=1e-10)


def test_one_execution_equals_one_step(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    z = compose(xs, small_plan)
    outcome = ns_icf_run(xs, small_plan, 3.0, 1)
    step = ns_icf_step(z, small_plan, level_from_cr(z, 3.0))
    assert_allclose(outcome.signal.samples, step.samples, atol=1e-12)


def test_noise_shaping_lowers_the_peak(reference_plan, qpsk):
    z = compose(qpsk, reference_plan)
    outcome = ns_icf_run(qpsk, reference_plan, 5.0, 6)
    before = np.max(np.abs(z.samples)) / np.sqrt(np.mean(np.abs(z.samples) ** 2))
    after = np.max(np.abs(outcome.signal.samples)) / np.sqrt(np.mean(np.abs(outcome.signal.samples) ** 2))
    assert after < before


def test_execution_count_must_be_positive(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    with pytest.raises(ValueError):
        ns_icf_run(xs, small_plan, 3.0, 0)
    with pytest.raises(ValueError):
        icf_run_classical(xs, small_plan, 3.0, 0)


def test_classical_interference_accumulates_over_steps(reference_plan):
    # level far above every peak: only the receivers' interference changes the signal
    ops = subband_operators(reference_plan)
    level = 1e6
    for seed in range(100):
        xs = gen_qpsk(seed, reference_plan, 0)
        z = compose(xs, reference_plan, ops)
        z_hat, estimates = z, xs
        distances = []
        for _ in range(5):
            assert np.max(np.abs(z_hat.samples)) <= level
            z_hat, estimates = icf_step_classical(z_hat, estimates, reference_plan, level, ops)
            distances.append(np.linalg.norm(z_hat.samples - z.samples))
        assert distances[0] > 0
        assert np.all(np.diff(distances) >= -1e-12 * distances[-1]), (seed, distances)
