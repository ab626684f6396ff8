import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.admm_opt import AdmmConfig, dual_step, evm_sigma, initial_state, objective, precompute, x_step, z_step
from src.errors import SignalError
from src.waveform import SubbandSymbols, compose, gen_qpsk, subband_operators
from tests.conftest import random_samples, random_symbols


def _state(plan, rng, config=None, rho=None):
    ops = subband_operators(plan)
    xs = random_symbols(plan, rng)
    precomp = precompute(xs, ops, config or AdmmConfig(), rho=rho)
    return xs, ops, precomp, initial_state(precomp, ops, plan.sample_rate)


def _scramble(state, ops, plan, rng):
    """Random x_hat, z_hat and y consistent with the cached F_i x_hat_i"""
    for i, xi in enumerate(random_symbols(plan, rng)):
        state.x_hat[i] = xi
        state.modulated[i] = ops[i].forward(xi.blocks)
    length = ops[0].output_length
    state.z_hat = state.z_hat.with_samples(random_samples(length, rng))
    state.y = state.y.with_samples(random_samples(length, rng))


def test_sigma_is_the_total_symbol_energy(reference_plan):
    xs = gen_qpsk(1, reference_plan, 0)
    assert evm_sigma(xs[0]) == pytest.approx(56.0)
    assert evm_sigma(xs[1]) == pytest.approx(56.0)
    with pytest.raises(SignalError):
        evm_sigma(np.zeros((1, 4)))


def test_inverse_without_cp_is_a_scaled_identity(tiny_plan, rng):
    xs, ops, precomp, _ = _state(tiny_plan, rng)
    for i, op in enumerate(ops):
        scale = 1.0 / (1.0 / precomp.sigma_sq[i] + precomp.rho)
        assert_allclose(precomp.inverses[i], scale * np.eye(op.subcarriers), atol=1e-12)


def test_inverse_with_cp(reference_plan):
    xs = gen_qpsk(3, reference_plan, 0)
    ops = subband_operators(reference_plan)
    precomp = precompute(xs, ops, AdmmConfig())
    for i, op in enumerate(ops):
        system = np.eye(op.subcarriers) / precomp.sigma_sq[i] + precomp.rho * op.gram()
        assert_allclose(precomp.inverses[i] @ system, np.eye(op.subcarriers), atol=1e-10)


def test_initial_level(reference_plan):
    xs = gen_qpsk(3, reference_plan, 0)
    z = compose(xs, reference_plan).samples
    precomp = precompute(xs, subband_operators(reference_plan), AdmmConfig.from_cr_db(5.0))
    rms = np.linalg.norm(z) / np.sqrt(z.size)
    assert precomp.level / rms == pytest.approx(10 ** 0.25)


def test_initial_state_is_a_fixed_point_of_the_x_update(small_plan, rng):
    xs, ops, precomp, state = _state(small_plan, rng)
    assert_allclose(state.z_hat.samples, compose(xs, small_plan).samples, atol=1e-12)
    assert not np.any(state.y.samples)
    for i in range(small_plan.M):
        assert_allclose(x_step(i, state, precomp, ops).blocks, xs[i].blocks, atol=1e-12)


@pytest.mark.parametrize("plan_name", ["tiny_plan", "small_plan"])
def test_x_update_zeroes_the_lagrangian_gradient(plan_name, request, rng):
    plan = request.getfixturevalue(plan_name)
    xs, ops, precomp, state = _state(plan, rng)
    _scramble(state, ops, plan, rng)
    rho = precomp.rho

    for i in range(plan.M):
        others = state.composite - state.modulated[i]
        x_hat = x_step(i, state, precomp, ops).blocks

        def lagrangian(blocks):
            r = ops[i].forward(blocks) + others - state.z_hat.samples
            return (np.linalg.norm(xs[i].blocks - blocks) ** 2 / (2 * precomp.sigma_sq[i])
                    + np.vdot(state.y.samples, r).real + 0.5 * rho * np.linalg.norm(r) ** 2)

        h = 1e-6
        for idx in np.ndindex(x_hat.shape):
            for direction in (1.0, 1j):
                step = np.zeros_like(x_hat)
                step[idx] = h * direction
                grad = (lagrangian(x_hat + step) - lagrangian(x_hat - step)) / (2 * h)
                assert abs(grad) < 1e-6


def test_vanishing_penalty_returns_the_original_symbols(small_plan, rng):
    xs, ops, precomp, state = _state(small_plan, rng, rho=1e-12)
    _scramble(state, ops, small_plan, rng)
    state.y = state.y.with_samples(np.zeros_like(state.y.samples))
    for i in range(small_plan.M):
        assert_allclose(x_step(i, state, precomp, ops).blocks, xs[i].blocks, atol=1e-8)


def test_x_update_keeps_the_modulated_cache_in_sync(small_plan, rng):
    xs, ops, precomp, state = _state(small_plan, rng)
    _scramble(state, ops, small_plan, rng)
    updated = x_step(1, state, precomp, ops)
    assert updated.index == 1
    assert_allclose(state.modulated[1], ops[1].forward(updated.blocks), atol=1e-14)


def test_z_update_is_the_clip(small_plan, rng):
    xs, ops, precomp, state = _state(small_plan, rng)
    _scramble(state, ops, small_plan, rng)
    u = state.composite + state.y.samples / precomp.rho
    level = float(np.median(np.abs(u)))
    z = z_step(state, level, precomp.rho)
    expected = np.where(np.abs(u) > level, level * u / np.abs(u), u)
    assert_allclose(z.samples, expected, atol=1e-12)
    assert state.level == level


def test_z_update_leaves_interior_points(small_plan, rng):
    xs, ops, precomp, state = _state(small_plan, rng)
    u = state.composite
    z = z_step(state, 2 * np.max(np.abs(u)), precomp.rho)
    assert np.array_equal(z.samples, u)


def test_z_update_single_sample(tiny_plan, rng):
    xs, ops, precomp, state = _state(tiny_plan, rng)
    for i in range(tiny_plan.M):
        state.modulated[i] = np.zeros(tiny_plan.symbol_length, dtype=complex)
    spike = np.zeros(tiny_plan.symbol_length, dtype=complex)
    spike[3] = 2.0 * np.exp(0.3j)
    state.modulated[0] = spike
    z = z_step(state, 1.0, precomp.rho)
    assert z.samples[3] == pytest.approx(np.exp(0.3j))
    assert not np.any(np.delete(z.samples, 3))


def test_dual_update(small_plan, rng):
    xs, ops, precomp, state = _state(small_plan, rng)
    y0 = state.y.samples.copy()
    assert_allclose(dual_step(state, precomp.rho).samples, y0, atol=1e-12)

    _scramble(state, ops, small_plan, rng)
    y0 = state.y.samples.copy()
    expected = y0 + precomp.rho * (state.composite - state.z_hat.samples)
    assert_allclose(dual_step(state, precomp.rho).samples, expected, atol=1e-12)


def test_objective_is_zero_at_the_reference(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    sigma = [evm_sigma(x) for x in xs]
    assert objective(xs, xs, sigma) == 0.0
    halved = [SubbandSymbols(x.index, 0.5 * x.blocks) for x in xs]
    assert objective(xs, halved, sigma) == pytest.approx(0.125 * small_plan.M)
