import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from src.admm_opt import (
    AdmmConfig,
    CuAdmmSolver,
    OAdmmSolver,
    create_solver,
    cu_admm,
    o_admm,
    optimality_probe,
    run_executions,
    subband_admm,
)
from src.errors import ConfigError
from src.metrics import evm, papr_db
from src.waveform import SubbandSymbols, compose, gen_qpsk, subband_operators
from tests.conftest import random_symbols


def test_config_validation():
    with pytest.raises(ConfigError):
        AdmmConfig(rho=0.0)
    with pytest.raises(ConfigError):
        AdmmConfig(variant="X")
    with pytest.raises(ConfigError):
        AdmmConfig(max_iters=0)
    config = AdmmConfig.from_cr_db(5.0)
    assert config.cr_db == pytest.approx(5.0)
    assert config.tolerance(548) == pytest.approx(1e-6 * np.sqrt(548))
    assert AdmmConfig(primal_tol=0.0).tolerance(548) == 0.0


def test_solver_registry():
    assert isinstance(create_solver(AdmmConfig()), OAdmmSolver)
    assert isinstance(create_solver(AdmmConfig(variant="CU")), CuAdmmSolver)


def test_loose_threshold_returns_the_input(tiny_plan):
    xs = gen_qpsk(5, tiny_plan, 0)
    result = o_admm(xs, tiny_plan, AdmmConfig.from_cr_db(20.0))
    diag = result.diagnostics
    assert diag.iterations == 1
    assert diag.converged
    assert evm(xs, result.x_hat).composite < 1e-12
    assert_allclose(result.z_hat.samples, compose(xs, tiny_plan).samples, atol=1e-12)


def test_o_admm_meets_the_fixed_level(reference_plan, qpsk):
    config = AdmmConfig.from_cr_db(5.0)
    z = compose(qpsk, reference_plan)
    result = o_admm(qpsk, reference_plan, config)
    level = config.gamma * np.linalg.norm(z.samples) / np.sqrt(len(z))
    assert np.max(np.abs(result.z_hat.samples)) <= level * (1 + 1e-12)
    assert papr_db(result.z_hat) < papr_db(z)
    assert 1 <= result.diagnostics.iterations <= config.max_iters
    assert result.diagnostics.level == [pytest.approx(level)] * result.diagnostics.iterations
    assert -60.0 < result.diagnostics.evm_db[-1] < 0.0


def test_cu_admm_meets_the_papr_target(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    config = AdmmConfig.from_cr_db(4.0, max_iters=300, primal_tol=0.0)
    result = cu_admm(xs, small_plan, config)
    z_hat = result.z_hat.samples
    assert np.max(np.abs(z_hat)) <= result.diagnostics.level[-1] * (1 + 1e-12)
    assert papr_db(z_hat) <= 4.0 + 0.1
    assert result.diagnostics.level[0] == pytest.approx(
        config.gamma * np.linalg.norm(compose(xs, small_plan).samples) / np.sqrt(small_plan.symbol_length)
    )


def test_converged_solution_is_optimal(tiny_plan):
    xs = gen_qpsk(11, tiny_plan, 0)
    config = AdmmConfig.from_cr_db(1.0, max_iters=5000, primal_tol=1e-12)
    ops = subband_operators(tiny_plan)
    result = o_admm(xs, tiny_plan, config, ops)
    z = compose(xs, tiny_plan).samples
    level = config.gamma * np.linalg.norm(z) / np.sqrt(z.size)
    assert np.max(np.abs(z)) > level

    report = optimality_probe(result, xs, ops, level, n_samples=2000,
                              rng=np.random.default_rng(3), tolerance=1e-6)
    assert report.feasible
    assert report.consensus
    assert report.no_better_candidate
    assert report.passed
    assert report.to_dict()["candidates"] == 4000


def test_probe_flags_an_infeasible_output(tiny_plan):
    xs = gen_qpsk(11, tiny_plan, 0)
    config = AdmmConfig.from_cr_db(1.0, max_iters=50)
    ops = subband_operators(tiny_plan)
    result = o_admm(xs, tiny_plan, config, ops)
    z = compose(xs, tiny_plan).samples
    level = config.gamma * np.linalg.norm(z) / np.sqrt(z.size)
    spiked = result.z_hat.samples.copy()
    spiked[0] = 2 * level
    result.z_hat = result.z_hat.with_samples(spiked)
    report = optimality_probe(result, xs, ops, level, n_samples=10)
    assert not report.feasible
    assert not report.passed


def test_solution_scales_with_the_input(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    c = 4.0
    scaled = [SubbandSymbols(x.index, c * x.blocks) for x in xs]
    base = o_admm(xs, small_plan, AdmmConfig.from_cr_db(4.0, max_iters=15, primal_tol=0.0))
    big = o_admm(scaled, small_plan, AdmmConfig.from_cr_db(4.0, rho=0.25 / c ** 2, max_iters=15, primal_tol=0.0))

    for a, b in zip(base.x_hat, big.x_hat):
        assert_allclose(b.blocks, c * a.blocks, rtol=1e-9, atol=1e-12)
    assert_allclose(big.z_hat.samples, c * base.z_hat.samples, rtol=1e-9, atol=1e-12)
    assert_allclose(big.y.samples / (0.25 / c ** 2), c * base.y.samples / 0.25, rtol=1e-9, atol=1e-9)
    assert_allclose(big.diagnostics.evm_db, base.diagnostics.evm_db, atol=1e-8)


def test_repeated_executions(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    config = AdmmConfig.from_cr_db(4.0)
    result = run_executions(xs, small_plan, config, 2)
    assert len(result.history) == 2
    assert result.diagnostics is result.history[-1]
    assert result.diagnostics.evm_db[-1] == pytest.approx(evm(xs, result.x_hat).composite_db)
    with pytest.raises(ValueError):
        run_executions(xs, small_plan, config, 0)


def test_one_execution_is_a_plain_solve(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    config = AdmmConfig.from_cr_db(4.0, variant="CU")
    a = run_executions(xs, small_plan, config, 1)
    b = cu_admm(xs, small_plan, config)
    assert_allclose(a.z_hat.samples, b.z_hat.samples, atol=0)


def test_subband_solves_are_independent(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    config = AdmmConfig.from_cr_db(4.0)
    ops = subband_operators(small_plan)
    result = subband_admm(xs, small_plan, config, ops)
    assert result.diagnostics.variant == "O-subband"
    assert [x.index for x in result.x_hat] == [0, 1]
    assert len(result.history) == 2

    alone = [o_admm([xs[i]], small_plan, config, [ops[i]]) for i in range(small_plan.M)]
    for part, x_hat in zip(alone, result.x_hat):
        assert_allclose(x_hat.blocks, part.x_hat[0].blocks, atol=0)
    assert_allclose(result.z_hat.samples, alone[0].z_hat.samples + alone[1].z_hat.samples, atol=1e-15)


def test_windowed_solver(small_plan, rng):
    xs = random_symbols(small_plan, rng)
    config = AdmmConfig.from_cr_db(4.0, variant="CU", windowed=True, window_rolloff=0.1)
    result = cu_admm(xs, small_plan, config)
    assert len(result.z_hat) == small_plan.symbol_length + 4
    assert result.z_hat.role.value == "windowed"
    assert np.max(np.abs(result.z_hat.samples)) <= result.diagnostics.level[-1] * (1 + 1e-12)


def test_diagnostics_csv(small_plan, rng, tmp_path):
    xs = random_symbols(small_plan, rng)
    result = o_admm(xs, small_plan, AdmmConfig.from_cr_db(4.0, max_iters=5, primal_tol=0.0))
    frame = pd.read_csv(result.diagnostics.to_csv(tmp_path / "convergence.csv"))
    assert list(frame.columns) == ["iter", "objective", "primal_residual", "A_current", "evm_db"]
    assert list(frame["iter"]) == [1, 2, 3, 4, 5]
