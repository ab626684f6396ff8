import json

import numpy as np
import pandas as pd
import pytest

from src import orchestrator as orchestrator_module
from src.errors import SymbolProcessingError
from src.orchestrator import ExperimentOrchestrator, process_chunk, run_experiment
from src.reports import emit_results


def _snapshot(result):
    return (
        [(r.index, r.papr_before_db, r.papr_after_db, r.evm) for r in result.records],
        {name: est.power.tolist() for name, est in result.psd.items()},
    )


@pytest.mark.asyncio
async def test_run_collects_every_symbol(small_config):
    orchestrator = ExperimentOrchestrator(small_config, chunk_size=4)
    try:
        result = await orchestrator.run()
    finally:
        await orchestrator.shutdown()
    assert [r.index for r in result.records] == list(range(6))
    assert result.ccdf_after.sample_count == 6
    assert result.evm is not None


@pytest.mark.asyncio
async def test_results_do_not_depend_on_the_worker_count(small_config):
    config = small_config.with_overrides(outputs=["ccdf", "evm", "psd"], method="cuadmm")
    snapshots = []
    for workers in (1, 2):
        orchestrator = ExperimentOrchestrator(config.with_overrides(workers=workers), chunk_size=2)
        try:
            snapshots.append(_snapshot(await orchestrator.run()))
        finally:
            await orchestrator.shutdown()
    assert snapshots[0] == snapshots[1]


def test_chunks_are_fixed_ranges(small_config):
    orchestrator = ExperimentOrchestrator(small_config, chunk_size=4)
    assert orchestrator._chunks() == [(0, 4), (4, 6)]


def test_single_symbol_without_reduction(small_config):
    config = small_config.with_overrides(method="none", symbol_count=1)
    result = run_experiment(config)
    assert result.papr_before[0] == result.papr_after[0]
    assert result.evm.composite == 0.0


def test_failed_symbol_reports_its_index(small_config, monkeypatch):
    original = orchestrator_module.gen_qpsk

    def failing(seed, plan, index):
        if index == 3:
            raise ValueError("bad draw")
        return original(seed, plan, index)

    monkeypatch.setattr(orchestrator_module, "gen_qpsk", failing)
    with pytest.raises(SymbolProcessingError) as info:
        process_chunk(small_config, 0, 6)
    assert info.value.index == 3


def test_psd_with_amplifier(small_config):
    config = small_config.with_overrides(method="wofdm_cuadmm", outputs=["psd"], sspa=True)
    result = run_experiment(config)
    assert sorted(result.psd) == ["original", "original_sspa", "processed", "processed_sspa"]
    for est in result.psd.values():
        assert est.count == 6
        assert est.freqs.size == 4 * 44


def test_filtered_method_has_no_evm(small_config):
    result = run_experiment(small_config.with_overrides(method="fofdm_nsicf"))
    assert result.evm is None
    assert all(r.evm is None for r in result.records)


def test_clipping_ratio_sweep(small_config):
    config = small_config.with_overrides(method="oadmm", cr_sweep_db=[3.0, 6.0], symbol_count=4)
    result = run_experiment(config)
    assert list(result.sweep["cr_db"]) == [3.0, 6.0]
    assert {"papr_at_1e-3_db", "evm_db_1", "evm_db_2", "evm_db_composite"} <= set(result.sweep.columns)
    assert result.sweep["evm_db_composite"].iloc[0] > result.sweep["evm_db_composite"].iloc[1]


def test_convergence_and_trace_of_the_first_symbol(small_config):
    config = small_config.with_overrides(method="cuadmm", outputs=["convergence", "trace"], max_iters=5, primal_tol=0.0)
    result = run_experiment(config)
    assert result.convergence.iterations == 5
    assert list(result.trace.columns) == ["sample", "original_abs", "processed_abs"]
    assert len(result.trace) == 40


def test_stage_timings(small_config):
    result = run_experiment(small_config.with_overrides(method="oadmm", outputs=["timing"], symbol_count=1))
    assert set(result.timings) == {"compose", "method", "admm_iteration"}
    assert all(t >= 0 for t in result.timings.values())


class TestReports:
    def test_outputs_are_byte_identical_across_runs(self, small_config, tmp_path):
        config = small_config.with_overrides(
            method="cuadmm", outputs=["ccdf", "evm", "symbols", "psd", "convergence"], max_iters=4
        )
        for name in ("a", "b"):
            emit_results(run_experiment(config), tmp_path / name)
        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_manifest_matches_the_symbol_table(self, small_config, tmp_path):
        files = emit_results(run_experiment(small_config.with_overrides(method="nsicf")), tmp_path)
        manifest = json.loads(files["manifest"].read_text())
        symbols = pd.read_csv(files["symbols"])
        assert manifest["symbol_count"] == len(symbols) == 6
        assert manifest["evm"]["composite"] == pytest.approx(np.sqrt(np.mean(symbols["evm_composite"] ** 2)))
        assert manifest["evm"]["per_subband"][1] == pytest.approx(np.sqrt(np.mean(symbols["evm_2"] ** 2)))
        assert manifest["papr"]["mean_after_db"] == pytest.approx(symbols["papr_after_db"].mean())
        assert manifest["config_hash"] == small_config.with_overrides(method="nsicf").config_hash()
        assert "ccdf.csv" in manifest["files"]
        assert files["summary"].read_text().startswith("# PAPR Reduction Run Report")

    def test_psd_files_are_normalised(self, small_config, tmp_path):
        config = small_config.with_overrides(method="nsicf", outputs=["psd"])
        files = emit_results(run_experiment(config), tmp_path)
        manifest = json.loads(files["manifest"].read_text())
        plan = config.plan.build()
        frame = pd.read_csv(files["psd_processed"])
        in_band = frame[(frame["freq_f1"] >= 0) & (frame["freq_f1"] < plan.occupied_band(1)[1])]
        assert in_band["psd_db"].max() == pytest.approx(0.0, abs=1e-9)
        assert set(manifest["guard_band_psd_db"]) == {"original", "processed"}
        assert "ccdf" not in files
