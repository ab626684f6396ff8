"""Main orchestrator for the Monte-Carlo PAPR reduction experiments"""

import asyncio
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .admm_opt import AdmmDiagnostics
from .admm_opt.steps import initial_state, precompute, sweep
from .config import ExperimentConfig
from .errors import MixnumError, SymbolProcessingError
from .methods import AdmmMethod, MethodFactory, MethodOutcome
from .metrics import (
    CcdfCurve,
    EvmReport,
    PsdEstimate,
    SspaModel,
    ccdf,
    ccdf_grid,
    combine,
    evm,
    papr_db,
    psd_periodogram,
    rms_evm,
    sspa_apply,
)
from .reports.report_generator import emit_results
from .utils.logger import setup_logger
from .waveform import NumerologyPlan, compose, gen_qpsk

logger = setup_logger(__name__)

CHUNK_SIZE = 50
TIMING_REPEATS = 5


@dataclass
class SymbolRecord:
    index: int
    papr_before_db: float
    papr_after_db: float
    evm: Optional[EvmReport] = None


@dataclass
class ChunkResult:
    """Per-symbol records of one contiguous index range plus its partial PSDs"""
    start: int
    records: List[SymbolRecord]
    psd: Dict[str, PsdEstimate] = field(default_factory=dict)
    convergence: Optional[AdmmDiagnostics] = None
    trace: Optional[pd.DataFrame] = None


@dataclass
class RunResult:
    config: ExperimentConfig
    plan: NumerologyPlan
    method: str
    records: List[SymbolRecord]
    ccdf_before: Optional[CcdfCurve] = None
    ccdf_after: Optional[CcdfCurve] = None
    evm: Optional[EvmReport] = None
    psd: Dict[str, PsdEstimate] = field(default_factory=dict)
    convergence: Optional[AdmmDiagnostics] = None
    trace: Optional[pd.DataFrame] = None
    sweep: Optional[pd.DataFrame] = None
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def papr_before(self) -> np.ndarray:
        return np.array([r.papr_before_db for r in self.records])

    @property
    def papr_after(self) -> np.ndarray:
        return np.array([r.papr_after_db for r in self.records])


def process_chunk(
    config: ExperimentConfig,
    start: int,
    stop: int,
    cr_db: Optional[float] = None,
) -> ChunkResult:
    """Run the configured method on symbols ``start`` to ``stop - 1``.

    Executed in worker processes; everything it needs is rebuilt from the
    configuration so the result depends only on (config, start, stop).
    """
    plan = config.plan.build()
    method = MethodFactory.create_method(config.method.method, config, plan, cr_db)
    outputs = set(config.run.outputs)
    want_psd = "psd" in outputs
    sspa = SspaModel(config.run.sspa_p, config.run.sspa_ibo_db) if config.run.sspa else None

    records = []
    spectra: Dict[str, List[Any]] = {}
    convergence = None
    trace = None
    for index in range(start, stop):
        try:
            x = gen_qpsk(config.run.seed, plan, index)
            outcome = method.apply(x)
            report = evm(x, outcome.symbols, plan) if outcome.symbols is not None else None
            records.append(SymbolRecord(index, papr_db(outcome.reference), papr_db(outcome.signal), report))
        except Exception as e:
            raise SymbolProcessingError(index, e) from e

        if want_psd:
            spectra.setdefault("original", []).append(outcome.reference)
            spectra.setdefault("processed", []).append(outcome.signal)
            if sspa is not None:
                spectra.setdefault("original_sspa", []).append(sspa_apply(outcome.reference, sspa))
                spectra.setdefault("processed_sspa", []).append(sspa_apply(outcome.signal, sspa))
        if index == 0:
            convergence = outcome.diagnostics
            if "trace" in outputs:
                trace = _trace_frame(outcome)

    psd = {}
    for name, signals in spectra.items():
        psd[name] = psd_periodogram(
            signals, sample_rate=plan.sample_rate, zero_pad=config.run.psd_zero_pad
        )
    return ChunkResult(start, records, psd, convergence, trace)


def _trace_frame(outcome: MethodOutcome) -> pd.DataFrame:
    return pd.DataFrame({
        "sample": np.arange(len(outcome.signal)),
        "original_abs": np.abs(outcome.reference.samples),
        "processed_abs": np.abs(outcome.signal.samples),
    })


def _median_time(func: Callable[[], Any], repeats: int = TIMING_REPEATS) -> float:
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        func()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def benchmark_iteration(config: ExperimentConfig, repeats: int = TIMING_REPEATS) -> float:
    """Median wall time of one ADMM sweep on symbol 0, in seconds"""
    plan = config.plan.build()
    method = MethodFactory.create_method(config.method.method, config, plan)
    if not isinstance(method, AdmmMethod):
        raise MixnumError(f"method {config.method.method!r} has no ADMM iteration to time")
    x = gen_qpsk(config.run.seed, plan, 0)
    precomp = precompute(x, method.operators, method.admm_config)
    state = initial_state(precomp, method.operators, plan.sample_rate)
    return _median_time(lambda: sweep(state, precomp, method.operators, precomp.level), repeats)


def stage_timings(config: ExperimentConfig, repeats: int = TIMING_REPEATS) -> Dict[str, float]:
    """Median wall times of composing and of the full method on symbol 0, in seconds"""
    plan = config.plan.build()
    method = MethodFactory.create_method(config.method.method, config, plan)
    x = gen_qpsk(config.run.seed, plan, 0)
    timings = {
        "compose": _median_time(lambda: compose(x, plan), repeats),
        "method": _median_time(lambda: method.apply(x), repeats),
    }
    if isinstance(method, AdmmMethod):
        timings["admm_iteration"] = benchmark_iteration(config, repeats)
    return timings


class ExperimentOrchestrator:
    """Runs a configured experiment over a pool of worker processes"""

    def __init__(self, config: ExperimentConfig, chunk_size: int = CHUNK_SIZE):
        self.config = config
        self.chunk_size = chunk_size
        self.plan = config.plan.build()
        self._executor: Optional[ProcessPoolExecutor] = None
        logger.info(
            f"ExperimentOrchestrator initialized: method={config.method.method}, "
            f"symbols={config.run.symbol_count}, workers={config.run.workers}"
        )

    def _chunks(self) -> List[Tuple[int, int]]:
        count = self.config.run.symbol_count
        return [(s, min(s + self.chunk_size, count)) for s in range(0, count, self.chunk_size)]

    async def _run_batch(self, cr_db: Optional[float] = None) -> List[ChunkResult]:
        loop = asyncio.get_running_loop()
        chunks = self._chunks()
        if self.config.run.workers == 1:
            # in-process keeps the single-worker path free of pickling
            return [process_chunk(self.config, s, e, cr_db) for s, e in chunks]

        if self._executor is None:
            self._executor = ProcessPoolExecutor(max_workers=self.config.run.workers)
        futures = [
            loop.run_in_executor(self._executor, process_chunk, self.config, s, e, cr_db)
            for s, e in chunks
        ]
        return list(await asyncio.gather(*futures))

    def _grid(self) -> np.ndarray:
        run = self.config.run
        return ccdf_grid(run.ccdf_min_db, run.ccdf_max_db, run.ccdf_step_db)

    async def run(self) -> RunResult:
        """Process every symbol and reduce the chunk results in index order"""
        logger.info(f"Starting run of {self.config.run.symbol_count} symbols")
        chunks = sorted(await self._run_batch(), key=lambda c: c.start)

        records = [r for c in chunks for r in c.records]
        result = RunResult(self.config, self.plan, self.config.method.method, records)
        outputs = set(self.config.run.outputs)

        result.ccdf_before = ccdf(result.papr_before, self._grid())
        result.ccdf_after = ccdf(result.papr_after, self._grid())

        reports = [r.evm for r in records if r.evm is not None]
        if reports:
            result.evm = rms_evm(reports)
            logger.info(f"Composite RMS EVM {result.evm.composite_db:.2f} dB")
        elif "evm" in outputs:
            logger.warning(f"Method {result.method} defines no EVM; skipping EVM output")

        if "psd" in outputs:
            for name in chunks[0].psd:
                result.psd[name] = combine([c.psd[name] for c in chunks])
        result.convergence = chunks[0].convergence
        result.trace = chunks[0].trace

        if self.config.method.cr_sweep_db:
            result.sweep = await self.run_sweep()
        if "timing" in outputs:
            result.timings = stage_timings(self.config)

        logger.info(
            f"Run complete: mean PAPR {np.mean(result.papr_before):.2f} dB -> "
            f"{np.mean(result.papr_after):.2f} dB"
        )
        return result

    async def run_sweep(self) -> pd.DataFrame:
        """PAPR at CCDF 1e-3 and RMS EVM for every clipping ratio of the sweep"""
        rows = []
        for cr_db in self.config.method.cr_sweep_db:
            logger.info(f"Sweep point CR={cr_db} dB")
            chunks = sorted(await self._run_batch(cr_db), key=lambda c: c.start)
            records = [r for c in chunks for r in c.records]
            curve = ccdf([r.papr_after_db for r in records], self._grid())
            row = {"cr_db": cr_db, "papr_at_1e-3_db": curve.threshold_at(1e-3)}
            reports = [r.evm for r in records if r.evm is not None]
            if reports:
                total = rms_evm(reports)
                for i, value in enumerate(total.per_subband_db, start=1):
                    row[f"evm_db_{i}"] = value
                row["evm_db_composite"] = total.composite_db
            rows.append(row)
        return pd.DataFrame(rows)

    def generate_report(self, result: RunResult, output_dir: str = "results") -> Dict[str, Path]:
        return emit_results(result, output_dir)

    async def shutdown(self):
        """Shutdown the worker pool"""
        logger.info("Shutting down orchestrator")
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None


async def run_experiment_async(config: ExperimentConfig) -> RunResult:
    orchestrator = ExperimentOrchestrator(config)
    try:
        return await orchestrator.run()
    finally:
        await orchestrator.shutdown()


def run_experiment(config: ExperimentConfig) -> RunResult:
    return asyncio.run(run_experiment_async(config))
