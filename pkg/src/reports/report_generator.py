"""Result files and markdown summary for experiment runs"""

import json
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Union

import numpy as np
import pandas as pd

from ..metrics import EvmReport, guard_band_level_db
from ..utils.logger import setup_logger

if TYPE_CHECKING:
    from ..orchestrator import RunResult

logger = setup_logger(__name__)

FLOAT_FORMAT = "%.17g"
SYMBOL_REUSE_NOTE = (
    "QPSK symbols depend only on (seed, symbol index, subband), so every method "
    "sees identical draws for the same seed"
)


class ReportGenerator:
    """Write the CSV tables, the JSON manifest and the markdown summary of a run"""

    def __init__(self, result: "RunResult"):
        self.result = result
        self.config = result.config
        self.outputs = set(result.config.run.outputs)

    def generate(self, output_dir: Union[str, Path]) -> Dict[str, Path]:
        logger.info(f"Writing results to {output_dir}")

        output_path = Path(output_dir)
        output_path.mkdir(parents=True, exist_ok=True)

        files: Dict[str, Path] = {}
        result = self.result

        if "ccdf" in self.outputs:
            files["ccdf"] = result.ccdf_after.to_csv(output_path / "ccdf.csv")
            files["ccdf_original"] = result.ccdf_before.to_csv(output_path / "ccdf_original.csv")

        if result.evm is not None and "evm" in self.outputs:
            files["evm"] = result.evm.to_csv(output_path / "evm.csv")

        if self.outputs & {"evm", "symbols"}:
            files["symbols"] = self._write_frame(self._symbol_frame(), output_path / "symbols.csv")

        for name, estimate in self._normalized_psd().items():
            files[f"psd_{name}"] = estimate.to_csv(output_path / f"psd_{name}.csv")

        if result.convergence is not None and result.convergence.iterations and "convergence" in self.outputs:
            files["convergence"] = result.convergence.to_csv(output_path / "convergence.csv")

        if result.trace is not None:
            files["trace"] = self._write_frame(result.trace, output_path / "trace.csv")

        if result.sweep is not None:
            files["sweep"] = self._write_frame(result.sweep, output_path / "sweep.csv")

        # timings vary between runs; everything else is reproducible byte for byte
        if result.timings:
            timings = pd.DataFrame({"stage": list(result.timings), "median_s": list(result.timings.values())})
            files["timings"] = self._write_frame(timings, output_path / "timings.csv")

        manifest = self.manifest(sorted(p.name for p in files.values()))
        manifest_file = output_path / "manifest.json"
        with open(manifest_file, "w") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
        files["manifest"] = manifest_file

        summary_file = output_path / "summary.md"
        with open(summary_file, "w") as f:
            f.write(self._generate_markdown(manifest))
        files["summary"] = summary_file

        logger.info(f"Report generated: {summary_file}")
        return files

    @staticmethod
    def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return path

    def _symbol_frame(self) -> pd.DataFrame:
        records = self.result.records
        data: Dict[str, Any] = {
            "index": [r.index for r in records],
            "papr_before_db": [r.papr_before_db for r in records],
            "papr_after_db": [r.papr_after_db for r in records],
        }
        if records and records[0].evm is not None:
            for i in range(len(records[0].evm.per_subband)):
                data[f"evm_{i + 1}"] = [r.evm.per_subband[i] for r in records]
            data["evm_composite"] = [r.evm.composite for r in records]
        return pd.DataFrame(data)

    def _normalized_psd(self) -> Dict[str, Any]:
        bands = [self.result.plan.occupied_band(i) for i in range(self.result.plan.M)]
        return {name: est.normalized(bands) for name, est in self.result.psd.items()}

    def manifest(self, file_names: List[str]) -> Dict[str, Any]:
        result = self.result
        config = self.config

        papr = {
            "mean_before_db": float(np.mean(result.papr_before)),
            "mean_after_db": float(np.mean(result.papr_after)),
            "max_after_db": float(np.max(result.papr_after)),
        }
        if result.ccdf_after is not None:
            papr["at_ccdf_1e-3_before_db"] = result.ccdf_before.threshold_at(1e-3)
            papr["at_ccdf_1e-3_after_db"] = result.ccdf_after.threshold_at(1e-3)

        manifest: Dict[str, Any] = {
            "method": result.method,
            "preset": config.run.preset,
            "config_hash": config.config_hash(),
            "config": config.to_dict(),
            "plan": result.plan.to_dict(),
            "symbol_count": len(result.records),
            "seed": config.run.seed,
            "symbol_reuse": SYMBOL_REUSE_NOTE,
            "papr": papr,
            "files": file_names,
        }
        if result.evm is not None:
            manifest["evm"] = result.evm.to_dict()
        normalized = self._normalized_psd()
        if normalized and any(hi > lo for lo, hi in result.plan.guard_bands()):
            manifest["guard_band_psd_db"] = {
                name: guard_band_level_db(est, result.plan) for name, est in normalized.items()
            }
        if result.convergence is not None and result.convergence.iterations:
            manifest["convergence"] = {
                "variant": result.convergence.variant,
                "iterations": result.convergence.iterations,
                "converged": result.convergence.converged,
                "final_primal_residual": result.convergence.primal_residual[-1],
                "final_evm_db": result.convergence.evm_db[-1],
            }
        return manifest

    def _generate_markdown(self, manifest: Dict[str, Any]) -> str:
        """Generate markdown formatted run summary"""
        lines = []

        lines.append("# PAPR Reduction Run Report")
        lines.append(f"\n**Method:** {manifest['method']}")
        if manifest.get("preset"):
            lines.append(f"\n**Preset:** {manifest['preset']}")
        lines.append(f"\n**Config Hash:** `{manifest['config_hash']}`")
        lines.append("\n---\n")

        lines.append("## Executive Summary\n")
        papr = manifest["papr"]
        lines.append(f"- **Symbols:** {manifest['symbol_count']} (seed {manifest['seed']})")
        lines.append(f"- **Mean PAPR:** {papr['mean_before_db']:.2f} dB → {papr['mean_after_db']:.2f} dB")
        if papr.get("at_ccdf_1e-3_after_db") is not None:
            lines.append(f"- **PAPR at CCDF 1e-3:** {papr['at_ccdf_1e-3_after_db']:.2f} dB")
        if "evm" in manifest:
            lines.append(f"- **Composite RMS EVM:** {manifest['evm']['composite_db']:.2f} dB")
        lines.append("")

        lines.append("## Numerology Plan\n")
        plan = manifest["plan"]
        lines.append("| Subband | v | K | N | Δk | L_cp |")
        lines.append("|---|---|---|---|---|---|")
        for i in range(len(plan["v"])):
            lines.append(
                f"| {i + 1} | {plan['v'][i]} | {plan['K'][i]} | {plan['N'][i]} | "
                f"{plan['delta_k'][i]} | {plan['L_cp'][i]} |"
            )
        lines.append(f"\nB = {plan['B']} f1, J = {plan['J']}, L_sys = {plan['L_sys']} samples\n")

        if "evm" in manifest:
            lines.append("## EVM\n")
            evm_report = EvmReport(tuple(manifest["evm"]["per_subband"]), manifest["evm"]["composite"])
            for i, value in enumerate(evm_report.per_subband_db, start=1):
                lines.append(f"- Subband {i}: {value:.2f} dB")
            lines.append(f"- Composite: {evm_report.composite_db:.2f} dB\n")

        if "guard_band_psd_db" in manifest:
            lines.append("## Out-of-Band Emission\n")
            lines.append("Mean guard-band PSD relative to the in-band peak:\n")
            for name, level in sorted(manifest["guard_band_psd_db"].items()):
                lines.append(f"- {name}: {level:.2f} dB")
            lines.append("")

        if "convergence" in manifest:
            conv = manifest["convergence"]
            status = "✅ converged" if conv["converged"] else "⚠️ stopped at the iteration limit"
            lines.append("## Convergence (first symbol)\n")
            lines.append(f"{status} after {conv['iterations']} iterations, "
                         f"primal residual {conv['final_primal_residual']:.3e}\n")

        lines.append("## Files\n")
        for name in manifest["files"]:
            lines.append(f"- `{name}`")
        lines.append("")

        return "\n".join(lines)


def emit_results(result: "RunResult", out_dir: Union[str, Path]) -> Dict[str, Path]:
    return ReportGenerator(result).generate(out_dir)
