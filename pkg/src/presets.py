"""Named override sets reproducing the published experiments.

Each preset is applied on top of the defaults (which already hold the
two-numerology, 5000-symbol setup) and below any explicit configuration keys.
"""

from typing import Any, Dict, List

_TRACE = {"symbol_count": 1, "outputs": ["trace"]}
_CONVERGENCE = {"symbol_count": 100, "max_iters": 20, "primal_tol": 0.0, "outputs": ["convergence"]}
_CCDF = {"outputs": ["ccdf"]}
_PSD = {"outputs": ["psd", "ccdf"], "sspa": True, "sspa_p": 3.0, "sspa_ibo_db": 5.0}
_EVM = {"outputs": ["evm", "symbols", "ccdf"]}

PRESETS: Dict[str, Dict[str, Any]] = {
    # single-symbol magnitude traces
    "trace_subband_oadmm": {**_TRACE, "method": "subband_oadmm"},
    "trace_nsicf": {**_TRACE, "method": "nsicf"},
    "trace_oadmm": {**_TRACE, "method": "oadmm"},
    "trace_cuadmm": {**_TRACE, "method": "cuadmm"},
    # convergence traces
    "convergence_oadmm": {**_CONVERGENCE, "method": "oadmm"},
    "convergence_cuadmm": {**_CONVERGENCE, "method": "cuadmm"},
    # CCDFs, one execution
    "ccdf_subband_oadmm": {**_CCDF, "method": "subband_oadmm"},
    "ccdf_icf": {**_CCDF, "method": "icf"},
    "ccdf_nsicf": {**_CCDF, "method": "nsicf"},
    "ccdf_oadmm": {**_CCDF, "method": "oadmm"},
    "ccdf_cuadmm": {**_CCDF, "method": "cuadmm"},
    # CCDFs over repeated executions
    "ccdf_nsicf_x6": {**_CCDF, "method": "nsicf", "n_exec": 6},
    "ccdf_nsicf_x12": {**_CCDF, "method": "nsicf", "n_exec": 12},
    "ccdf_oadmm_x2": {**_CCDF, "method": "oadmm", "n_exec": 2},
    # spectrally confined waveforms
    "ccdf_fofdm_nsicf": {**_CCDF, "method": "fofdm_nsicf", "n_exec": 12},
    "ccdf_wofdm_cuadmm": {**_CCDF, "method": "wofdm_cuadmm"},
    "psd_fofdm_nsicf": {**_PSD, "method": "fofdm_nsicf", "n_exec": 12},
    "psd_wofdm_cuadmm": {**_PSD, "method": "wofdm_cuadmm"},
    # EVM batches
    "evm_icf": {**_EVM, "method": "icf"},
    "evm_nsicf": {**_EVM, "method": "nsicf"},
    "evm_oadmm": {**_EVM, "method": "oadmm"},
    "evm_cuadmm": {**_EVM, "method": "cuadmm"},
    # target PAPR against EVM
    "evm_vs_papr": {
        "method": "cuadmm",
        "symbol_count": 1000,
        "cr_sweep_db": [3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
        "outputs": ["evm"],
    },
}


# Figure and table names of the published reproduction runs
ALIASES: Dict[str, str] = {
    "fig4_subband_trace": "trace_subband_oadmm",
    "fig5_nsicf_trace": "trace_nsicf",
    "fig5_oadmm_trace": "trace_oadmm",
    "fig5_cuadmm_trace": "trace_cuadmm",
    "fig6_7_oadmm": "convergence_oadmm",
    "fig6_7_cuadmm": "convergence_cuadmm",
    "fig8_subband_oadmm": "ccdf_subband_oadmm",
    "fig8_icf": "ccdf_icf",
    "fig8_nsicf": "ccdf_nsicf",
    "fig8_oadmm": "ccdf_oadmm",
    "fig8_cuadmm": "ccdf_cuadmm",
    "fig9_nsicf_1": "ccdf_nsicf",
    "fig9_nsicf_6": "ccdf_nsicf_x6",
    "fig9_nsicf_12": "ccdf_nsicf_x12",
    "fig9_oadmm_1": "ccdf_oadmm",
    "fig9_oadmm_2": "ccdf_oadmm_x2",
    "fig10_fofdm_nsicf": "ccdf_fofdm_nsicf",
    "fig10_wofdm_cuadmm": "ccdf_wofdm_cuadmm",
    "fig11_fofdm_nsicf": "psd_fofdm_nsicf",
    "fig12_wofdm_cuadmm": "psd_wofdm_cuadmm",
    "table3_icf": "evm_icf",
    "table3_nsicf": "evm_nsicf",
    "table3_oadmm": "evm_oadmm",
    "table3_cuadmm": "evm_cuadmm",
}


def resolve_preset(name: str) -> str:
    """Canonical preset name for ``name`` or one of its aliases; KeyError if unknown"""
    name = ALIASES.get(name, name)
    if name not in PRESETS:
        raise KeyError(name)
    return name


def get_preset(name: str) -> Dict[str, Any]:
    """Copy of the overrides of preset ``name``; KeyError if unknown"""
    overrides = PRESETS[resolve_preset(name)]
    return {key: list(value) if isinstance(value, list) else value for key, value in overrides.items()}


def list_presets(include_aliases: bool = False) -> List[str]:
    return sorted({**PRESETS, **ALIASES}) if include_aliases else sorted(PRESETS)
