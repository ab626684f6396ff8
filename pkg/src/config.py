"""Configuration management for the PAPR reduction experiments"""

import hashlib
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from .errors import ConfigError, PlanError
from .presets import get_preset, resolve_preset
from .waveform.numerology import NumerologyPlan, build_plan

METHOD_NAMES = (
    "none",
    "icf",
    "nsicf",
    "oadmm",
    "cuadmm",
    "fofdm",
    "fofdm_nsicf",
    "wofdm",
    "wofdm_oadmm",
    "wofdm_cuadmm",
    "subband_oadmm",
)
OUTPUT_NAMES = ("ccdf", "evm", "psd", "convergence", "trace", "symbols", "timing")


@dataclass
class PlanConfig:
    """Numerology grid parameters"""
    v: List[int] = field(default_factory=lambda: [0, 1])
    K: List[int] = field(default_factory=lambda: [56, 28])
    G: List[int] = field(default_factory=lambda: [8])
    J: int = 4
    eta: List[float] = field(default_factory=lambda: [1.0, 1.0])
    cp_fraction: float = 0.07

    def build(self) -> NumerologyPlan:
        return build_plan(len(self.v), self.v, self.K, self.G, self.J, self.eta, self.cp_fraction)


@dataclass
class MethodConfig:
    """PAPR reduction method and its parameters"""
    method: str = "oadmm"
    cr_db: float = 5.0
    n_exec: int = 1
    rho: float = 0.25
    max_iters: int = 10
    primal_tol: Optional[float] = None  # None: 1e-6 * sqrt(L)
    filter_length: int = 128
    filter_rolloff: float = 0.25
    window_rolloff: float = 0.04
    cr_sweep_db: List[float] = field(default_factory=list)


@dataclass
class RunConfig:
    """Monte-Carlo batch and output settings"""
    symbol_count: int = 5000
    seed: int = 2024
    workers: int = 1
    outputs: List[str] = field(default_factory=lambda: ["ccdf", "evm", "psd", "convergence"])
    sspa: bool = False
    sspa_p: float = 3.0
    sspa_ibo_db: float = 5.0
    ccdf_min_db: float = 0.0
    ccdf_max_db: float = 12.0
    ccdf_step_db: float = 0.05
    psd_zero_pad: int = 4
    preset: Optional[str] = None


SECTIONS = (("plan", PlanConfig), ("method", MethodConfig), ("run", RunConfig))

# key -> (section, kind)
KEYS: Dict[str, Tuple[str, str]] = {
    "v": ("plan", "int_list"),
    "K": ("plan", "int_list"),
    "G": ("plan", "int_list"),
    "J": ("plan", "int"),
    "eta": ("plan", "float_list"),
    "cp_fraction": ("plan", "float"),
    "method": ("method", "str"),
    "cr_db": ("method", "float"),
    "n_exec": ("method", "int"),
    "rho": ("method", "float"),
    "max_iters": ("method", "int"),
    "primal_tol": ("method", "opt_float"),
    "filter_length": ("method", "int"),
    "filter_rolloff": ("method", "float"),
    "window_rolloff": ("method", "float"),
    "cr_sweep_db": ("method", "float_list"),
    "symbol_count": ("run", "int"),
    "seed": ("run", "int"),
    "workers": ("run", "int"),
    "outputs": ("run", "str_list"),
    "sspa": ("run", "bool"),
    "sspa_p": ("run", "float"),
    "sspa_ibo_db": ("run", "float"),
    "ccdf_min_db": ("run", "float"),
    "ccdf_max_db": ("run", "float"),
    "ccdf_step_db": ("run", "float"),
    "psd_zero_pad": ("run", "int"),
    "preset": ("run", "opt_str"),
}

Entries = Dict[str, Tuple[Any, Optional[int]]]


def _as_float(key: str, value: Any, line: Optional[int]) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number, got {value!r}", line)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            pass
    raise ConfigError(f"{key}: expected a number, got {value!r}", line)


def _as_int(key: str, value: Any, line: Optional[int]) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ConfigError(f"{key}: expected an integer, got {value!r}", line)


def _coerce(key: str, value: Any, line: Optional[int]) -> Any:
    kind = KEYS[key][1]
    if kind == "int":
        return _as_int(key, value, line)
    if kind == "float":
        return _as_float(key, value, line)
    if kind == "opt_float":
        return None if value is None else _as_float(key, value, line)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{key}: expected true or false, got {value!r}", line)
        return value
    if kind in ("str", "opt_str"):
        if value is None and kind == "opt_str":
            return None
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a name, got {value!r}", line)
        return value
    # list kinds accept a bare scalar as a one-element list
    items = value if isinstance(value, list) else [value]
    if kind == "int_list":
        return [_as_int(key, v, line) for v in items]
    if kind == "float_list":
        return [_as_float(key, v, line) for v in items]
    if kind == "str_list":
        if not all(isinstance(v, str) for v in items):
            raise ConfigError(f"{key}: expected a list of names, got {value!r}", line)
        return list(items)
    raise ConfigError(f"{key}: unsupported kind {kind}", line)


def _format_value(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    if isinstance(value, float):
        text = repr(value)
        mantissa, sep, exponent = text.partition("e")
        if sep and "." not in mantissa:
            text = f"{mantissa}.0e{exponent}"
        return text
    return str(value)


@dataclass
class ExperimentConfig:
    """Main configuration class"""
    plan: PlanConfig = field(default_factory=PlanConfig)
    method: MethodConfig = field(default_factory=MethodConfig)
    run: RunConfig = field(default_factory=RunConfig)

    @classmethod
    def from_entries(cls, entries: Entries, preset: Optional[str] = None) -> "ExperimentConfig":
        """Defaults, then the preset's overrides, then the explicit entries"""
        coerced = {key: (_coerce(key, value, line), line) for key, (value, line) in entries.items()}
        preset = preset if preset is not None else (coerced.get("preset", (None, None))[0])

        values: Dict[str, Any] = {}
        lines: Dict[str, Optional[int]] = {}
        if preset is not None:
            try:
                overrides = get_preset(preset)
            except KeyError as e:
                raise ConfigError(f"unknown preset {preset!r}", coerced.get("preset", (None, None))[1]) from e
            for key, value in overrides.items():
                values[key] = _coerce(key, value, None)
            values["preset"] = preset
        for key, (value, line) in coerced.items():
            if key == "preset" and preset is not None:
                lines[key] = line
                continue
            values[key] = value
            lines[key] = line

        sections = {}
        for name, section_cls in SECTIONS:
            kwargs = {f.name: values[f.name] for f in fields(section_cls) if f.name in values}
            sections[name] = section_cls(**kwargs)
        config = cls(**sections)
        return config.validate(lines)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], preset: Optional[str] = None) -> "ExperimentConfig":
        entries: Entries = {}
        for section, body in (data or {}).items():
            if section not in dict(SECTIONS):
                raise ConfigError(f"unknown section {section!r}")
            for key, value in (body or {}).items():
                if key not in KEYS or KEYS[key][0] != section:
                    raise ConfigError(f"unknown key {key!r} in section {section!r}")
                entries[key] = (value, None)
        return cls.from_entries(entries, preset)

    @classmethod
    def load(cls, config_path: Union[str, Path], preset: Optional[str] = None) -> "ExperimentConfig":
        """Load configuration from a YAML file or a flat ``key = value`` file"""
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"configuration file not found: {path}")

        with open(path, "r") as f:
            text = f.read()

        if path.suffix in (".yaml", ".yml"):
            try:
                data = yaml.safe_load(text)
            except yaml.YAMLError as e:
                raise ConfigError(f"invalid YAML in {path}: {e}") from e
            return cls.from_dict(data or {}, preset)
        return parse_config(text, preset)

    def save(self, config_path: Union[str, Path]):
        """Save configuration to YAML (``.yaml``/``.yml``) or flat text"""
        path = Path(config_path)
        path.parent.mkdir(parents=True, exist_ok=True)

        with open(path, "w") as f:
            if path.suffix in (".yaml", ".yml"):
                yaml.dump(self.to_dict(), f, default_flow_style=False, sort_keys=False)
            else:
                f.write(serialize_config(self))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "plan": asdict(self.plan),
            "method": asdict(self.method),
            "run": asdict(self.run),
        }

    def config_hash(self) -> str:
        return hashlib.sha256(serialize_config(self).encode("utf-8")).hexdigest()

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """Copy with flat key overrides, validated"""
        sections = {"plan": self.plan, "method": self.method, "run": self.run}
        for key, value in overrides.items():
            if key not in KEYS:
                raise ConfigError(f"unknown key {key!r}")
            section = KEYS[key][0]
            sections[section] = replace(sections[section], **{key: _coerce(key, value, None)})
        return ExperimentConfig(**sections).validate()

    def validate(self, lines: Optional[Dict[str, Optional[int]]] = None) -> "ExperimentConfig":
        lines = lines or {}

        def check(condition: bool, key: str, message: str):
            if not condition:
                raise ConfigError(f"{key}: {message}", lines.get(key))

        plan, method, run = self.plan, self.method, self.run

        check(len(plan.v) >= 1, "v", "need at least one numerology")
        check(len(plan.K) == len(plan.v), "K", f"needs {len(plan.v)} entries, one per numerology")
        check(len(plan.eta) == len(plan.v), "eta", f"needs {len(plan.v)} entries, one per numerology")
        check(len(plan.G) == len(plan.v) - 1, "G", f"needs {len(plan.v) - 1} entries, one per adjacent pair")
        try:
            plan.build()
        except PlanError as e:
            key = "cp_fraction" if "cp_fraction" in str(e) else "G" if "guard" in str(e) or "offset" in str(e) else "v"
            raise ConfigError(str(e), lines.get(key)) from e

        check(method.method in METHOD_NAMES, "method", f"must be one of {', '.join(METHOD_NAMES)}")
        check(math.isfinite(method.cr_db), "cr_db", "must be finite")
        check(method.n_exec >= 1, "n_exec", "must be at least 1")
        check(method.rho > 0, "rho", "must be positive")
        check(method.max_iters >= 1, "max_iters", "must be at least 1")
        check(method.primal_tol is None or method.primal_tol >= 0, "primal_tol", "must be non-negative")
        check(method.filter_length >= 1, "filter_length", "must be at least 1")
        check(0.0 <= method.filter_rolloff <= 1.0, "filter_rolloff", "must lie in [0, 1]")
        check(0.0 <= method.window_rolloff < 1.0, "window_rolloff", "must lie in [0, 1)")
        check(all(math.isfinite(c) for c in method.cr_sweep_db), "cr_sweep_db", "must be finite")

        check(run.symbol_count >= 1, "symbol_count", "must be at least 1")
        check(run.seed >= 0, "seed", "must be non-negative")
        check(run.workers >= 1, "workers", "must be at least 1")
        unknown = [o for o in run.outputs if o not in OUTPUT_NAMES]
        check(not unknown, "outputs", f"unknown outputs {unknown}; choose from {', '.join(OUTPUT_NAMES)}")
        check(run.sspa_p >= 1, "sspa_p", "must be at least 1")
        check(run.ccdf_step_db > 0, "ccdf_step_db", "must be positive")
        check(run.ccdf_max_db > run.ccdf_min_db, "ccdf_max_db", "must exceed ccdf_min_db")
        check(run.psd_zero_pad >= 1, "psd_zero_pad", "must be at least 1")
        if run.preset is not None:
            try:
                resolve_preset(run.preset)
            except KeyError:
                check(False, "preset", f"unknown preset {run.preset!r}")
        return self


def parse_config(text: str, preset: Optional[str] = None) -> ExperimentConfig:
    """Parse line-oriented ``key = value`` text with ``#`` comments.

    Values are YAML scalars or flow lists. Unset keys take their defaults.
    """
    entries: Entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", number)
        key, _, value_text = line.partition("=")
        key = key.strip()
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", number)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r}", number)
        try:
            value = yaml.safe_load(value_text.strip()) if value_text.strip() else None
        except yaml.YAMLError as e:
            raise ConfigError(f"{key}: cannot parse value {value_text.strip()!r}", number) from e
        entries[key] = (value, number)
    return ExperimentConfig.from_entries(entries, preset)


def serialize_config(config: ExperimentConfig) -> str:
    lines = []
    for name, _ in SECTIONS:
        lines.append(f"# {name}")
        for key, value in getattr(config, name).__dict__.items():
            lines.append(f"{key} = {_format_value(value)}")
        lines.append("")
    return "\n".join(lines)
