"""PAPR reduction methods applied to one LCM symbol"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Type

from .admm_opt import AdmmConfig, AdmmDiagnostics, run_executions, subband_admm
from .admm_opt.windowing import build_windows, windowed_operators
from .clipfilter import compose_filtered, design_filters, icf_run_classical, ns_icf_filtered_run, ns_icf_run
from .config import ExperimentConfig
from .errors import ConfigError
from .utils.logger import setup_logger
from .waveform import NumerologyPlan, SubbandSymbols, TimeSignal, compose, subband_operators

logger = setup_logger(__name__)


@dataclass
class MethodOutcome:
    """Transmitted signal with and without PAPR reduction"""
    signal: TimeSignal
    reference: TimeSignal
    symbols: Optional[List[SubbandSymbols]] = None   # None when EVM is undefined
    diagnostics: Optional[AdmmDiagnostics] = None
    levels: List[float] = field(default_factory=list)


class PaprMethod(ABC):
    """Base class for all PAPR reduction methods"""

    name = ""

    def __init__(self, config: ExperimentConfig, plan: NumerologyPlan, cr_db: Optional[float] = None):
        self.config = config
        self.plan = plan
        self.cr_db = config.method.cr_db if cr_db is None else cr_db
        self.n_exec = config.method.n_exec
        self.operators = self._build_operators()

    def _build_operators(self):
        return subband_operators(self.plan)

    def reference(self, x: Sequence[SubbandSymbols]) -> TimeSignal:
        return compose(x, self.plan, self.operators)

    @abstractmethod
    def apply(self, x: Sequence[SubbandSymbols]) -> MethodOutcome:
        """Reduce the PAPR of the waveform carrying ``x``"""
        pass


class NoReduction(PaprMethod):
    name = "none"

    def apply(self, x: Sequence[SubbandSymbols]) -> MethodOutcome:
        z = self.reference(x)
        return MethodOutcome(z, z, list(x))


class ClassicalIcf(PaprMethod):
    name = "icf"

    def apply(self, x: Sequence[SubbandSymbols]) -> MethodOutcome:
        outcome = icf_run_classical(x, self.plan, self.cr_db, self.n_exec)
        return MethodOutcome(outcome.signal, self.reference(x), outcome.symbols, levels=outcome.levels)


class NoiseShapedIcf(PaprMethod):
    name = "nsicf"

    def apply(self, x: Sequence[SubbandSymbols]) -> MethodOutcome:
        outcome = ns_icf_run(x, self.plan, self.cr_db, self.n_exec, self.operators)
        return MethodOutcome(outcome.signal, self.reference(x), outcome.symbols, levels=outcome.levels)


class AdmmMethod(PaprMethod):
    """O-ADMM or CU-ADMM, optionally on windowed operators"""

    name = "oadmm"
    variant = "O"
    windowed = False

    def __init__(self, config: ExperimentConfig, plan: NumerologyPlan, cr_db: Optional[float] = None):
        super().__init__(config, plan, cr_db)
        method = config.method
        self.admm_config = AdmmConfig.from_cr_db(
            self.cr_db,
            rho=method.rho,
            max_iters=method.max_iters,
            primal_tol=method.primal_tol,
            variant=self.variant,
            windowed=self.windowed,
            window_rolloff=method.window_rolloff if self.windowed else 0.0,
        )

    def _build_operators(self):
        if self.windowed:
            return windowed_operators(self.plan, build_windows(self.plan, self.config.method.window_rolloff))
        return subband_operators(self.plan)

    def solve(self, x: Sequence[SubbandSymbols]):
        return run_executions(x, self.plan, self.admm_config, self.n_exec, self.operators)

    def apply(self, x: Sequence[SubbandSymbols]) -> MethodOutcome:
        result = self.solve(x)
        return MethodOutcome(
            result.z_hat,
            self.reference(x),
            result.x_hat,
            diagnostics=result.diagnostics,
            levels=list(result.diagnostics.level),
        )


class CuAdmmMethod(AdmmMethod):
    name = "cuadmm"
    variant = "CU"


class WindowedOAdmm(AdmmMethod):
    name = "wofdm_oadmm"
    windowed = True


class WindowedCuAdmm(AdmmMethod):
    name = "wofdm_cuadmm"
    variant = "CU"
    windowed = True


class WindowedNoReduction(AdmmMethod):
    name = "wofdm"
    windowed = True

    def apply(self, x: Sequence[SubbandSymbols]) -> MethodOutcome:
        z = self.reference(x)
        return MethodOutcome(z, z, list(x))


class SubbandAdmm(AdmmMethod):
    """O-ADMM on every subband separately, outputs summed"""

    name = "subband_oadmm"

    def solve(self, x: Sequence[SubbandSymbols]):
        return subband_admm(x, self.plan, self.admm_config, self.operators)


class FilteredMethod(PaprMethod):
    """F-OFDM: every subband passed through its own transmit filter"""

    def __init__(self, config: ExperimentConfig, plan: NumerologyPlan, cr_db: Optional[float] = None):
        super().__init__(config, plan, cr_db)
        self.filters = design_filters(plan, config.method.filter_length, config.method.filter_rolloff)

    def reference(self, x: Sequence[SubbandSymbols]) -> TimeSignal:
        return compose_filtered(x, self.plan, self.filters, self.operators)


class FilteredNoReduction(FilteredMethod):
    name = "fofdm"

    def apply(self, x: Sequence[SubbandSymbols]) -> MethodOutcome:
        z = self.reference(x)
        return MethodOutcome(z, z, None)


class FilteredNsIcf(FilteredMethod):
    name = "fofdm_nsicf"

    def apply(self, x: Sequence[SubbandSymbols]) -> MethodOutcome:
        outcome = ns_icf_filtered_run(x, self.plan, self.filters, self.cr_db, self.n_exec)
        return MethodOutcome(outcome.signal, self.reference(x), None, levels=outcome.levels)


class MethodFactory:
    """Factory for creating PAPR reduction methods"""

    _methods: Dict[str, Type[PaprMethod]] = {
        cls.name: cls
        for cls in (
            NoReduction,
            ClassicalIcf,
            NoiseShapedIcf,
            AdmmMethod,
            CuAdmmMethod,
            FilteredNoReduction,
            FilteredNsIcf,
            WindowedNoReduction,
            WindowedOAdmm,
            WindowedCuAdmm,
            SubbandAdmm,
        )
    }

    @classmethod
    def create_method(
        cls,
        name: str,
        config: ExperimentConfig,
        plan: NumerologyPlan,
        cr_db: Optional[float] = None,
    ) -> PaprMethod:
        method_class = cls._methods.get(name.lower())
        if not method_class:
            raise ConfigError(f"unknown method {name!r}; available: {', '.join(cls.get_available_methods())}")
        return method_class(config, plan, cr_db)

    @classmethod
    def get_available_methods(cls) -> List[str]:
        return list(cls._methods.keys())
