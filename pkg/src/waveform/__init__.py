"""Mixed-numerology grid and matrix-free subband operators"""

from .numerology import NumerologyPlan, build_plan
from .signals import SignalRole, SubbandSymbols, TimeSignal
from .operators import (
    SubbandOperator,
    subband_operators,
    modulate_subband,
    analyze_subband,
    compose,
)
from .symbols import gen_qpsk

__all__ = [
    "NumerologyPlan",
    "build_plan",
    "SignalRole",
    "SubbandSymbols",
    "TimeSignal",
    "SubbandOperator",
    "subband_operators",
    "modulate_subband",
    "analyze_subband",
    "compose",
    "gen_qpsk",
]
