"""Mixed-numerology grid construction"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

from ..errors import PlanError
from ..utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class NumerologyPlan:
    """The discrete grid of an LCM symbol.

    Frequencies are in units of the base spacing f1 and subband indices are
    zero-based (subband 0 is the numerology with v = 0).
    """
    exponents: Tuple[int, ...]      # v_i
    subcarriers: Tuple[int, ...]    # K_i
    guards: Tuple[int, ...]         # G_i, one per adjacent pair
    eta: Tuple[float, ...]          # amplitude scaling per subband
    oversampling: int               # J
    bandwidth: int                  # B
    fft_bins: Tuple[int, ...]       # N_i
    offsets: Tuple[int, ...]        # delta_k_i, in units of f_i
    cp_lengths: Tuple[int, ...]     # L_cp_i
    symbol_length: int              # L_sys
    base_spacing: int = 1

    @property
    def M(self) -> int:
        return len(self.exponents)

    def spacing(self, i: int) -> int:
        """Subcarrier spacing f_i in units of f1"""
        return 2 ** self.exponents[i] * self.base_spacing

    def fft_size(self, i: int) -> int:
        """J * N_i"""
        return self.oversampling * self.fft_bins[i]

    def blocks(self, i: int) -> int:
        """Number of sub-symbols of numerology i in one LCM symbol"""
        return 2 ** self.exponents[i]

    def block_length(self, i: int) -> int:
        return self.fft_size(i) + self.cp_lengths[i]

    @property
    def sample_rate(self) -> float:
        """Samples per 1/f1, i.e. the sampling rate in units of f1"""
        return float(self.oversampling * self.fft_bins[0] * self.base_spacing)

    def occupied_band(self, i: int) -> Tuple[float, float]:
        """[start, stop) of subband i in units of f1"""
        f = self.spacing(i)
        return (self.offsets[i] * f, (self.offsets[i] + self.subcarriers[i]) * f)

    def guard_bands(self) -> List[Tuple[float, float]]:
        return [
            (self.occupied_band(i)[1], self.occupied_band(i + 1)[0])
            for i in range(self.M - 1)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "v": list(self.exponents),
            "K": list(self.subcarriers),
            "G": list(self.guards),
            "eta": list(self.eta),
            "J": self.oversampling,
            "B": self.bandwidth,
            "N": list(self.fft_bins),
            "delta_k": list(self.offsets),
            "L_cp": list(self.cp_lengths),
            "L_sys": self.symbol_length,
        }


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def build_plan(
    M: int,
    v: Sequence[int],
    K: Sequence[int],
    G: Sequence[int],
    J: int,
    eta: Sequence[float],
    cp_fraction: float,
) -> NumerologyPlan:
    """Build the scalable FFT grid of an M-numerology LCM symbol.

    The CP of numerology 1 is ``cp_fraction`` of J*N_1 samples, rounded to the
    nearest multiple of 2^{v_M} so that every scaled CP is an integer.
    """
    v = [int(e) for e in v]
    K = [int(k) for k in K]
    G = [int(g) for g in G]
    eta = [float(e) for e in eta]

    if M < 1:
        raise PlanError(f"need at least one numerology, got M={M}")
    if len(v) != M or len(K) != M or len(eta) != M:
        raise PlanError(f"v, K and eta must each have M={M} entries")
    if len(G) != M - 1:
        raise PlanError(f"G must have M-1={M - 1} entries, got {len(G)}")
    if v[0] != 0 or any(b < a for a, b in zip(v, v[1:])):
        raise PlanError(f"exponents must be non-decreasing starting at 0, got {v}")
    if any(k < 1 for k in K):
        raise PlanError(f"every subband needs at least one subcarrier, got {K}")
    if not _is_power_of_two(int(J)):
        raise PlanError(f"oversampling J must be a power of two, got {J}")
    if not 0.0 <= cp_fraction < 1.0:
        raise PlanError(f"cp_fraction must lie in [0, 1), got {cp_fraction}")
    if any(g < 0 for g in G):
        raise PlanError(f"overlapping subbands: negative guard in {G}")

    spacing = [2 ** e for e in v]

    offsets = [0]
    start = 0
    for i in range(1, M):
        start += K[i - 1] * spacing[i - 1] + G[i - 1]
        if start % spacing[i]:
            raise PlanError(
                f"subband {i + 1} offset {start}/{spacing[i]} is not an integer "
                f"number of its subcarriers"
            )
        offsets.append(start // spacing[i])

    bandwidth = sum(K[i] * spacing[i] + G[i] for i in range(M - 1)) + K[-1] * spacing[-1]
    fft_bins = [2 ** math.ceil(math.log2(bandwidth / f)) for f in spacing]

    quantum = spacing[-1]
    cp_1 = int(math.floor(cp_fraction * J * fft_bins[0] / quantum + 0.5)) * quantum
    if cp_fraction > 0 and cp_1 == 0:
        raise PlanError(
            f"cp_fraction={cp_fraction} rounds to a zero-length CP on a "
            f"{J * fft_bins[0]}-point grid"
        )
    cp_lengths = [cp_1 // f for f in spacing]
    symbol_length = J * fft_bins[0] + cp_1

    plan = NumerologyPlan(
        exponents=tuple(v),
        subcarriers=tuple(K),
        guards=tuple(G),
        eta=tuple(eta),
        oversampling=int(J),
        bandwidth=bandwidth,
        fft_bins=tuple(fft_bins),
        offsets=tuple(offsets),
        cp_lengths=tuple(cp_lengths),
        symbol_length=symbol_length,
    )
    logger.debug(f"Built numerology plan {plan.to_dict()}")
    return plan
