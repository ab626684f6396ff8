"""PAPR, CCDF, EVM, PSD and amplifier metrics"""

from .amplifier import SspaModel, sspa_apply
from .evm import EVM_FLOOR_DB, EvmReport, blockwise_evm, evm, rms_evm, subband_evm, to_db
from .papr import CcdfCurve, ccdf, ccdf_grid, papr_db
from .spectrum import PsdEstimate, band_level_db, combine, guard_band_level_db, psd_periodogram

__all__ = [
    'SspaModel', 'sspa_apply',
    'EVM_FLOOR_DB', 'EvmReport', 'blockwise_evm', 'evm', 'rms_evm', 'subband_evm', 'to_db',
    'CcdfCurve', 'ccdf', 'ccdf_grid', 'papr_db',
    'PsdEstimate', 'band_level_db', 'combine', 'guard_band_level_db', 'psd_periodogram',
]
