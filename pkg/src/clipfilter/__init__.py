"""Clipping, ICF, NS-ICF and filtered NS-ICF"""

from .clipping import ClipOutcome, clip, clip_samples, level_from_cr, rms
from .filtering import (
    FilterSpec,
    compose_filtered,
    design_filters,
    design_subband_filter,
    filtered_length,
    ns_icf_filtered_run,
    ns_icf_filtered_step,
)
from .icf import IcfOutcome, icf_run_classical, icf_step_classical, ns_icf_run, ns_icf_step

__all__ = [
    'ClipOutcome', 'clip', 'clip_samples', 'level_from_cr', 'rms',
    'FilterSpec', 'compose_filtered', 'design_filters', 'design_subband_filter', 'filtered_length',
    'ns_icf_filtered_run', 'ns_icf_filtered_step',
    'IcfOutcome', 'icf_run_classical', 'icf_step_classical', 'ns_icf_run', 'ns_icf_step',
]
