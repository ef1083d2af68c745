"""Cross-numerology OFDM interference analysis.

Builds the effective frequency-domain channel matrices that couple two
OFDM systems with mismatched subcarrier spacing, CP length, and symbol
timing, and averages them into per-subcarrier interference maps.
"""

__version__ = "0.1.0"

from .basis import SymbolVector, b_eval, tx_symbol_eval
from .channel import (
    EffectiveChannel,
    MultipathChannel,
    build_time_channel,
    dft_matrix,
    draw_channel,
    effective_channel_ap_ue,
    effective_channel_dense,
    effective_channel_enb_ap,
    exp_power_profile,
    homogeneous_effective_channel,
)
from .matrices import (
    SamplingMatrix,
    StackedSymbolVector,
    apply,
    assemble_k_ap_ue,
    assemble_k_enb_ap,
    build_segment_block,
)
from .montecarlo import (
    AP_TO_UE_TAU1_MAX,
    CampaignConfig,
    Direction,
    InterferenceMap,
    crop_guards,
    dominant_count,
    run_campaign,
)
from .params import (
    OfdmNumerology,
    centered_mask,
    downscaled_pair,
    laa_default,
    laa_exact,
    numerology_from_text,
    numerology_to_text,
    subcarrier_frequency,
    validate,
    wifi_default,
)
from .timing import (
    ApLayout,
    Grid,
    OverlapCase,
    Segment,
    UeLayout,
    cut_points,
    describe_layout,
    resolve_ap_layout,
    resolve_ue_layout,
)

__all__ = [
    "__version__",
    "OfdmNumerology",
    "centered_mask",
    "subcarrier_frequency",
    "validate",
    "laa_default",
    "laa_exact",
    "wifi_default",
    "downscaled_pair",
    "numerology_from_text",
    "numerology_to_text",
    "SymbolVector",
    "b_eval",
    "tx_symbol_eval",
    "Grid",
    "OverlapCase",
    "Segment",
    "UeLayout",
    "ApLayout",
    "cut_points",
    "resolve_ue_layout",
    "resolve_ap_layout",
    "describe_layout",
    "SamplingMatrix",
    "StackedSymbolVector",
    "build_segment_block",
    "assemble_k_ap_ue",
    "assemble_k_enb_ap",
    "apply",
    "MultipathChannel",
    "exp_power_profile",
    "draw_channel",
    "build_time_channel",
    "dft_matrix",
    "EffectiveChannel",
    "effective_channel_ap_ue",
    "effective_channel_enb_ap",
    "effective_channel_dense",
    "homogeneous_effective_channel",
    "Direction",
    "CampaignConfig",
    "InterferenceMap",
    "run_campaign",
    "crop_guards",
    "dominant_count",
    "AP_TO_UE_TAU1_MAX",
]
