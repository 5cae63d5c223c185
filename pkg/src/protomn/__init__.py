"""protomn: workbench for rate-adaptive protograph MacKay-Neal codes on biAWGN.

Pipeline: a constant-composition distribution matcher turns messages into
sparse weight-k words; a nonsystematic protograph LDPC inner code transmits
only the syndrome side; belief propagation recovers the sparse word using a
weight-biased prior. Rate adaptation is by the matcher weight alone, the
inner code is fixed. Analysis tools: quantized density evolution and
protograph EXIT thresholds, ensemble-average input-output weight enumerators
and their asymptotic growth rate, union bounds on the error floor, and a
differential-evolution ensemble designer.
"""

from .protograph import (
    BaseMatrix,
    Protograph,
    validate_base_matrix,
    ensemble_rates,
    load_base_matrix,
    save_base_matrix,
)
from .channels import (
    ChannelParams,
    biawgn_sample,
    channel_llrs,
    apriori_sample,
    apriori_llr,
    binary_entropy,
    binary_entropy_inv,
    capacity_bsc,
    capacity_biawgn,
    shannon_limit_inverse,
)
from .matcher import DmConfig, dm_rate, cc_encode, cc_decode, omega_for_rate, k_for_rate
from .lifting import (
    LiftedCode,
    lift_circulant_peg,
    lift_uniform_random,
    write_alist,
    save_code,
    load_code,
    girth,
)
from .decoder import DecoderConfig, DecodeResult, init_llrs, bp_decode, mn_transmit_decode
from . import catalog

__version__ = "0.1.0"

from .de import (
    QuantGrid,
    DEFAULT_GRID,
    ThresholdPoint,
    de_quantized_converges,
    pexit_converges,
    threshold_search,
    threshold_for_rate,
    threshold_table,
)
from .spectrum import (
    GrowthSolution,
    avg_io_weight_enum,
    avg_io_weight_table,
    cn_generating_coeff,
    growth_rate,
    growth_grid,
    weight_feasibility,
    classify_ensemble,
)
from .bounds import (
    UnionBound,
    SpectrumList,
    pep,
    union_bound_ensemble,
    low_weight_search,
    tub_code,
)
from .designer import DesignSpec, DesignCandidate, WclResult, wcl, design_search
from .campaign import CampaignConfig, ResultRow, CampaignRun, snr_grid, run_fer_campaign
from .reports import emit_reports
