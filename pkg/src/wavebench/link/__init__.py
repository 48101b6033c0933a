from .analytical import sinr_analytical, ufmc_snr_loss
from .equalize import equalize_one_tap, equalize_unbiased
from .fec import CodedBlock, fec_decode, fec_encode
from .qam import BITS_PER_SYMBOL, hard_decisions, qam_demap_llr, qam_map
from .trial import (
    LinkChannel,
    N_SUBFRAME_SYMBOLS,
    TrialResult,
    run_link_trial,
    snr_time_db,
    subframe_bit_budget,
)

__all__ = [
    "BITS_PER_SYMBOL",
    "CodedBlock",
    "LinkChannel",
    "N_SUBFRAME_SYMBOLS",
    "TrialResult",
    "equalize_one_tap",
    "equalize_unbiased",
    "fec_decode",
    "fec_encode",
    "hard_decisions",
    "qam_demap_llr",
    "qam_map",
    "run_link_trial",
    "sinr_analytical",
    "snr_time_db",
    "subframe_bit_budget",
    "ufmc_snr_loss",
]
